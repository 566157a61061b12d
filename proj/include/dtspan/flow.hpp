#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dtspan/error.hpp"
#include "dtspan/geometry.hpp"
#include "dtspan/lp.hpp"
#include "dtspan/metric.hpp"
#include "dtspan/rational.hpp"

namespace dtspan {

struct NetworkEdge {
  std::size_t tail = 0;
  std::size_t head = 0;
  long cap = 0;
};

/// (V, E, S, c) with nonnegative integer capacities and |S| >= 2.
struct Network {
  std::vector<std::string> vertices;
  std::vector<NetworkEdge> edges;
  std::vector<std::size_t> terminals;

  std::size_t vertex_count() const { return vertices.size(); }

  std::vector<std::string> terminal_labels() const {
    std::vector<std::string> out;
    for (auto t : terminals) out.push_back(vertices[t]);
    return out;
  }

  void validate() const {
    GroundSet names(vertices);
    (void)names;
    for (const auto& e : edges) {
      if (e.tail >= vertices.size() || e.head >= vertices.size()) fail(Errc::UnknownVertex, "edge endpoint out of range");
      if (e.cap < 0) fail(Errc::NegativeEntry, "capacities must be nonnegative");
    }
    if (terminals.size() < 2) fail(Errc::MalformedNetwork, "a network needs at least two terminals");
    std::vector<bool> seen(vertices.size(), false);
    for (auto t : terminals) {
      if (t >= vertices.size()) fail(Errc::UnknownVertex, "terminal out of range");
      if (seen[t]) fail(Errc::MalformedNetwork, "terminal listed twice");
      seen[t] = true;
    }
  }
};

struct FlowOptions {
  std::size_t max_vertices = 10;
};

/// Vertex-simple directed path as a list of edge indices.
struct SPath {
  std::vector<std::size_t> edges;
  std::size_t source = 0;  // terminal positions in Network::terminals
  std::size_t sink = 0;
};

struct Multiflow {
  std::vector<SPath> paths;
  RationalVector values;
};

namespace detail {

inline void require_network_size(const Network& net, const FlowOptions& opt) {
  net.validate();
  if (net.vertex_count() > opt.max_vertices) {
    fail(Errc::NetworkTooLarge, "network has more than " + std::to_string(opt.max_vertices) + " vertices");
  }
}

}  // namespace detail

/// mu reordered so that index i refers to terminal i of the network.
inline DirectedDistance align_to_terminals(const Network& net, const DirectedDistance& mu) {
  const auto labels = net.terminal_labels();
  if (mu.size() != labels.size()) fail(Errc::GroundSetMismatch, "distance and terminal set differ in size");
  std::vector<std::size_t> idx;
  for (const auto& l : labels) {
    if (!mu.ground().contains(l)) fail(Errc::GroundSetMismatch, "terminal " + l + " missing from the distance");
    idx.push_back(mu.ground().index_of(l));
  }
  RationalMatrix m(labels.size(), RationalVector(labels.size()));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t j = 0; j < labels.size(); ++j) m[i][j] = mu(idx[i], idx[j]);
  }
  return DirectedDistance(std::move(m), GroundSet(labels));
}

/// All vertex-simple directed paths between distinct terminals; intermediate
/// vertices may be terminals.
inline std::vector<SPath> enumerate_s_paths(const Network& net, const FlowOptions& opt = {}) {
  detail::require_network_size(net, opt);
  const std::size_t m = net.vertex_count();
  std::vector<std::size_t> term_pos(m, SIZE_MAX);
  for (std::size_t i = 0; i < net.terminals.size(); ++i) term_pos[net.terminals[i]] = i;
  std::vector<std::vector<std::size_t>> out_edges(m);
  for (std::size_t e = 0; e < net.edges.size(); ++e) out_edges[net.edges[e].tail].push_back(e);

  std::vector<SPath> out;
  std::vector<bool> on_path(m, false);
  std::vector<std::size_t> stack;
  auto dfs = [&](auto&& self, std::size_t v, std::size_t source) -> void {
    for (auto e : out_edges[v]) {
      const std::size_t w = net.edges[e].head;
      if (on_path[w]) continue;
      stack.push_back(e);
      if (term_pos[w] != SIZE_MAX) out.push_back({stack, source, term_pos[w]});
      on_path[w] = true;
      self(self, w, source);
      on_path[w] = false;
      stack.pop_back();
    }
  };
  for (std::size_t i = 0; i < net.terminals.size(); ++i) {
    on_path[net.terminals[i]] = true;
    dfs(dfs, net.terminals[i], i);
    on_path[net.terminals[i]] = false;
  }
  return out;
}

struct MultiflowResult {
  Rational value;
  Multiflow flow;
  lp::Solution solution;
};

/// max sum mu(s_P, t_P) lambda(P) subject to edge capacities, over S-paths.
inline MultiflowResult max_multiflow(const Network& net, const DirectedDistance& mu_in, const FlowOptions& opt = {}) {
  const auto paths = enumerate_s_paths(net, opt);
  const auto mu = align_to_terminals(net, mu_in);
  lp::LinearProgram prog;
  prog.sense = lp::Sense::Maximize;
  for (const auto& p : paths) prog.objective.push_back(mu(p.source, p.sink));
  for (std::size_t e = 0; e < net.edges.size(); ++e) {
    lp::Constraint row{RationalVector(paths.size(), Rational(0)), lp::Relation::LessEqual, Rational(net.edges[e].cap)};
    bool used = false;
    for (std::size_t j = 0; j < paths.size(); ++j) {
      if (std::find(paths[j].edges.begin(), paths[j].edges.end(), e) != paths[j].edges.end()) {
        row.coeffs[j] = 1;
        used = true;
      }
    }
    if (used) prog.rows.push_back(std::move(row));
  }
  MultiflowResult out;
  if (paths.empty()) {
    out.value = 0;
    out.solution.status = lp::Status::Optimal;
    out.solution.certified = true;
    return out;
  }
  out.solution = lp::solve(prog);
  ensure(out.solution.status == lp::Status::Optimal, "multiflow LP is bounded and feasible");
  ensure(out.solution.certified, "multiflow LP certificate failed");
  out.value = out.solution.objective;
  for (std::size_t j = 0; j < paths.size(); ++j) {
    if (out.solution.primal[j] != 0) {
      out.flow.paths.push_back(paths[j]);
      out.flow.values.push_back(out.solution.primal[j]);
    }
  }
  return out;
}

/// A directed metric on V that agrees with mu on the terminals.
struct MetricExtension {
  DirectedDistance d;
  std::vector<std::size_t> terminals;  // vertex of terminal i
};

inline void require_extension(const DirectedDistance& mu, const MetricExtension& ext) {
  if (ext.terminals.size() != mu.size()) fail(Errc::NotAnExtension, "terminal count differs from the ground set");
  for (auto t : ext.terminals) {
    if (t >= ext.d.size()) fail(Errc::NotAnExtension, "terminal vertex out of range");
  }
  if (!is_metric(ext.d)) fail(Errc::NotAnExtension, "extension violates a triangle inequality");
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < mu.size(); ++j) {
      if (ext.d(ext.terminals[i], ext.terminals[j]) != mu(i, j)) {
        fail(Errc::NotAnExtension, "extension disagrees with the distance on the terminals");
      }
    }
  }
}

/// d_x = (d(s,x), d(x,s))_s.
inline ExtPoint extension_point(const MetricExtension& ext, std::size_t x) {
  const std::size_t n = ext.terminals.size();
  ExtPoint p = ExtPoint::zeros(n);
  for (std::size_t i = 0; i < n; ++i) {
    p.col[i] = ext.d(ext.terminals[i], x);
    p.row[i] = ext.d(x, ext.terminals[i]);
  }
  return p;
}

inline Rational network_objective(const Network& net, const DirectedDistance& d) {
  Rational total(0);
  for (const auto& e : net.edges) total += Rational(e.cap) * d(e.tail, e.head);
  return total;
}

struct DualResult {
  Rational value;
  MetricExtension extension;
  lp::Solution solution;
};

/// min sum c(xy) d(x,y) over directed metrics d on V extending mu.
inline DualResult dual_metric_lp(const Network& net, const DirectedDistance& mu_in, const FlowOptions& opt = {}) {
  detail::require_network_size(net, opt);
  const auto mu = align_to_terminals(net, mu_in);
  require_metric(mu);
  const std::size_t m = net.vertex_count();
  std::vector<std::vector<std::size_t>> var(m, std::vector<std::size_t>(m, SIZE_MAX));
  std::size_t count = 0;
  for (std::size_t x = 0; x < m; ++x) {
    for (std::size_t y = 0; y < m; ++y) {
      if (x != y) var[x][y] = count++;
    }
  }
  lp::LinearProgram prog;
  prog.sense = lp::Sense::Minimize;
  prog.objective.assign(count, Rational(0));
  for (const auto& e : net.edges) {
    if (e.tail != e.head) prog.objective[var[e.tail][e.head]] += e.cap;
  }
  for (std::size_t x = 0; x < m; ++x) {
    for (std::size_t y = 0; y < m; ++y) {
      for (std::size_t z = 0; z < m; ++z) {
        if (x == y || y == z || x == z) continue;
        lp::Constraint row{RationalVector(count, Rational(0)), lp::Relation::GreaterEqual, Rational(0)};
        row.coeffs[var[x][y]] += 1;
        row.coeffs[var[y][z]] += 1;
        row.coeffs[var[x][z]] -= 1;
        prog.rows.push_back(std::move(row));
      }
    }
  }
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < mu.size(); ++j) {
      if (i == j) continue;
      lp::Constraint row{RationalVector(count, Rational(0)), lp::Relation::Equal, mu(i, j)};
      row.coeffs[var[net.terminals[i]][net.terminals[j]]] = 1;
      prog.rows.push_back(std::move(row));
    }
  }
  DualResult out;
  out.solution = lp::solve(prog);
  ensure(out.solution.status == lp::Status::Optimal, "metric extension LP is bounded and feasible");
  ensure(out.solution.certified, "metric extension LP certificate failed");
  out.value = out.solution.objective;
  RationalMatrix d(m, RationalVector(m, Rational(0)));
  for (std::size_t x = 0; x < m; ++x) {
    for (std::size_t y = 0; y < m; ++y) {
      if (x != y) d[x][y] = out.solution.primal[var[x][y]];
    }
  }
  out.extension = {DirectedDistance(std::move(d), GroundSet(net.vertices)), net.terminals};
  require_extension(mu, out.extension);
  return out;
}

/// x -> d_x lands in T and is an isometry for D-infinity.
inline bool is_tight_extension(const DirectedDistance& mu, const MetricExtension& ext) {
  require_extension(mu, ext);
  const std::size_t m = ext.d.size();
  std::vector<ExtPoint> pts;
  for (std::size_t x = 0; x < m; ++x) {
    pts.push_back(extension_point(ext, x));
    if (!in_tight_span(mu, pts.back())) return false;
  }
  for (std::size_t x = 0; x < m; ++x) {
    for (std::size_t y = 0; y < m; ++y) {
      if (dinf(pts[x], pts[y]) != ext.d(x, y)) return false;
    }
  }
  return true;
}

/// Tight and additionally every d_x in Q+ with {d_x} balanced.
inline bool is_cyclically_tight_extension(const DirectedDistance& mu, const MetricExtension& ext) {
  if (!is_tight_extension(mu, ext)) return false;
  std::vector<ExtPoint> pts;
  for (std::size_t x = 0; x < ext.d.size(); ++x) {
    pts.push_back(extension_point(ext, x));
    if (!in_qplus(mu, pts.back())) return false;
  }
  return is_balanced(pts).holds;
}

/// Metric on V read back from an embedding: d(x,y) = D(rho(x), rho(y)).
inline MetricExtension pull_back(const std::vector<ExtPoint>& rho, const std::vector<std::string>& labels,
                                 const std::vector<std::size_t>& terminals) {
  const std::size_t m = rho.size();
  RationalMatrix d(m, RationalVector(m, Rational(0)));
  for (std::size_t x = 0; x < m; ++x) {
    for (std::size_t y = 0; y < m; ++y) d[x][y] = dinf(rho[x], rho[y]);
  }
  return {DirectedDistance(std::move(d), GroundSet(labels)), terminals};
}

/// Pointwise smaller tight extension: retract every d_x into T and read the
/// distances back, until nothing changes.
inline MetricExtension tighten_extension(const DirectedDistance& mu, const MetricExtension& ext) {
  require_extension(mu, ext);
  MetricExtension cur = ext;
  const std::size_t cap = ext.d.size() + 2;
  for (std::size_t sweep = 0; sweep < cap; ++sweep) {
    std::vector<ExtPoint> rho;
    for (std::size_t x = 0; x < cur.d.size(); ++x) rho.push_back(retract_to_tight_span(mu, extension_point(cur, x)));
    MetricExtension next = pull_back(rho, cur.d.ground().labels(), cur.terminals);
    if (next.d == cur.d) {
      ensure(is_tight_extension(mu, cur), "tightening fixpoint is not tight");
      return cur;
    }
    cur = std::move(next);
  }
  fail(Errc::InternalError, "tighten_extension did not reach a fixpoint");
}

/// A directed cycle of edges used `multiplicity` times.
struct EdgeCycle {
  std::vector<std::size_t> edges;
  long multiplicity = 1;

  CyclicSequence vertices(const Network& net) const {
    CyclicSequence c;
    for (auto e : edges) c.points.push_back(net.edges[e].tail);
    return c;
  }
};

inline bool is_eulerian(const Network& net) {
  std::vector<long> balance(net.vertex_count(), 0);
  for (const auto& e : net.edges) {
    balance.at(e.tail) += e.cap;
    balance.at(e.head) -= e.cap;
  }
  return std::all_of(balance.begin(), balance.end(), [](long b) { return b == 0; });
}

/// Greedy cycle peeling; empty when some vertex is unbalanced.
inline std::optional<std::vector<EdgeCycle>> eulerian_decompose(const Network& net) {
  net.validate();
  if (!is_eulerian(net)) return std::nullopt;
  const std::size_t m = net.vertex_count();
  std::vector<long> rest;
  for (const auto& e : net.edges) rest.push_back(e.cap);
  std::vector<std::vector<std::size_t>> out_edges(m);
  for (std::size_t e = 0; e < net.edges.size(); ++e) out_edges[net.edges[e].tail].push_back(e);
  std::vector<EdgeCycle> cycles;
  for (std::size_t start = 0; start < net.edges.size(); ++start) {
    while (rest[start] > 0) {
      std::vector<std::size_t> walk{start};
      std::vector<std::size_t> seen_at(m, SIZE_MAX);
      seen_at[net.edges[start].tail] = 0;
      std::size_t v = net.edges[start].head;
      while (seen_at[v] == SIZE_MAX) {
        seen_at[v] = walk.size();
        std::size_t next = SIZE_MAX;
        for (auto e : out_edges[v]) {
          if (rest[e] > 0) {
            next = e;
            break;
          }
        }
        ensure(next != SIZE_MAX, "Eulerian walk got stuck");
        walk.push_back(next);
        v = net.edges[next].head;
      }
      EdgeCycle c;
      c.edges.assign(walk.begin() + static_cast<std::ptrdiff_t>(seen_at[v]), walk.end());
      c.multiplicity = rest[c.edges.front()];
      for (auto e : c.edges) c.multiplicity = std::min(c.multiplicity, rest[e]);
      for (auto e : c.edges) rest[e] -= c.multiplicity;
      cycles.push_back(std::move(c));
    }
  }
  return cycles;
}

inline Rational cycles_objective(const Network& net, const std::vector<EdgeCycle>& cycles, const DirectedDistance& d) {
  Rational total(0);
  for (const auto& c : cycles) {
    Rational len(0);
    for (auto e : c.edges) len += d(net.edges[e].tail, net.edges[e].head);
    total += Rational(c.multiplicity) * len;
  }
  return total;
}

enum class MinMaxMode { T, Q };

struct MinMaxReport {
  MinMaxMode mode = MinMaxMode::T;
  Rational max_value;
  Rational min_value;
  bool equal = false;
  bool certified = false;          // both LPs carried exact duality certificates
  Multiflow flow;
  MetricExtension lp_extension;    // LP optimum
  MetricExtension extension;       // tight (T) or cyclically tight (Q) optimum
  std::vector<ExtPoint> embedding;  // rho(x)
  Rational embedded_objective;     // sum c(xy) D(rho(x), rho(y))
  bool embedding_ok = false;
  std::vector<EdgeCycle> cycles;   // Q only
  bool cycle_identity = true;      // Q only
  bool congruent_ok = true;        // Q only

  bool ok() const { return equal && certified && embedding_ok && cycle_identity && congruent_ok; }
};

/// Runs both LPs and checks the min-max relation together with its
/// geometric witness: an embedding into T (mode T) or a balanced embedding
/// into Q with the right fibers (mode Q).
inline MinMaxReport verify_minmax(const Network& net, const DirectedDistance& mu_in, MinMaxMode mode,
                                  const FlowOptions& opt = {}) {
  const auto mu = align_to_terminals(net, mu_in);
  require_metric(mu);
  std::optional<std::vector<EdgeCycle>> cycles;
  if (mode == MinMaxMode::Q) {
    cycles = eulerian_decompose(net);
    if (!cycles) fail(Errc::NotEulerian, "network is not Eulerian");
  }
  MinMaxReport rep;
  rep.mode = mode;
  auto primal = max_multiflow(net, mu, opt);
  auto dual = dual_metric_lp(net, mu, opt);
  rep.max_value = primal.value;
  rep.min_value = dual.value;
  rep.equal = primal.value == dual.value;
  rep.certified = primal.solution.certified && dual.solution.certified;
  rep.flow = primal.flow;
  rep.lp_extension = dual.extension;

  const MetricExtension tight = tighten_extension(mu, dual.extension);
  const std::size_t m = net.vertex_count();
  auto objective_of = [&](const std::vector<ExtPoint>& rho) {
    Rational total(0);
    for (const auto& e : net.edges) total += Rational(e.cap) * dinf(rho[e.tail], rho[e.head]);
    return total;
  };

  if (mode == MinMaxMode::T) {
    rep.extension = tight;
    bool ok = is_tight_extension(mu, tight);
    for (std::size_t x = 0; x < m; ++x) {
      rep.embedding.push_back(extension_point(tight, x));
      ok = ok && in_tight_span(mu, rep.embedding.back());
    }
    for (std::size_t i = 0; i < mu.size(); ++i) ok = ok && rep.embedding[net.terminals[i]] == canonical_point(mu, i);
    rep.embedded_objective = objective_of(rep.embedding);
    rep.embedding_ok = ok && rep.embedded_objective == dual.value;
    return rep;
  }

  rep.cycles = *cycles;
  rep.cycle_identity = cycles_objective(net, rep.cycles, dual.extension.d) == network_objective(net, dual.extension.d) &&
                       cycles_objective(net, rep.cycles, tight.d) == network_objective(net, tight.d);

  // retract into Q+ and then into the canonical section
  std::vector<ExtPoint> rho;
  for (std::size_t x = 0; x < m; ++x) {
    rho.push_back(retract_to_section(mu, retract_to_qplus(mu, extension_point(tight, x))));
  }
  rep.extension = pull_back(rho, net.vertices, net.terminals);
  bool ok = is_cyclically_tight_extension(mu, rep.extension);
  for (std::size_t x = 0; x < m; ++x) ok = ok && extension_point(rep.extension, x) == rho[x];
  for (std::size_t i = 0; i < mu.size(); ++i) {
    ok = ok && Fiber(rho[net.terminals[i]]) == Fiber(canonical_point(mu, i));
  }
  rep.embedding = rho;
  rep.embedded_objective = objective_of(rho);
  rep.embedding_ok = ok && is_balanced(rho).holds && rep.embedded_objective == dual.value;

  // a congruent metric embeds as rho(x) = d_x + alpha(x)(1,-1); alpha(x) = d(x,z)/2
  // keeps d(x,y) - alpha(x) + alpha(y) nonnegative
  const auto& dct = rep.extension.d;
  Potential alpha;
  for (std::size_t x = 0; x < m; ++x) alpha.values.push_back(dct(x, 0) / 2);
  const DirectedDistance shifted(shift_by_potential(dct, alpha), GroundSet(net.vertices));
  std::vector<ExtPoint> rho2;
  for (std::size_t x = 0; x < m; ++x) rho2.push_back(fiber_shift(rho[x], alpha.values[x]));
  bool cong = is_metric(shifted) && is_balanced(rho2).holds;
  for (std::size_t x = 0; x < m && cong; ++x) {
    cong = in_q(mu, rho2[x]);
    for (std::size_t y = 0; y < m && cong; ++y) cong = dinf(rho2[x], rho2[y]) == shifted(x, y);
  }
  for (std::size_t i = 0; i < mu.size() && cong; ++i) {
    cong = Fiber(rho2[net.terminals[i]]) == Fiber(canonical_point(mu, i));
  }
  rep.congruent_ok = cong && network_objective(net, shifted) == dual.value;
  return rep;
}

}  // namespace dtspan
