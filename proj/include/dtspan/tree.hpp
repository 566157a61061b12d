#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dtspan/complex.hpp"
#include "dtspan/error.hpp"
#include "dtspan/geometry.hpp"
#include "dtspan/metric.hpp"
#include "dtspan/rank.hpp"
#include "dtspan/rational.hpp"

namespace dtspan {

struct TreeEdge {
  std::size_t tail = 0;
  std::size_t head = 0;

  friend bool operator==(const TreeEdge&, const TreeEdge&) = default;
};

/// A directed graph whose underlying undirected graph is a tree.
class OrientedTree {
 public:
  OrientedTree() : OrientedTree(1, {}) {}

  OrientedTree(std::size_t vertex_count, std::vector<TreeEdge> edges) : n_(vertex_count), edges_(std::move(edges)) {
    if (n_ == 0) fail(Errc::NotATree, "a tree needs at least one vertex");
    if (edges_.size() + 1 != n_) fail(Errc::NotATree, "a tree on k vertices has k-1 edges");
    std::vector<std::size_t> parent(n_);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    adj_.assign(n_, {});
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      const auto [a, b] = edges_[e];
      if (a >= n_ || b >= n_) fail(Errc::UnknownVertex, "edge endpoint out of range");
      if (find(a) == find(b)) fail(Errc::NotATree, "edges contain a cycle");
      parent[find(a)] = find(b);
      adj_[a].push_back(e);
      adj_[b].push_back(e);
    }
  }

  std::size_t vertex_count() const { return n_; }
  const std::vector<TreeEdge>& edges() const { return edges_; }
  const std::vector<std::size_t>& incident(std::size_t v) const { return adj_.at(v); }

  std::size_t other(std::size_t e, std::size_t v) const { return edges_[e].tail == v ? edges_[e].head : edges_[e].tail; }

  void require_vertex(std::size_t v) const {
    if (v >= n_) fail(Errc::UnknownVertex, "vertex " + std::to_string(v) + " not in tree");
  }

  /// Edges on the underlying path x .. y, each flagged true when traversed
  /// tail to head.
  std::vector<std::pair<std::size_t, bool>> path(std::size_t x, std::size_t y) const {
    require_vertex(x);
    require_vertex(y);
    std::vector<std::size_t> via(n_, SIZE_MAX);
    std::vector<std::size_t> stack{x};
    std::vector<bool> seen(n_, false);
    seen[x] = true;
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      for (auto e : adj_[v]) {
        auto w = other(e, v);
        if (seen[w]) continue;
        seen[w] = true;
        via[w] = e;
        stack.push_back(w);
      }
    }
    std::vector<std::pair<std::size_t, bool>> out;
    for (auto v = y; v != x;) {
      auto e = via[v];
      auto prev = other(e, v);
      out.emplace_back(e, edges_[e].tail == prev);
      v = prev;
    }
    std::reverse(out.begin(), out.end());
    return out;
  }

  /// Every vertex has at most one incoming and one outgoing edge.
  bool is_directed_path() const {
    std::vector<int> in(n_, 0), out(n_, 0);
    for (const auto& e : edges_) {
      ++out[e.tail];
      ++in[e.head];
    }
    for (std::size_t v = 0; v < n_; ++v) {
      if (in[v] > 1 || out[v] > 1) return false;
    }
    return true;
  }

  /// Underlying subgraph induced by the vertex set is connected.
  bool connected(const std::vector<std::size_t>& vs) const {
    if (vs.empty()) return false;
    std::vector<bool> in(n_, false), seen(n_, false);
    for (auto v : vs) in.at(v) = true;
    std::vector<std::size_t> stack{vs.front()};
    seen[vs.front()] = true;
    std::size_t reached = 1;
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      for (auto e : adj_[v]) {
        auto w = other(e, v);
        if (!in[w] || seen[w]) continue;
        seen[w] = true;
        ++reached;
        stack.push_back(w);
      }
    }
    std::vector<std::size_t> uniq(vs);
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    return reached == uniq.size();
  }

  /// The vertex set induces a directed path (connected, in/out degree <= 1).
  bool is_directed_subpath(const std::vector<std::size_t>& vs) const {
    if (!connected(vs)) return false;
    std::vector<bool> in(n_, false);
    for (auto v : vs) in[v] = true;
    std::vector<int> indeg(n_, 0), outdeg(n_, 0);
    for (const auto& e : edges_) {
      if (in[e.tail] && in[e.head]) {
        ++outdeg[e.tail];
        ++indeg[e.head];
      }
    }
    for (auto v : vs) {
      if (indeg[v] > 1 || outdeg[v] > 1) return false;
    }
    return true;
  }

 private:
  std::size_t n_;
  std::vector<TreeEdge> edges_;
  std::vector<std::vector<std::size_t>> adj_;
};

/// Sum of lengths of the forward edges on the path from x to y.
inline Rational tree_distance(const OrientedTree& tree, const RationalVector& lengths, std::size_t x, std::size_t y) {
  if (lengths.size() != tree.edges().size()) fail(Errc::LengthMismatch, "one length per edge expected");
  Rational total(0);
  for (const auto& [e, forward] : tree.path(x, y)) {
    if (forward) total += lengths[e];
  }
  return total;
}

/// All ordered pairs at once: one traversal per source.
inline RationalMatrix tree_distance_matrix(const OrientedTree& tree, const RationalVector& lengths) {
  if (lengths.size() != tree.edges().size()) fail(Errc::LengthMismatch, "one length per edge expected");
  const std::size_t k = tree.vertex_count();
  RationalMatrix out(k, RationalVector(k, Rational(0)));
  for (std::size_t x = 0; x < k; ++x) {
    std::vector<bool> seen(k, false);
    std::vector<std::size_t> stack{x};
    seen[x] = true;
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      for (auto e : tree.incident(v)) {
        auto w = tree.other(e, v);
        if (seen[w]) continue;
        seen[w] = true;
        out[x][w] = out[x][v] + (tree.edges()[e].tail == v ? lengths[e] : Rational(0));
        stack.push_back(w);
      }
    }
  }
  return out;
}

struct Realization {
  OrientedTree tree;
  RationalVector lengths;                        // one per edge, positive
  std::vector<std::string> labels;               // ground set
  std::vector<std::vector<std::size_t>> subtrees;  // F_s, sorted vertex lists

  bool singleton_subtrees() const {
    return std::all_of(subtrees.begin(), subtrees.end(), [](const auto& f) { return f.size() == 1; });
  }
};

inline void validate_realization(const Realization& r) {
  if (r.lengths.size() != r.tree.edges().size()) fail(Errc::LengthMismatch, "one length per edge expected");
  for (const auto& a : r.lengths) {
    if (a <= 0) fail(Errc::NegativeEntry, "realization edge lengths must be positive");
  }
  if (r.subtrees.size() != r.labels.size()) fail(Errc::LengthMismatch, "one subtree per label expected");
  for (std::size_t s = 0; s < r.subtrees.size(); ++s) {
    if (r.subtrees[s].empty()) fail(Errc::EmptySubtree, "subtree of " + r.labels[s] + " is empty");
    for (auto v : r.subtrees[s]) r.tree.require_vertex(v);
    if (!r.tree.connected(r.subtrees[s])) fail(Errc::NotATree, "subtree of " + r.labels[s] + " is disconnected");
  }
}

/// mu(s,t) = shortest directed tree distance from F_s to F_t.
inline DirectedDistance evaluate_realization(const Realization& r) {
  validate_realization(r);
  const auto dist = tree_distance_matrix(r.tree, r.lengths);
  const std::size_t n = r.labels.size();
  RationalMatrix m(n, RationalVector(n));
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < n; ++t) {
      std::optional<Rational> best;
      for (auto x : r.subtrees[s]) {
        for (auto y : r.subtrees[t]) {
          if (!best || dist[x][y] < *best) best = dist[x][y];
        }
      }
      m[s][t] = *best;
    }
  }
  return DirectedDistance(std::move(m), GroundSet(r.labels));
}

namespace detail {

/// Realization read off a complex of dimension <= 1: the skeleton graph as
/// tree, F_s the vertices with both s-coordinates zero.
inline Realization realization_from_complex(const DirectedDistance& mu, const PolyComplex& c) {
  const auto g = skeleton_graph(c);
  std::vector<TreeEdge> edges;
  Realization r;
  for (const auto& e : g.edges) {
    edges.push_back({e.tail, e.head});
    r.lengths.push_back(e.length);
  }
  r.tree = OrientedTree(g.vertices.size(), std::move(edges));
  r.labels = mu.ground().labels();
  const std::size_t n = mu.size();
  r.subtrees.assign(n, {});
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    for (std::size_t s = 0; s < n; ++s) {
      if (g.vertices[v].col[s] == 0 && g.vertices[v].row[s] == 0) r.subtrees[s].push_back(v);
    }
  }
  for (std::size_t s = 0; s < n; ++s) {
    ensure(!r.subtrees[s].empty() && r.tree.connected(r.subtrees[s]), "terminal subcomplex is not a connected subtree");
  }
  ensure(evaluate_realization(r) == mu, "realization does not reproduce the distance");
  return r;
}

}  // namespace detail

/// Directed-path realization from the 1-skeleton of T (needs dim T <= 1).
inline Realization realize_path(const DirectedDistance& mu, const ComplexOptions& opt = {}) {
  if (dim_tight_span(mu).value > 1) fail(Errc::DimensionTooHigh, "tight span has dimension above 1");
  auto r = detail::realization_from_complex(mu, enumerate_tight_span(mu, opt));
  ensure(r.tree.is_directed_path(), "skeleton of a 1-dimensional tight span is not a directed path");
  return r;
}

/// Realization with directed-path subtrees from the canonical section
/// (needs tropical rank <= 2).
inline Realization realize_tree(const DirectedDistance& mu, const ComplexOptions& opt = {}) {
  if (tropical_rank(mu).value > 2) fail(Errc::RankTooHigh, "tropical rank above 2");
  auto r = detail::realization_from_complex(mu, enumerate_section(mu, opt));
  for (const auto& f : r.subtrees) ensure(r.tree.is_directed_subpath(f), "subtree is not a directed path");
  return r;
}

/// Realization with single-vertex subtrees for a directed tree metric.
inline Realization realize_directed_tree_metric(const DirectedDistance& mu, const ComplexOptions& opt = {}) {
  require_metric(mu);
  if (!check_directed_tree_metric(mu)) fail(Errc::NotDirectedTreeMetric, "not a directed tree metric");
  auto r = realize_tree(mu, opt);
  ensure(r.singleton_subtrees(), "terminal subtrees of a metric are not single points");
  return r;
}

/// Coefficient times the directed split metric: 1 on (A, B) pairs, else 0.
struct SplitTerm {
  std::vector<std::size_t> a;
  std::vector<std::size_t> b;
  Rational coefficient;
};

/// One term per edge with a nonempty split: A holds the elements whose vertex
/// lies on the tail side of the edge.
inline std::vector<SplitTerm> split_decomposition(const Realization& r) {
  validate_realization(r);
  if (!r.singleton_subtrees()) fail(Errc::NonSingletonSubtrees, "split decomposition needs single-vertex subtrees");
  const std::size_t n = r.labels.size();
  std::vector<SplitTerm> out;
  for (std::size_t e = 0; e < r.tree.edges().size(); ++e) {
    const std::size_t tail = r.tree.edges()[e].tail;
    std::vector<bool> tail_side(r.tree.vertex_count(), false);
    std::vector<std::size_t> stack{tail};
    tail_side[tail] = true;
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      for (auto f : r.tree.incident(v)) {
        if (f == e) continue;
        auto w = r.tree.other(f, v);
        if (tail_side[w]) continue;
        tail_side[w] = true;
        stack.push_back(w);
      }
    }
    SplitTerm term{{}, {}, r.lengths[e]};
    for (std::size_t s = 0; s < n; ++s) (tail_side[r.subtrees[s].front()] ? term.a : term.b).push_back(s);
    if (!term.a.empty() && !term.b.empty()) out.push_back(std::move(term));
  }
  return out;
}

inline DirectedDistance recombine_splits(const std::vector<SplitTerm>& terms, const std::vector<std::string>& labels) {
  const std::size_t n = labels.size();
  RationalMatrix m(n, RationalVector(n, Rational(0)));
  for (const auto& term : terms) {
    for (auto s : term.a) {
      for (auto t : term.b) m.at(s).at(t) += term.coefficient;
    }
  }
  return DirectedDistance(std::move(m), GroundSet(labels));
}

/// Pairwise compatibility of the underlying undirected splits.
inline bool splits_compatible(const std::vector<SplitTerm>& terms, std::size_t n) {
  auto mask = [n](const std::vector<std::size_t>& part) {
    std::vector<bool> m(n, false);
    for (auto s : part) m[s] = true;
    return m;
  };
  for (std::size_t i = 0; i < terms.size(); ++i) {
    for (std::size_t j = i + 1; j < terms.size(); ++j) {
      const auto a = mask(terms[i].a), c = mask(terms[j].a);
      bool ac = false, ad = false, bc = false, bd = false;
      for (std::size_t s = 0; s < n; ++s) {
        ac = ac || (a[s] && c[s]);
        ad = ad || (a[s] && !c[s]);
        bc = bc || (!a[s] && c[s]);
        bd = bd || (!a[s] && !c[s]);
      }
      if (ac && ad && bc && bd) return false;
    }
  }
  return true;
}

enum class RealizationKind { DirectedPath, PathSubtrees, Singleton };

inline std::string_view realization_kind_name(RealizationKind k) {
  switch (k) {
    case RealizationKind::DirectedPath: return "directed_path";
    case RealizationKind::PathSubtrees: return "path_subtrees";
    case RealizationKind::Singleton: return "singleton";
  }
  return "unknown";
}

/// Seeded generator. Draws use mt19937_64 and plain modular reduction so the
/// output is identical on every platform.
inline Realization random_realization(RealizationKind kind, std::size_t n, std::uint64_t seed) {
  if (n == 0) fail(Errc::UsageError, "random_realization needs n >= 1");
  std::mt19937_64 rng(seed);
  auto draw = [&rng](std::size_t bound) { return static_cast<std::size_t>(rng() % bound); };
  const std::size_t k = n == 1 ? 1 : 2 + draw(n + 1);

  std::vector<TreeEdge> edges;
  for (std::size_t v = 1; v < k; ++v) {
    if (kind == RealizationKind::DirectedPath) {
      edges.push_back({v - 1, v});
      continue;
    }
    const std::size_t u = draw(v);
    if (draw(2) == 0) edges.push_back({u, v});
    else edges.push_back({v, u});
  }
  Realization r;
  r.tree = OrientedTree(k, std::move(edges));
  for (std::size_t e = 0; e + 1 < k; ++e) {
    r.lengths.push_back(Rational(static_cast<long>(1 + draw(6)), static_cast<unsigned long>(1 + draw(3))));
    r.lengths.back().canonicalize();
  }
  r.labels = default_labels(n);
  r.subtrees.resize(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::size_t v = draw(k);
    auto& f = r.subtrees[s];
    f.push_back(v);
    if (kind == RealizationKind::Singleton) continue;
    std::size_t steps = draw(k);
    if (kind == RealizationKind::DirectedPath) {
      f.clear();
      const std::size_t hi = std::min(k - 1, v + steps);
      for (std::size_t w = v; w <= hi; ++w) f.push_back(w);
      continue;
    }
    for (; steps > 0; --steps) {
      std::vector<std::size_t> outs;
      for (auto e : r.tree.incident(v)) {
        if (r.tree.edges()[e].tail == v) outs.push_back(r.tree.edges()[e].head);
      }
      if (outs.empty()) break;
      v = outs[draw(outs.size())];
      f.push_back(v);
    }
    std::sort(f.begin(), f.end());
  }
  return r;
}

}  // namespace dtspan
