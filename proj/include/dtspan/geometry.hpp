#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dtspan/error.hpp"
#include "dtspan/metric.hpp"
#include "dtspan/rational.hpp"

namespace dtspan {

/// A point of R^{S^c} x R^{S^r}: one column coordinate and one row
/// coordinate per ground element.
struct ExtPoint {
  RationalVector col;
  RationalVector row;

  static ExtPoint zeros(std::size_t n) { return {RationalVector(n, Rational(0)), RationalVector(n, Rational(0))}; }

  std::size_t size() const { return col.size(); }

  /// Coordinate by node index: [0, n) are column nodes, [n, 2n) row nodes.
  const Rational& at(std::size_t node) const { return node < col.size() ? col[node] : row[node - col.size()]; }
  Rational& at(std::size_t node) { return node < col.size() ? col[node] : row[node - col.size()]; }

  friend bool operator==(const ExtPoint&, const ExtPoint&) = default;
  friend auto operator<=>(const ExtPoint& a, const ExtPoint& b) {
    if (a.col != b.col) return a.col < b.col ? std::strong_ordering::less : std::strong_ordering::greater;
    if (a.row != b.row) return a.row < b.row ? std::strong_ordering::less : std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
};

inline void require_same_size(const ExtPoint& p, const ExtPoint& q) {
  if (p.col.size() != q.col.size() || p.row.size() != q.row.size() || p.col.size() != p.row.size()) {
    fail(Errc::GroundSetMismatch, "points live on different ground sets");
  }
}

inline void require_point_for(const DirectedDistance& mu, const ExtPoint& p) {
  if (p.col.size() != mu.size() || p.row.size() != mu.size()) {
    fail(Errc::GroundSetMismatch, "point dimension does not match the distance");
  }
}

inline ExtPoint operator+(const ExtPoint& p, const ExtPoint& q) {
  require_same_size(p, q);
  ExtPoint r = p;
  for (std::size_t i = 0; i < p.size(); ++i) {
    r.col[i] += q.col[i];
    r.row[i] += q.row[i];
  }
  return r;
}

inline ExtPoint operator-(const ExtPoint& p, const ExtPoint& q) {
  require_same_size(p, q);
  ExtPoint r = p;
  for (std::size_t i = 0; i < p.size(); ++i) {
    r.col[i] -= q.col[i];
    r.row[i] -= q.row[i];
  }
  return r;
}

inline ExtPoint operator*(const Rational& t, const ExtPoint& p) {
  ExtPoint r = p;
  for (auto& x : r.col) x *= t;
  for (auto& x : r.row) x *= t;
  return r;
}

/// p + t (1, -1): translation along the lineality direction.
inline ExtPoint fiber_shift(const ExtPoint& p, const Rational& t) {
  ExtPoint r = p;
  for (auto& x : r.col) x += t;
  for (auto& x : r.row) x -= t;
  return r;
}

inline bool is_nonnegative(const ExtPoint& p) {
  auto nonneg = [](const Rational& x) { return x >= 0; };
  return std::all_of(p.col.begin(), p.col.end(), nonneg) && std::all_of(p.row.begin(), p.row.end(), nonneg);
}

/// Class of p modulo (1,-1)R. The stored representative has min row = 0.
class Fiber {
 public:
  explicit Fiber(const ExtPoint& representative)
      : rep_(representative.size() == 0 ? representative
                                        : fiber_shift(representative, min_of(representative.row))) {}

  const ExtPoint& representative() const { return rep_; }

  friend bool operator==(const Fiber&, const Fiber&) = default;

 private:
  ExtPoint rep_;
};

/// max over coordinates of (q - p)_+
inline Rational dinf_plus(const RationalVector& p, const RationalVector& q) {
  if (p.size() != q.size()) fail(Errc::LengthMismatch, "dinf_plus needs equal lengths");
  if (p.empty()) fail(Errc::LengthMismatch, "dinf_plus needs nonempty vectors");
  Rational best(0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    Rational diff = q[i] - p[i];
    if (diff > best) best = diff;
  }
  return best;
}

/// Directed l-infinity distance max{ D+(p^c, q^c), D+(q^r, p^r) }.
inline Rational dinf(const ExtPoint& p, const ExtPoint& q) {
  require_same_size(p, q);
  return rmax(dinf_plus(p.col, q.col), dinf_plus(q.row, p.row));
}

/// max{(p^c)_+, (-p^r)_+} + max{(-p^c)_+, (p^r)_+}; ||p - q|| = dinf(p,q) + dinf(q,p).
inline Rational symmetric_norm(const ExtPoint& p) {
  Rational up(0), down(0);
  for (const auto& x : p.col) {
    up = rmax(up, x);
    down = rmax(down, -x);
  }
  for (const auto& x : p.row) {
    up = rmax(up, -x);
    down = rmax(down, x);
  }
  return up + down;
}

/// Total length of a cyclic sequence of points.
inline Rational cycle_dinf(const std::vector<ExtPoint>& cycle) {
  Rational total(0);
  for (std::size_t i = 0; i < cycle.size(); ++i) total += dinf(cycle[i], cycle[(i + 1) % cycle.size()]);
  return total;
}

inline bool in_pi(const DirectedDistance& mu, const ExtPoint& p) {
  require_point_for(mu, p);
  const std::size_t n = mu.size();
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < n; ++t) {
      if (p.col[s] + p.row[t] < mu(s, t)) return false;
    }
  }
  return true;
}

inline bool in_p(const DirectedDistance& mu, const ExtPoint& p) { return in_pi(mu, p) && is_nonnegative(p); }

/// One bipartite component of an equality graph.
struct Component {
  std::vector<std::size_t> cols;
  std::vector<std::size_t> rows;

  friend bool operator==(const Component&, const Component&) = default;
};

/// K(p): column node s adjacent to row node t iff p(s^c) + p(t^r) = mu(s,t).
struct EqualityGraph {
  std::size_t n = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // (s, t), sorted

  std::vector<bool> covered() const {
    std::vector<bool> cov(2 * n, false);
    for (const auto& [s, t] : edges) {
      cov[s] = true;
      cov[n + t] = true;
    }
    return cov;
  }

  /// Components over all 2n nodes, isolated nodes included, ordered by
  /// smallest node index.
  std::vector<Component> components() const {
    std::vector<std::size_t> parent(2 * n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const auto& [s, t] : edges) parent[find(s)] = find(n + t);
    std::vector<Component> out;
    std::vector<std::size_t> slot(2 * n, SIZE_MAX);
    for (std::size_t node = 0; node < 2 * n; ++node) {
      std::size_t root = find(node);
      if (slot[root] == SIZE_MAX) {
        slot[root] = out.size();
        out.emplace_back();
      }
      auto& comp = out[slot[root]];
      if (node < n) comp.cols.push_back(node);
      else comp.rows.push_back(node - n);
    }
    return out;
  }
};

inline EqualityGraph equality_graph(const DirectedDistance& mu, const ExtPoint& p) {
  if (!in_pi(mu, p)) fail(Errc::NotInPolyhedron, "point violates a coupling inequality");
  EqualityGraph g{mu.size(), {}};
  for (std::size_t s = 0; s < mu.size(); ++s) {
    for (std::size_t t = 0; t < mu.size(); ++t) {
      if (p.col[s] + p.row[t] == mu(s, t)) g.edges.emplace_back(s, t);
    }
  }
  return g;
}

enum class Membership { Outside, PiOnly, PNotT, TNotQplus, Qplus, QNotNonneg };

inline std::string_view membership_name(Membership m) {
  switch (m) {
    case Membership::Outside: return "outside";
    case Membership::PiOnly: return "Pi_only";
    case Membership::PNotT: return "P_not_T";
    case Membership::TNotQplus: return "T_not_Qplus";
    case Membership::Qplus: return "Qplus";
    case Membership::QNotNonneg: return "Q_not_nonneg";
  }
  return "unknown";
}

/// Classification through isolated vertices of K(p): minimal in P iff no
/// isolated vertex has a positive coordinate, minimal in Pi iff no isolated
/// vertex at all.
inline Membership classify_membership(const DirectedDistance& mu, const ExtPoint& p) {
  require_point_for(mu, p);
  if (!in_pi(mu, p)) return Membership::Outside;
  const auto cov = equality_graph(mu, p).covered();
  const bool no_isolated = std::all_of(cov.begin(), cov.end(), [](bool c) { return c; });
  if (!is_nonnegative(p)) return no_isolated ? Membership::QNotNonneg : Membership::PiOnly;
  if (no_isolated) return Membership::Qplus;
  for (std::size_t node = 0; node < cov.size(); ++node) {
    if (!cov[node] && p.at(node) > 0) return Membership::PNotT;
  }
  return Membership::TNotQplus;
}

inline bool in_tight_span(const DirectedDistance& mu, const ExtPoint& p) {
  auto m = classify_membership(mu, p);
  return m == Membership::TNotQplus || m == Membership::Qplus;
}

inline bool in_q(const DirectedDistance& mu, const ExtPoint& p) {
  auto m = classify_membership(mu, p);
  return m == Membership::Qplus || m == Membership::QNotNonneg;
}

inline bool in_qplus(const DirectedDistance& mu, const ExtPoint& p) { return classify_membership(mu, p) == Membership::Qplus; }

struct CanonicalPoints {
  ExtPoint point;     // (mu(t,s), mu(s,t))_t
  ExtPoint entrance;  // mu_s^in
  ExtPoint exit;      // mu_s^out
};

inline CanonicalPoints canonical_points(const DirectedDistance& mu, std::size_t s) {
  const std::size_t n = mu.size();
  if (s >= n) fail(Errc::UnknownElement, "element index " + std::to_string(s) + " out of range");
  CanonicalPoints out{ExtPoint::zeros(n), ExtPoint::zeros(n), ExtPoint::zeros(n)};
  for (std::size_t t = 0; t < n; ++t) {
    out.point.col[t] = mu(t, s);
    out.point.row[t] = mu(s, t);

    out.entrance.col[t] = mu(t, s);
    Rational in_row = mu(0, t) - mu(0, s);
    for (std::size_t u = 1; u < n; ++u) in_row = rmax(in_row, mu(u, t) - mu(u, s));
    out.entrance.row[t] = in_row;

    Rational out_col = mu(t, 0) - mu(s, 0);
    for (std::size_t u = 1; u < n; ++u) out_col = rmax(out_col, mu(t, u) - mu(s, u));
    out.exit.col[t] = out_col;
    out.exit.row[t] = mu(s, t);
  }
  return out;
}

inline ExtPoint canonical_point(const DirectedDistance& mu, std::size_t s) { return canonical_points(mu, s).point; }

struct FaceDimension {
  std::size_t dim = 0;
  std::vector<Component> directions;  // each spans (1_{A^c}, -1_{B^r})
};

/// Dimension of the face of T containing p in its relative interior: the
/// number of components of K(p) with no zero coordinate.
inline FaceDimension face_dimension(const DirectedDistance& mu, const ExtPoint& p) {
  if (!in_tight_span(mu, p)) fail(Errc::NotInTightSpan, "face_dimension needs a point of the tight span");
  FaceDimension out;
  for (auto& comp : equality_graph(mu, p).components()) {
    bool touches_zero = false;
    for (auto s : comp.cols) touches_zero = touches_zero || p.col[s] == 0;
    for (auto t : comp.rows) touches_zero = touches_zero || p.row[t] == 0;
    if (!touches_zero) out.directions.push_back(std::move(comp));
  }
  out.dim = out.directions.size();
  return out;
}

/// Move p along v as far as P allows, for at most max_time (unbounded when
/// nullopt). The step is the smallest binding ratio among nonnegativity and
/// coupling constraints.
inline ExtPoint retract_ray(const DirectedDistance& mu, const ExtPoint& p, const ExtPoint& v,
                            const std::optional<Rational>& max_time) {
  require_point_for(mu, p);
  require_point_for(mu, v);
  if (!in_p(mu, p)) fail(Errc::NotInP, "retract_ray needs a point of P");
  const std::size_t n = mu.size();
  std::optional<Rational> step = max_time;
  auto tighten = [&step](const Rational& bound) {
    if (!step || bound < *step) step = bound;
  };
  for (std::size_t node = 0; node < 2 * n; ++node) {
    if (v.at(node) < 0) tighten(p.at(node) / -v.at(node));
  }
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < n; ++t) {
      Rational rate = v.col[s] + v.row[t];
      if (rate < 0) tighten((p.col[s] + p.row[t] - mu(s, t)) / -rate);
    }
  }
  if (!step) fail(Errc::UnboundedDirection, "direction never leaves P and no time bound was given");
  if (*step < 0) fail(Errc::InternalError, "negative step in retract_ray");
  return p + (*step) * v;
}

inline ExtPoint unit_direction(std::size_t n, std::size_t node, const Rational& value) {
  ExtPoint v = ExtPoint::zeros(n);
  v.at(node) = value;
  return v;
}

/// phi = phi_{s_1} o ... o phi_{s_n} with phi_s = phi[-1_{s^c}] o phi[-1_{s^r}].
/// Maps P onto T, never increases a coordinate, and is nonexpansive.
inline ExtPoint retract_to_tight_span(const DirectedDistance& mu, const ExtPoint& p) {
  require_point_for(mu, p);
  if (!in_p(mu, p)) fail(Errc::NotInP, "retract_to_tight_span needs a point of P");
  const std::size_t n = mu.size();
  ExtPoint q = p;
  for (std::size_t k = n; k-- > 0;) {
    q = retract_ray(mu, q, unit_direction(n, n + k, Rational(-1)), std::nullopt);
    q = retract_ray(mu, q, unit_direction(n, k, Rational(-1)), std::nullopt);
  }
  return q;
}

/// Nonempty proper subsets of {0..n-1} as bitmasks, by size then value, so
/// that A_i subset of A_j implies i <= j.
inline std::vector<std::uint64_t> ordered_proper_subsets(std::size_t n) {
  ensure(n < 63, "ground set too large for subset enumeration");
  std::vector<std::uint64_t> out;
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  for (std::uint64_t mask = 1; mask < full; ++mask) out.push_back(mask);
  std::stable_sort(out.begin(), out.end(), [](std::uint64_t a, std::uint64_t b) {
    return __builtin_popcountll(a) < __builtin_popcountll(b);
  });
  return out;
}

/// varphi = varphi^r o varphi^c. Identity on Q+, and never lengthens a cycle.
inline ExtPoint retract_to_qplus(const DirectedDistance& mu, const ExtPoint& p) {
  require_point_for(mu, p);
  if (!in_tight_span(mu, p)) fail(Errc::NotInTightSpan, "retract_to_qplus needs a point of T");
  const std::size_t n = mu.size();
  const auto subsets = ordered_proper_subsets(n);
  ExtPoint q = p;
  for (auto mask : subsets) {
    ExtPoint v = ExtPoint::zeros(n);
    for (std::size_t s = 0; s < n; ++s) {
      v.col[s] = (mask >> s) & 1 ? Rational(1) : Rational(0);
      v.row[s] = -1;
    }
    q = retract_ray(mu, q, v, std::nullopt);
  }
  for (auto mask : subsets) {
    ExtPoint v = ExtPoint::zeros(n);
    for (std::size_t s = 0; s < n; ++s) {
      v.col[s] = -1;
      v.row[s] = (mask >> s) & 1 ? Rational(1) : Rational(0);
    }
    q = retract_ray(mu, q, v, std::nullopt);
  }
  ensure(in_qplus(mu, q), "retract_to_qplus left Q+");
  return q;
}

struct BalanceCheck {
  bool holds = true;
  std::optional<std::pair<std::size_t, std::size_t>> violation;  // (i, j): i strictly below j
};

inline bool strictly_below(const RationalVector& a, const RationalVector& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] < b[i])) return false;
  }
  return !a.empty();
}

/// No pair p, q with p^c < q^c or p^r < q^r componentwise.
inline BalanceCheck is_balanced(const std::vector<ExtPoint>& points) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (i == j) continue;
      require_same_size(points[i], points[j]);
      if (strictly_below(points[i].col, points[j].col) || strictly_below(points[i].row, points[j].row)) {
        return {false, std::make_pair(i, j)};
      }
    }
  }
  return {};
}

/// Points of Q+ whose row part has a zero component.
inline bool canonical_section_membership(const DirectedDistance& mu, const ExtPoint& p) {
  require_point_for(mu, p);
  return in_qplus(mu, p) && min_of(p.row) == 0;
}

/// The representative of p's fiber inside the canonical section.
inline ExtPoint retract_to_section(const DirectedDistance& mu, const ExtPoint& p) {
  require_point_for(mu, p);
  if (!in_q(mu, p)) fail(Errc::NotInQ, "retract_to_section needs a point of Q");
  return fiber_shift(p, min_of(p.row));
}

/// Parameter window {alpha : {p0 + alpha(1,-1), q} balanced}. Bounds may be infinite.
struct BalanceInterval {
  ExtendedRational lower = ExtendedRational::neg_inf();
  ExtendedRational upper = ExtendedRational::pos_inf();

  bool empty() const { return upper < lower; }

  void intersect(const BalanceInterval& other) {
    if (lower < other.lower) lower = other.lower;
    if (other.upper < upper) upper = other.upper;
  }
};

inline BalanceInterval balance_interval(const ExtPoint& p0, const ExtPoint& q) {
  require_same_size(p0, q);
  RationalVector dc(p0.size()), dr(p0.size());
  for (std::size_t i = 0; i < p0.size(); ++i) {
    dc[i] = q.col[i] - p0.col[i];
    dr[i] = p0.row[i] - q.row[i];
  }
  // p^c < q^c iff alpha < min dc; q^c < p^c iff alpha > max dc; same for rows.
  BalanceInterval out;
  out.lower = ExtendedRational::finite(rmax(min_of(dc), min_of(dr)));
  out.upper = ExtendedRational::finite(rmin(max_of(dc), max_of(dr)));
  return out;
}

/// Picks, for each queried fiber, a representative that keeps `base` plus all
/// earlier answers balanced. When every prior point is in Q+, the answer is
/// also kept inside Q+. The lower end of the feasible window is returned.
inline std::vector<ExtPoint> extend_to_balanced_section(const DirectedDistance& mu, const std::vector<ExtPoint>& base,
                                                        const std::vector<Fiber>& queries) {
  for (const auto& q : base) {
    require_point_for(mu, q);
    if (!in_q(mu, q)) fail(Errc::NotInQ, "base point outside Q");
  }
  if (!is_balanced(base).holds) fail(Errc::NotBalanced, "base set is not balanced");
  std::vector<ExtPoint> known = base;
  bool all_nonneg = std::all_of(known.begin(), known.end(), [](const ExtPoint& q) { return is_nonnegative(q); });
  std::vector<ExtPoint> answers;
  for (const auto& fiber : queries) {
    const ExtPoint& p0 = fiber.representative();
    require_point_for(mu, p0);
    if (!in_q(mu, p0)) fail(Errc::NotInQ, "queried fiber does not meet Q");
    BalanceInterval window;
    for (const auto& q : known) window.intersect(balance_interval(p0, q));
    if (all_nonneg) {
      RationalVector neg(p0.size());
      for (std::size_t i = 0; i < p0.size(); ++i) neg[i] = -p0.col[i];
      window.intersect({ExtendedRational::finite(max_of(neg)), ExtendedRational::finite(min_of(p0.row))});
    }
    if (window.empty()) fail(Errc::EmptyIntersection, "empty balance window; Helly argument violated");
    ensure(window.lower.is_finite(), "balance window has no finite lower end");
    ExtPoint answer = fiber_shift(p0, window.lower.value);
    known.push_back(answer);
    all_nonneg = all_nonneg && is_nonnegative(answer);
    answers.push_back(std::move(answer));
  }
  return answers;
}

enum class GeodesicSpace { TightSpan, Qplus };

struct Polyline {
  std::vector<ExtPoint> points;
  RationalVector steps;
  Rational total;
};

/// Retracts the k+1 evenly spaced samples of the segment [p, q] back into T
/// (and further into Q+ when requested). The summed step length equals
/// dinf(p, q) exactly.
inline Polyline geodesic_polyline(const DirectedDistance& mu, const ExtPoint& p, const ExtPoint& q, std::size_t k,
                                  GeodesicSpace space = GeodesicSpace::TightSpan) {
  require_point_for(mu, p);
  require_point_for(mu, q);
  if (k == 0) fail(Errc::UsageError, "subdivision count must be positive");
  if (space == GeodesicSpace::TightSpan) {
    if (!in_tight_span(mu, p) || !in_tight_span(mu, q)) fail(Errc::NotInTightSpan, "endpoints must lie in T");
  } else if (!in_qplus(mu, p) || !in_qplus(mu, q)) {
    fail(Errc::NotInTightSpan, "endpoints must lie in Q+");
  }
  Polyline out;
  const ExtPoint delta = q - p;
  for (std::size_t i = 0; i <= k; ++i) {
    Rational t(static_cast<long>(i), static_cast<long>(k));
    t.canonicalize();
    ExtPoint x = retract_to_tight_span(mu, p + t * delta);
    if (space == GeodesicSpace::Qplus) x = retract_to_qplus(mu, x);
    out.points.push_back(std::move(x));
  }
  out.total = 0;
  for (std::size_t i = 0; i < k; ++i) {
    out.steps.push_back(dinf(out.points[i], out.points[i + 1]));
    out.total += out.steps.back();
  }
  return out;
}

}  // namespace dtspan
