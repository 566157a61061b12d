#pragma once

// Brute-force reference implementations. They share only the value types
// with the library and are meant for tiny instances.

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

#include "dtspan/dtspan.hpp"

namespace dtspan::oracle {

/// Unique solution of a square system, or nullopt when singular.
inline std::optional<RationalVector> solve_square(std::vector<RationalVector> a, RationalVector b) {
  const std::size_t n = a.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a[piv][c] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(a[piv], a[c]);
    std::swap(b[piv], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      Rational f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  RationalVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

inline std::size_t rank(std::vector<RationalVector> m) {
  if (m.empty()) return 0;
  const std::size_t cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t piv = r;
    while (piv < m.size() && m[piv][c] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[r]);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rational f = m[i][c] / m[r][c];
      for (std::size_t k = c; k < cols; ++k) m[i][k] -= f * m[r][k];
    }
    ++r;
  }
  return r;
}

inline RationalVector flat(const ExtPoint& p) {
  RationalVector v = p.col;
  v.insert(v.end(), p.row.begin(), p.row.end());
  return v;
}

inline ExtPoint unflat(const RationalVector& v) {
  const std::size_t n = v.size() / 2;
  return {RationalVector(v.begin(), v.begin() + n), RationalVector(v.begin() + n, v.end())};
}

inline std::size_t affine_rank(const std::vector<ExtPoint>& pts) {
  std::vector<RationalVector> diffs;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    RationalVector d = flat(pts[i]);
    RationalVector b = flat(pts[0]);
    for (std::size_t k = 0; k < d.size(); ++k) d[k] -= b[k];
    diffs.push_back(std::move(d));
  }
  return rank(std::move(diffs));
}

/// a . x >= b
struct Halfspace {
  RationalVector a;
  Rational b;
};

inline std::vector<Halfspace> constraints(const DirectedDistance& mu) {
  const std::size_t n = mu.size();
  std::vector<Halfspace> out;
  for (std::size_t u = 0; u < 2 * n; ++u) {
    RationalVector a(2 * n, Rational(0));
    a[u] = 1;
    out.push_back({a, Rational(0)});
  }
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t) {
      RationalVector a(2 * n, Rational(0));
      a[s] = 1;
      a[n + t] = 1;
      out.push_back({a, mu(s, t)});
    }
  return out;
}

inline Rational dot(const RationalVector& a, const RationalVector& x) {
  Rational r(0);
  for (std::size_t i = 0; i < a.size(); ++i) r += a[i] * x[i];
  return r;
}

inline std::vector<bool> tight(const std::vector<Halfspace>& hs, const RationalVector& x) {
  std::vector<bool> t(hs.size());
  for (std::size_t i = 0; i < hs.size(); ++i) t[i] = dot(hs[i].a, x) == hs[i].b;
  return t;
}

/// Minimal points of P: feasible and every positive coordinate lies on a
/// tight coupling.
inline bool in_t(const DirectedDistance& mu, const ExtPoint& p) {
  const std::size_t n = mu.size();
  for (std::size_t s = 0; s < n; ++s) {
    if (p.col[s] < 0 || p.row[s] < 0) return false;
    for (std::size_t t = 0; t < n; ++t)
      if (p.col[s] + p.row[t] < mu(s, t)) return false;
  }
  for (std::size_t s = 0; s < n; ++s) {
    bool c = p.col[s] == 0, r = p.row[s] == 0;
    for (std::size_t t = 0; t < n; ++t) {
      c = c || p.col[s] + p.row[t] == mu(s, t);
      r = r || p.col[t] + p.row[s] == mu(t, s);
    }
    if (!c || !r) return false;
  }
  return true;
}

/// Vertices of P by trying every choice of 2n constraints as a basis.
inline std::vector<ExtPoint> basis_vertices(const DirectedDistance& mu) {
  const auto hs = constraints(mu);
  const std::size_t d = 2 * mu.size();
  std::set<ExtPoint> found;
  std::vector<std::size_t> pick;
  auto rec = [&](auto& self, std::size_t start) -> void {
    if (pick.size() == d) {
      std::vector<RationalVector> a;
      RationalVector b;
      for (auto i : pick) {
        a.push_back(hs[i].a);
        b.push_back(hs[i].b);
      }
      auto x = solve_square(a, b);
      if (!x) return;
      for (const auto& h : hs)
        if (dot(h.a, *x) < h.b) return;
      found.insert(unflat(*x));
      return;
    }
    for (std::size_t i = start; i + (d - pick.size()) <= hs.size(); ++i) {
      pick.push_back(i);
      self(self, i + 1);
      pick.pop_back();
    }
  };
  rec(rec, 0);
  return {found.begin(), found.end()};
}

struct OracleFace {
  std::vector<ExtPoint> vertices;  // sorted
  std::size_t dim = 0;
  ExtPoint barycenter;
};

/// Bounded faces of P, from the intersection closure of vertex tight sets.
/// A face is bounded exactly when its barycenter is minimal.
inline std::vector<OracleFace> bounded_faces(const DirectedDistance& mu, const std::vector<ExtPoint>& verts) {
  const auto hs = constraints(mu);
  std::vector<std::vector<bool>> vt;
  for (const auto& v : verts) vt.push_back(tight(hs, flat(v)));
  std::set<std::vector<bool>> sets(vt.begin(), vt.end());
  for (bool grew = true; grew;) {
    grew = false;
    std::vector<std::vector<bool>> cur(sets.begin(), sets.end());
    for (std::size_t i = 0; i < cur.size(); ++i)
      for (std::size_t j = i + 1; j < cur.size(); ++j) {
        std::vector<bool> x(hs.size());
        for (std::size_t k = 0; k < hs.size(); ++k) x[k] = cur[i][k] && cur[j][k];
        grew = sets.insert(x).second || grew;
      }
  }
  std::set<std::vector<std::size_t>> seen;
  std::vector<OracleFace> out;
  for (const auto& j : sets) {
    std::vector<std::size_t> members;
    for (std::size_t v = 0; v < verts.size(); ++v) {
      bool ok = true;
      for (std::size_t k = 0; k < hs.size() && ok; ++k) ok = !j[k] || vt[v][k];
      if (ok) members.push_back(v);
    }
    if (members.empty() || !seen.insert(members).second) continue;
    OracleFace f;
    ExtPoint sum = ExtPoint::zeros(mu.size());
    for (auto v : members) {
      f.vertices.push_back(verts[v]);
      sum = sum + verts[v];
    }
    f.barycenter = Rational(1, static_cast<long>(members.size())) * sum;
    if (!in_t(mu, f.barycenter)) continue;
    f.dim = affine_rank(f.vertices);
    out.push_back(std::move(f));
  }
  return out;
}

/// Q+ from the definition: nonnegative, in Pi, and minimal in Pi, i.e. no
/// coordinate can be lowered, so every node lies on a tight coupling.
inline bool in_qplus(const DirectedDistance& mu, const ExtPoint& p) {
  const std::size_t n = mu.size();
  for (std::size_t s = 0; s < n; ++s) {
    if (p.col[s] < 0 || p.row[s] < 0) return false;
    for (std::size_t t = 0; t < n; ++t)
      if (p.col[s] + p.row[t] < mu(s, t)) return false;
  }
  for (std::size_t s = 0; s < n; ++s) {
    bool c = false, r = false;
    for (std::size_t t = 0; t < n; ++t) {
      c = c || p.col[s] + p.row[t] == mu(s, t);
      r = r || p.col[t] + p.row[s] == mu(t, s);
    }
    if (!c || !r) return false;
  }
  return true;
}

/// Every partial matching of a k x k instance; -1 marks an unmatched row.
inline std::vector<std::vector<int>> partial_matchings(std::size_t k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(k, -1);
  std::vector<bool> used(k, false);
  auto rec = [&](auto& self, std::size_t i) -> void {
    if (i == k) {
      out.push_back(cur);
      return;
    }
    cur[i] = -1;
    self(self, i + 1);
    for (std::size_t j = 0; j < k; ++j) {
      if (used[j]) continue;
      used[j] = true;
      cur[i] = static_cast<int>(j);
      self(self, i + 1);
      used[j] = false;
    }
    cur[i] = -1;
  };
  rec(rec, 0);
  return out;
}

inline bool is_perfect(const std::vector<int>& m) {
  return std::none_of(m.begin(), m.end(), [](int j) { return j < 0; });
}

inline Rational matching_value(const RationalMatrix& w, const std::vector<int>& m) {
  Rational v(0);
  for (std::size_t i = 0; i < m.size(); ++i)
    if (m[i] >= 0) v += w[i][static_cast<std::size_t>(m[i])];
  return v;
}

/// Optimal value over the mode's feasible matchings.
inline Rational best_matching(const RationalMatrix& w, bool perfect_only) {
  std::optional<Rational> best;
  for (const auto& m : partial_matchings(w.size())) {
    if (perfect_only && !is_perfect(m)) continue;
    Rational v = matching_value(w, m);
    if (!best || v > *best) best = v;
  }
  return *best;
}

/// The optimum is attained by exactly one matching, and that one is perfect.
inline bool unique_perfect_optimum(const RationalMatrix& w, bool perfect_only) {
  const Rational best = best_matching(w, perfect_only);
  std::size_t count = 0;
  bool perfect = false;
  for (const auto& m : partial_matchings(w.size())) {
    if (perfect_only && !is_perfect(m)) continue;
    if (matching_value(w, m) == best) {
      ++count;
      perfect = is_perfect(m);
    }
  }
  return count == 1 && perfect;
}

inline std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcountll(mask)) != k) continue;
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i)
      if ((mask >> i) & 1) s.push_back(i);
    out.push_back(std::move(s));
  }
  return out;
}

/// Largest k with a k x k submatrix whose optimum is uniquely perfect.
inline std::size_t largest_unique(const DirectedDistance& mu, bool perfect_only) {
  const std::size_t n = mu.size();
  for (std::size_t k = n; k >= 1; --k) {
    for (const auto& a : subsets(n, k))
      for (const auto& b : subsets(n, k)) {
        RationalMatrix w(k, RationalVector(k));
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) w[i][j] = mu(a[i], b[j]);
        if (unique_perfect_optimum(w, perfect_only)) return k;
      }
  }
  return 0;
}

inline std::size_t dim_tight_span(const DirectedDistance& mu) { return largest_unique(mu, false); }
inline std::size_t tropical_rank(const DirectedDistance& mu) { return largest_unique(mu, true); }

/// All-pairs distances on a tree: forward edges cost their length, backward 0.
inline RationalMatrix tree_distances(std::size_t k, const std::vector<TreeEdge>& edges, const RationalVector& len) {
  std::vector<std::vector<std::optional<Rational>>> d(k, std::vector<std::optional<Rational>>(k));
  for (std::size_t v = 0; v < k; ++v) d[v][v] = Rational(0);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    d[edges[e].tail][edges[e].head] = len[e];
    d[edges[e].head][edges[e].tail] = Rational(0);
  }
  for (std::size_t m = 0; m < k; ++m)
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        if (d[i][m] && d[m][j] && (!d[i][j] || *d[i][m] + *d[m][j] < *d[i][j])) d[i][j] = *d[i][m] + *d[m][j];
  RationalMatrix out(k, RationalVector(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) out[i][j] = *d[i][j];
  return out;
}

/// Single-commodity max flow from s to t as a minimum cut over vertex sets.
inline long min_cut(const Network& net, std::size_t s, std::size_t t) {
  const std::size_t n = net.vertex_count();
  std::optional<long> best;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    if (!((mask >> s) & 1) || ((mask >> t) & 1)) continue;
    long cut = 0;
    for (const auto& e : net.edges)
      if (((mask >> e.tail) & 1) && !((mask >> e.head) & 1)) cut += e.cap;
    if (!best || cut < *best) best = cut;
  }
  return *best;
}

/// Optimum of a small bounded LP by enumerating basic solutions. Every
/// variable must carry an upper bound so the feasible set is a polytope.
inline std::optional<Rational> lp_optimum(const lp::LinearProgram& prog) {
  const std::size_t n = prog.num_vars();
  std::vector<Halfspace> hs;  // a.x >= b
  std::vector<bool> equality;
  for (const auto& r : prog.rows) {
    RationalVector a = r.coeffs;
    Rational b = r.rhs;
    if (r.relation == lp::Relation::LessEqual) {
      for (auto& x : a) x = -x;
      b = -b;
    }
    hs.push_back({a, b});
    equality.push_back(r.relation == lp::Relation::Equal);
  }
  for (std::size_t j = 0; j < n; ++j) {
    RationalVector a(n, Rational(0));
    a[j] = 1;
    hs.push_back({a, prog.lower_bound(j)});
    equality.push_back(false);
    if (auto u = prog.upper_bound(j)) {
      a[j] = -1;
      hs.push_back({a, -*u});
      equality.push_back(false);
    }
  }
  std::optional<Rational> best;
  std::vector<std::size_t> pick;
  auto feasible = [&](const RationalVector& x) {
    for (std::size_t i = 0; i < hs.size(); ++i) {
      Rational v = dot(hs[i].a, x);
      if (v < hs[i].b || (equality[i] && v != hs[i].b)) return false;
    }
    return true;
  };
  auto rec = [&](auto& self, std::size_t start) -> void {
    if (pick.size() == n) {
      std::vector<RationalVector> a;
      RationalVector b;
      for (auto i : pick) {
        a.push_back(hs[i].a);
        b.push_back(hs[i].b);
      }
      auto x = solve_square(a, b);
      if (!x || !feasible(*x)) return;
      Rational v = dot(prog.objective, *x);
      if (!best || (prog.sense == lp::Sense::Maximize ? v > *best : v < *best)) best = v;
      return;
    }
    for (std::size_t i = start; i < hs.size(); ++i) {
      pick.push_back(i);
      self(self, i + 1);
      pick.pop_back();
    }
  };
  rec(rec, 0);
  return best;
}

}  // namespace dtspan::oracle
