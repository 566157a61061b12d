#pragma once

#include <algorithm>
#include <bitset>
#include <cstddef>
#include <map>
#include <numeric>
#include <set>
#include <string_view>
#include <utility>
#include <vector>

#include "dtspan/error.hpp"
#include "dtspan/geometry.hpp"
#include "dtspan/metric.hpp"
#include "dtspan/rational.hpp"

namespace dtspan {

/// Constraint indices of P: node u < 2n is the bound p(u) >= 0, and
/// 2n + s*n + t is the coupling p(s^c) + p(t^r) >= mu(s,t).
using TightSet = std::bitset<128>;

inline constexpr std::size_t kHardGroundCap = 10;

struct ComplexOptions {
  std::size_t max_ground = 5;
};

enum class ComplexKind { TightSpan, Qplus, Section };

inline std::string_view complex_kind_name(ComplexKind k) {
  switch (k) {
    case ComplexKind::TightSpan: return "T";
    case ComplexKind::Qplus: return "Qplus";
    case ComplexKind::Section: return "Section";
  }
  return "unknown";
}

struct Face {
  std::vector<std::size_t> vertices;     // indices into PolyComplex::vertices, sorted
  TightSet tight;                        // constraints tight on the whole face
  EqualityGraph graph;                   // K at relative-interior points
  std::vector<Component> components;     // components without a zero coordinate
  std::size_t dim = 0;
  bool bounded = true;
  bool maximal = false;
  ExtPoint barycenter;
};

struct PolyComplex {
  ComplexKind kind = ComplexKind::TightSpan;
  std::vector<ExtPoint> vertices;  // sorted
  std::vector<Face> faces;         // sorted by (dim, vertices)
  std::vector<std::pair<std::size_t, std::size_t>> incidence;  // (facet, face), dims differ by one

  std::size_t dim() const {
    std::size_t d = 0;
    for (const auto& f : faces) d = std::max(d, f.dim);
    return d;
  }

  std::size_t count(std::size_t d) const {
    return static_cast<std::size_t>(std::count_if(faces.begin(), faces.end(), [d](const Face& f) { return f.dim == d; }));
  }

  std::vector<std::size_t> maximal_faces() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < faces.size(); ++i) {
      if (faces[i].maximal) out.push_back(i);
    }
    return out;
  }
};

namespace detail {

inline std::size_t coupling_index(std::size_t n, std::size_t s, std::size_t t) { return 2 * n + s * n + t; }

inline TightSet tight_set(const DirectedDistance& mu, const ExtPoint& p) {
  const std::size_t n = mu.size();
  TightSet bits;
  for (std::size_t u = 0; u < 2 * n; ++u) {
    if (p.at(u) == 0) bits.set(u);
  }
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < n; ++t) {
      if (p.col[s] + p.row[t] == mu(s, t)) bits.set(coupling_index(n, s, t));
    }
  }
  return bits;
}

/// The face {p in P : J tight} is bounded iff every node is pinned by a
/// tight bound or a tight coupling (the recession cone of P is the orthant).
inline bool pins_every_node(std::size_t n, const TightSet& j) {
  std::vector<bool> pinned(2 * n, false);
  for (std::size_t u = 0; u < 2 * n; ++u) pinned[u] = j.test(u);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < n; ++t) {
      if (j.test(coupling_index(n, s, t))) pinned[s] = pinned[n + t] = true;
    }
  }
  return std::all_of(pinned.begin(), pinned.end(), [](bool b) { return b; });
}

inline mpz_class denominator_lcm(const DirectedDistance& mu) {
  mpz_class l = 1;
  for (const auto& row : mu.entries()) {
    for (const auto& x : row) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  }
  return l;
}

/// Vertices of P by double description on the cone
///   { (x, lambda) : x >= 0, lambda >= 0, x(s^c) + x(t^r) >= L mu(s,t) lambda }
/// over the integers, L clearing denominators. Extreme rays with
/// lambda > 0 are the vertices; the others are the orthant directions.
inline std::vector<ExtPoint> polyhedron_vertices(const DirectedDistance& mu) {
  const std::size_t n = mu.size();
  const std::size_t d = 2 * n + 1;
  const mpz_class scale = denominator_lcm(mu);
  std::vector<std::vector<mpz_class>> m(n, std::vector<mpz_class>(n));
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < n; ++t) {
      Rational v = mu(s, t) * scale;
      m[s][t] = v.get_num();
    }
  }

  struct Ray {
    std::vector<mpz_class> x;
    TightSet zeros;  // orthant bounds use indices 0..d-1, couplings d + s*n + t
  };
  std::vector<Ray> rays;
  for (std::size_t j = 0; j < d; ++j) {
    Ray r{std::vector<mpz_class>(d, 0), {}};
    r.x[j] = 1;
    for (std::size_t k = 0; k < d; ++k) {
      if (k != j) r.zeros.set(k);
    }
    rays.push_back(std::move(r));
  }

  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < n; ++t) {
      const std::size_t c = d + s * n + t;
      auto eval = [&](const Ray& r) -> mpz_class { return r.x[s] + r.x[n + t] - m[s][t] * r.x[2 * n]; };
      std::vector<mpz_class> val(rays.size());
      std::vector<std::size_t> pos, neg;
      std::vector<Ray> next;
      for (std::size_t i = 0; i < rays.size(); ++i) {
        val[i] = eval(rays[i]);
        if (val[i] > 0) pos.push_back(i);
        else if (val[i] < 0) neg.push_back(i);
      }
      for (std::size_t i = 0; i < rays.size(); ++i) {
        if (val[i] >= 0) {
          next.push_back(rays[i]);
          if (val[i] == 0) next.back().zeros.set(c);
        }
      }
      for (auto ip : pos) {
        for (auto in : neg) {
          const TightSet common = rays[ip].zeros & rays[in].zeros;
          if (common.count() + 2 < d) continue;
          bool adjacent = true;
          for (std::size_t k = 0; k < rays.size() && adjacent; ++k) {
            if (k == ip || k == in) continue;
            if ((common & rays[k].zeros) == common) adjacent = false;
          }
          if (!adjacent) continue;
          Ray r{std::vector<mpz_class>(d), common};
          r.zeros.set(c);
          mpz_class g = 0;
          for (std::size_t k = 0; k < d; ++k) {
            r.x[k] = val[ip] * rays[in].x[k] - val[in] * rays[ip].x[k];
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), r.x[k].get_mpz_t());
          }
          ensure(g > 0, "double description: zero ray");
          for (auto& v : r.x) v /= g;
          next.push_back(std::move(r));
        }
      }
      rays = std::move(next);
    }
  }

  std::vector<ExtPoint> out;
  for (const auto& r : rays) {
    if (r.x[2 * n] == 0) continue;
    ExtPoint p = ExtPoint::zeros(n);
    const Rational denom = Rational(r.x[2 * n]) * scale;
    for (std::size_t u = 0; u < 2 * n; ++u) {
      Rational v(r.x[u]);
      p.at(u) = v / denom;
    }
    ensure(in_p(mu, p), "double description produced an infeasible vertex");
    out.push_back(std::move(p));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline void require_ground_cap(const DirectedDistance& mu, const ComplexOptions& opt) {
  const std::size_t cap = std::min(opt.max_ground, kHardGroundCap);
  if (mu.size() > cap) {
    fail(Errc::GroundSetTooLarge, "complex enumeration supports at most " + std::to_string(cap) + " elements");
  }
}

inline ExtPoint barycenter(const std::vector<ExtPoint>& pts, const std::vector<std::size_t>& idx) {
  ExtPoint sum = ExtPoint::zeros(pts[idx.front()].size());
  for (auto i : idx) sum = sum + pts[i];
  return Rational(1, static_cast<unsigned long>(idx.size())) * sum;
}

/// Faces and incidences over the given vertex list; faces keyed by tight set.
inline PolyComplex assemble(const DirectedDistance& mu, ComplexKind kind, std::vector<ExtPoint> verts,
                            std::vector<std::pair<TightSet, std::vector<std::size_t>>> raw) {
  PolyComplex c;
  c.kind = kind;
  c.vertices = std::move(verts);
  for (auto& [tight, vs] : raw) {
    Face f;
    f.vertices = std::move(vs);
    f.tight = tight;
    f.barycenter = barycenter(c.vertices, f.vertices);
    f.graph = equality_graph(mu, f.barycenter);
    auto fd = face_dimension(mu, f.barycenter);
    f.dim = fd.dim;
    f.components = std::move(fd.directions);
    c.faces.push_back(std::move(f));
  }
  std::sort(c.faces.begin(), c.faces.end(), [](const Face& a, const Face& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    return a.vertices < b.vertices;
  });
  for (std::size_t i = 0; i < c.faces.size(); ++i) {
    c.faces[i].maximal = true;
    for (std::size_t j = 0; j < c.faces.size(); ++j) {
      if (c.faces[j].dim <= c.faces[i].dim) continue;
      const auto& small = c.faces[i].vertices;
      const auto& big = c.faces[j].vertices;
      if (!std::includes(big.begin(), big.end(), small.begin(), small.end())) continue;
      c.faces[i].maximal = false;
      if (c.faces[j].dim == c.faces[i].dim + 1) c.incidence.emplace_back(i, j);
    }
  }
  return c;
}

/// Restrict to faces satisfying keep, renumbering the vertices.
template <class Pred>
PolyComplex subcomplex(const DirectedDistance& mu, const PolyComplex& full, ComplexKind kind, Pred keep) {
  std::vector<std::size_t> remap(full.vertices.size(), SIZE_MAX);
  std::vector<ExtPoint> verts;
  for (const auto& f : full.faces) {
    if (f.dim == 0 && keep(f)) {
      remap[f.vertices.front()] = verts.size();
      verts.push_back(full.vertices[f.vertices.front()]);
    }
  }
  std::vector<std::pair<TightSet, std::vector<std::size_t>>> raw;
  for (const auto& f : full.faces) {
    if (!keep(f)) continue;
    std::vector<std::size_t> vs;
    for (auto v : f.vertices) {
      ensure(remap[v] != SIZE_MAX, "subcomplex is not closed under faces");
      vs.push_back(remap[v]);
    }
    raw.emplace_back(f.tight, std::move(vs));
  }
  return assemble(mu, kind, std::move(verts), std::move(raw));
}

}  // namespace detail

/// All faces of T: the bounded faces of P, grown from vertices by adding one
/// vertex at a time and closing the common tight set.
inline PolyComplex enumerate_tight_span(const DirectedDistance& mu, const ComplexOptions& opt = {}) {
  detail::require_ground_cap(mu, opt);
  const std::size_t n = mu.size();
  std::vector<ExtPoint> verts;
  for (auto& p : detail::polyhedron_vertices(mu)) {
    if (in_tight_span(mu, p)) verts.push_back(std::move(p));
  }
  std::vector<TightSet> vtight;
  for (const auto& v : verts) vtight.push_back(detail::tight_set(mu, v));

  std::map<std::string, std::pair<TightSet, std::vector<std::size_t>>> faces;
  std::vector<TightSet> work;
  auto add = [&](const TightSet& j) {
    std::vector<std::size_t> vs;
    TightSet closed;
    closed.set();
    for (std::size_t w = 0; w < verts.size(); ++w) {
      if ((vtight[w] & j) == j) {
        vs.push_back(w);
        closed &= vtight[w];
      }
    }
    ensure(!vs.empty(), "empty face");
    auto key = closed.to_string();
    if (faces.count(key)) return;
    faces.emplace(key, std::make_pair(closed, std::move(vs)));
    work.push_back(closed);
  };
  for (std::size_t v = 0; v < verts.size(); ++v) {
    ensure(detail::pins_every_node(n, vtight[v]), "vertex of T with a free coordinate");
    add(vtight[v]);
  }
  while (!work.empty()) {
    const TightSet j = work.back();
    work.pop_back();
    for (std::size_t v = 0; v < verts.size(); ++v) {
      if ((vtight[v] & j) == j) continue;
      const TightSet joined = j & vtight[v];
      if (detail::pins_every_node(n, joined)) add(joined);
    }
  }
  std::vector<std::pair<TightSet, std::vector<std::size_t>>> raw;
  for (auto& [key, val] : faces) raw.push_back(std::move(val));
  return detail::assemble(mu, ComplexKind::TightSpan, std::move(verts), std::move(raw));
}

/// Faces of T whose relative interior has no isolated node of K.
inline PolyComplex enumerate_qplus(const DirectedDistance& mu, const ComplexOptions& opt = {}) {
  auto full = enumerate_tight_span(mu, opt);
  auto out = detail::subcomplex(mu, full, ComplexKind::Qplus, [&](const Face& f) { return in_qplus(mu, f.barycenter); });
  for (const auto& v : out.vertices) ensure(in_qplus(mu, v), "Q+ vertex outside Q+");
  return out;
}

/// Faces of Q+ on which some row coordinate vanishes identically.
inline PolyComplex enumerate_section(const DirectedDistance& mu, const ComplexOptions& opt = {}) {
  auto full = enumerate_tight_span(mu, opt);
  return detail::subcomplex(mu, full, ComplexKind::Section, [&](const Face& f) {
    return in_qplus(mu, f.barycenter) && canonical_section_membership(mu, f.barycenter);
  });
}

/// Faces lying in {p : p(s^c) = p(s^r) = 0}.
inline PolyComplex restrict_to_terminal(const DirectedDistance& mu, const PolyComplex& c, std::size_t s) {
  const std::size_t n = mu.size();
  if (s >= n) fail(Errc::UnknownElement, "terminal index out of range");
  return detail::subcomplex(mu, c, c.kind, [&](const Face& f) { return f.tight.test(s) && f.tight.test(n + s); });
}

struct SkeletonEdge {
  std::size_t tail = 0;
  std::size_t head = 0;
  Rational length;
};

struct SkeletonGraph {
  std::vector<ExtPoint> vertices;
  std::vector<SkeletonEdge> edges;
};

/// 1-skeleton of a complex of dimension <= 1; edge p -> q when D(p,q) > 0.
inline SkeletonGraph skeleton_graph(const PolyComplex& c) {
  if (c.dim() > 1) fail(Errc::DimensionTooHigh, "skeleton_graph needs a complex of dimension at most 1");
  SkeletonGraph g;
  g.vertices = c.vertices;
  for (const auto& f : c.faces) {
    if (f.dim != 1) continue;
    ensure(f.vertices.size() == 2, "1-face with more than two vertices");
    const auto a = f.vertices[0], b = f.vertices[1];
    const Rational ab = dinf(c.vertices[a], c.vertices[b]);
    const Rational ba = dinf(c.vertices[b], c.vertices[a]);
    ensure((ab == 0) != (ba == 0), "1-face without a unique orientation");
    if (ab > 0) g.edges.push_back({a, b, ab});
    else g.edges.push_back({b, a, ba});
  }
  return g;
}

}  // namespace dtspan
