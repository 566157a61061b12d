#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "dtspan/error.hpp"
#include "dtspan/rational.hpp"

namespace dtspan {

/// Ordered list of distinct element names. Position in the list is the index
/// used by every matrix and point in the library.
class GroundSet {
 public:
  GroundSet() = default;

  explicit GroundSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
    std::unordered_set<std::string> seen;
    for (const auto& label : labels_) {
      if (!seen.insert(label).second) fail(Errc::DuplicateLabel, "duplicate label '" + label + "'");
    }
  }

  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }

  std::size_t index_of(const std::string& label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (labels_[i] == label) return i;
    }
    fail(Errc::UnknownElement, "unknown element '" + label + "'");
  }

  bool contains(const std::string& label) const {
    for (const auto& l : labels_) {
      if (l == label) return true;
    }
    return false;
  }

  friend bool operator==(const GroundSet&, const GroundSet&) = default;

 private:
  std::vector<std::string> labels_;
};

/// a, b, ..., z, then s26, s27, ...
inline std::vector<std::string> default_labels(std::size_t n) {
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(i < 26 ? std::string(1, static_cast<char>('a' + i)) : "s" + std::to_string(i));
  }
  return out;
}

using RationalMatrix = std::vector<RationalVector>;

/// Square nonnegative rational matrix with zero diagonal. Not necessarily
/// symmetric and not necessarily a metric.
class DirectedDistance {
 public:
  DirectedDistance() = default;

  DirectedDistance(RationalMatrix entries, GroundSet ground)
      : ground_(std::move(ground)), entries_(std::move(entries)) {
    const std::size_t n = entries_.size();
    for (const auto& row : entries_) {
      if (row.size() != n) fail(Errc::NonSquare, "distance matrix is not square");
    }
    if (ground_.size() != n) {
      fail(Errc::NonSquare, "matrix dimension " + std::to_string(n) + " does not match " +
                                std::to_string(ground_.size()) + " labels");
    }
    if (n == 0) fail(Errc::NonSquare, "ground set must be nonempty");
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        entries_[i][j].canonicalize();
        if (entries_[i][j] < 0) {
          fail(Errc::NegativeEntry, "negative entry at (" + ground_.label(i) + "," + ground_.label(j) + ")");
        }
      }
      if (entries_[i][i] != 0) fail(Errc::NonzeroDiagonal, "nonzero diagonal at " + ground_.label(i));
    }
  }

  /// Labels default to a, b, c, ...
  static DirectedDistance from_rows(RationalMatrix entries) {
    const std::size_t n = entries.size();
    return DirectedDistance(std::move(entries), GroundSet(default_labels(n)));
  }

  std::size_t size() const { return entries_.size(); }
  const GroundSet& ground() const { return ground_; }
  const RationalMatrix& entries() const { return entries_; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return entries_[i][j]; }

  Rational max_entry() const {
    Rational best(0);
    for (const auto& row : entries_) {
      for (const auto& x : row) best = rmax(best, x);
    }
    return best;
  }

  friend bool operator==(const DirectedDistance&, const DirectedDistance&) = default;

 private:
  GroundSet ground_;
  RationalMatrix entries_;
};

inline DirectedDistance validate_distance(const RationalMatrix& matrix, const std::vector<std::string>& labels) {
  return DirectedDistance(matrix, GroundSet(labels));
}

inline DirectedDistance zero_distance(std::size_t n) {
  return DirectedDistance::from_rows(RationalMatrix(n, RationalVector(n, Rational(0))));
}

inline DirectedDistance transpose(const DirectedDistance& d) {
  const std::size_t n = d.size();
  RationalMatrix m(n, RationalVector(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i][j] = d(j, i);
  }
  return DirectedDistance(std::move(m), d.ground());
}

/// d + d^t
inline DirectedDistance symmetrize(const DirectedDistance& d) {
  const std::size_t n = d.size();
  RationalMatrix m(n, RationalVector(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i][j] = d(i, j) + d(j, i);
  }
  return DirectedDistance(std::move(m), d.ground());
}

/// Shortest-path closure; the result is the largest metric below d.
inline DirectedDistance metric_closure(const DirectedDistance& d) {
  RationalMatrix m = d.entries();
  const std::size_t n = d.size();
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        Rational via = m[i][k] + m[k][j];
        if (via < m[i][j]) m[i][j] = via;
      }
    }
  }
  return DirectedDistance(std::move(m), d.ground());
}

inline bool is_metric(const DirectedDistance& d) {
  const std::size_t n = d.size();
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      for (std::size_t z = 0; z < n; ++z) {
        if (d(x, y) + d(y, z) < d(x, z)) return false;
      }
    }
  }
  return true;
}

inline void require_metric(const DirectedDistance& d) {
  if (!is_metric(d)) fail(Errc::NotAMetric, "distance violates a triangle inequality");
}

/// Cyclically ordered, possibly repeating, element indices.
struct CyclicSequence {
  std::vector<std::size_t> points;
};

inline Rational cycle_length(const DirectedDistance& d, const CyclicSequence& cycle) {
  ensure(!cycle.points.empty(), "cycle must be nonempty");
  for (auto p : cycle.points) {
    if (p >= d.size()) fail(Errc::IndexOutOfRange, "cycle index " + std::to_string(p) + " out of range");
  }
  Rational total(0);
  const std::size_t m = cycle.points.size();
  for (std::size_t i = 0; i < m; ++i) total += d(cycle.points[i], cycle.points[(i + 1) % m]);
  return total;
}

/// alpha: element -> rational, indexed like the ground set.
struct Potential {
  RationalVector values;
};

/// d(x, y) - alpha(x) + alpha(y) as a raw matrix (may leave the nonnegative cone).
inline RationalMatrix shift_by_potential(const DirectedDistance& d, const Potential& alpha) {
  const std::size_t n = d.size();
  if (alpha.values.size() != n) fail(Errc::LengthMismatch, "potential length mismatch");
  RationalMatrix m(n, RationalVector(n));
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) m[x][y] = d(x, y) - alpha.values[x] + alpha.values[y];
  }
  return m;
}

/// Potential alpha with d(x,y) = d2(x,y) - alpha(x) + alpha(y), normalized so
/// alpha(first element) = 0, or nullopt when d and d2 are not congruent.
inline std::optional<Potential> congruence_witness(const DirectedDistance& d, const DirectedDistance& d2) {
  if (d.ground() != d2.ground()) fail(Errc::GroundSetMismatch, "congruence needs a common ground set");
  const std::size_t n = d.size();
  Potential alpha{RationalVector(n)};
  for (std::size_t x = 0; x < n; ++x) alpha.values[x] = d(0, x) - d2(0, x);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (d(x, y) != d2(x, y) - alpha.values[x] + alpha.values[y]) return std::nullopt;
    }
  }
  return alpha;
}

/// Congruence restricted to cycles on at most three elements.
inline bool congruent_on_triangles(const DirectedDistance& d, const DirectedDistance& d2) {
  if (d.ground() != d2.ground()) fail(Errc::GroundSetMismatch, "congruence needs a common ground set");
  const std::size_t n = d.size();
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      for (std::size_t z = 0; z < n; ++z) {
        CyclicSequence c{{x, y, z}};
        if (cycle_length(d, c) != cycle_length(d2, c)) return false;
      }
    }
  }
  return true;
}

template <std::size_t K>
struct ConditionCheck {
  bool holds = true;
  std::optional<std::array<std::size_t, K>> violation;  // lexicographically smallest
};

/// mu(s,u) + mu(t,v) <= max{mu(s,v)+mu(t,u), mu(s,u), mu(s,v), mu(t,u), mu(t,v)}
/// for all quadruples, repeats allowed. Holds iff the tight span has
/// dimension at most one.
inline ConditionCheck<4> check_path_condition(const DirectedDistance& mu) {
  const std::size_t n = mu.size();
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < n; ++t) {
      for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 0; v < n; ++v) {
          Rational lhs = mu(s, u) + mu(t, v);
          Rational rhs = mu(s, v) + mu(t, u);
          rhs = rmax(rhs, rmax(rmax(mu(s, u), mu(s, v)), rmax(mu(t, u), mu(t, v))));
          if (lhs > rhs) return {false, std::array<std::size_t, 4>{s, t, u, v}};
        }
      }
    }
  }
  return {};
}

/// For every 3x3 submatrix with rows (x,y,z) and columns (u,v,w), repeats
/// allowed, the diagonal sum is not a strict unique maximum over the six
/// permutation sums. Holds iff the tropical rank is at most two.
inline ConditionCheck<6> check_tree_condition(const DirectedDistance& mu) {
  const std::size_t n = mu.size();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z)
        for (std::size_t u = 0; u < n; ++u)
          for (std::size_t v = 0; v < n; ++v)
            for (std::size_t w = 0; w < n; ++w) {
              Rational diag = mu(x, u) + mu(y, v) + mu(z, w);
              Rational best = mu(x, v) + mu(y, u) + mu(z, w);
              best = rmax(best, mu(x, v) + mu(y, w) + mu(z, u));
              best = rmax(best, mu(x, w) + mu(y, u) + mu(z, v));
              best = rmax(best, mu(x, w) + mu(y, v) + mu(z, u));
              best = rmax(best, mu(x, u) + mu(y, w) + mu(z, v));
              if (diag > best) return {false, std::array<std::size_t, 6>{x, y, z, u, v, w}};
            }
  return {};
}

/// Classical four point condition for a symmetric matrix.
inline ConditionCheck<4> check_four_point(const DirectedDistance& d) {
  const std::size_t n = d.size();
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t)
      for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v) {
          if (d(s, t) + d(u, v) > rmax(d(s, u) + d(t, v), d(s, v) + d(t, u))) {
            return {false, std::array<std::size_t, 4>{s, t, u, v}};
          }
        }
  return {};
}

/// mu(x,y) + mu(y,z) + mu(z,x) == mu(z,y) + mu(y,x) + mu(x,z) for every triple.
inline bool check_cyclic_triples(const DirectedDistance& mu) {
  const std::size_t n = mu.size();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z) {
        if (mu(x, y) + mu(y, z) + mu(z, x) != mu(z, y) + mu(y, x) + mu(x, z)) return false;
      }
  return true;
}

/// Directed tree metric test through the symmetrization: mu + mu^t is a tree
/// metric and mu is congruent to (mu + mu^t)/2 on every triangle.
inline bool check_directed_tree_metric(const DirectedDistance& mu) {
  require_metric(mu);
  return check_four_point(symmetrize(mu)).holds && check_cyclic_triples(mu);
}

}  // namespace dtspan
