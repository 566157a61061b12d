#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "dtspan/error.hpp"
#include "dtspan/metric.hpp"
#include "dtspan/rational.hpp"

namespace dtspan {

/// Complete bipartite graph between equally sized row and column subsets of
/// the ground set, weighted by the distance.
struct MatchingInstance {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
  RationalMatrix weights;  // weights[i][j] = mu(rows[i], cols[j])

  std::size_t size() const { return rows.size(); }

  static MatchingInstance from(const DirectedDistance& mu, std::vector<std::size_t> rows, std::vector<std::size_t> cols) {
    if (rows.size() != cols.size() || rows.empty()) fail(Errc::LengthMismatch, "matching sides must have equal positive size");
    MatchingInstance inst{std::move(rows), std::move(cols), {}};
    inst.weights.assign(inst.size(), RationalVector(inst.size()));
    for (std::size_t i = 0; i < inst.size(); ++i) {
      for (std::size_t j = 0; j < inst.size(); ++j) inst.weights[i][j] = mu(inst.rows[i], inst.cols[j]);
    }
    return inst;
  }

  static MatchingInstance from_weights(RationalMatrix weights) {
    const std::size_t k = weights.size();
    if (k == 0) fail(Errc::LengthMismatch, "empty matching instance");
    for (const auto& row : weights) {
      if (row.size() != k) fail(Errc::NonSquare, "matching weights must be square");
      for (const auto& w : row) {
        if (w < 0) fail(Errc::NegativeEntry, "matching weights must be nonnegative");
      }
    }
    MatchingInstance inst;
    for (std::size_t i = 0; i < k; ++i) {
      inst.rows.push_back(i);
      inst.cols.push_back(i);
    }
    inst.weights = std::move(weights);
    return inst;
  }
};

/// MT: all matchings, the empty one included. PMT: perfect matchings only.
enum class MatchingMode { MT, PMT };

struct MatchingResult {
  Rational value;
  std::vector<std::size_t> assignment;  // PMT optimum: row i -> column assignment[i]
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // witness for the requested mode
  RationalVector row_potential;  // row_potential[i] + col_potential[j] >= w(i,j)
  RationalVector col_potential;
};

namespace detail {

/// Hungarian method on costs -w; potentials stay exact.
inline MatchingResult hungarian_max(const RationalMatrix& w) {
  const std::size_t k = w.size();
  RationalVector u(k + 1, Rational(0)), v(k + 1, Rational(0));
  std::vector<std::size_t> p(k + 1, 0), way(k + 1, 0);
  auto cost = [&](std::size_t i, std::size_t j) { return Rational(-w[i - 1][j - 1]); };
  for (std::size_t i = 1; i <= k; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<std::optional<Rational>> minv(k + 1);
    std::vector<bool> used(k + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      std::optional<Rational> delta;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= k; ++j) {
        if (used[j]) continue;
        Rational cur = cost(i0, j) - u[i0] - v[j];
        if (!minv[j] || cur < *minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (!delta || *minv[j] < *delta) {
          delta = *minv[j];
          j1 = j;
        }
      }
      ensure(delta.has_value(), "hungarian: no augmenting column");
      for (std::size_t j = 0; j <= k; ++j) {
        if (used[j]) {
          u[p[j]] += *delta;
          v[j] -= *delta;
        } else {
          *minv[j] -= *delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  MatchingResult out;
  out.assignment.assign(k, 0);
  for (std::size_t j = 1; j <= k; ++j) out.assignment[p[j] - 1] = j - 1;
  out.value = 0;
  for (std::size_t i = 0; i < k; ++i) out.value += w[i][out.assignment[i]];
  out.row_potential.resize(k);
  out.col_potential.resize(k);
  for (std::size_t i = 0; i < k; ++i) out.row_potential[i] = -u[i + 1];
  for (std::size_t j = 0; j < k; ++j) out.col_potential[j] = -v[j + 1];
  return out;
}

/// True iff the tight subgraph of the dual admits an alternating cycle with
/// respect to the assignment, i.e. a second optimal perfect matching.
inline bool has_alternating_cycle(const RationalMatrix& w, const MatchingResult& r) {
  const std::size_t k = w.size();
  std::vector<std::size_t> row_of_col(k);
  for (std::size_t i = 0; i < k; ++i) row_of_col[r.assignment[i]] = i;
  // arc i -> i' when (i, assignment[i']) is a tight non-matching edge
  std::vector<std::vector<std::size_t>> adj(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (j == r.assignment[i]) continue;
      if (r.row_potential[i] + r.col_potential[j] == w[i][j]) adj[i].push_back(row_of_col[j]);
    }
  }
  std::vector<int> state(k, 0);
  auto dfs = [&](auto&& self, std::size_t x) -> bool {
    state[x] = 1;
    for (auto y : adj[x]) {
      if (state[y] == 1) return true;
      if (state[y] == 0 && self(self, y)) return true;
    }
    state[x] = 2;
    return false;
  };
  for (std::size_t i = 0; i < k; ++i) {
    if (state[i] == 0 && dfs(dfs, i)) return true;
  }
  return false;
}

}  // namespace detail

inline MatchingResult max_matching(const MatchingInstance& inst, MatchingMode mode) {
  auto result = detail::hungarian_max(inst.weights);
  // dual certificate: potentials dominate every edge and are tight on the matching
  const std::size_t k = inst.size();
  Rational dual_value(0);
  for (std::size_t i = 0; i < k; ++i) {
    dual_value += result.row_potential[i] + result.col_potential[i];
    for (std::size_t j = 0; j < k; ++j) {
      ensure(result.row_potential[i] + result.col_potential[j] >= inst.weights[i][j], "hungarian: dual infeasible");
    }
  }
  ensure(dual_value == result.value, "hungarian: duality gap");
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = result.assignment[i];
    if (mode == MatchingMode::PMT || inst.weights[i][j] != 0) result.edges.emplace_back(i, j);
  }
  return result;
}

/// PMT: exactly one perfect matching is optimal. MT: the optimum is attained
/// by one matching only and that matching is perfect; with nonnegative
/// weights this means PMT-unique with every matched weight positive.
inline bool is_unique_optimum(const MatchingInstance& inst, MatchingMode mode) {
  const auto result = max_matching(inst, MatchingMode::PMT);
  if (detail::has_alternating_cycle(inst.weights, result)) return false;
  if (mode == MatchingMode::MT) {
    for (std::size_t i = 0; i < inst.size(); ++i) {
      if (inst.weights[i][result.assignment[i]] == 0) return false;
    }
  }
  return true;
}

struct RankCertificate {
  std::size_t value = 0;
  std::optional<MatchingInstance> instance;  // a witnessing subset pair of that size
  std::vector<std::pair<std::size_t, std::size_t>> matching;  // ground-set indices (row, col)
};

namespace detail {

inline std::vector<std::vector<std::size_t>> subsets_of_size(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = start; i + (k - cur.size()) <= n; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

inline RankCertificate largest_unique(const DirectedDistance& mu, MatchingMode mode) {
  const std::size_t n = mu.size();
  for (std::size_t k = n; k >= 1; --k) {
    const auto subsets = subsets_of_size(n, k);
    for (const auto& rows : subsets) {
      for (const auto& cols : subsets) {
        auto inst = MatchingInstance::from(mu, rows, cols);
        if (!is_unique_optimum(inst, mode)) continue;
        RankCertificate cert;
        cert.value = k;
        const auto m = max_matching(inst, MatchingMode::PMT);
        for (std::size_t i = 0; i < k; ++i) cert.matching.emplace_back(rows[i], cols[m.assignment[i]]);
        cert.instance = std::move(inst);
        return cert;
      }
    }
  }
  return {};
}

}  // namespace detail

/// dim T: the largest k with a k x k subset pair whose MT optimum is uniquely
/// attained by a perfect matching (0 when none exists).
inline RankCertificate dim_tight_span(const DirectedDistance& mu) { return detail::largest_unique(mu, MatchingMode::MT); }

/// Tropical rank of -mu: the largest k with a uniquely attained PMT optimum.
/// Equals dim of the tropical polytope plus one.
inline RankCertificate tropical_rank(const DirectedDistance& mu) { return detail::largest_unique(mu, MatchingMode::PMT); }

}  // namespace dtspan
