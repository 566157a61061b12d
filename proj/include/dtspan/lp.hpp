#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dtspan/error.hpp"
#include "dtspan/rational.hpp"

namespace dtspan::lp {

enum class Sense { Minimize, Maximize };
enum class Relation { LessEqual, Equal, GreaterEqual };
enum class Status { Optimal, Infeasible, Unbounded };

inline std::string_view status_name(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
  }
  return "unknown";
}

struct Constraint {
  RationalVector coeffs;
  Relation relation = Relation::LessEqual;
  Rational rhs;
};

/// Variables are bounded below (default 0) and optionally above.
struct LinearProgram {
  Sense sense = Sense::Maximize;
  RationalVector objective;
  std::vector<Constraint> rows;
  RationalVector lower;                      // empty: all zero
  std::vector<std::optional<Rational>> upper;  // empty: none

  std::size_t num_vars() const { return objective.size(); }

  Rational lower_bound(std::size_t j) const { return lower.empty() ? Rational(0) : lower[j]; }
  std::optional<Rational> upper_bound(std::size_t j) const {
    return upper.empty() ? std::nullopt : upper[j];
  }
};

/// When optimal: objective == dual_objective, with
///   objective coefficients == A^T dual + bound_dual + reduced_cost
///   dual_objective == rhs . dual + upper . bound_dual + lower . reduced_cost
struct Solution {
  Status status = Status::Infeasible;
  RationalVector primal;
  RationalVector dual;        // one per row
  RationalVector bound_dual;  // one per variable (0 without an upper bound)
  RationalVector reduced_cost;
  Rational objective;
  Rational dual_objective;
  bool certified = false;
  std::size_t pivots = 0;
};

namespace detail {

/// Dense tableau over max c'x s.t. rows (rhs >= 0), x >= 0. Column layout:
/// structural, then one slack/surplus per inequality, then one artificial
/// per row (the artificial or slack of row i starts as its basic column).
class Tableau {
 public:
  Tableau(std::size_t structural, std::vector<RationalVector> a, std::vector<Relation> rel, RationalVector b)
      : m_(a.size()), n_(structural) {
    std::size_t slacks = 0;
    for (auto r : rel) slacks += r != Relation::Equal;
    slack_begin_ = n_;
    art_begin_ = n_ + slacks;
    cols_ = art_begin_ + m_;
    rows_.assign(m_, RationalVector(cols_ + 1, Rational(0)));
    basis_.resize(m_);
    identity_col_.resize(m_);
    std::size_t next_slack = slack_begin_;
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) rows_[i][j] = a[i][j];
      rows_[i][cols_] = b[i];
      rows_[i][art_begin_ + i] = 1;
      if (rel[i] == Relation::LessEqual) {
        rows_[i][next_slack] = 1;
        basis_[i] = next_slack;
        identity_col_[i] = next_slack;
        ++next_slack;
      } else {
        if (rel[i] == Relation::GreaterEqual) rows_[i][next_slack++] = -1;
        basis_[i] = art_begin_ + i;
        identity_col_[i] = art_begin_ + i;
      }
    }
    // Artificials of LessEqual rows are never basic and never enter.
    for (std::size_t i = 0; i < m_; ++i) {
      if (rel[i] == Relation::LessEqual) rows_[i][art_begin_ + i] = 0;
    }
  }

  /// Maximize cost . x with Bland's rule; artificials may not enter when
  /// `allow_artificial` is false.
  Status optimize(const RationalVector& cost, bool allow_artificial) {
    set_objective(cost);
    for (;;) {
      std::size_t enter = cols_;
      const std::size_t limit = allow_artificial ? cols_ : art_begin_;
      for (std::size_t j = 0; j < limit; ++j) {
        if (obj_[j] > 0) {
          enter = j;
          break;
        }
      }
      if (enter == cols_) return Status::Optimal;
      std::size_t leave = m_;
      Rational best_ratio;
      for (std::size_t i = 0; i < m_; ++i) {
        if (rows_[i][enter] > 0) {
          Rational ratio = rows_[i][cols_] / rows_[i][enter];
          if (leave == m_ || ratio < best_ratio || (ratio == best_ratio && basis_[i] < basis_[leave])) {
            leave = i;
            best_ratio = ratio;
          }
        }
      }
      if (leave == m_) return Status::Unbounded;
      pivot(leave, enter);
    }
  }

  /// Pivot zero-valued artificials out of the basis where the row allows it.
  void expel_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < art_begin_) continue;
      for (std::size_t j = 0; j < art_begin_; ++j) {
        if (rows_[i][j] != 0) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  RationalVector values() const {
    RationalVector x(cols_, Rational(0));
    for (std::size_t i = 0; i < m_; ++i) x[basis_[i]] = rows_[i][cols_];
    return x;
  }

  /// Row duals y = c_B B^{-1}, read off the reduced costs of the columns that
  /// formed the starting identity (their objective coefficient is zero).
  RationalVector duals() const {
    RationalVector y(m_);
    for (std::size_t i = 0; i < m_; ++i) y[i] = -obj_[identity_col_[i]];
    return y;
  }

  std::size_t structural() const { return n_; }
  std::size_t art_begin() const { return art_begin_; }
  std::size_t cols() const { return cols_; }
  std::size_t pivots() const { return pivots_; }

 private:
  void set_objective(const RationalVector& cost) {
    obj_.assign(cols_ + 1, Rational(0));
    for (std::size_t j = 0; j < cost.size(); ++j) obj_[j] = cost[j];
    for (std::size_t i = 0; i < m_; ++i) {
      const Rational cb = basis_[i] < cost.size() ? cost[basis_[i]] : Rational(0);
      if (cb == 0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) {
        if (rows_[i][j] != 0) obj_[j] -= cb * rows_[i][j];
      }
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    ++pivots_;
    const Rational inv = 1 / rows_[r][c];
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j <= cols_; ++j) {
      if (rows_[r][j] != 0) {
        rows_[r][j] *= inv;
        nz.push_back(j);
      }
    }
    auto eliminate = [&](RationalVector& row) {
      const Rational f = row[c];
      if (f == 0) return;
      for (auto j : nz) row[j] -= f * rows_[r][j];
    };
    for (std::size_t i = 0; i < m_; ++i) {
      if (i != r) eliminate(rows_[i]);
    }
    eliminate(obj_);
    basis_[r] = c;
  }

  std::size_t m_, n_;
  std::size_t slack_begin_ = 0, art_begin_ = 0, cols_ = 0;
  std::vector<RationalVector> rows_;
  RationalVector obj_;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> identity_col_;
  std::size_t pivots_ = 0;
};

}  // namespace detail

/// Exact certificate check against the problem as stated by the caller.
inline bool verify_certificate(const LinearProgram& lp, const Solution& sol) {
  if (sol.status != Status::Optimal) return false;
  const std::size_t n = lp.num_vars();
  const bool maximize = lp.sense == Sense::Maximize;
  // primal feasibility
  for (std::size_t j = 0; j < n; ++j) {
    if (sol.primal[j] < lp.lower_bound(j)) return false;
    if (auto u = lp.upper_bound(j); u && sol.primal[j] > *u) return false;
  }
  Rational obj(0);
  for (std::size_t j = 0; j < n; ++j) obj += lp.objective[j] * sol.primal[j];
  if (obj != sol.objective) return false;
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    const auto& row = lp.rows[i];
    Rational lhs(0);
    for (std::size_t j = 0; j < n; ++j) lhs += row.coeffs[j] * sol.primal[j];
    if (row.relation == Relation::LessEqual && lhs > row.rhs) return false;
    if (row.relation == Relation::GreaterEqual && lhs < row.rhs) return false;
    if (row.relation == Relation::Equal && lhs != row.rhs) return false;
    // dual sign: a row that pushes the objective must carry the matching sign
    const Rational& y = sol.dual[i];
    const bool upper_side = row.relation == Relation::LessEqual;
    if (row.relation != Relation::Equal) {
      if (maximize == upper_side ? y < 0 : y > 0) return false;
    }
  }
  Rational dual_obj(0);
  for (std::size_t j = 0; j < n; ++j) {
    Rational r = lp.objective[j];
    for (std::size_t i = 0; i < lp.rows.size(); ++i) r -= lp.rows[i].coeffs[j] * sol.dual[i];
    r -= sol.bound_dual[j];
    if (r != sol.reduced_cost[j]) return false;
    if (maximize ? r > 0 : r < 0) return false;
    const auto u = lp.upper_bound(j);
    if (!u && sol.bound_dual[j] != 0) return false;
    if (maximize ? sol.bound_dual[j] < 0 : sol.bound_dual[j] > 0) return false;
    dual_obj += lp.lower_bound(j) * r;
    if (u) dual_obj += *u * sol.bound_dual[j];
  }
  for (std::size_t i = 0; i < lp.rows.size(); ++i) dual_obj += lp.rows[i].rhs * sol.dual[i];
  return dual_obj == sol.dual_objective && dual_obj == sol.objective;
}

inline void validate(const LinearProgram& lp) {
  const std::size_t n = lp.num_vars();
  for (const auto& row : lp.rows) {
    if (row.coeffs.size() != n) fail(Errc::MalformedLP, "constraint row has wrong length");
  }
  if (!lp.lower.empty() && lp.lower.size() != n) fail(Errc::MalformedLP, "lower bound vector has wrong length");
  if (!lp.upper.empty() && lp.upper.size() != n) fail(Errc::MalformedLP, "upper bound vector has wrong length");
  for (std::size_t j = 0; j < n; ++j) {
    if (auto u = lp.upper_bound(j); u && *u < lp.lower_bound(j)) {
      fail(Errc::MalformedLP, "upper bound below lower bound");
    }
  }
}

/// Two-phase primal simplex with Bland's rule on exact rationals.
inline Solution solve(const LinearProgram& lp) {
  validate(lp);
  const std::size_t n = lp.num_vars();
  const bool maximize = lp.sense == Sense::Maximize;

  // shift x = l + x', append upper bounds as rows, make every rhs nonnegative
  std::vector<RationalVector> a;
  std::vector<Relation> rel;
  RationalVector b;
  std::vector<int> flipped;
  std::vector<std::size_t> bound_row(n, SIZE_MAX);
  auto add_row = [&](RationalVector coeffs, Relation r, Rational rhs) {
    int sign = 1;
    if (rhs < 0) {
      sign = -1;
      for (auto& x : coeffs) x = -x;
      rhs = -rhs;
      if (r == Relation::LessEqual) r = Relation::GreaterEqual;
      else if (r == Relation::GreaterEqual) r = Relation::LessEqual;
    }
    a.push_back(std::move(coeffs));
    rel.push_back(r);
    b.push_back(std::move(rhs));
    flipped.push_back(sign);
  };
  for (const auto& row : lp.rows) {
    Rational rhs = row.rhs;
    for (std::size_t j = 0; j < n; ++j) rhs -= row.coeffs[j] * lp.lower_bound(j);
    add_row(row.coeffs, row.relation, rhs);
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (auto u = lp.upper_bound(j)) {
      RationalVector coeffs(n, Rational(0));
      coeffs[j] = 1;
      bound_row[j] = a.size();
      add_row(std::move(coeffs), Relation::LessEqual, *u - lp.lower_bound(j));
    }
  }

  Solution sol;
  detail::Tableau tab(n, a, rel, b);
  {
    RationalVector phase1(tab.cols(), Rational(0));
    for (std::size_t j = tab.art_begin(); j < tab.cols(); ++j) phase1[j] = -1;
    tab.optimize(phase1, true);
    auto x = tab.values();
    for (std::size_t j = tab.art_begin(); j < tab.cols(); ++j) {
      if (x[j] != 0) {
        sol.status = Status::Infeasible;
        sol.pivots = tab.pivots();
        return sol;
      }
    }
    tab.expel_artificials();
  }
  RationalVector cost(n);
  for (std::size_t j = 0; j < n; ++j) cost[j] = maximize ? lp.objective[j] : -lp.objective[j];
  const Status st = tab.optimize(cost, false);
  sol.pivots = tab.pivots();
  if (st == Status::Unbounded) {
    sol.status = Status::Unbounded;
    return sol;
  }
  sol.status = Status::Optimal;
  const auto x = tab.values();
  sol.primal.resize(n);
  sol.objective = 0;
  for (std::size_t j = 0; j < n; ++j) {
    sol.primal[j] = lp.lower_bound(j) + x[j];
    sol.objective += lp.objective[j] * sol.primal[j];
  }
  auto y = tab.duals();
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] *= flipped[i];
    if (!maximize) y[i] = -y[i];
  }
  sol.dual.assign(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(lp.rows.size()));
  sol.bound_dual.assign(n, Rational(0));
  for (std::size_t j = 0; j < n; ++j) {
    if (bound_row[j] != SIZE_MAX) sol.bound_dual[j] = y[bound_row[j]];
  }
  sol.reduced_cost.resize(n);
  sol.dual_objective = 0;
  for (std::size_t j = 0; j < n; ++j) {
    Rational r = lp.objective[j] - sol.bound_dual[j];
    for (std::size_t i = 0; i < lp.rows.size(); ++i) r -= lp.rows[i].coeffs[j] * sol.dual[i];
    sol.reduced_cost[j] = r;
    sol.dual_objective += lp.lower_bound(j) * r;
    if (auto u = lp.upper_bound(j)) sol.dual_objective += *u * sol.bound_dual[j];
  }
  for (std::size_t i = 0; i < lp.rows.size(); ++i) sol.dual_objective += lp.rows[i].rhs * sol.dual[i];
  sol.certified = verify_certificate(lp, sol);
  return sol;
}

/// Fixed human-readable dump, one row per line.
inline void dump(std::ostream& os, const LinearProgram& lp) {
  os << (lp.sense == Sense::Maximize ? "maximize" : "minimize");
  for (std::size_t j = 0; j < lp.num_vars(); ++j) os << ' ' << to_string(lp.objective[j]) << "*x" << j;
  os << "\nsubject to\n";
  for (const auto& row : lp.rows) {
    for (std::size_t j = 0; j < row.coeffs.size(); ++j) {
      if (row.coeffs[j] != 0) os << ' ' << to_string(row.coeffs[j]) << "*x" << j;
    }
    os << (row.relation == Relation::LessEqual ? " <= " : row.relation == Relation::Equal ? " = " : " >= ")
       << to_string(row.rhs) << '\n';
  }
  os << "bounds\n";
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    os << ' ' << to_string(lp.lower_bound(j)) << " <= x" << j;
    if (auto u = lp.upper_bound(j)) os << " <= " << to_string(*u);
    os << '\n';
  }
}

}  // namespace dtspan::lp
