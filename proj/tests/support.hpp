#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "dtspan/dtspan.hpp"

#define EXPECT_ERRC(stmt, errc)                                                   \
  do {                                                                            \
    bool caught_ = false;                                                         \
    try {                                                                         \
      (void)(stmt);                                                               \
    } catch (const ::dtspan::Error& e_) {                                         \
      caught_ = true;                                                             \
      EXPECT_EQ(e_.name(), ::dtspan::errc_name(errc)) << e_.what();               \
    }                                                                             \
    EXPECT_TRUE(caught_) << "expected " << ::dtspan::errc_name(errc);             \
  } while (0)

namespace dtspan::fixtures {

inline RationalMatrix matrix(std::initializer_list<std::initializer_list<long>> rows) {
  RationalMatrix m;
  for (const auto& r : rows) {
    RationalVector v;
    for (long x : r) v.emplace_back(x);
    m.push_back(std::move(v));
  }
  return m;
}

inline DirectedDistance dist(std::initializer_list<std::initializer_list<long>> rows) {
  return DirectedDistance::from_rows(matrix(rows));
}

inline RationalVector vec(std::initializer_list<long> xs) {
  RationalVector v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

inline ExtPoint pt(std::initializer_list<long> col, std::initializer_list<long> row) { return {vec(col), vec(row)}; }

inline ExtPoint pt(std::initializer_list<Rational> col, std::initializer_list<Rational> row) {
  return {RationalVector(col), RationalVector(row)};
}

inline Rational q(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline DirectedDistance all_one(std::size_t n = 3) {
  RationalMatrix m(n, RationalVector(n, Rational(1)));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 0;
  return DirectedDistance::from_rows(std::move(m));
}

/// a -> b -> c with unit lengths: mu(a,c) = 2, reverse entries 0.
inline DirectedDistance directed_path3() { return dist({{0, 1, 2}, {0, 0, 1}, {0, 0, 0}}); }

/// mu(s,t) = D+(x_s, x_t) for points on a line.
inline DirectedDistance line_metric(const std::vector<long>& x) {
  const std::size_t n = x.size();
  RationalMatrix m(n, RationalVector(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = x[j] > x[i] ? x[j] - x[i] : 0;
  return DirectedDistance::from_rows(std::move(m));
}

inline std::string sample(const std::string& name) { return std::string(DTSPAN_SAMPLES) + "/" + name; }

}  // namespace dtspan::fixtures
