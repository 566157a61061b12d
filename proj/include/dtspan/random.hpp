#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "dtspan/geometry.hpp"
#include "dtspan/metric.hpp"
#include "dtspan/rational.hpp"

namespace dtspan {

/// mt19937_64 with modular draws, so sequences agree across platforms and
/// standard libraries (the std distributions are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::size_t below(std::size_t bound) { return static_cast<std::size_t>(engine_() % bound); }

  bool coin() { return below(2) == 0; }

  /// Uniform over {0, 1/den, ..., max_num/den} with den drawn from 1..max_den.
  Rational rational(long max_num, long max_den) {
    const long den = 1 + static_cast<long>(below(static_cast<std::size_t>(max_den)));
    const long num = static_cast<long>(below(static_cast<std::size_t>(max_num + 1)));
    Rational q(num, den);
    q.canonicalize();
    return q;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// Off-diagonal entries drawn independently; about one in five is zero.
inline DirectedDistance random_distance(std::size_t n, Rng& rng, long max_num = 6, long max_den = 3) {
  RationalMatrix m(n, RationalVector(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || rng.below(5) == 0) continue;
      m[i][j] = rng.rational(max_num, max_den);
    }
  }
  return DirectedDistance::from_rows(std::move(m));
}

inline DirectedDistance random_metric(std::size_t n, Rng& rng, long max_num = 6, long max_den = 3) {
  return metric_closure(random_distance(n, rng, max_num, max_den));
}

/// A point of P: random columns, rows lifted just enough plus random slack.
inline ExtPoint random_point_in_p(const DirectedDistance& mu, Rng& rng) {
  const std::size_t n = mu.size();
  const long top = 1 + mu.max_entry().get_num().get_si() / std::max<long>(1, mu.max_entry().get_den().get_si());
  ExtPoint p = ExtPoint::zeros(n);
  for (std::size_t s = 0; s < n; ++s) p.col[s] = rng.coin() ? Rational(0) : rng.rational(top, 3);
  for (std::size_t t = 0; t < n; ++t) {
    Rational need(0);
    for (std::size_t s = 0; s < n; ++s) need = rmax(need, mu(s, t) - p.col[s]);
    p.row[t] = need + (rng.coin() ? Rational(0) : rng.rational(top, 3));
  }
  return p;
}

inline ExtPoint random_point_in_t(const DirectedDistance& mu, Rng& rng) {
  return retract_to_tight_span(mu, random_point_in_p(mu, rng));
}

inline ExtPoint random_point_in_qplus(const DirectedDistance& mu, Rng& rng) {
  return retract_to_qplus(mu, random_point_in_t(mu, rng));
}

}  // namespace dtspan
