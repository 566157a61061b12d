#include <gtest/gtest.h>

#include "properties.hpp"
#include "support.hpp"

using namespace dtspan;
using namespace dtspan::fixtures;

namespace {

DirectedDistance draw(Rng& rng) { return random_distance(2 + rng.below(3), rng); }

}  // namespace

TEST(MutualLemma, PairsInTightSpan) {
  Rng rng(101);
  for (int i = 0; i < 1000; ++i) {
    const auto mu = draw(rng);
    EXPECT_TRUE(props::mutual_distances(random_point_in_t(mu, rng), random_point_in_t(mu, rng)));
  }
}

TEST(MutualLemma, PairsInQ) {
  Rng rng(102);
  for (int i = 0; i < 500; ++i) {
    const auto mu = draw(rng);
    const auto p = props::random_point_in_q(mu, rng);
    const auto q = rng.coin() ? props::random_point_in_q(mu, rng) : fiber_shift(p, rng.rational(3, 2) - 1);
    ASSERT_TRUE(in_q(mu, p));
    ASSERT_TRUE(in_q(mu, q));
    EXPECT_TRUE(props::mutual_distances(p, q));
    EXPECT_TRUE(props::mutual_order(p, q));
    EXPECT_TRUE(props::mutual_order(q, p));
  }
}

TEST(NonexpansiveLemma, RandomPairsInP) {
  Rng rng(103);
  for (int i = 0; i < 500; ++i) {
    const auto mu = draw(rng);
    EXPECT_TRUE(props::nonexpansive(mu, random_point_in_p(mu, rng), random_point_in_p(mu, rng)));
  }
}

TEST(CyclicNonexpansiveLemma, RandomCyclesInTightSpan) {
  Rng rng(104);
  for (int i = 0; i < 300; ++i) {
    const auto mu = draw(rng);
    std::vector<ExtPoint> cycle;
    const std::size_t len = 1 + rng.below(6);
    for (std::size_t k = 0; k < len; ++k) cycle.push_back(random_point_in_t(mu, rng));
    EXPECT_TRUE(props::cyclic_nonexpansive(mu, cycle));
  }
}

TEST(BalancedLemma, SectionRetractionShortensCycles) {
  Rng rng(105);
  for (int i = 0; i < 300; ++i) {
    const auto mu = draw(rng);
    std::vector<ExtPoint> cycle;
    const std::size_t len = 1 + rng.below(6);
    for (std::size_t k = 0; k < len; ++k) cycle.push_back(props::random_point_in_q(mu, rng));
    EXPECT_TRUE(props::section_shortens(mu, cycle));
  }
}

TEST(BalancedLemma, BalancedIffEveryCyclePreserved) {
  Rng rng(106);
  int balanced = 0, unbalanced = 0;
  for (int i = 0; i < 300; ++i) {
    const auto mu = draw(rng);
    std::vector<ExtPoint> u;
    const std::size_t m = 1 + rng.below(4);
    for (std::size_t k = 0; k < m; ++k) {
      // small shifts of section points keep both outcomes common
      const auto base = retract_to_section(mu, random_point_in_qplus(mu, rng));
      u.push_back(rng.below(3) == 0 ? fiber_shift(base, rng.rational(2, 2) - 1) : base);
    }
    (is_balanced(u).holds ? balanced : unbalanced)++;
    EXPECT_TRUE(props::balanced_iff_cycles_preserved(mu, u));
  }
  EXPECT_GT(balanced, 0);
  EXPECT_GT(unbalanced, 0);
}

TEST(Embedding, CoordinatesAreDistancesToTerminals) {
  Rng rng(107);
  for (int i = 0; i < 300; ++i) {
    const auto mu = draw(rng);
    EXPECT_TRUE(props::embedding_coordinates(mu, random_point_in_t(mu, rng)));
  }
}

TEST(Embedding, DistanceBetweenExitAndEntrance) {
  Rng rng(108);
  EXPECT_TRUE(props::embedding_distances(dist({{0, 1, 3}, {0, 0, 1}, {0, 0, 0}})));
  for (int i = 0; i < 300; ++i) EXPECT_TRUE(props::embedding_distances(draw(rng)));
}

TEST(Embedding, MetricsEmbedIsometrically) {
  Rng rng(109);
  for (int i = 0; i < 200; ++i) EXPECT_TRUE(props::embedding_isometric(random_metric(2 + rng.below(4), rng)));
}

TEST(NormIdentity, RandomPairs) {
  Rng rng(110);
  for (int i = 0; i < 500; ++i) {
    const auto mu = draw(rng);
    const auto p = rng.coin() ? random_point_in_p(mu, rng) : props::random_point_in_q(mu, rng);
    const auto q = rng.coin() ? random_point_in_p(mu, rng) : props::random_point_in_q(mu, rng);
    EXPECT_TRUE(props::norm_identity(p, q));
  }
}

TEST(Geodesic, TightSpanPairs) {
  Rng rng(111);
  for (int i = 0; i < 100; ++i) {
    const auto mu = draw(rng);
    EXPECT_TRUE(props::geodesic_exact(mu, random_point_in_t(mu, rng), random_point_in_t(mu, rng)));
  }
}

TEST(Geodesic, QplusPairs) {
  Rng rng(112);
  for (int i = 0; i < 60; ++i) {
    const auto mu = draw(rng);
    EXPECT_TRUE(props::geodesic_exact(mu, random_point_in_qplus(mu, rng), random_point_in_qplus(mu, rng),
                                      GeodesicSpace::Qplus));
  }
}
