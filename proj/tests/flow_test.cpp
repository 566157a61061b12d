#include <gtest/gtest.h>

#include "oracles.hpp"
#include "properties.hpp"
#include "support.hpp"

using namespace dtspan;
using namespace dtspan::fixtures;

namespace {

Network two_node(long cap = 3) { return {{"s", "t"}, {{0, 1, cap}}, {0, 1}}; }

DirectedDistance two_node_mu() { return validate_distance(matrix({{0, 1}, {0, 0}}), {"s", "t"}); }

Network triangle(long cap = 1) { return {{"s", "x", "t"}, {{0, 1, cap}, {1, 2, cap}, {2, 0, cap}}, {0, 2}}; }

/// Extension of a metric mu on S by the given points of T.
MetricExtension extend_by(const DirectedDistance& mu, const std::vector<ExtPoint>& extra) {
  std::vector<ExtPoint> rho;
  std::vector<std::string> labels = mu.ground().labels();
  std::vector<std::size_t> terms;
  for (std::size_t s = 0; s < mu.size(); ++s) {
    rho.push_back(canonical_point(mu, s));
    terms.push_back(s);
  }
  for (std::size_t i = 0; i < extra.size(); ++i) {
    rho.push_back(extra[i]);
    labels.push_back("x" + std::to_string(i));
  }
  return pull_back(rho, labels, terms);
}

}  // namespace

TEST(Network, Validation) {
  EXPECT_ERRC((Network{{"s", "t"}, {}, {0}}).validate(), Errc::MalformedNetwork);
  EXPECT_ERRC((Network{{"s", "t"}, {}, {0, 0}}).validate(), Errc::MalformedNetwork);
  EXPECT_ERRC((Network{{"s", "t"}, {{0, 2, 1}}, {0, 1}}).validate(), Errc::UnknownVertex);
  EXPECT_ERRC((Network{{"s", "t"}, {{0, 1, -1}}, {0, 1}}).validate(), Errc::NegativeEntry);
  EXPECT_ERRC((Network{{"s", "s"}, {}, {0, 1}}).validate(), Errc::DuplicateLabel);
  std::vector<std::string> many;
  for (int i = 0; i < 11; ++i) many.push_back("v" + std::to_string(i));
  EXPECT_ERRC(enumerate_s_paths(Network{many, {}, {0, 1}}), Errc::NetworkTooLarge);
  EXPECT_ERRC(max_multiflow(two_node(), all_one()), Errc::GroundSetMismatch);
}

TEST(SPaths, Examples) {
  const auto single = enumerate_s_paths(two_node());
  ASSERT_EQ(single.size(), 1u);
  EXPECT_EQ(single[0].edges, (std::vector<std::size_t>{0}));
  const auto tri = enumerate_s_paths(triangle());
  ASSERT_EQ(tri.size(), 2u);
  std::set<std::vector<std::size_t>> got;
  for (const auto& p : tri) got.insert(p.edges);
  EXPECT_EQ(got, (std::set<std::vector<std::size_t>>{{0, 1}, {2}}));
  const Network none{{"s", "x", "y", "t"}, {{1, 2, 1}}, {0, 3}};
  EXPECT_TRUE(enumerate_s_paths(none).empty());
}

TEST(MaxMultiflow, Examples) {
  EXPECT_EQ(max_multiflow(two_node(), two_node_mu()).value, 3);
  EXPECT_EQ(max_multiflow(two_node(0), two_node_mu()).value, 0);
  const auto mu = validate_distance(matrix({{0, 1}, {0, 0}}), {"s", "t"});
  const auto tri = max_multiflow(triangle(), mu);
  EXPECT_EQ(tri.value, 1);
  ASSERT_EQ(tri.flow.paths.size(), 1u);
  EXPECT_EQ(tri.flow.paths[0].edges, (std::vector<std::size_t>{0, 1}));
}

TEST(MaxMultiflow, SingleCommodityEqualsMinCut) {
  Rng rng(501);
  for (int i = 0; i < 60; ++i) {
    auto net = props::random_network(rng, false);
    net.terminals.resize(2);
    const Rational w = 1 + rng.rational(3, 2);
    const auto mu = validate_distance({{Rational(0), w}, {Rational(0), Rational(0)}}, net.terminal_labels());
    EXPECT_EQ(max_multiflow(net, mu).value, w * oracle::min_cut(net, net.terminals[0], net.terminals[1]));
  }
}

TEST(MaxMultiflow, FlowRespectsCapacities) {
  Rng rng(502);
  for (int i = 0; i < 40; ++i) {
    const auto net = props::random_network(rng, rng.coin());
    const auto mu = props::random_terminal_metric(net, rng);
    const auto res = max_multiflow(net, mu);
    std::vector<Rational> load(net.edges.size(), Rational(0));
    Rational value(0);
    const auto aligned = align_to_terminals(net, mu);
    for (std::size_t k = 0; k < res.flow.paths.size(); ++k) {
      EXPECT_GT(res.flow.values[k], 0);
      for (auto e : res.flow.paths[k].edges) load[e] += res.flow.values[k];
      value += res.flow.values[k] * aligned(res.flow.paths[k].source, res.flow.paths[k].sink);
    }
    for (std::size_t e = 0; e < net.edges.size(); ++e) EXPECT_LE(load[e], net.edges[e].cap);
    EXPECT_EQ(value, res.value);
  }
}

TEST(DualMetricLp, Examples) {
  const auto d = dual_metric_lp(two_node(), two_node_mu());
  EXPECT_EQ(d.value, 3);
  EXPECT_EQ(d.extension.d(0, 1), 1);
  EXPECT_EQ(dual_metric_lp(two_node(0), two_node_mu()).value, 0);
  EXPECT_EQ(dual_metric_lp(triangle(), two_node_mu()).value, 1);
  const auto bad = validate_distance(matrix({{0, 1, 3}, {0, 0, 1}, {0, 0, 0}}), {"s", "x", "t"});
  const Network all{{"s", "x", "t"}, {}, {0, 1, 2}};
  EXPECT_ERRC(dual_metric_lp(all, bad), Errc::NotAMetric);
}

TEST(MinMax, ValuesAgreeOnRandomNetworks) {
  Rng rng(503);
  for (int i = 0; i < 100; ++i) {
    const auto net = props::random_network(rng, rng.coin());
    const auto mu = props::random_terminal_metric(net, rng);
    const auto primal = max_multiflow(net, mu);
    const auto dual = dual_metric_lp(net, mu);
    EXPECT_EQ(primal.value, dual.value);
    EXPECT_TRUE(primal.solution.certified);
    EXPECT_TRUE(dual.solution.certified);
  }
}

TEST(TightExtension, Examples) {
  const auto mu = directed_path3();
  EXPECT_TRUE(is_tight_extension(mu, {mu, {0, 1, 2}}));
  const auto inflated = extend_by(mu, {pt({5, 5, 5}, {5, 5, 5})});
  EXPECT_FALSE(is_tight_extension(mu, inflated));
  Rng rng(504);
  const auto tight = extend_by(mu, {random_point_in_t(mu, rng), random_point_in_t(mu, rng)});
  EXPECT_TRUE(is_tight_extension(mu, tight));
  EXPECT_ERRC(is_tight_extension(mu, {mu, {0, 1}}), Errc::NotAnExtension);
  EXPECT_ERRC(is_tight_extension(all_one(), {mu, {0, 1, 2}}), Errc::NotAnExtension);
}

TEST(TightExtension, PullBacksOfTightSpanPointsAreTight) {
  Rng rng(505);
  for (int i = 0; i < 100; ++i) {
    const auto mu = random_metric(2 + rng.below(3), rng);
    std::vector<ExtPoint> extra;
    const std::size_t k = 1 + rng.below(3);
    for (std::size_t j = 0; j < k; ++j) extra.push_back(random_point_in_t(mu, rng));
    const auto ext = extend_by(mu, extra);
    EXPECT_TRUE(is_tight_extension(mu, ext));
    // and a tight extension embeds isometrically through x -> d_x
    for (std::size_t x = 0; x < ext.d.size(); ++x)
      for (std::size_t y = 0; y < ext.d.size(); ++y)
        EXPECT_EQ(dinf(extension_point(ext, x), extension_point(ext, y)), ext.d(x, y));
  }
}

TEST(Tighten, Examples) {
  const auto mu = directed_path3();
  EXPECT_EQ(tighten_extension(mu, {mu, {0, 1, 2}}).d, mu);
  Rng rng(506);
  const auto tight = extend_by(mu, {random_point_in_t(mu, rng)});
  EXPECT_EQ(tighten_extension(mu, tight).d, tight.d);
  const auto inflated = extend_by(mu, {pt({5, 5, 5}, {5, 5, 5})});
  const auto t = tighten_extension(mu, inflated);
  EXPECT_TRUE(is_tight_extension(mu, t));
  const Network net{inflated.d.ground().labels(), {{0, 3, 2}, {3, 2, 1}, {2, 0, 1}}, {0, 1, 2}};
  EXPECT_LE(network_objective(net, t.d), network_objective(net, inflated.d));
}

TEST(Tighten, RandomDualOptimaStayOptimal) {
  Rng rng(507);
  for (int i = 0; i < 40; ++i) {
    const auto net = props::random_network(rng, rng.coin());
    const auto mu = align_to_terminals(net, props::random_terminal_metric(net, rng));
    const auto dual = dual_metric_lp(net, mu);
    const auto t = tighten_extension(mu, dual.extension);
    EXPECT_TRUE(is_tight_extension(mu, t));
    EXPECT_LE(network_objective(net, t.d), network_objective(net, dual.extension.d));
    for (std::size_t x = 0; x < t.d.size(); ++x)
      for (std::size_t y = 0; y < t.d.size(); ++y) EXPECT_LE(t.d(x, y), dual.extension.d(x, y));
  }
}

TEST(CyclicallyTight, Examples) {
  const auto mu = directed_path3();
  EXPECT_TRUE(is_cyclically_tight_extension(mu, {mu, {0, 1, 2}}));
}

TEST(CyclicallyTight, TightSpanPointOutsideQplusFails) {
  Rng rng(508);
  bool found = false;
  for (int i = 0; i < 500 && !found; ++i) {
    const auto mu = random_metric(3, rng);
    for (const auto& v : oracle::basis_vertices(mu)) {
      if (oracle::in_qplus(mu, v)) continue;
      const auto ext = extend_by(mu, {v});
      EXPECT_TRUE(is_tight_extension(mu, ext));
      EXPECT_FALSE(is_cyclically_tight_extension(mu, ext));
      found = true;
      break;
    }
  }
  EXPECT_TRUE(found);
}

TEST(CyclicallyTight, UnbalancedPairFails) {
  Rng rng(509);
  bool found = false;
  for (int i = 0; i < 2000 && !found; ++i) {
    const auto mu = random_metric(2 + rng.below(2), rng);
    const auto p = random_point_in_qplus(mu, rng), q = random_point_in_qplus(mu, rng);
    if (!strictly_below(p.col, q.col)) continue;
    const auto ext = extend_by(mu, {p, q});
    EXPECT_TRUE(is_tight_extension(mu, ext));
    EXPECT_FALSE(is_cyclically_tight_extension(mu, ext));
    found = true;
  }
  EXPECT_TRUE(found);
}

TEST(Eulerian, Examples) {
  const auto tri = eulerian_decompose(triangle());
  ASSERT_TRUE(tri);
  ASSERT_EQ(tri->size(), 1u);
  EXPECT_EQ((*tri)[0].edges.size(), 3u);
  EXPECT_EQ((*tri)[0].multiplicity, 1);
  EXPECT_FALSE(eulerian_decompose(two_node()));
  EXPECT_FALSE(is_eulerian(two_node()));
  const auto doubled = eulerian_decompose(triangle(2));
  ASSERT_TRUE(doubled);
  long total = 0;
  for (const auto& c : *doubled) total += c.multiplicity * static_cast<long>(c.edges.size());
  EXPECT_EQ(total, 6);
  EXPECT_ERRC(verify_minmax(two_node(), two_node_mu(), MinMaxMode::Q), Errc::NotEulerian);
}

TEST(Eulerian, CycleIdentityForEveryMetric) {
  Rng rng(510);
  for (int i = 0; i < 60; ++i) {
    const auto net = props::random_network(rng, true);
    const auto cycles = eulerian_decompose(net);
    ASSERT_TRUE(cycles);
    for (const auto& c : *cycles) {
      for (std::size_t k = 0; k < c.edges.size(); ++k)
        EXPECT_EQ(net.edges[c.edges[k]].head, net.edges[c.edges[(k + 1) % c.edges.size()]].tail);
    }
    const auto d = DirectedDistance(random_metric(net.vertex_count(), rng).entries(), GroundSet(net.vertices));
    EXPECT_EQ(cycles_objective(net, *cycles, d), network_objective(net, d));
  }
}

TEST(Eulerian, CongruentMetricsHaveEqualObjectives) {
  Rng rng(511);
  for (int i = 0; i < 60; ++i) {
    const auto net = props::random_network(rng, true);
    const std::size_t m = net.vertex_count();
    auto base = random_metric(m, rng).entries();
    for (std::size_t x = 0; x < m; ++x)
      for (std::size_t y = 0; y < m; ++y)
        if (x != y) base[x][y] += 2;
    const DirectedDistance d(base, GroundSet(net.vertices));
    Potential alpha{RationalVector(m)};
    for (auto& a : alpha.values) a = rng.rational(2, 2) - 1;
    const DirectedDistance d2(shift_by_potential(d, alpha), d.ground());
    EXPECT_EQ(network_objective(net, d), network_objective(net, d2));
  }
}

TEST(VerifyMinMax, Examples) {
  const auto a = verify_minmax(two_node(), two_node_mu(), MinMaxMode::T);
  EXPECT_EQ(a.max_value, 3);
  EXPECT_EQ(a.min_value, 3);
  EXPECT_TRUE(a.ok());
  const auto b = verify_minmax(triangle(), two_node_mu(), MinMaxMode::Q);
  EXPECT_EQ(b.max_value, 1);
  EXPECT_EQ(b.min_value, 1);
  EXPECT_TRUE(b.cycle_identity);
  EXPECT_TRUE(b.ok());
  const auto c = verify_minmax(two_node(0), two_node_mu(), MinMaxMode::T);
  EXPECT_EQ(c.max_value, 0);
  EXPECT_EQ(c.min_value, 0);
  EXPECT_TRUE(c.ok());
}

TEST(VerifyMinMax, RandomNetworksBothModes) {
  Rng rng(512);
  for (int i = 0; i < 60; ++i) {
    const bool eulerian = i % 2 == 0;
    const auto net = props::random_network(rng, eulerian);
    const auto mu = props::random_terminal_metric(net, rng);
    EXPECT_TRUE(verify_minmax(net, mu, MinMaxMode::T).ok());
    if (eulerian) {
      EXPECT_TRUE(verify_minmax(net, mu, MinMaxMode::Q).ok());
    }
  }
}
