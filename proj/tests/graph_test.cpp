#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "latentbandit/graph.hpp"
#include "latentbandit/graph_json.hpp"
#include "latentbandit/random.hpp"

namespace lb = latentbandit;

namespace {

void expect_self_loops(const lb::FeedbackGraph& g) {
  for (std::size_t i = 0; i < g.k(); ++i) EXPECT_TRUE(g.has_arc(i, i)) << "arm " << i;
}

TEST(MakeGraph, TotalOrderHasForwardArcsOnly) {
  const auto g = lb::make_graph(lb::GraphKind::total_order, 5);
  EXPECT_TRUE(g.directed());
  // 1-based arc (1,5) present, (5,1) absent.
  EXPECT_TRUE(g.has_arc(0, 4));
  EXPECT_FALSE(g.has_arc(4, 0));
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(g.has_arc(i, j), i <= j);
}

TEST(MakeGraph, EmptyIsIdentity) {
  const auto g = lb::make_graph(lb::GraphKind::empty, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(g.has_arc(i, j), i == j);
}

TEST(MakeGraph, CompleteHasAllArcs) {
  const auto g = lb::make_graph(lb::GraphKind::complete, 4, true);
  EXPECT_EQ(g.off_diagonal_arcs(), 12u);
}

TEST(MakeGraph, TwoCliques) {
  const std::vector<std::size_t> sizes{3, 2};
  const auto g = lb::make_graph(lb::GraphKind::cliques, 5, false, sizes);
  EXPECT_FALSE(g.directed());
  auto block = [](std::size_t v) { return v < 3 ? 0 : 1; };
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(g.has_arc(i, j), block(i) == block(j));
}

TEST(MakeGraph, PartitionMustSumToK) {
  const std::vector<std::size_t> sizes{3, 3};
  EXPECT_THROW(lb::make_graph(lb::GraphKind::cliques, 5, false, sizes), lb::InvalidConfig);
  const std::vector<std::size_t> with_zero{5, 0};
  EXPECT_THROW(lb::make_graph(lb::GraphKind::cliques, 5, false, with_zero), lb::InvalidConfig);
  EXPECT_THROW(lb::make_graph(lb::GraphKind::empty, 0), lb::InvalidConfig);
}

TEST(SampleErGraph, ZeroProbabilityGivesEmptyGraph) {
  lb::Rng gen(1);
  for (bool directed : {false, true}) {
    const auto g = lb::sample_er_graph(lb::ErdosRenyiSpec{4, 0.0, 0.0, directed}, gen);
    EXPECT_EQ(g, lb::make_graph(lb::GraphKind::empty, 4, directed));
  }
}

TEST(SampleErGraph, UnitProbabilityGivesCompleteGraph) {
  lb::Rng gen(2);
  for (bool directed : {false, true}) {
    const auto g = lb::sample_er_graph(lb::ErdosRenyiSpec{4, 1.0, 1.0, directed}, gen);
    EXPECT_EQ(g, lb::make_graph(lb::GraphKind::complete, 4, directed));
  }
}

TEST(SampleErGraph, RejectsBadRange) {
  lb::Rng gen(3);
  EXPECT_THROW(lb::sample_er_graph(lb::ErdosRenyiSpec{4, 0.3, 0.2, false}, gen), lb::InvalidConfig);
  EXPECT_THROW(lb::sample_er_graph(lb::ErdosRenyiSpec{4, -0.1, 0.2, false}, gen), lb::InvalidConfig);
  EXPECT_THROW(lb::sample_er_graph(lb::ErdosRenyiSpec{4, 0.0, 1.5, false}, gen), lb::InvalidConfig);
}

TEST(SampleErGraph, DirectedMeanArcCountMatchesBinomialMixture) {
  // Arc count X | p ~ Bin(20, p), p ~ U[0, 0.2].
  // E[X] = 20 E[p] = 2; Var[X] = E[20 p (1 - p)] + 400 Var[p].
  const double ep = 0.1, ep2 = 0.04 / 3.0, var_p = 0.04 / 12.0;
  const double var_x = 20.0 * (ep - ep2) + 400.0 * var_p;
  const std::size_t n = 1000000;
  lb::Rng gen(4);
  double total = 0.0;
  for (std::size_t s = 0; s < n; ++s)
    total += static_cast<double>(lb::sample_er_graph(lb::ErdosRenyiSpec{5, 0.0, 0.2, true}, gen)
                                     .off_diagonal_arcs());
  const double mean = total / static_cast<double>(n);
  EXPECT_NEAR(mean, 2.0, 3.0 * std::sqrt(var_x / static_cast<double>(n)));
}

TEST(SampleErGraph, InvariantsHoldOnEveryDraw) {
  lb::Rng gen(5);
  for (int s = 0; s < 2000; ++s) {
    const bool directed = s % 2 == 0;
    const auto g = lb::sample_er_graph(lb::ErdosRenyiSpec{1 + static_cast<std::size_t>(s % 9),
                                                          0.0, 1.0, directed},
                                       gen);
    expect_self_loops(g);
    if (!directed) { EXPECT_TRUE(g.is_symmetric()); }
  }
}

TEST(GraphSequence, EmitsExactlyHorizonGraphs) {
  lb::GraphSequence seq(lb::ErdosRenyiSpec{5, 0.0, 0.2, false}, 3);
  lb::Rng gen(6);
  for (int t = 0; t < 3; ++t) expect_self_loops(seq.next(gen));
  EXPECT_EQ(seq.emitted(), 3u);
  EXPECT_THROW(seq.next(gen), std::out_of_range);
}

TEST(GraphSequence, DeterministicGivenSeed) {
  lb::GraphSequence a(lb::ErdosRenyiSpec{6, 0.0, 0.5, true}, 50);
  lb::GraphSequence b(lb::ErdosRenyiSpec{6, 0.0, 0.5, true}, 50);
  lb::Rng ga(77), gb(77);
  for (int t = 0; t < 50; ++t) EXPECT_EQ(a.next(ga), b.next(gb));
}

TEST(GraphSequence, FixedGraphRepeats) {
  const auto order = lb::make_graph(lb::GraphKind::total_order, 4);
  lb::GraphSequence seq(order, 10);
  lb::Rng gen(8);
  for (int t = 0; t < 10; ++t) EXPECT_EQ(seq.next(gen), order);
}

TEST(QQuantity, UniformOnEmptyGraphEqualsK) {
  const std::vector<double> pi(5, 0.2);
  EXPECT_NEAR(lb::q_quantity(lb::make_graph(lb::GraphKind::empty, 5), pi), 5.0, 1e-12);
}

TEST(QQuantity, CompleteGraphEqualsOne) {
  lb::Rng gen(9);
  const auto g = lb::make_graph(lb::GraphKind::complete, 6);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> pi(6);
    double sum = 0.0;
    for (double& p : pi) sum += (p = lb::uniform01(gen));
    for (double& p : pi) p /= sum;
    EXPECT_NEAR(lb::q_quantity(g, pi), 1.0, 1e-12);
  }
}

TEST(QQuantity, SingleArcExample) {
  lb::FeedbackGraph g(2, true);
  g.add_arc(0, 1);
  const std::vector<double> pi{0.5, 0.5};
  // 0.5 / 0.5 + 0.5 / (0.5 + 0.5)
  EXPECT_NEAR(lb::q_quantity(g, pi), 1.5, 1e-15);
}

TEST(QQuantity, ZeroMassTermsContributeNothing) {
  const auto g = lb::make_graph(lb::GraphKind::empty, 3);
  const std::vector<double> pi{1.0, 0.0, 0.0};
  EXPECT_DOUBLE_EQ(lb::q_quantity(g, pi), 1.0);
}

TEST(QQuantity, RejectsNonSimplexInput) {
  const auto g = lb::make_graph(lb::GraphKind::empty, 2);
  EXPECT_THROW(lb::q_quantity(g, std::vector<double>{0.6, 0.6}), lb::InvalidDistribution);
  EXPECT_THROW(lb::q_quantity(g, std::vector<double>{1.2, -0.2}), lb::InvalidDistribution);
  EXPECT_THROW(lb::q_quantity(g, std::vector<double>{1.0}), lb::InvalidDistribution);
  EXPECT_NO_THROW(lb::q_quantity(g, std::vector<double>{0.5, 0.5 + 5e-10}));
}

TEST(GraphJson, LiteralUsesOneBasedArcsWithoutSelfLoops) {
  const auto g = lb::make_graph(lb::GraphKind::total_order, 3);
  const auto j = lb::graph_to_json(g);
  EXPECT_EQ(j.dump(), R"({"arcs":[[1,2],[1,3],[2,3]],"directed":true,"k":3})");
}

TEST(GraphJson, RoundTripsRandomGraphs) {
  lb::Rng gen(10);
  for (int s = 0; s < 200; ++s) {
    const auto g = lb::sample_er_graph(
        lb::ErdosRenyiSpec{1 + static_cast<std::size_t>(s % 8), 0.0, 1.0, s % 3 == 0}, gen);
    EXPECT_EQ(lb::graph_from_json(nlohmann::json::parse(lb::graph_to_json(g).dump())), g);
  }
}

TEST(GraphJson, RejectsMalformedLiterals) {
  using nlohmann::json;
  EXPECT_THROW(lb::graph_from_json(json::parse(R"({"k":0})")), lb::InvalidConfig);
  EXPECT_THROW(lb::graph_from_json(json::parse(R"({"k":3,"arcs":[[1,4]]})")), lb::InvalidConfig);
  EXPECT_THROW(lb::graph_from_json(json::parse(R"({"k":3,"arcs":[[1]]})")), lb::InvalidConfig);
  EXPECT_THROW(lb::graph_from_json(json::parse(R"({"arcs":[]})")), lb::InvalidConfig);
  // Undirected literal: a single listed pair becomes a symmetric edge.
  const auto g = lb::graph_from_json(json::parse(R"({"k":2,"directed":false,"arcs":[[2,1]]})"));
  EXPECT_TRUE(g.has_arc(0, 1));
  EXPECT_TRUE(g.has_arc(1, 0));
}

}  // namespace
