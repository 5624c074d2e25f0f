#include <gtest/gtest.h>

#include <random>

#include "hceval/flow.hpp"
#include "oracles/oracles.hpp"

using namespace hceval::flow;
using hceval::oracle::brute_force_pairing;

namespace {

CostMatrix random_costs(std::mt19937& rng, std::size_t m, std::size_t n, double d_max = 5.0) {
  CostMatrix k(m, n, d_max);
  std::uniform_int_distribution<int> cost(0, 9);
  for (double& c : k.pair_costs) c = cost(rng);
  return k;
}

void expect_valid(const PairingNetwork& net, const FlowResult& r) {
  std::vector<std::int64_t> balance(net.vertex_count(), 0);
  double total = 0.0;
  for (std::size_t e = 0; e < net.edges.size(); ++e) {
    const auto& edge = net.edges[e];
    EXPECT_GE(r.flow[e], edge.lower);
    EXPECT_LE(r.flow[e], edge.upper);
    balance[edge.from] -= r.flow[e];
    balance[edge.to] += r.flow[e];
    total += edge.cost * static_cast<double>(r.flow[e]);
  }
  for (auto b : balance) EXPECT_EQ(b, 0);
  EXPECT_NEAR(total, r.total_cost, 1e-9);
}

std::size_t count_pairing_edges(const PairingNetwork& net) {
  std::size_t n = 0;
  for (auto e : net.pair_edge) n += e >= 0 ? 1 : 0;
  return n;
}

}  // namespace

TEST(Network, SingleLabelShape) {
  CostMatrix k(1, 1, 5.0);
  k.at(0, 0) = 2.0;
  const auto net = build_pairing_network(k, PairingBounds::one_to_one());
  EXPECT_EQ(net.vertex_count(), 6u);
  EXPECT_EQ(count_pairing_edges(net), 3u);
  EXPECT_EQ(net.pairing_edge(1, 1), -1);
}

TEST(Network, OneToOneShape) {
  const auto net = build_pairing_network(CostMatrix(2, 3, 5.0), PairingBounds::one_to_one());
  // 2x3 real pairs + 2 to DT + 3 from DP; the DP-DT corner is absent.
  EXPECT_EQ(count_pairing_edges(net), 11u);
  for (const auto& e : net.edges) {
    if (e.to == net.sink() && e.from != net.default_truth()) {
      EXPECT_EQ(e.lower, 1);
      EXPECT_EQ(e.upper, 1);
    }
    EXPECT_FALSE(e.from == net.default_predicted() && e.to == net.default_truth());
  }
}

TEST(Network, ManyToManyBounds) {
  const auto b = PairingBounds::many_to_many(2, 3);
  const auto net = build_pairing_network(CostMatrix(2, 3, 5.0), b);
  for (const auto& e : net.edges) {
    if (e.from == net.source() && e.to != net.default_predicted()) {
      EXPECT_EQ(e.lower, 1);
      EXPECT_EQ(e.upper, 3);
    }
    if (e.to == net.sink() && e.from != net.default_truth()) {
      EXPECT_EQ(e.lower, 1);
      EXPECT_EQ(e.upper, 2);
    }
    if (e.from == net.sink()) EXPECT_EQ(e.upper, 2 * 3 + 3 * 2);
  }
}

TEST(Network, RejectsBadBounds) {
  EXPECT_THROW(build_pairing_network(CostMatrix(1, 1, 5.0), {2, 1, 1, 1}), std::invalid_argument);
}

TEST(Solve, CaseOneCosts) {
  CostMatrix k(2, 1, 5.0);
  k.at(0, 0) = 2.0;
  k.at(1, 0) = 2.0;
  const auto gie = solve_min_cost_flow(build_pairing_network(k, PairingBounds::one_to_one()));
  EXPECT_DOUBLE_EQ(gie.total_cost, 7.0);
  const auto mgia = solve_min_cost_flow(build_pairing_network(k, PairingBounds::many_to_many(2, 1)));
  EXPECT_DOUBLE_EQ(mgia.total_cost, 4.0);
  EXPECT_EQ(mgia.pairs.size(), 2u);
}

TEST(Solve, ExactMatch) {
  CostMatrix k(1, 1, 5.0);
  const auto net = build_pairing_network(k, PairingBounds::one_to_one());
  const auto r = solve_min_cost_flow(net);
  EXPECT_DOUBLE_EQ(r.total_cost, 0.0);
  ASSERT_EQ(r.pairs.size(), 1u);
  EXPECT_EQ(r.pairs[0].row, 0u);
  EXPECT_EQ(r.pairs[0].col, 0u);
}

TEST(Solve, InfeasibleHandBuiltNetwork) {
  std::vector<NetworkEdge> edges{{0, 1, 2, 3, 1.0}, {1, 0, 0, 1, 0.0}};
  EXPECT_THROW(solve_min_cost_circulation(2, edges), InfeasibleFlowError);
}

TEST(Solve, RejectsNegativeCosts) {
  std::vector<NetworkEdge> edges{{0, 1, 0, 1, -1.0}};
  EXPECT_THROW(solve_min_cost_circulation(2, edges), std::invalid_argument);
}

TEST(Solve, MatchesBruteForceOnRandomMatrices) {
  std::mt19937 rng(2024);
  for (int round = 0; round < 400; ++round) {
    const std::size_t m = 1 + round % 4;
    const std::size_t n = 1 + (round / 4) % 4;
    const auto k = random_costs(rng, m, n);
    for (const auto& b : {PairingBounds::one_to_one(), PairingBounds::many_to_many(m, n)}) {
      const auto net = build_pairing_network(k, b);
      const auto r = solve_min_cost_flow(net);
      expect_valid(net, r);
      const auto o = brute_force_pairing(k, b);
      ASSERT_FALSE(o.budget_exceeded);
      ASSERT_TRUE(o.feasible);
      EXPECT_DOUBLE_EQ(r.total_cost, o.cost) << "m=" << m << " n=" << n;
    }
  }
}

TEST(Solve, ForbiddenPairsRouteToDefaults) {
  CostMatrix k(2, 2, 5.0);
  k.at(0, 0) = kForbidden;
  k.at(0, 1) = 1.0;
  k.at(1, 0) = 1.0;
  k.at(1, 1) = kForbidden;
  const auto r = solve_min_cost_flow(build_pairing_network(k, PairingBounds::one_to_one()));
  EXPECT_DOUBLE_EQ(r.total_cost, 2.0);
  EXPECT_DOUBLE_EQ(brute_force_pairing(k, PairingBounds::one_to_one()).cost, 2.0);
}

TEST(Solve, RaisingACostNeverLowersTheOptimum) {
  std::mt19937 rng(99);
  for (int round = 0; round < 200; ++round) {
    const std::size_t m = 1 + round % 4, n = 1 + (round / 3) % 4;
    auto k = random_costs(rng, m, n);
    for (const auto& b : {PairingBounds::one_to_one(), PairingBounds::many_to_many(m, n)}) {
      const double before = solve_min_cost_flow(build_pairing_network(k, b)).total_cost;
      auto raised = k;
      std::uniform_int_distribution<std::size_t> cell(0, m * n - 1);
      raised.pair_costs[cell(rng)] += 3.0;
      EXPECT_GE(solve_min_cost_flow(build_pairing_network(raised, b)).total_cost, before - 1e-12);
    }
  }
}

TEST(Solve, ManyToManyNeverExceedsOneToOne) {
  std::mt19937 rng(17);
  for (int round = 0; round < 200; ++round) {
    const std::size_t m = 1 + round % 5, n = 1 + (round / 5) % 5;
    const auto k = random_costs(rng, m, n);
    const double one = solve_min_cost_flow(build_pairing_network(k, PairingBounds::one_to_one())).total_cost;
    const double many = solve_min_cost_flow(build_pairing_network(k, PairingBounds::many_to_many(m, n))).total_cost;
    EXPECT_LE(many, one + 1e-12);
  }
}

TEST(Solve, IntegralGeneralNetworks) {
  std::mt19937 rng(41);
  std::uniform_int_distribution<int> node(0, 5), cap(0, 4), cost(0, 9);
  for (int round = 0; round < 300; ++round) {
    std::vector<NetworkEdge> edges;
    for (int k = 0; k < 12; ++k) {
      const int a = node(rng), b = node(rng);
      if (a == b) continue;
      const int hi = cap(rng);
      edges.push_back({static_cast<std::size_t>(a), static_cast<std::size_t>(b), 0, hi, static_cast<double>(cost(rng))});
    }
    // A forced unit along a cycle so there is something to route.
    edges.push_back({0, 1, 1, 2, 1.0});
    edges.push_back({1, 0, 0, 2, 1.0});
    const auto flow = solve_min_cost_circulation(6, edges);
    std::vector<std::int64_t> balance(6, 0);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      EXPECT_GE(flow[e], edges[e].lower);
      EXPECT_LE(flow[e], edges[e].upper);
      balance[edges[e].from] -= flow[e];
      balance[edges[e].to] += flow[e];
    }
    for (auto b : balance) EXPECT_EQ(b, 0);
  }
}

TEST(Oracle, Budget) {
  EXPECT_TRUE(brute_force_pairing(CostMatrix(5, 1, 5.0), PairingBounds::one_to_one()).budget_exceeded);
  EXPECT_DOUBLE_EQ(brute_force_pairing(CostMatrix(1, 1, 5.0), PairingBounds::one_to_one()).cost, 0.0);
}
