#include <gtest/gtest.h>

#include <random>

#include "hceval/pair_measures.hpp"
#include "support/fixtures.hpp"
#include "support/random_graphs.hpp"

using namespace hceval;
namespace tst = hceval::testing;
using namespace hceval::testing::ids;
using hceval::testing::load_case;

TEST(TreeInducedError, Examples) {
  const auto f = load_case("case2a");
  EXPECT_DOUBLE_EQ(tree_induced_error(f.h, TP, P1), 2.0);
  EXPECT_DOUBLE_EQ(tree_induced_error(f.h, TP, TP), 0.0);
  const auto w = parse_hierarchy("0 1 0.5\n1 2 0.25\n");
  EXPECT_DOUBLE_EQ(tree_induced_error(w, 0, 2), 0.75);
  EXPECT_THROW(tree_induced_error(parse_hierarchy("0 1\n2 3\n"), 1, 3), UnreachableError);
}

TEST(Gie, WorkedCases) {
  EXPECT_DOUBLE_EQ(gie(load_case("case1a").h, load_case("case1a").labels).raw_error, 7.0);
  const auto d16 = load_case("case4");
  const auto g = gie(d16.h, d16.labels);
  EXPECT_DOUBLE_EQ(g.raw_error, 7.0);
  bool has_t1_p1 = false;
  for (const auto& p : g.pairs) has_t1_p1 = has_t1_p1 || (p.predicted == P1 && p.truth == T1);
  EXPECT_TRUE(has_t1_p1);
}

TEST(Mgia, WorkedCases) {
  const auto c1 = load_case("case1a");
  const auto m1 = mgia(c1.h, c1.labels);
  EXPECT_DOUBLE_EQ(m1.raw_error, 4.0);
  EXPECT_NEAR(m1.score, 0.7333333, 1e-6);
  const auto c2 = load_case("case2a");
  const auto m2 = mgia(c2.h, c2.labels);
  EXPECT_DOUBLE_EQ(m2.raw_error, 2.0);
  EXPECT_DOUBLE_EQ(m2.score, 0.8);
  const auto c7 = load_case("case7a");
  const auto m7 = mgia(c7.h, c7.labels);
  EXPECT_DOUBLE_EQ(m7.raw_error, 7.0);
  EXPECT_NEAR(m7.score, 0.5333333, 1e-6);
}

TEST(Mgia, TwoParentDagFollowsTheFormula) {
  const auto f = load_case("case6");
  const auto m = mgia(f.h, f.labels);
  EXPECT_DOUBLE_EQ(m.raw_error, 10.0);
  EXPECT_NEAR(m.score, 1.0 / 3.0, 1e-12);
}

TEST(PairMeasures, DistanceCapForcesDefaults) {
  const auto f = load_case("case8a");
  PairOptions opt;
  EXPECT_DOUBLE_EQ(gie(f.h, f.labels, opt).raw_error, 11.0);
  opt.max_dist = 5.0;
  EXPECT_DOUBLE_EQ(gie(f.h, f.labels, opt).raw_error, 15.0);
  EXPECT_DOUBLE_EQ(mgia(f.h, f.labels, opt).raw_error, 15.0);
  EXPECT_DOUBLE_EQ(mgia(f.h, f.labels, opt).score, 0.0);
}

TEST(PairMeasures, EmptyPrediction) {
  const auto f = load_case("case1b");
  const InstanceLabels empty{f.labels.truth, {}};
  EXPECT_DOUBLE_EQ(gie(f.h, empty).raw_error, 10.0);
  const auto m = mgia(f.h, empty);
  EXPECT_DOUBLE_EQ(m.raw_error, 10.0);
  EXPECT_DOUBLE_EQ(m.score, 0.0);
}

TEST(PairMeasures, RandomProperties) {
  std::mt19937 rng(123);
  for (int round = 0; round < 300; ++round) {
    const auto h = tst::random_dag(rng, 6 + round % 15, 1 + round % 3);
    const auto labels = tst::random_labels(rng, h, 3);

    const InstanceLabels same{labels.truth, labels.truth};
    EXPECT_DOUBLE_EQ(gie(h, same).raw_error, 0.0);
    EXPECT_DOUBLE_EQ(mgia(h, same).score, 1.0);

    const auto g = gie(h, labels);
    const auto m = mgia(h, labels);
    EXPECT_GE(g.raw_error, 0.0);
    EXPECT_LE(m.raw_error, g.raw_error + 1e-12);
    EXPECT_GE(m.score, 0.0);
    EXPECT_LE(m.score, 1.0);

    if (labels.truth.size() == 1 && labels.predicted.size() == 1) {
      const double tie = tree_induced_error(h, labels.truth[0], labels.predicted[0]);
      EXPECT_DOUBLE_EQ(g.raw_error, std::min(tie, 10.0));
    }
  }
}

TEST(PairMeasures, ScoreZeroWhenEverythingDefaults) {
  const auto h = parse_hierarchy("0 1\n0 2\n");
  PairOptions opt;
  opt.max_dist = 1.0;
  const auto m = mgia(h, {{1}, {2}}, opt);
  EXPECT_DOUBLE_EQ(m.score, 0.0);
}

TEST(PairMeasures, MovingAPredictionDeeperNeverHelps) {
  std::mt19937 rng(8);
  for (int round = 0; round < 150; ++round) {
    auto h = tst::random_dag(rng, 8 + round % 10, 1);
    const auto labels = tst::random_labels(rng, h, 2);
    const ClassId moved = labels.predicted[0];
    if (set_contains(labels.truth, moved)) continue;
    // Re-attach the prediction one level lower through a fresh node.
    auto edges = h.edges();
    const ClassId fresh = h.ids().back() + 1;
    edges.push_back({moved, fresh, 1.0});
    const auto deeper = Hierarchy::from_edges(edges);
    InstanceLabels shifted = labels;
    shifted.predicted.erase(shifted.predicted.begin());
    shifted.predicted = set_union(shifted.predicted, {fresh});
    EXPECT_GE(gie(deeper, shifted).raw_error, gie(h, labels).raw_error - 1e-12);
    EXPECT_GE(mgia(deeper, shifted).raw_error, mgia(h, labels).raw_error - 1e-12);
  }
}
