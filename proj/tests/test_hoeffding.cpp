#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "driftkit/generators.hpp"
#include "driftkit/hoeffding.hpp"

namespace {

using namespace driftkit;

// 1-D stream that a single threshold separates: class 1 iff x > 5.
struct Separable {
  std::vector<std::vector<double>> X;
  std::vector<ClassId> y;
};

Separable separable_1d(std::size_t n, std::uint64_t seed) {
  Separable s;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = u(rng);
    s.X.push_back({x});
    s.y.push_back(x > 5.0 ? 1 : 0);
  }
  return s;
}

double self_accuracy(const HoeffdingTree& tree, const Separable& s) {
  std::size_t ok = 0;
  for (std::size_t i = 0; i < s.X.size(); ++i)
    if (tree.predict(s.X[i]) == s.y[i]) ++ok;
  return static_cast<double>(ok) / static_cast<double>(s.X.size());
}

TEST(HoeffdingBound, MatchesFormula) {
  // sqrt(R^2 ln(1/delta) / (2n)) evaluated independently.
  const double want = std::sqrt(std::log(1e7) / 2000.0);
  EXPECT_NEAR(hoeffding_bound(1.0, 1e-7, 1000.0), want, 1e-12);
  EXPECT_NEAR(hoeffding_bound(1.0, 1e-7, 1000.0), 0.08977, 5e-6);
  EXPECT_LT(hoeffding_bound(1.0, 1e-7, 1e8), 1e-3);
  EXPECT_EQ(hoeffding_bound(1.0, 1.0, 1000.0), 0.0);
  EXPECT_THROW(hoeffding_bound(0.0, 0.5, 10.0), std::invalid_argument);
  EXPECT_THROW(hoeffding_bound(1.0, 0.5, 0.0), std::invalid_argument);
}

TEST(HoeffdingTree, SingleClassSeenIsAlwaysPredicted) {
  HoeffdingTree tree(2, 2);
  tree.train_one({1.0, 2.0}, 0);
  bool low = false;
  EXPECT_EQ(tree.predict({1.0, 2.0}, &low), 0);
  EXPECT_EQ(tree.predict({9.0, -3.0}), 0);
  EXPECT_FALSE(low);
}

TEST(HoeffdingTree, UntrainedPredictsDefaultWithLowConfidence) {
  HoeffdingTree tree(2, 2);
  bool low = false;
  EXPECT_EQ(tree.predict({0.0, 0.0}, &low), 0);
  EXPECT_TRUE(low);
  EXPECT_FALSE(tree.trained());
}

TEST(HoeffdingTree, LearnsSeparableThreshold) {
  const Separable s = separable_1d(2000, 11);
  HoeffdingTree tree(1, 2);
  for (std::size_t i = 0; i < s.X.size(); ++i) tree.train_one(s.X[i], s.y[i]);
  EXPECT_GT(tree.node_count(), 1u);  // at least one split happened
  EXPECT_GE(self_accuracy(tree, s), 0.99);
  EXPECT_EQ(tree.predict({9.0}), 1);
  EXPECT_EQ(tree.predict({1.0}), 0);
}

TEST(HoeffdingTree, IdenticalFeaturesNeverSplit) {
  HoeffdingTree tree(1, 2);
  for (int i = 0; i < 3000; ++i) tree.train_one({4.2}, i % 2);
  EXPECT_EQ(tree.node_count(), 1u);
  EXPECT_EQ(tree.leaf_count(), 1u);
}

TEST(HoeffdingTree, MajorityAndTieBreak) {
  // Identical features keep everything in the root leaf, making the counts
  // exact: 7 vs 3 then topped up to 5 vs 5.
  HoeffdingTree tree(1, 2);
  for (int i = 0; i < 7; ++i) tree.train_one({1.0}, 0);
  for (int i = 0; i < 3; ++i) tree.train_one({1.0}, 1);
  EXPECT_EQ(tree.predict({1.0}), 0);

  for (int i = 0; i < 2; ++i) tree.train_one({1.0}, 1);
  // counts now {0:7, 1:5}
  EXPECT_EQ(tree.predict({1.0}), 0);
  for (int i = 0; i < 2; ++i) tree.train_one({1.0}, 1);
  // counts now {0:7, 1:7}: tie goes to the lowest class id
  EXPECT_EQ(tree.predict({1.0}), 0);
}

TEST(HoeffdingTree, BatchEqualsSequentialTraining) {
  const Separable s = separable_1d(600, 13);
  HoeffdingTree one_by_one(1, 2);
  for (std::size_t i = 0; i < s.X.size(); ++i)
    one_by_one.train_one(s.X[i], s.y[i]);
  HoeffdingTree batched(1, 2);
  batched.train_batch(s.X, s.y);
  EXPECT_EQ(one_by_one.dump(), batched.dump());
}

TEST(HoeffdingTree, EmptyBatchIsNoOp) {
  HoeffdingTree tree(1, 2);
  tree.train_one({1.0}, 0);
  const std::string before = tree.dump();
  tree.train_batch({}, {});
  EXPECT_EQ(tree.dump(), before);
  EXPECT_EQ(tree.instances_trained(), 1u);
}

TEST(HoeffdingTree, SinglePassSeaWindowFitsItself) {
  SeaSource src(21, 1000, DriftSchedule{{}, 0.10});
  std::vector<std::vector<double>> X;
  std::vector<ClassId> y;
  while (auto inst = src.next()) {
    X.push_back(inst->features);
    y.push_back(*inst->label);
  }
  HoeffdingTree tree(3, 2);
  tree.train_batch(X, y);
  std::size_t ok = 0;
  for (std::size_t i = 0; i < X.size(); ++i)
    if (tree.predict(X[i]) == y[i]) ++ok;
  EXPECT_GE(static_cast<double>(ok) / 1000.0, 0.8);
}

TEST(HoeffdingTree, DimensionMismatchThrows) {
  HoeffdingTree tree(2, 2);
  EXPECT_THROW(tree.train_one({1.0}, 0), std::invalid_argument);
  tree.train_one({1.0, 2.0}, 0);
  EXPECT_THROW(tree.predict({1.0}), std::invalid_argument);
}

TEST(HoeffdingTree, TrainingCountMatchesCalls) {
  const Separable s = separable_1d(250, 17);
  HoeffdingTree tree(1, 2);
  for (std::size_t i = 0; i < s.X.size(); ++i) {
    tree.train_one(s.X[i], s.y[i]);
    ASSERT_EQ(tree.instances_trained(), i + 1);
  }
}

TEST(HoeffdingTree, SameSequenceSameTree) {
  const Separable s = separable_1d(1500, 19);
  HoeffdingTree a(1, 2);
  HoeffdingTree b(1, 2);
  for (std::size_t i = 0; i < s.X.size(); ++i) {
    a.train_one(s.X[i], s.y[i]);
    b.train_one(s.X[i], s.y[i]);
  }
  EXPECT_EQ(a.dump(), b.dump());
  for (double x = 0.0; x <= 10.0; x += 0.25)
    ASSERT_EQ(a.predict({x}), b.predict({x}));
}

TEST(HoeffdingTree, CopyIsDeepAndIndependent) {
  const Separable s = separable_1d(800, 23);
  HoeffdingTree a(1, 2);
  for (std::size_t i = 0; i < s.X.size(); ++i) a.train_one(s.X[i], s.y[i]);
  HoeffdingTree b = a;
  EXPECT_EQ(a.dump(), b.dump());
  b.train_one({0.1}, 1);
  EXPECT_NE(a.dump(), b.dump());          // a untouched
  EXPECT_EQ(a.instances_trained(), 800u);
}

TEST(HoeffdingTree, ReplayedFitMakesMultiplePasses) {
  const Separable s = separable_1d(100, 29);
  HoeffdingTree tree(1, 2);
  tree.train_replayed(s.X, s.y, 1000);
  EXPECT_EQ(tree.instances_trained(), 1000u);  // 10 full passes
  EXPECT_GE(self_accuracy(tree, s), 0.95);
}

TEST(HoeffdingTree, PrequentialAccuracyDoesNotDegrade) {
  // Stationary separable stream: test-then-train accuracy over the second
  // half must stay within 0.02 of the first half.
  const Separable s = separable_1d(4000, 31);
  HoeffdingTree tree(1, 2);
  std::size_t ok_first = 0, ok_second = 0;
  for (std::size_t i = 0; i < s.X.size(); ++i) {
    const ClassId pred = tree.predict(s.X[i]);
    if (pred == s.y[i]) (i < 2000 ? ok_first : ok_second)++;
    tree.train_one(s.X[i], s.y[i]);
  }
  const double first = static_cast<double>(ok_first) / 2000.0;
  const double second = static_cast<double>(ok_second) / 2000.0;
  EXPECT_GE(second, first - 0.02);
}

}  // namespace
