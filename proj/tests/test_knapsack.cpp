#include <gtest/gtest.h>

#include "msp/error.hpp"
#include "msp/knapsack.hpp"
#include "support.hpp"

namespace msp {
namespace {

using testing::Rng;

KnapsackInstance one_dim(std::vector<std::pair<double, double>> items, double bound,
                         std::optional<std::int64_t> multiplicity = 1) {
  KnapsackInstance ks;
  ks.bounds = {bound};
  for (auto [s, w] : items) ks.items.push_back({s, {w}, multiplicity, {}});
  return ks;
}

// Exhaustive search over counts within multiplicities (finite ones only).
double enumerate_best(const KnapsackInstance& ks, std::size_t i, std::vector<double>& left) {
  if (i == ks.items.size()) return 0.0;
  double best = enumerate_best(ks, i + 1, left);
  const auto& item = ks.items[i];
  const std::int64_t cap = max_item_count(item, left);
  for (std::int64_t c = 1; c <= cap; ++c) {
    for (std::size_t j = 0; j < left.size(); ++j) left[j] -= c * item.weights[j];
    best = std::max(best, c * item.value + enumerate_best(ks, i + 1, left));
    for (std::size_t j = 0; j < left.size(); ++j) left[j] += c * item.weights[j];
  }
  return best;
}

KnapsackInstance random_instance(Rng& rng, int r) {
  KnapsackInstance ks;
  for (int j = 0; j < r; ++j) ks.bounds.push_back(testing::uniform(rng, 0, 25));
  const int n = testing::uniform(rng, 0, 7);
  for (int i = 0; i < n; ++i) {
    KnapsackItem item;
    item.value = testing::uniform(rng, 1, 30);
    for (int j = 0; j < r; ++j) item.weights.push_back(testing::uniform(rng, 1, 12));
    item.multiplicity = testing::uniform(rng, 1, 3);
    ks.items.push_back(item);
  }
  return ks;
}

TEST(KpsExact, ClassicInstance) {
  const auto ks = one_dim({{60, 10}, {100, 20}, {120, 30}}, 50);
  const Selection s = kps_exact(ks);
  EXPECT_EQ(s.value, 220.0);
  EXPECT_EQ(s.counts, (std::vector<std::int64_t>{0, 1, 1}));
}

TEST(KpsExact, EmptyAndUnbounded) {
  const Selection empty = kps_exact(one_dim({}, 10));
  EXPECT_EQ(empty.value, 0.0);
  EXPECT_TRUE(empty.counts.empty());
  const Selection u = kps_exact(one_dim({{3, 2}}, 7, std::nullopt));
  EXPECT_EQ(u.counts, (std::vector<std::int64_t>{3}));
  EXPECT_EQ(u.value, 9.0);
}

TEST(KpsExact, RationalWeightsAreScaled) {
  const Selection s = kps_exact(one_dim({{5, 0.5}, {4, 0.25}, {3, 0.75}}, 1.0));
  EXPECT_EQ(s.value, 9.0);
}

TEST(KpsExact, Errors) {
  try {
    kps_exact(one_dim({{1, 0.123456789}}, 1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::WeightsNotIntegral);
  }
  try {
    kps_exact(one_dim({{1, 1}}, 1e8));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CapacityTooLargeForDp);
  }
  try {
    kps_exact(one_dim({{1, 0}}, 1, std::nullopt));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnboundedObjective);
  }
}

TEST(KpsExact, TiesPreferLowerIndex) {
  const Selection s = kps_exact(one_dim({{5, 3}, {5, 3}}, 3));
  EXPECT_EQ(s.counts, (std::vector<std::int64_t>{1, 0}));
}

TEST(KpsExact, MatchesEnumeration) {
  Rng rng(1);
  for (int t = 0; t < 100; ++t) {
    const KnapsackInstance ks = random_instance(rng, 1);
    std::vector<double> left = ks.bounds;
    const Selection s = kps_exact(ks);
    EXPECT_EQ(s.value, enumerate_best(ks, 0, left));
    EXPECT_TRUE(selection_respects_bounds(ks, s, 0.0));
  }
}

TEST(KpsFptas, GuaranteeAndBounds) {
  Rng rng(2);
  for (double eps : {0.5, 0.2, 0.05}) {
    for (int t = 0; t < 60; ++t) {
      const KnapsackInstance ks = random_instance(rng, 1);
      const Selection approx = kps_fptas(ks, eps);
      EXPECT_GE(approx.value, (1.0 - eps) * kps_exact(ks).value - 1e-9);
      EXPECT_TRUE(selection_respects_bounds(ks, approx, 0.0));
    }
  }
}

TEST(KpsFptas, SmallCases) {
  const Selection one = kps_fptas(one_dim({{7, 3}}, 4), 0.1);
  EXPECT_EQ(one.counts, (std::vector<std::int64_t>{1}));
  EXPECT_EQ(kps_fptas(one_dim({{7, 3}, {2, 1}}, 0), 0.1).value, 0.0);
  EXPECT_THROW(kps_fptas(one_dim({{7, 3}}, 4), 0.0), Error);
  EXPECT_THROW(kps_fptas(one_dim({{7, 3}}, 4), 1.0), Error);
}

TEST(KpsFptas, UnboundedNeverExceedsFloor) {
  const Selection s = kps_fptas(one_dim({{3, 2}, {1, 5}}, 11, std::nullopt), 0.1);
  EXPECT_LE(s.counts[0], 5);
  EXPECT_LE(s.counts[1], 2);
  EXPECT_TRUE(selection_respects_bounds(one_dim({{3, 2}, {1, 5}}, 11, std::nullopt), s));
}

TEST(MkpsExact, TwoDimensions) {
  KnapsackInstance ks;
  ks.bounds = {4, 3};
  ks.items = {{5, {2, 3}, 1, {}}, {4, {3, 1}, 1, {}}};
  const Selection s = mkps_exact(ks);
  EXPECT_EQ(s.value, 5.0);
  EXPECT_EQ(s.counts, (std::vector<std::int64_t>{1, 0}));
}

TEST(MkpsExact, ZeroBounds) {
  KnapsackInstance ks;
  ks.bounds = {0, 0};
  ks.items = {{5, {2, 3}, 1, {}}, {4, {3, 1}, 2, {}}};
  EXPECT_EQ(mkps_exact(ks).value, 0.0);
}

TEST(MkpsExact, MatchesEnumerationAndSingleDimension) {
  Rng rng(3);
  for (int t = 0; t < 60; ++t) {
    const KnapsackInstance ks = random_instance(rng, testing::uniform(rng, 1, 3));
    std::vector<double> left = ks.bounds;
    const Selection s = mkps_exact(ks);
    EXPECT_EQ(s.value, enumerate_best(ks, 0, left));
    EXPECT_TRUE(selection_respects_bounds(ks, s, 0.0));
    if (ks.dimensions() == 1) EXPECT_EQ(s.value, kps_exact(ks).value);
  }
}

TEST(MkpsExact, NodeLimit) {
  KnapsackInstance ks;
  ks.bounds = {100, 100};
  for (int i = 0; i < 12; ++i) ks.items.push_back({10.0 + i, {7.0 + i % 3, 9.0 - i % 4}, 3, {}});
  KnapsackLimits limits;
  limits.max_search_nodes = 10;
  try {
    mkps_exact(ks, limits);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SearchBudgetExceeded);
  }
}

KnapsackInstance subset_sum(std::vector<double> s, double a, double a_prime) {
  KnapsackInstance ks;
  ks.bounds = {a_prime};
  ks.target = a;
  for (double x : s) ks.items.push_back({x, {x}, 1, {}});
  return ks;
}

TEST(SubsetSum, Examples) {
  const SubsetSumResult yes = subset_sum_decide(subset_sum({1, 2, 3}, 4, 4), true);
  EXPECT_TRUE(yes.feasible);
  EXPECT_EQ(yes.witness, (std::vector<int>{0, 2}));
  EXPECT_FALSE(subset_sum_decide(subset_sum({2, 4}, 5, 5), true).feasible);
  const SubsetSumResult none = subset_sum_decide(subset_sum({}, 0, 0), true);
  EXPECT_TRUE(none.feasible);
  EXPECT_TRUE(none.witness.empty());
  EXPECT_TRUE(subset_sum_decide(subset_sum({2, 4}, 5, 7), false).feasible);
}

TEST(SubsetSum, PremiseViolated) {
  KnapsackInstance ks = subset_sum({1, 2}, 1, 1);
  ks.items[1].value = 3;
  try {
    subset_sum_decide(ks, true);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PremiseViolated);
  }
}

TEST(SubsetSum, WitnessSumsInRange) {
  Rng rng(9);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> s;
    for (int i = testing::uniform(rng, 0, 6); i > 0; --i) s.push_back(testing::uniform(rng, 1, 9));
    const double a = testing::uniform(rng, 0, 20);
    const double b = a + testing::uniform(rng, 0, 3);
    const SubsetSumResult r = subset_sum_decide(subset_sum(s, a, b), false);
    bool any = false;
    for (unsigned mask = 0; mask < (1u << s.size()); ++mask) {
      double sum = 0;
      for (std::size_t i = 0; i < s.size(); ++i)
        if (mask >> i & 1u) sum += s[i];
      any |= sum >= a && sum <= b;
    }
    EXPECT_EQ(r.feasible, any);
    if (r.feasible) {
      double sum = 0;
      for (int i : r.witness) sum += s[static_cast<std::size_t>(i)];
      EXPECT_GE(sum, a);
      EXPECT_LE(sum, b);
    }
  }
}

}  // namespace
}  // namespace msp
