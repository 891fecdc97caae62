#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "msp/graph.hpp"

namespace msp {

/// Back-reference used to turn a knapsack selection into a layout.
struct ItemTag {
  ArcId arc = -1;
  int mode = 0;
  double passengers = 0.0;
};

/// Knapsack item (s, w_1..w_r). A missing multiplicity means unbounded.
struct KnapsackItem {
  double value = 0.0;
  std::vector<double> weights;
  std::optional<std::int64_t> multiplicity = 1;
  ItemTag tag;
};

struct KnapsackInstance {
  std::vector<KnapsackItem> items;
  std::vector<double> bounds;   // A'_1..A'_r
  std::optional<double> target; // A, decision variants only

  int dimensions() const { return static_cast<int>(bounds.size()); }
};

struct Selection {
  std::vector<std::int64_t> counts;  // per item
  double value = 0.0;
};

struct KnapsackLimits {
  std::int64_t max_dp_states = 10'000'000;
  std::int64_t max_search_nodes = 10'000'000;
  std::int64_t max_denominator = 1000;  // rational weight scaling
};

/// Exact single-constraint knapsack by DP over (scaled) integral weights.
/// Ties prefer lower item indices.
Selection kps_exact(const KnapsackInstance& inst, const KnapsackLimits& limits = {});

/// Value-scaling FPTAS: value >= (1 - epsilon) OPT, weight within bound.
Selection kps_fptas(const KnapsackInstance& inst, double epsilon, const KnapsackLimits& limits = {});

/// Exact multidimensional knapsack by depth-first branch and bound. Among
/// optimal selections the lexicographically largest count vector is returned.
Selection mkps_exact(const KnapsackInstance& inst, const KnapsackLimits& limits = {});

struct SubsetSumResult {
  bool feasible = false;
  std::vector<int> witness;  // item indices
};

/// Subset sum over 0/1 selections with s_i = w_i: sum in [A, A'], or exactly
/// A when `exact` is set.
SubsetSumResult subset_sum_decide(const KnapsackInstance& inst, bool exact);

/// Largest count of an item that respects its multiplicity and every bound.
std::int64_t max_item_count(const KnapsackItem& item, const std::vector<double>& bounds);

double selection_value(const KnapsackInstance& inst, const Selection& sel);
bool selection_respects_bounds(const KnapsackInstance& inst, const Selection& sel, double tolerance = 1e-9);

/// Smallest integer q <= max_denominator with every value * q integral.
std::int64_t common_denominator(const std::vector<double>& values, std::int64_t max_denominator);

}  // namespace msp
