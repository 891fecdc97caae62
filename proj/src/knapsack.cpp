#include "msp/knapsack.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "msp/error.hpp"

namespace msp {

namespace {

constexpr double kWeightSlack = 1e-9;

void require_single_dimension(const KnapsackInstance& inst) {
  if (inst.dimensions() != 1) throw Error(ErrorCode::DimensionMismatch, "KPS needs exactly one bound");
  for (const auto& item : inst.items)
    if (item.weights.size() != 1) throw Error(ErrorCode::DimensionMismatch, "KPS item needs one weight");
}

// Splits `count` copies into bundles of 1, 2, 4, ..., rest so every count in
// [0, count] is a sum of a sub-collection.
std::vector<std::int64_t> binary_bundles(std::int64_t count) {
  std::vector<std::int64_t> out;
  for (std::int64_t size = 1; count > 0; size *= 2) {
    const std::int64_t take = std::min(size, count);
    out.push_back(take);
    count -= take;
  }
  return out;
}

struct Bundle {
  int item;
  std::int64_t copies;
  double weight;
  double value;
};

// Zero-weight items with positive value are taken outright; the rest become
// binary bundles. Items that never help (value <= 0) are dropped.
std::vector<Bundle> make_bundles(const KnapsackInstance& inst, Selection& forced) {
  std::vector<Bundle> bundles;
  forced.counts.assign(inst.items.size(), 0);
  forced.value = 0.0;
  const double bound = inst.bounds[0];
  for (std::size_t i = 0; i < inst.items.size(); ++i) {
    const KnapsackItem& item = inst.items[i];
    if (item.value <= 0.0) continue;
    const double w = item.weights[0];
    if (w <= 0.0) {
      if (!item.multiplicity)
        throw Error(ErrorCode::UnboundedObjective, "unbounded item " + std::to_string(i) + " has zero weight");
      forced.counts[i] = *item.multiplicity;
      forced.value += item.value * static_cast<double>(*item.multiplicity);
      continue;
    }
    const std::int64_t count = max_item_count(item, {bound});
    for (std::int64_t copies : binary_bundles(count))
      bundles.push_back({static_cast<int>(i), copies, w * static_cast<double>(copies),
                         item.value * static_cast<double>(copies)});
  }
  return bundles;
}

}  // namespace

std::int64_t max_item_count(const KnapsackItem& item, const std::vector<double>& bounds) {
  std::int64_t cap = item.multiplicity.value_or(std::numeric_limits<std::int64_t>::max());
  for (std::size_t j = 0; j < bounds.size(); ++j) {
    const double w = item.weights[j];
    if (w <= 0.0) continue;
    const double fit = std::floor(bounds[j] / w + kWeightSlack);
    cap = std::min<std::int64_t>(cap, fit < 0 ? 0 : static_cast<std::int64_t>(fit));
  }
  if (cap == std::numeric_limits<std::int64_t>::max())
    throw Error(ErrorCode::UnboundedObjective, "unbounded item without positive weight");
  return cap;
}

std::int64_t common_denominator(const std::vector<double>& values, std::int64_t max_denominator) {
  for (std::int64_t q = 1; q <= max_denominator; ++q) {
    const bool integral = std::all_of(values.begin(), values.end(), [q](double v) {
      const double scaled = v * static_cast<double>(q);
      return std::abs(scaled - std::round(scaled)) <= 1e-9 * std::max(1.0, std::abs(scaled));
    });
    if (integral) return q;
  }
  throw Error(ErrorCode::WeightsNotIntegral,
              "no common denominator up to " + std::to_string(max_denominator));
}

Selection kps_exact(const KnapsackInstance& inst, const KnapsackLimits& limits) {
  require_single_dimension(inst);
  Selection sel;
  std::vector<Bundle> bundles = make_bundles(inst, sel);
  if (bundles.empty()) return sel;

  std::vector<double> weights{inst.bounds[0]};
  for (const Bundle& b : bundles) weights.push_back(inst.items[static_cast<std::size_t>(b.item)].weights[0]);
  const std::int64_t q = common_denominator(weights, limits.max_denominator);
  const auto capacity = static_cast<std::int64_t>(std::floor(inst.bounds[0] * static_cast<double>(q) + 1e-9));
  if (capacity + 1 > limits.max_dp_states)
    throw Error(ErrorCode::CapacityTooLargeForDp, "scaled bound " + std::to_string(capacity) + " exceeds the DP limit");

  const auto width = static_cast<std::size_t>(capacity) + 1;
  std::vector<double> best(width, 0.0);
  std::vector<std::vector<bool>> take(bundles.size(), std::vector<bool>(width, false));
  std::vector<std::int64_t> scaled(bundles.size());
  for (std::size_t b = 0; b < bundles.size(); ++b) {
    scaled[b] = static_cast<std::int64_t>(std::llround(bundles[b].weight * static_cast<double>(q)));
    const std::int64_t wb = scaled[b];
    if (wb > capacity) continue;
    for (std::int64_t c = capacity; c >= wb; --c) {
      const double candidate = best[static_cast<std::size_t>(c - wb)] + bundles[b].value;
      if (candidate > best[static_cast<std::size_t>(c)]) {
        best[static_cast<std::size_t>(c)] = candidate;
        take[b][static_cast<std::size_t>(c)] = true;
      }
    }
  }
  std::int64_t c = capacity;
  for (std::size_t b = bundles.size(); b-- > 0;) {
    if (take[b][static_cast<std::size_t>(c)]) {
      sel.counts[static_cast<std::size_t>(bundles[b].item)] += bundles[b].copies;
      c -= scaled[b];
    }
  }
  sel.value = selection_value(inst, sel);
  return sel;
}

Selection kps_fptas(const KnapsackInstance& inst, double epsilon, const KnapsackLimits& limits) {
  require_single_dimension(inst);
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw Error(ErrorCode::InvalidEpsilon, "epsilon must lie in (0,1), got " + std::to_string(epsilon));
  Selection sel;
  std::vector<Bundle> bundles = make_bundles(inst, sel);
  const double bound = inst.bounds[0];
  std::erase_if(bundles, [bound](const Bundle& b) { return b.weight > bound + kWeightSlack; });
  if (bundles.empty()) return sel;

  double top = 0.0;
  for (const Bundle& b : bundles) top = std::max(top, b.value);
  const double scale = epsilon * top / static_cast<double>(bundles.size());
  std::vector<std::int64_t> profit(bundles.size());
  std::int64_t total = 0;
  for (std::size_t b = 0; b < bundles.size(); ++b) {
    profit[b] = static_cast<std::int64_t>(std::floor(bundles[b].value / scale));
    total += profit[b];
  }
  if (total + 1 > limits.max_dp_states)
    throw Error(ErrorCode::CapacityTooLargeForDp, "scaled profit range " + std::to_string(total) + " exceeds the DP limit");

  // min_weight[p]: least weight reaching scaled profit exactly p.
  const auto width = static_cast<std::size_t>(total) + 1;
  std::vector<double> min_weight(width, kInfinity);
  min_weight[0] = 0.0;
  std::vector<std::vector<bool>> take(bundles.size(), std::vector<bool>(width, false));
  std::int64_t reach = 0;
  for (std::size_t b = 0; b < bundles.size(); ++b) {
    const std::int64_t pb = profit[b];
    for (std::int64_t p = reach; p >= 0; --p) {
      const double from = min_weight[static_cast<std::size_t>(p)];
      if (from == kInfinity) continue;
      const double candidate = from + bundles[b].weight;
      auto& slot = min_weight[static_cast<std::size_t>(p + pb)];
      if (pb > 0 ? candidate < slot : false) {
        slot = candidate;
        take[b][static_cast<std::size_t>(p + pb)] = true;
      }
    }
    reach += pb;
  }
  std::int64_t p = reach;
  while (p > 0 && min_weight[static_cast<std::size_t>(p)] > bound + kWeightSlack) --p;
  for (std::size_t b = bundles.size(); b-- > 0;) {
    if (take[b][static_cast<std::size_t>(p)]) {
      sel.counts[static_cast<std::size_t>(bundles[b].item)] += bundles[b].copies;
      p -= profit[b];
    }
  }
  sel.value = selection_value(inst, sel);
  return sel;
}

namespace {

class BranchAndBound {
 public:
  BranchAndBound(const KnapsackInstance& inst, const KnapsackLimits& limits)
      : inst_(inst), limits_(limits), r_(inst.dimensions()) {
    for (std::size_t i = 0; i < inst.items.size(); ++i) {
      const KnapsackItem& item = inst.items[i];
      if (item.weights.size() != static_cast<std::size_t>(r_))
        throw Error(ErrorCode::DimensionMismatch, "item " + std::to_string(i) + " has a wrong weight count");
      caps_.push_back(item.value > 0.0 ? max_item_count(item, inst.bounds) : 0);
    }
    current_.assign(inst.items.size(), 0);
    best_.counts.assign(inst.items.size(), 0);
    // Items sorted by value density per dimension for the fractional bound.
    order_.resize(static_cast<std::size_t>(r_));
    for (int j = 0; j < r_; ++j) {
      auto& ord = order_[static_cast<std::size_t>(j)];
      for (std::size_t i = 0; i < inst.items.size(); ++i)
        if (caps_[i] > 0) ord.push_back(static_cast<int>(i));
      std::stable_sort(ord.begin(), ord.end(), [&](int a, int b) {
        const auto& ia = inst.items[static_cast<std::size_t>(a)];
        const auto& ib = inst.items[static_cast<std::size_t>(b)];
        // value/weight descending with zero weight first
        return ia.value * ib.weights[static_cast<std::size_t>(j)] > ib.value * ia.weights[static_cast<std::size_t>(j)];
      });
    }
  }

  Selection run() {
    std::vector<double> residual = inst_.bounds;
    search(0, residual, 0.0);
    best_.value = selection_value(inst_, best_);
    return best_;
  }

 private:
  double upper_bound(std::size_t from, const std::vector<double>& residual) const {
    double bound = kInfinity;
    for (int j = 0; j < r_; ++j) {
      double room = residual[static_cast<std::size_t>(j)];
      double gain = 0.0;
      for (int i : order_[static_cast<std::size_t>(j)]) {
        if (static_cast<std::size_t>(i) < from) continue;
        const KnapsackItem& item = inst_.items[static_cast<std::size_t>(i)];
        const double w = item.weights[static_cast<std::size_t>(j)];
        const double copies = static_cast<double>(caps_[static_cast<std::size_t>(i)]);
        if (w <= 0.0) {
          gain += copies * item.value;
          continue;
        }
        const double fit = std::min(copies, room / w);
        gain += fit * item.value;
        room -= fit * w;
        if (room <= 0.0) break;
      }
      bound = std::min(bound, gain);
    }
    return bound;
  }

  void search(std::size_t idx, std::vector<double>& residual, double value) {
    if (++nodes_ > limits_.max_search_nodes)
      throw Error(ErrorCode::SearchBudgetExceeded, "branch and bound exceeded " +
                                                       std::to_string(limits_.max_search_nodes) + " nodes");
    if (value > best_value_) {
      best_value_ = value;
      best_.counts = current_;
    }
    if (idx == inst_.items.size()) return;
    if (value + upper_bound(idx, residual) <= best_value_ + 1e-12) return;

    const KnapsackItem& item = inst_.items[idx];
    std::int64_t most = caps_[idx];
    for (int j = 0; j < r_; ++j) {
      const double w = item.weights[static_cast<std::size_t>(j)];
      if (w > 0.0)
        most = std::min<std::int64_t>(most, static_cast<std::int64_t>(
                                                std::floor(residual[static_cast<std::size_t>(j)] / w + kWeightSlack)));
    }
    for (std::int64_t count = std::max<std::int64_t>(most, 0); count >= 0; --count) {
      for (int j = 0; j < r_; ++j)
        residual[static_cast<std::size_t>(j)] -= static_cast<double>(count) * item.weights[static_cast<std::size_t>(j)];
      current_[idx] = count;
      search(idx + 1, residual, value + static_cast<double>(count) * item.value);
      current_[idx] = 0;
      for (int j = 0; j < r_; ++j)
        residual[static_cast<std::size_t>(j)] += static_cast<double>(count) * item.weights[static_cast<std::size_t>(j)];
    }
  }

  const KnapsackInstance& inst_;
  const KnapsackLimits& limits_;
  int r_;
  std::vector<std::int64_t> caps_;
  std::vector<std::vector<int>> order_;
  std::vector<std::int64_t> current_;
  Selection best_;
  double best_value_ = 0.0;
  std::int64_t nodes_ = 0;
};

}  // namespace

Selection mkps_exact(const KnapsackInstance& inst, const KnapsackLimits& limits) {
  if (inst.dimensions() < 1) throw Error(ErrorCode::DimensionMismatch, "MKPS needs at least one bound");
  return BranchAndBound(inst, limits).run();
}

SubsetSumResult subset_sum_decide(const KnapsackInstance& inst, bool exact) {
  require_single_dimension(inst);
  std::vector<double> sizes;
  for (std::size_t i = 0; i < inst.items.size(); ++i) {
    const auto& item = inst.items[i];
    if (item.value != item.weights[0])
      throw Error(ErrorCode::PremiseViolated, "item " + std::to_string(i) + " has value != weight");
    if (item.value < 0 || item.value != std::round(item.value))
      throw Error(ErrorCode::WeightsNotIntegral, "subset sum needs non-negative integer items");
    sizes.push_back(item.value);
  }
  const double upper = inst.bounds[0];
  const double lower = exact ? inst.target.value_or(upper) : inst.target.value_or(0.0);
  const double hi = exact ? lower : upper;
  SubsetSumResult out;
  if (hi < lower || hi < 0) return out;
  const double total = std::accumulate(sizes.begin(), sizes.end(), 0.0);
  const auto top = static_cast<std::int64_t>(std::min(std::floor(hi), total));

  // parent[s] = item that first reached sum s (-1 for 0, -2 unreachable).
  std::vector<int> parent(static_cast<std::size_t>(top) + 1, -2);
  parent[0] = -1;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const auto s = static_cast<std::int64_t>(sizes[i]);
    for (std::int64_t sum = top; sum >= s; --sum) {
      if (parent[static_cast<std::size_t>(sum)] == -2 && parent[static_cast<std::size_t>(sum - s)] != -2 &&
          (s > 0))
        parent[static_cast<std::size_t>(sum)] = static_cast<int>(i);
    }
  }
  const auto from = static_cast<std::int64_t>(std::max(0.0, std::ceil(lower)));
  for (std::int64_t sum = from; sum <= top; ++sum) {
    if (parent[static_cast<std::size_t>(sum)] == -2) continue;
    out.feasible = true;
    for (std::int64_t s = sum; s > 0;) {
      const int i = parent[static_cast<std::size_t>(s)];
      out.witness.push_back(i);
      s -= static_cast<std::int64_t>(sizes[static_cast<std::size_t>(i)]);
    }
    std::sort(out.witness.begin(), out.witness.end());
    break;
  }
  return out;
}

double selection_value(const KnapsackInstance& inst, const Selection& sel) {
  double v = 0.0;
  for (std::size_t i = 0; i < inst.items.size(); ++i)
    v += static_cast<double>(sel.counts[i]) * inst.items[i].value;
  return v;
}

bool selection_respects_bounds(const KnapsackInstance& inst, const Selection& sel, double tolerance) {
  for (int j = 0; j < inst.dimensions(); ++j) {
    double used = 0.0;
    for (std::size_t i = 0; i < inst.items.size(); ++i) {
      if (sel.counts[i] < 0) return false;
      if (inst.items[i].multiplicity && sel.counts[i] > *inst.items[i].multiplicity) return false;
      used += static_cast<double>(sel.counts[i]) * inst.items[i].weights[static_cast<std::size_t>(j)];
    }
    if (used > inst.bounds[static_cast<std::size_t>(j)] + tolerance) return false;
  }
  return true;
}

}  // namespace msp
