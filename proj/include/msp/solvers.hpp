#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "msp/graph.hpp"
#include "msp/knapsack.hpp"
#include "msp/model.hpp"
#include "msp/problems.hpp"

namespace msp {

/// Line segment p0 + lambda * delta * (p1 - p0), lambda in [0,1].
struct Segment {
  ObjectivePoint p0;
  ObjectivePoint p1;
  double delta = 1.0;

  ObjectivePoint at(double lambda) const;
  ObjectivePoint end() const { return at(1.0); }
  /// Parameter lambda of the point nearest to q (0 for degenerate segments).
  double parameter_of(const ObjectivePoint& q) const;
  /// q within relative distance rel_tol of the segment.
  bool contains(const ObjectivePoint& q, double rel_tol) const;
};

struct ParetoEntry {
  Solution solution;
  ObjectivePoint point;
};

/// Mutually non-dominated entries, kept sorted by (T, E). Equal points are
/// stored once.
class ParetoSet {
 public:
  /// False if q is dominated by or equal to a stored point.
  bool insert(Solution sol, const ObjectivePoint& q);
  bool dominated(const ObjectivePoint& q) const;
  const std::vector<ParetoEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<ParetoEntry> entries_;
};

// ---- 2-approximation -------------------------------------------------------

ArcSubset dindp_two_approx(const Digraph& g);

Solution msp_two_approx_extreme(const MspInstance& inst);

// ---- fixed flow ------------------------------------------------------------

KnapsackInstance fixed_flow_items_single_mode(const MspInstance& inst, const std::vector<double>& flow);

/// Dimension 0 is cost (bound B); dimension 1 + e is the load on arc e.
KnapsackInstance fixed_flow_items_multi_mode(const MspInstance& inst, const std::vector<double>& flow);

/// Lower bound on E for the fixed flow: min(eta_0, min_i eta_i/k_i) * sum wF.
double fixed_flow_energy_floor(const MspInstance& inst, const std::vector<double>& flow);

/// Minimizes energy for fixed flows within the budget (T unconstrained).
Solution fixed_flow_optimize(const MspInstance& inst, const std::vector<CommodityFlow>& flows, double epsilon,
                             const KnapsackLimits& limits = {});

// ---- relaxation and frontier sampling --------------------------------------

/// Throws PremiseViolated naming the failing inequality.
void check_mode_ordering(const std::vector<Mode>& modes);

Segment relaxation_segment(const MspInstance& inst);

/// (tau_i - tau_0, eta_i/k_i - eta_0) for i = 1..m.
std::vector<ObjectivePoint> directional_vectors(const std::vector<Mode>& modes);

/// Per public mode i: the slope of v_i is not steeper (not more negative)
/// than that of v_m. Exact for integral mode data.
std::vector<bool> slope_not_steeper(const std::vector<Mode>& modes);

/// c_m * sum_e w(e) floor(F(e)/k_m) for the shortest-path flow.
double sampling_budget_limit(const MspInstance& inst);

/// epsilon = 0 solves the knapsack exactly.
Solution frontier_sample(const MspInstance& inst, double budget_point, double epsilon,
                         const KnapsackLimits& limits = {});

/// Same flows and layout with every seat taken: loads min(F(e), k_i L(e)_i),
/// filled in mode order.
Solution full_acceptance(const MspInstance& inst, const Solution& sol);

Segment patch_segment(const MspInstance& inst, const Solution& sol);

// ---- oracles ---------------------------------------------------------------

struct OracleLimits {
  int max_arcs = 8;
  std::int64_t max_paths = 64;          // simple paths per commodity
  std::int64_t max_flow_vectors = 20000;
  std::int64_t max_states = 2'000'000;  // partial layouts kept while merging arcs
};

ParetoSet msp_brute_force(const MspInstance& inst, const OracleLimits& limits = {});

/// Some frontier point meets the instance's decision bounds.
bool msp_decide(const MspInstance& inst, const OracleLimits& limits = {});

struct DindpResult {
  ArcSubset arcs;
  double routing_cost = kInfinity;
  bool decision = false;  // w(E') <= beta and R <= gamma
};

struct DindpLimits {
  int max_free_arcs = 40;
  std::int64_t max_nodes = 50'000'000;
};

/// Budget-feasible subset of least routing cost.
DindpResult dindp_brute_force(const DindpInstance& inst, const DindpLimits& limits = {});

/// Stops at the first subset meeting both bounds.
DindpResult dindp_decide(const DindpInstance& inst, const DindpLimits& limits = {});

struct DistpResult {
  bool feasible = false;
  ArcSubset arcs;
};

DistpResult distp_brute_force(const DistpInstance& inst, int max_arcs = 20);

}  // namespace msp
