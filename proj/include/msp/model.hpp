#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "msp/graph.hpp"

namespace msp {

/// Transport mode. Mode 0 is individual transport: no cost, capacity 1.
/// eta is per passenger for mode 0 and per vehicle for public modes.
struct Mode {
  double tau = 0.0;
  double eta = 0.0;
  double cost = 0.0;
  std::int64_t capacity = 1;

  friend bool operator==(const Mode&, const Mode&) = default;
};

struct Commodity {
  NodeId source = 0;
  NodeId target = 0;
  std::int64_t demand = 0;

  friend bool operator==(const Commodity&, const Commodity&) = default;
};

/// Optional bounds of the decision variant: T <= travel_time, E <= energy.
/// Infinite means unbounded.
struct DecisionBounds {
  double travel_time = kInfinity;
  double energy = kInfinity;

  friend bool operator==(const DecisionBounds&, const DecisionBounds&) = default;
};

/// Full MSP input. Only arc weights are used; lengths are ignored.
/// Commodities are kept sorted by (source, target) with positive demand.
class MspInstance {
 public:
  MspInstance() = default;
  MspInstance(Digraph graph, std::vector<Mode> modes, std::vector<Commodity> demand, double budget,
              std::optional<DecisionBounds> bounds = std::nullopt);

  const Digraph& graph() const { return graph_; }
  const std::vector<Mode>& modes() const { return modes_; }
  const Mode& mode(int i) const { return modes_.at(static_cast<std::size_t>(i)); }
  int public_mode_count() const { return static_cast<int>(modes_.size()) - 1; }
  const std::vector<Commodity>& commodities() const { return commodities_; }
  double budget() const { return budget_; }
  const std::optional<DecisionBounds>& bounds() const { return bounds_; }

  std::int64_t total_demand() const;

 private:
  Digraph graph_;
  std::vector<Mode> modes_;
  std::vector<Commodity> commodities_;
  double budget_ = 0.0;
  std::optional<DecisionBounds> bounds_;
};

/// Vehicle counts per arc for public modes 1..m; vehicles[e][i-1] is L(e)_i.
struct Layout {
  std::vector<std::vector<double>> vehicles;
  bool relaxed = false;

  static Layout zero(int arc_count, int public_modes);
  double at(ArcId e, int mode) const {
    return vehicles[static_cast<std::size_t>(e)][static_cast<std::size_t>(mode - 1)];
  }
  double& at(ArcId e, int mode) {
    return vehicles[static_cast<std::size_t>(e)][static_cast<std::size_t>(mode - 1)];
  }
  bool is_zero() const;
};

/// Flow of one commodity, dense over arcs.
struct CommodityFlow {
  Commodity commodity;
  std::vector<double> arc_flow;
};

/// Per commodity, per arc fractions over modes 0..m; indices follow
/// Solution::flows.
using ModalSplit = std::vector<std::vector<std::vector<double>>>;

struct Solution {
  std::vector<CommodityFlow> flows;
  Layout layout;
  ModalSplit split;
};

struct ObjectivePoint {
  double travel_time = 0.0;
  double energy = 0.0;

  friend bool operator==(const ObjectivePoint&, const ObjectivePoint&) = default;
};

struct ArcAggregate {
  double flow = 0.0;
  std::vector<double> split;       // M(e)_i, (1,0,...,0) where F(e) = 0
  std::vector<double> passengers;  // sum_k F_k(e) M_k(e)_i, no division
};

std::vector<ArcAggregate> aggregate_flow(const Solution& sol, int public_modes);

ObjectivePoint evaluate(const Solution& sol, const MspInstance& inst);

enum class ViolationKind {
  Structure,
  Budget,
  Conservation,
  Capacity,
  SplitSum,
  SplitRange,
  Negative,
  Integrality,
};

std::string to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  ArcId arc = -1;        // -1 when not arc specific
  int commodity = -1;    // index into Solution::flows, -1 when not commodity specific
  NodeId node = -1;      // conservation violations
  double residual = 0.0;
  std::string message;
};

inline constexpr double kFeasibilityTolerance = 1e-9;

/// Empty iff feasible. Comparisons use absolute tolerance 1e-9.
std::vector<Violation> check_feasibility(const Solution& sol, const MspInstance& inst);

/// Copy of the graph where routing lengths are the arc weights w.
Digraph weight_metric(const Digraph& g);

/// One deterministic shortest path (w.r.t. w) per commodity carrying its
/// whole demand.
std::vector<CommodityFlow> shortest_path_flow(const MspInstance& inst);

/// Sum over arcs of w(e) F(e).
double weighted_flow(const MspInstance& inst, const std::vector<CommodityFlow>& flows);

std::vector<double> aggregate_arc_flow(const std::vector<CommodityFlow>& flows, int arc_count);

/// Builds a solution from flows, a layout and per-arc public-mode passenger
/// counts loads[e][i-1]. Every commodity on e gets the same split
/// M(e)_i = loads / F(e).
Solution solution_from_loads(const MspInstance& inst, std::vector<CommodityFlow> flows, Layout layout,
                             const std::vector<std::vector<double>>& loads);

Solution all_mode0_solution(const MspInstance& inst, std::vector<CommodityFlow> flows);

/// p <= q componentwise with at least one strict inequality, exact.
bool dominates(const ObjectivePoint& p, const ObjectivePoint& q);

/// T <= a and E <= b of the decision variant (true when no bounds are set).
bool meets_bounds(const ObjectivePoint& p, const MspInstance& inst, double tolerance = kFeasibilityTolerance);

}  // namespace msp
