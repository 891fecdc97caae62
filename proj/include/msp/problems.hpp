#pragma once

#include <array>
#include <optional>
#include <vector>

#include "msp/graph.hpp"

namespace msp {

/// Exact cover by 3-sets over the ground set {1..n}.
struct X3cInstance {
  int n = 0;
  std::vector<std::array<int, 3>> subsets;
};

/// Network design: find E' with w(E') <= beta and R(E') <= gamma.
/// With a demand, R is the demand-weighted routing cost over listed pairs.
struct DindpInstance {
  Digraph graph;
  double beta = 0.0;
  double gamma = 0.0;
  std::optional<std::vector<DemandEntry>> demand;
};

/// Directed Steiner tree: arcs of weight <= budget in which root reaches
/// every terminal.
struct DistpInstance {
  Digraph graph;
  NodeId root = 0;
  std::vector<NodeId> terminals;
  double budget = 0.0;
};

/// Routing cost of an arc subset for a DiNDP instance (demand-aware).
double dindp_routing_cost(const DindpInstance& inst, const ArcSubset& arcs);

}  // namespace msp
