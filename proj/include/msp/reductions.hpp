#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "msp/model.hpp"
#include "msp/problems.hpp"

namespace msp {

/// Parameters and node roles of a generated gadget.
struct ReductionMeta {
  std::map<std::string, double> params;
  std::map<std::string, std::vector<NodeId>> roles;
  bool trivially_false = false;  // source instance is a NO instance by construction
};

struct DindpReduction {
  DindpInstance instance;
  ReductionMeta meta;
};

struct MspReduction {
  MspInstance instance;
  ReductionMeta meta;
};

/// Closed-form block routing costs of the exact cover gadget in its optimal
/// shape. `vw` is the formula 9nk - 2n.
struct BlockCosts {
  std::int64_t uu = 0;  // C*_{U,U}, U including the hub
  std::int64_t uw = 0;  // C*_{U,W} = C*_{W,U}
  std::int64_t vv = 0;  // C*_{V,V}
  std::int64_t vw = 0;  // C_{V,W} = C_{W,V}
  std::int64_t ww = 0;  // C_{W,W}
  std::int64_t uv = 0;  // C*_{U,V} = C*_{V,U}
};

BlockCosts gadget_block_costs(std::int64_t h, std::int64_t n, std::int64_t k);

/// Measured V-W cost of the optimal-shape gadget: each element sits at
/// distance 1 from its cover subset and 3 from the others.
std::int64_t cover_vw_cost(std::int64_t n, std::int64_t k);

// Node layout: u_0 = 0, u_i = i (1..h), v_j = h + j (1..k), w_i = h + k + i.
DindpReduction x3c_to_dindp(const X3cInstance& x);

/// Hub arcs, all subset arcs to the hub, and both arcs between each element
/// and the subset of `cover` (indices into x.subsets) containing it.
ArcSubset x3c_optimal_shape(const X3cInstance& x, const DindpReduction& red, const std::vector<int>& cover);

/// Exact cover read from subset-element arcs present in both directions.
std::optional<std::vector<int>> x3c_extract_cover(const X3cInstance& x, const DindpReduction& red,
                                                  const ArcSubset& arcs);

bool x3c_brute_force(const X3cInstance& x);

// Node layout: v_0 = 0, v_i = i, v_i' = n + i. Arcs per item i (0-based),
// in order: v_0 v_i, v_i v_i', v_i' v_0, v_i' v_i.
DindpReduction esum_to_dindp(const std::vector<std::int64_t>& items, std::int64_t target);

/// The three cycle arcs of every item.
ArcSubset esum_cycle_arcs(const DindpReduction& red);

/// Items whose back arc v_i' v_i is chosen.
std::vector<int> esum_extract_subset(const DindpReduction& red, const ArcSubset& arcs);

/// Demand 1 between all ordered pairs; a = gamma bounds T, b = beta bounds E.
MspReduction dindp_to_msp(const DindpInstance& inst);

/// Arcs carrying public vehicles.
ArcSubset dindp_extract_arcs(const MspReduction& red, const Solution& sol);

// Path v_1 .. v_{n+1} with arc i of weight s_i; node ids 0..n.
MspReduction ssum_to_msp(const std::vector<std::int64_t>& items, std::int64_t target, std::int64_t bound);

std::vector<int> ssum_extract_subset(const MspReduction& red, const Solution& sol);

struct ValuedItem {
  std::int64_t value = 0;
  std::int64_t weight = 0;
};

/// Single arc, one public mode per item.
MspReduction ukps_to_msp(const std::vector<ValuedItem>& items, std::int64_t target, std::int64_t bound);

std::vector<std::int64_t> ukps_extract_counts(const MspReduction& red, const Solution& sol);

MspReduction distp_to_msp_inapprox(const DistpInstance& inst, double alpha);

ArcSubset distp_extract_from_msp(const MspReduction& red, const Solution& sol);

/// Smallest k >= 3 with (k-2)/(k+2) >= 1 - eps.
int star_exponent(double eps);

struct StarGadgetOptions {
  std::optional<std::int64_t> star_size;  // overrides h^k, testing only
  std::int64_t max_nodes = 200'000;
};

// Node layout: originals 0..h-1, q = h, then one star per terminal in input
// order (roles "star<t>").
DindpReduction distp_to_dindp_inapprox(const DistpInstance& inst, double eps, const StarGadgetOptions& options = {});

/// Chosen arcs that belong to the original graph (same ids).
ArcSubset distp_extract_from_dindp(const DistpInstance& inst, const ArcSubset& arcs);

}  // namespace msp
