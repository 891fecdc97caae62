#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace msp {

using NodeId = int;
using ArcId = int;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Arc {
  NodeId tail = 0;
  NodeId head = 0;
  double weight = 0.0;  // construction weight w
  double length = 0.0;  // routing length d
};

/// Directed multigraph on dense node ids 0..n-1. Parallel arcs are allowed,
/// self-loops are not. Immutable after construction.
class Digraph {
 public:
  Digraph() = default;
  Digraph(int node_count, std::vector<Arc> arcs);

  int node_count() const { return node_count_; }
  int arc_count() const { return static_cast<int>(arcs_.size()); }
  const Arc& arc(ArcId id) const { return arcs_.at(static_cast<std::size_t>(id)); }
  std::span<const Arc> arcs() const { return arcs_; }

  // Arc ids leaving / entering a node, in increasing id order.
  std::span<const ArcId> out_arcs(NodeId v) const { return out_[static_cast<std::size_t>(v)]; }
  std::span<const ArcId> in_arcs(NodeId v) const { return in_[static_cast<std::size_t>(v)]; }

  double total_weight() const;

 private:
  int node_count_ = 0;
  std::vector<Arc> arcs_;
  std::vector<std::vector<ArcId>> out_;
  std::vector<std::vector<ArcId>> in_;
};

/// Set of arc references into one Digraph, kept sorted and unique.
class ArcSubset {
 public:
  ArcSubset() = default;
  ArcSubset(const Digraph& g, std::vector<ArcId> ids);

  static ArcSubset all(const Digraph& g);

  bool contains(ArcId id) const;
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  const std::vector<ArcId>& ids() const { return ids_; }

  // Membership mask of length g.arc_count().
  std::vector<bool> mask(const Digraph& g) const;
  double weight(const Digraph& g) const;

  ArcSubset united(const ArcSubset& other) const;

  friend bool operator==(const ArcSubset&, const ArcSubset&) = default;

 private:
  std::vector<ArcId> ids_;
};

/// Shortest directed path lengths w.r.t. arc length d. Unreachable pairs hold
/// kInfinity, never a large finite stand-in.
class DistanceMatrix {
 public:
  explicit DistanceMatrix(int n) : n_(n), dist_(static_cast<std::size_t>(n) * n, kInfinity) {}

  int size() const { return n_; }
  double at(NodeId u, NodeId v) const { return dist_[index(u, v)]; }
  bool reachable(NodeId u, NodeId v) const { return at(u, v) != kInfinity; }
  void set(NodeId u, NodeId v, double d) { dist_[index(u, v)] = d; }

  friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

 private:
  std::size_t index(NodeId u, NodeId v) const {
    return static_cast<std::size_t>(u) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v);
  }
  int n_;
  std::vector<double> dist_;
};

struct DemandEntry {
  NodeId source = 0;
  NodeId target = 0;
  double units = 0.0;
};

enum class Orientation { Outbound, Inbound };

// Single-source distances from `root` (Outbound) or to `root` (Inbound),
// restricted to arcs whose mask entry is true (all arcs if mask is empty).
std::vector<double> single_source_distances(const Digraph& g, NodeId root, Orientation orientation,
                                            const std::vector<bool>& mask = {});

DistanceMatrix all_pairs_distances(const Digraph& g,
                                   const std::optional<ArcSubset>& restriction = std::nullopt);

/// Sum of dist(u,v) over ordered pairs u != v, or the demand-weighted sum when
/// `demand` is given. Returns kInfinity if a counted pair is unreachable.
double routing_cost(const Digraph& g, const std::optional<ArcSubset>& restriction = std::nullopt,
                    const std::optional<std::vector<DemandEntry>>& demand = std::nullopt);

double routing_cost(const DistanceMatrix& dist);

/// Sum of dist(a,b) over a in `from`, b in `to`, a != b.
double block_routing_cost(const DistanceMatrix& dist, std::span<const NodeId> from,
                          std::span<const NodeId> to);

/// Shortest path arborescence (Outbound) or anti-arborescence (Inbound)
/// rooted at `root`. Among tight arcs into a node, the predecessor is the
/// smallest (tail id, arc id); zero-length ties are resolved by hop count so
/// the result is always acyclic.
ArcSubset shortest_path_arborescence(const Digraph& g, NodeId root, Orientation orientation);

/// A+_v united with A-_v.
ArcSubset shortest_path_subgraph(const Digraph& g, NodeId v);

NodeId central_node(const Digraph& g);

bool is_strongly_connected(const Digraph& g, const std::vector<bool>& mask = {});
bool is_weakly_connected(const Digraph& g, const std::vector<bool>& mask = {});
bool is_tree_like(const Digraph& g);

/// Directed path of minimal length from s to t (arc ids in order), with the
/// same deterministic tie rule as the arborescences. Empty if s == t.
std::optional<std::vector<ArcId>> shortest_path(const Digraph& g, NodeId s, NodeId t,
                                                const std::vector<bool>& mask = {});

/// Checks the three arborescence conditions and that the root reaches (or is
/// reached by) every node through the arcs.
bool is_spanning_arborescence(const Digraph& g, const ArcSubset& arcs, NodeId root,
                              Orientation orientation);

}  // namespace msp
