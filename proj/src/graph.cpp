#include "msp/graph.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <string>
#include <utility>

#include "msp/error.hpp"

namespace msp {

namespace {

bool allowed(const std::vector<bool>& mask, ArcId a) {
  return mask.empty() || mask[static_cast<std::size_t>(a)];
}

NodeId far_end(const Arc& arc, Orientation o) { return o == Orientation::Outbound ? arc.head : arc.tail; }
NodeId near_end(const Arc& arc, Orientation o) { return o == Orientation::Outbound ? arc.tail : arc.head; }

std::span<const ArcId> forward_arcs(const Digraph& g, NodeId v, Orientation o) {
  return o == Orientation::Outbound ? g.out_arcs(v) : g.in_arcs(v);
}
std::span<const ArcId> backward_arcs(const Digraph& g, NodeId v, Orientation o) {
  return o == Orientation::Outbound ? g.in_arcs(v) : g.out_arcs(v);
}

// Predecessor arc of every node in the deterministic shortest path tree
// (-1 for the root and for unreached nodes).
std::vector<ArcId> tree_predecessors(const Digraph& g, NodeId root, Orientation o,
                                     const std::vector<bool>& mask, std::vector<double>& dist) {
  const int n = g.node_count();
  dist = single_source_distances(g, root, o, mask);

  // Hop counts over tight arcs, BFS from the root.
  std::vector<int> hops(static_cast<std::size_t>(n), -1);
  std::queue<NodeId> queue;
  hops[static_cast<std::size_t>(root)] = 0;
  queue.push(root);
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop();
    for (ArcId a : forward_arcs(g, u, o)) {
      if (!allowed(mask, a)) continue;
      const Arc& arc = g.arc(a);
      const NodeId w = far_end(arc, o);
      if (hops[static_cast<std::size_t>(w)] >= 0) continue;
      if (dist[static_cast<std::size_t>(u)] + arc.length == dist[static_cast<std::size_t>(w)]) {
        hops[static_cast<std::size_t>(w)] = hops[static_cast<std::size_t>(u)] + 1;
        queue.push(w);
      }
    }
  }

  std::vector<ArcId> pred(static_cast<std::size_t>(n), -1);
  for (NodeId w = 0; w < n; ++w) {
    if (w == root || dist[static_cast<std::size_t>(w)] == kInfinity) continue;
    const double dw = dist[static_cast<std::size_t>(w)];
    const int hw = hops[static_cast<std::size_t>(w)];
    ArcId best = -1;
    NodeId best_tail = -1;
    for (ArcId a : backward_arcs(g, w, o)) {
      if (!allowed(mask, a)) continue;
      const Arc& arc = g.arc(a);
      const NodeId u = near_end(arc, o);
      const double du = dist[static_cast<std::size_t>(u)];
      if (du + arc.length != dw) continue;
      const int hu = hops[static_cast<std::size_t>(u)];
      const bool progress = du < dw || (hu >= 0 && hu < hw);
      if (!progress) continue;
      if (best < 0 || u < best_tail || (u == best_tail && a < best)) {
        best = a;
        best_tail = u;
      }
    }
    pred[static_cast<std::size_t>(w)] = best;
  }
  return pred;
}

std::vector<bool> reach(const Digraph& g, NodeId root, Orientation o, const std::vector<bool>& mask) {
  std::vector<bool> seen(static_cast<std::size_t>(g.node_count()), false);
  std::vector<NodeId> stack{root};
  seen[static_cast<std::size_t>(root)] = true;
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    for (ArcId a : forward_arcs(g, u, o)) {
      if (!allowed(mask, a)) continue;
      const NodeId w = far_end(g.arc(a), o);
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = true;
        stack.push_back(w);
      }
    }
  }
  return seen;
}

}  // namespace

Digraph::Digraph(int node_count, std::vector<Arc> arcs)
    : node_count_(node_count), arcs_(std::move(arcs)) {
  if (node_count < 0) throw Error(ErrorCode::InvalidGraph, "negative node count");
  out_.resize(static_cast<std::size_t>(node_count));
  in_.resize(static_cast<std::size_t>(node_count));
  for (std::size_t i = 0; i < arcs_.size(); ++i) {
    const Arc& a = arcs_[i];
    const std::string where = "arc " + std::to_string(i);
    if (a.tail < 0 || a.tail >= node_count || a.head < 0 || a.head >= node_count)
      throw Error(ErrorCode::InvalidGraph, where + " has an endpoint outside the node range");
    if (a.tail == a.head) throw Error(ErrorCode::InvalidGraph, where + " is a self-loop");
    if (!std::isfinite(a.weight) || !std::isfinite(a.length) || a.weight < 0 || a.length < 0)
      throw Error(ErrorCode::InvalidGraph, where + " has a negative or non-finite weight/length");
    out_[static_cast<std::size_t>(a.tail)].push_back(static_cast<ArcId>(i));
    in_[static_cast<std::size_t>(a.head)].push_back(static_cast<ArcId>(i));
  }
}

double Digraph::total_weight() const {
  double total = 0.0;
  for (const Arc& a : arcs_) total += a.weight;
  return total;
}

ArcSubset::ArcSubset(const Digraph& g, std::vector<ArcId> ids) : ids_(std::move(ids)) {
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
  for (ArcId a : ids_) {
    if (a < 0 || a >= g.arc_count())
      throw Error(ErrorCode::InvalidGraph, "arc reference " + std::to_string(a) + " out of range");
  }
}

ArcSubset ArcSubset::all(const Digraph& g) {
  std::vector<ArcId> ids(static_cast<std::size_t>(g.arc_count()));
  for (ArcId a = 0; a < g.arc_count(); ++a) ids[static_cast<std::size_t>(a)] = a;
  return ArcSubset(g, std::move(ids));
}

bool ArcSubset::contains(ArcId id) const { return std::binary_search(ids_.begin(), ids_.end(), id); }

std::vector<bool> ArcSubset::mask(const Digraph& g) const {
  std::vector<bool> m(static_cast<std::size_t>(g.arc_count()), false);
  for (ArcId a : ids_) m[static_cast<std::size_t>(a)] = true;
  return m;
}

double ArcSubset::weight(const Digraph& g) const {
  double total = 0.0;
  for (ArcId a : ids_) total += g.arc(a).weight;
  return total;
}

ArcSubset ArcSubset::united(const ArcSubset& other) const {
  ArcSubset out;
  std::set_union(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(),
                 std::back_inserter(out.ids_));
  return out;
}

std::vector<double> single_source_distances(const Digraph& g, NodeId root, Orientation o,
                                            const std::vector<bool>& mask) {
  std::vector<double> dist(static_cast<std::size_t>(g.node_count()), kInfinity);
  using Entry = std::pair<double, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  dist[static_cast<std::size_t>(root)] = 0.0;
  heap.emplace(0.0, root);
  while (!heap.empty()) {
    const auto [du, u] = heap.top();
    heap.pop();
    if (du > dist[static_cast<std::size_t>(u)]) continue;
    for (ArcId a : forward_arcs(g, u, o)) {
      if (!allowed(mask, a)) continue;
      const Arc& arc = g.arc(a);
      const NodeId w = far_end(arc, o);
      const double candidate = du + arc.length;
      if (candidate < dist[static_cast<std::size_t>(w)]) {
        dist[static_cast<std::size_t>(w)] = candidate;
        heap.emplace(candidate, w);
      }
    }
  }
  return dist;
}

DistanceMatrix all_pairs_distances(const Digraph& g, const std::optional<ArcSubset>& restriction) {
  const int n = g.node_count();
  const std::vector<bool> mask = restriction ? restriction->mask(g) : std::vector<bool>{};
  DistanceMatrix dm(n);
  for (NodeId u = 0; u < n; ++u) {
    const std::vector<double> row = single_source_distances(g, u, Orientation::Outbound, mask);
    for (NodeId v = 0; v < n; ++v) dm.set(u, v, row[static_cast<std::size_t>(v)]);
  }
  return dm;
}

double routing_cost(const DistanceMatrix& dist) {
  double total = 0.0;
  for (NodeId u = 0; u < dist.size(); ++u) {
    for (NodeId v = 0; v < dist.size(); ++v) {
      if (u == v) continue;
      const double d = dist.at(u, v);
      if (d == kInfinity) return kInfinity;
      total += d;
    }
  }
  return total;
}

double routing_cost(const Digraph& g, const std::optional<ArcSubset>& restriction,
                    const std::optional<std::vector<DemandEntry>>& demand) {
  if (!demand) return routing_cost(all_pairs_distances(g, restriction));

  const std::vector<bool> mask = restriction ? restriction->mask(g) : std::vector<bool>{};
  std::vector<std::vector<std::pair<NodeId, double>>> by_source(static_cast<std::size_t>(g.node_count()));
  for (const DemandEntry& e : *demand) {
    if (e.units > 0 && e.source != e.target)
      by_source[static_cast<std::size_t>(e.source)].emplace_back(e.target, e.units);
  }
  double total = 0.0;
  for (NodeId s = 0; s < g.node_count(); ++s) {
    const auto& targets = by_source[static_cast<std::size_t>(s)];
    if (targets.empty()) continue;
    const std::vector<double> row = single_source_distances(g, s, Orientation::Outbound, mask);
    for (const auto& [t, units] : targets) {
      const double d = row[static_cast<std::size_t>(t)];
      if (d == kInfinity) return kInfinity;
      total += units * d;
    }
  }
  return total;
}

double block_routing_cost(const DistanceMatrix& dist, std::span<const NodeId> from,
                          std::span<const NodeId> to) {
  double total = 0.0;
  for (NodeId a : from) {
    for (NodeId b : to) {
      if (a == b) continue;
      const double d = dist.at(a, b);
      if (d == kInfinity) return kInfinity;
      total += d;
    }
  }
  return total;
}

ArcSubset shortest_path_arborescence(const Digraph& g, NodeId root, Orientation orientation) {
  if (root < 0 || root >= g.node_count()) throw Error(ErrorCode::InvalidGraph, "root out of range");
  std::vector<double> dist;
  const std::vector<ArcId> pred = tree_predecessors(g, root, orientation, {}, dist);
  std::vector<ArcId> arcs;
  for (NodeId w = 0; w < g.node_count(); ++w) {
    if (w == root) continue;
    if (pred[static_cast<std::size_t>(w)] < 0)
      throw Error(ErrorCode::UnreachableNode,
                  "node " + std::to_string(w) +
                      (orientation == Orientation::Outbound ? " is not reachable from " : " cannot reach ") +
                      "root " + std::to_string(root));
    arcs.push_back(pred[static_cast<std::size_t>(w)]);
  }
  return ArcSubset(g, std::move(arcs));
}

ArcSubset shortest_path_subgraph(const Digraph& g, NodeId v) {
  if (!is_strongly_connected(g)) throw Error(ErrorCode::NotStronglyConnected, "shortest path subgraph");
  return shortest_path_arborescence(g, v, Orientation::Outbound)
      .united(shortest_path_arborescence(g, v, Orientation::Inbound));
}

NodeId central_node(const Digraph& g) {
  if (!is_strongly_connected(g)) throw Error(ErrorCode::NotStronglyConnected, "central node");
  const DistanceMatrix dm = all_pairs_distances(g);
  NodeId best = 0;
  double best_cost = kInfinity;
  for (NodeId w = 0; w < g.node_count(); ++w) {
    double cost = 0.0;
    for (NodeId u = 0; u < g.node_count(); ++u) cost += dm.at(w, u) + dm.at(u, w);
    if (cost < best_cost) {
      best_cost = cost;
      best = w;
    }
  }
  return best;
}

bool is_strongly_connected(const Digraph& g, const std::vector<bool>& mask) {
  if (g.node_count() <= 1) return true;
  const auto fwd = reach(g, 0, Orientation::Outbound, mask);
  const auto bwd = reach(g, 0, Orientation::Inbound, mask);
  return std::all_of(fwd.begin(), fwd.end(), [](bool b) { return b; }) &&
         std::all_of(bwd.begin(), bwd.end(), [](bool b) { return b; });
}

bool is_weakly_connected(const Digraph& g, const std::vector<bool>& mask) {
  const int n = g.node_count();
  if (n <= 1) return true;
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::vector<NodeId> stack{0};
  seen[0] = true;
  int count = 1;
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    auto visit = [&](NodeId w) {
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = true;
        ++count;
        stack.push_back(w);
      }
    };
    for (ArcId a : g.out_arcs(u))
      if (allowed(mask, a)) visit(g.arc(a).head);
    for (ArcId a : g.in_arcs(u))
      if (allowed(mask, a)) visit(g.arc(a).tail);
  }
  return count == n;
}

bool is_tree_like(const Digraph& g) {
  if (!is_weakly_connected(g)) return false;
  // Kahn's algorithm: acyclic iff every node gets removed.
  std::vector<int> indegree(static_cast<std::size_t>(g.node_count()), 0);
  for (const Arc& a : g.arcs()) ++indegree[static_cast<std::size_t>(a.head)];
  std::vector<NodeId> ready;
  for (NodeId v = 0; v < g.node_count(); ++v)
    if (indegree[static_cast<std::size_t>(v)] == 0) ready.push_back(v);
  int removed = 0;
  while (!ready.empty()) {
    const NodeId u = ready.back();
    ready.pop_back();
    ++removed;
    for (ArcId a : g.out_arcs(u))
      if (--indegree[static_cast<std::size_t>(g.arc(a).head)] == 0) ready.push_back(g.arc(a).head);
  }
  return removed == g.node_count();
}

std::optional<std::vector<ArcId>> shortest_path(const Digraph& g, NodeId s, NodeId t,
                                                const std::vector<bool>& mask) {
  if (s == t) return std::vector<ArcId>{};
  std::vector<double> dist;
  const std::vector<ArcId> pred = tree_predecessors(g, s, Orientation::Outbound, mask, dist);
  if (pred[static_cast<std::size_t>(t)] < 0) return std::nullopt;
  std::vector<ArcId> path;
  for (NodeId v = t; v != s; v = g.arc(path.back()).tail) path.push_back(pred[static_cast<std::size_t>(v)]);
  std::reverse(path.begin(), path.end());
  return path;
}

bool is_spanning_arborescence(const Digraph& g, const ArcSubset& arcs, NodeId root,
                              Orientation orientation) {
  const int n = g.node_count();
  if (static_cast<int>(arcs.size()) != n - 1) return false;
  std::vector<int> degree(static_cast<std::size_t>(n), 0);
  for (ArcId a : arcs.ids()) {
    const NodeId w = far_end(g.arc(a), orientation);
    if (++degree[static_cast<std::size_t>(w)] > 1) return false;
  }
  const std::vector<bool> mask = arcs.mask(g);
  if (!is_weakly_connected(g, mask)) return false;
  // Weakly connected with n-1 arcs means no undirected cycle.
  const auto seen = reach(g, root, orientation, mask);
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

}  // namespace msp
