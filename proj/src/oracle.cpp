#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "msp/error.hpp"
#include "msp/solvers.hpp"

namespace msp {

double dindp_routing_cost(const DindpInstance& inst, const ArcSubset& arcs) {
  return routing_cost(inst.graph, arcs, inst.demand);
}

namespace {

[[noreturn]] void over_budget(const std::string& what) { throw Error(ErrorCode::SearchBudgetExceeded, what); }

// ---------------------------------------------------------------------------
// MSP oracle

using FlowVec = std::vector<std::int64_t>;

void simple_paths(const Digraph& g, NodeId at, NodeId target, std::vector<bool>& seen, std::vector<ArcId>& path,
                  std::vector<std::vector<ArcId>>& out, std::int64_t cap) {
  if (at == target) {
    out.push_back(path);
    if (static_cast<std::int64_t>(out.size()) > cap) over_budget("more than " + std::to_string(cap) + " simple paths");
    return;
  }
  for (ArcId e : g.out_arcs(at)) {
    const NodeId next = g.arc(e).head;
    if (seen[static_cast<std::size_t>(next)]) continue;
    seen[static_cast<std::size_t>(next)] = true;
    path.push_back(e);
    simple_paths(g, next, target, seen, path, out, cap);
    path.pop_back();
    seen[static_cast<std::size_t>(next)] = false;
  }
}

// All ways to put `units` integral units on `parts` paths.
void compositions(std::int64_t units, std::size_t parts, std::vector<std::int64_t>& cur,
                  std::vector<std::vector<std::int64_t>>& out) {
  if (cur.size() + 1 == parts) {
    cur.push_back(units);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (std::int64_t x = units; x >= 0; --x) {
    cur.push_back(x);
    compositions(units - x, parts, cur, out);
    cur.pop_back();
  }
}

bool leq(const FlowVec& a, const FlowVec& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

struct FlowNode {
  FlowVec total;
  int parent;
  int option;
};

struct ArcOption {
  double cost = 0.0;
  double travel_time = 0.0;
  double energy = 0.0;
  std::vector<std::int64_t> vehicles;
  std::vector<std::int64_t> passengers;
};

struct MergeState {
  double cost;
  double travel_time;
  double energy;
  int parent;
  int option;
};

template <class T>
std::vector<T> pareto3(std::vector<T> items) {
  std::sort(items.begin(), items.end(), [](const T& a, const T& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    if (a.travel_time != b.travel_time) return a.travel_time < b.travel_time;
    return a.energy < b.energy;
  });
  std::vector<T> kept;
  for (T& x : items) {
    const bool covered = std::any_of(kept.begin(), kept.end(), [&x](const T& k) {
      return k.cost <= x.cost && k.travel_time <= x.travel_time && k.energy <= x.energy;
    });
    if (!covered) kept.push_back(std::move(x));
  }
  return kept;
}

void arc_options_rec(const MspInstance& inst, double w, std::int64_t flow, int mode, std::int64_t left,
                     ArcOption& cur, std::vector<ArcOption>& out) {
  const int m = inst.public_mode_count();
  if (mode > m) {
    ArcOption o = cur;
    const Mode& m0 = inst.mode(0);
    const double private_riders = static_cast<double>(left);
    o.travel_time += w * m0.tau * private_riders;
    o.energy += w * m0.eta * private_riders;
    if (o.cost <= inst.budget() + kFeasibilityTolerance) out.push_back(std::move(o));
    return;
  }
  const Mode& mi = inst.mode(mode);
  const std::int64_t k = mi.capacity;
  std::int64_t most = (flow + k - 1) / k;
  if (mi.cost > 0.0 && w > 0.0)
    most = std::min<std::int64_t>(most, static_cast<std::int64_t>(std::floor(inst.budget() / (w * mi.cost) + 1e-9)));
  for (std::int64_t l = 0; l <= most; ++l) {
    // an empty vehicle only adds cost and energy
    const std::int64_t lo = l == 0 ? 0 : k * (l - 1) + 1;
    const std::int64_t hi = std::min(k * l, left);
    for (std::int64_t p = lo; p <= hi; ++p) {
      ArcOption next = cur;
      next.cost += w * mi.cost * static_cast<double>(l);
      next.travel_time += w * mi.tau * static_cast<double>(p);
      next.energy += w * mi.eta * static_cast<double>(l);
      next.vehicles[static_cast<std::size_t>(mode - 1)] = l;
      next.passengers[static_cast<std::size_t>(mode - 1)] = p;
      arc_options_rec(inst, w, flow, mode + 1, left - p, next, out);
    }
  }
}

std::vector<ArcOption> arc_options(const MspInstance& inst, ArcId e, std::int64_t flow) {
  const auto m = static_cast<std::size_t>(inst.public_mode_count());
  ArcOption start{0.0, 0.0, 0.0, std::vector<std::int64_t>(m, 0), std::vector<std::int64_t>(m, 0)};
  std::vector<ArcOption> out;
  if (flow == 0) {
    out.push_back(start);
    return out;
  }
  arc_options_rec(inst, inst.graph().arc(e).weight, flow, 1, flow, start, out);
  return pareto3(std::move(out));
}

}  // namespace

ParetoSet msp_brute_force(const MspInstance& inst, const OracleLimits& limits) {
  const Digraph& g = inst.graph();
  const int arcs = g.arc_count();
  const int m = inst.public_mode_count();
  if (arcs > limits.max_arcs)
    over_budget(std::to_string(arcs) + " arcs exceed the oracle cap of " + std::to_string(limits.max_arcs));
  const auto& commodities = inst.commodities();

  // per commodity: candidate arc-flow vectors
  std::vector<std::vector<FlowVec>> options(commodities.size());
  for (std::size_t c = 0; c < commodities.size(); ++c) {
    std::vector<std::vector<ArcId>> paths;
    std::vector<bool> seen(static_cast<std::size_t>(g.node_count()), false);
    seen[static_cast<std::size_t>(commodities[c].source)] = true;
    std::vector<ArcId> path;
    simple_paths(g, commodities[c].source, commodities[c].target, seen, path, paths, limits.max_paths);
    if (paths.empty()) return {};
    std::vector<std::vector<std::int64_t>> splits;
    std::vector<std::int64_t> cur;
    compositions(commodities[c].demand, paths.size(), cur, splits);
    std::map<FlowVec, int> unique;
    for (const auto& split : splits) {
      FlowVec f(static_cast<std::size_t>(arcs), 0);
      for (std::size_t p = 0; p < paths.size(); ++p)
        for (ArcId e : paths[p]) f[static_cast<std::size_t>(e)] += split[p];
      unique.emplace(std::move(f), 0);
    }
    for (auto& [f, unused] : unique) options[c].push_back(f);
  }

  // aggregated flows, dropping elementwise dominated ones at every stage
  std::vector<std::vector<FlowNode>> stages;
  stages.push_back({FlowNode{FlowVec(static_cast<std::size_t>(arcs), 0), -1, -1}});
  for (std::size_t c = 0; c < commodities.size(); ++c) {
    std::map<FlowVec, std::pair<int, int>> next;
    const auto& prev = stages.back();
    for (std::size_t a = 0; a < prev.size(); ++a)
      for (std::size_t o = 0; o < options[c].size(); ++o) {
        FlowVec sum = prev[a].total;
        for (std::size_t e = 0; e < sum.size(); ++e) sum[e] += options[c][o][e];
        next.emplace(std::move(sum), std::make_pair(static_cast<int>(a), static_cast<int>(o)));
      }
    std::vector<FlowNode> kept;
    std::vector<const FlowVec*> all;
    for (const auto& [f, unused] : next) all.push_back(&f);
    for (const auto& [f, link] : next) {
      const bool covered = std::any_of(all.begin(), all.end(), [&f](const FlowVec* other) {
        return *other != f && leq(*other, f);
      });
      if (!covered) kept.push_back({f, link.first, link.second});
    }
    if (static_cast<std::int64_t>(kept.size()) > limits.max_flow_vectors)
      over_budget(std::to_string(kept.size()) + " aggregated flows exceed the oracle cap");
    stages.push_back(std::move(kept));
  }

  auto commodity_flows = [&](int leaf) {
    std::vector<CommodityFlow> flows(commodities.size());
    int node = leaf;
    for (std::size_t c = commodities.size(); c-- > 0;) {
      const FlowNode& fn = stages[c + 1][static_cast<std::size_t>(node)];
      const FlowVec& f = options[c][static_cast<std::size_t>(fn.option)];
      flows[c].commodity = commodities[c];
      flows[c].arc_flow.assign(f.begin(), f.end());
      node = fn.parent;
    }
    return flows;
  };

  ParetoSet frontier;
  const auto& finals = stages.back();
  for (std::size_t leaf = 0; leaf < finals.size(); ++leaf) {
    const FlowVec& flow = finals[leaf].total;
    std::vector<std::vector<ArcOption>> per_arc;
    std::vector<std::vector<MergeState>> merged;
    merged.push_back({MergeState{0.0, 0.0, 0.0, -1, -1}});
    for (ArcId e = 0; e < arcs; ++e) {
      per_arc.push_back(arc_options(inst, e, flow[static_cast<std::size_t>(e)]));
      std::vector<MergeState> next;
      const auto& prev = merged.back();
      for (std::size_t s = 0; s < prev.size(); ++s)
        for (std::size_t o = 0; o < per_arc.back().size(); ++o) {
          const ArcOption& opt = per_arc.back()[o];
          const double cost = prev[s].cost + opt.cost;
          if (cost > inst.budget() + kFeasibilityTolerance) continue;
          next.push_back({cost, prev[s].travel_time + opt.travel_time, prev[s].energy + opt.energy,
                          static_cast<int>(s), static_cast<int>(o)});
        }
      next = pareto3(std::move(next));
      if (static_cast<std::int64_t>(next.size()) > limits.max_states)
        over_budget(std::to_string(next.size()) + " partial layouts exceed the oracle cap");
      merged.push_back(std::move(next));
    }

    // two-objective filter of the complete layouts
    std::vector<int> order(merged.back().size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    const auto& last = merged.back();
    std::sort(order.begin(), order.end(), [&last](int a, int b) {
      const auto& x = last[static_cast<std::size_t>(a)];
      const auto& y = last[static_cast<std::size_t>(b)];
      return x.travel_time < y.travel_time || (x.travel_time == y.travel_time && x.energy < y.energy);
    });
    double best_energy = kInfinity;
    for (int idx : order) {
      const MergeState& st = last[static_cast<std::size_t>(idx)];
      if (st.energy >= best_energy) continue;
      best_energy = st.energy;
      if (frontier.dominated({st.travel_time, st.energy})) continue;

      Layout layout = Layout::zero(arcs, m);
      std::vector<std::vector<double>> loads(static_cast<std::size_t>(arcs),
                                             std::vector<double>(static_cast<std::size_t>(m), 0.0));
      int s = idx;
      for (int e = arcs; e-- > 0;) {
        const MergeState& ms = merged[static_cast<std::size_t>(e) + 1][static_cast<std::size_t>(s)];
        const ArcOption& opt = per_arc[static_cast<std::size_t>(e)][static_cast<std::size_t>(ms.option)];
        for (int i = 1; i <= m; ++i) {
          layout.at(e, i) = static_cast<double>(opt.vehicles[static_cast<std::size_t>(i - 1)]);
          loads[static_cast<std::size_t>(e)][static_cast<std::size_t>(i - 1)] =
              static_cast<double>(opt.passengers[static_cast<std::size_t>(i - 1)]);
        }
        s = ms.parent;
      }
      Solution sol = solution_from_loads(inst, commodity_flows(static_cast<int>(leaf)), std::move(layout), loads);
      const ObjectivePoint point = evaluate(sol, inst);
      frontier.insert(std::move(sol), point);
    }
  }
  return frontier;
}

bool msp_decide(const MspInstance& inst, const OracleLimits& limits) {
  const ParetoSet frontier = msp_brute_force(inst, limits);
  return std::any_of(frontier.entries().begin(), frontier.entries().end(),
                     [&inst](const ParetoEntry& e) { return meets_bounds(e.point, inst); });
}

// ---------------------------------------------------------------------------
// DiNDP oracle

namespace {

// Routing cost under an arc mask. Without demand, leaves hanging off a single
// anchor by one arc each way are folded into closed-form terms.
class RoutingEvaluator {
 public:
  explicit RoutingEvaluator(const DindpInstance& inst) : inst_(inst) {
    const Digraph& g = inst.graph;
    const auto n = static_cast<std::size_t>(g.node_count());
    core_index_.assign(n, -1);
    anchor_.assign(n, -1);
    pendant_arc_.assign(static_cast<std::size_t>(g.arc_count()), false);
    if (!inst.demand) {
      for (NodeId p = 0; p < g.node_count(); ++p) {
        if (g.out_arcs(p).size() != 1 || g.in_arcs(p).size() != 1) continue;
        const Arc& out = g.arc(g.out_arcs(p)[0]);
        const Arc& in = g.arc(g.in_arcs(p)[0]);
        if (out.head != in.tail) continue;
        const NodeId a = out.head;
        if (g.out_arcs(a).size() + g.in_arcs(a).size() <= 2) continue;
        anchor_[static_cast<std::size_t>(p)] = a;
        pendant_arc_[static_cast<std::size_t>(g.out_arcs(p)[0])] = true;
        pendant_arc_[static_cast<std::size_t>(g.in_arcs(p)[0])] = true;
      }
    }
    for (NodeId v = 0; v < g.node_count(); ++v)
      if (anchor_[static_cast<std::size_t>(v)] < 0) {
        core_index_[static_cast<std::size_t>(v)] = static_cast<int>(core_.size());
        core_.push_back(v);
      }
    std::vector<Arc> core_arcs;
    for (ArcId e = 0; e < g.arc_count(); ++e) {
      if (pendant_arc_[static_cast<std::size_t>(e)]) continue;
      const Arc& a = g.arc(e);
      core_arc_ids_.push_back(e);
      core_arcs.push_back({core_index_[static_cast<std::size_t>(a.tail)], core_index_[static_cast<std::size_t>(a.head)],
                           a.weight, a.length});
    }
    core_graph_ = Digraph(static_cast<int>(core_.size()), std::move(core_arcs));
    const std::size_t c = core_.size();
    count_.assign(c, 0.0);
    dout_.assign(c, 0.0);
    din_.assign(c, 0.0);
    for (NodeId p = 0; p < g.node_count(); ++p) {
      const NodeId a = anchor_[static_cast<std::size_t>(p)];
      if (a < 0) continue;
      const auto ai = static_cast<std::size_t>(core_index_[static_cast<std::size_t>(a)]);
      count_[ai] += 1.0;
      dout_[ai] += g.arc(g.out_arcs(p)[0]).length;
      din_[ai] += g.arc(g.in_arcs(p)[0]).length;
      ++pendants_;
    }
  }

  bool forced(ArcId e) const { return pendant_arc_[static_cast<std::size_t>(e)]; }

  double cost(const std::vector<bool>& mask) const {
    if (inst_.demand) {
      std::vector<ArcId> ids;
      for (std::size_t e = 0; e < mask.size(); ++e)
        if (mask[e]) ids.push_back(static_cast<ArcId>(e));
      return routing_cost(inst_.graph, ArcSubset(inst_.graph, std::move(ids)), inst_.demand);
    }
    std::vector<bool> core_mask(core_arc_ids_.size());
    for (std::size_t j = 0; j < core_arc_ids_.size(); ++j)
      core_mask[j] = mask[static_cast<std::size_t>(core_arc_ids_[j])];
    const std::size_t c = core_.size();
    const double cn = static_cast<double>(c);
    double total = 0.0;
    double pendant_out = 0.0;
    double pendant_in = 0.0;
    std::vector<std::vector<double>> dist(c);
    for (std::size_t a = 0; a < c; ++a) {
      dist[a] = single_source_distances(core_graph_, static_cast<NodeId>(a), Orientation::Outbound, core_mask);
      for (double d : dist[a])
        if (d == kInfinity) return kInfinity;
    }
    for (std::size_t a = 0; a < c; ++a) {
      double out_sum = 0.0;
      double in_sum = 0.0;
      for (std::size_t b = 0; b < c; ++b) {
        out_sum += dist[a][b];
        in_sum += dist[b][a];
      }
      total += out_sum;
      total += (dout_[a] + din_[a]) * cn + count_[a] * (out_sum + in_sum);
      pendant_out += dout_[a];
      pendant_in += din_[a];
      for (std::size_t b = 0; b < c; ++b) total += count_[a] * count_[b] * dist[a][b];
    }
    if (pendants_ > 0) total += static_cast<double>(pendants_ - 1) * (pendant_out + pendant_in);
    return total;
  }

 private:
  const DindpInstance& inst_;
  std::vector<int> core_index_;
  std::vector<NodeId> anchor_;
  std::vector<bool> pendant_arc_;
  std::vector<NodeId> core_;
  std::vector<ArcId> core_arc_ids_;
  Digraph core_graph_;
  std::vector<double> count_;
  std::vector<double> dout_;
  std::vector<double> din_;
  int pendants_ = 0;
};

class DindpSearch {
 public:
  DindpSearch(const DindpInstance& inst, const DindpLimits& limits, bool decide)
      : inst_(inst), limits_(limits), decide_(decide), eval_(inst) {
    const Digraph& g = inst.graph;
    mask_.assign(static_cast<std::size_t>(g.arc_count()), false);
    for (ArcId e = 0; e < g.arc_count(); ++e) {
      if (g.arc(e).weight == 0.0 || eval_.forced(e)) {
        mask_[static_cast<std::size_t>(e)] = true;
        fixed_weight_ += g.arc(e).weight;
      } else {
        free_.push_back(e);
      }
    }
    if (static_cast<int>(free_.size()) > limits.max_free_arcs)
      over_budget(std::to_string(free_.size()) + " free arcs exceed the cap of " + std::to_string(limits.max_free_arcs));
    suffix_weight_.assign(free_.size() + 1, 0.0);
    for (std::size_t j = free_.size(); j-- > 0;)
      suffix_weight_[j] = suffix_weight_[j + 1] + g.arc(free_[j]).weight;
  }

  DindpResult run() {
    DindpResult out;
    const double left = inst_.beta - fixed_weight_;
    if (left >= -kFeasibilityTolerance) {
      for (ArcId e : free_) mask_[static_cast<std::size_t>(e)] = true;
      search(0, left, kInfinity);
    }
    std::vector<ArcId> ids;
    const std::vector<bool>& chosen = found_ ? best_mask_ : mask_;
    if (!found_)
      for (ArcId e : free_) mask_[static_cast<std::size_t>(e)] = false;
    for (std::size_t e = 0; e < chosen.size(); ++e)
      if (chosen[e]) ids.push_back(static_cast<ArcId>(e));
    out.arcs = ArcSubset(inst_.graph, std::move(ids));
    out.routing_cost = found_ ? best_ : eval_.cost(chosen);
    out.decision = out.arcs.weight(inst_.graph) <= inst_.beta + kFeasibilityTolerance &&
                   out.routing_cost <= inst_.gamma + kFeasibilityTolerance;
    return out;
  }

 private:
  // mask_ holds chosen arcs plus every undecided arc from idx on.
  void search(std::size_t idx, double left, double min_excluded) {
    if (stop_) return;
    if (++nodes_ > limits_.max_nodes) over_budget("network design search exceeded the node limit");
    const double bound = eval_.cost(mask_);
    if (bound == kInfinity) return;
    if (decide_ ? bound > inst_.gamma + kFeasibilityTolerance : (found_ && bound >= best_)) return;
    if (idx == free_.size() || suffix_weight_[idx] <= left + kFeasibilityTolerance) {
      if (min_excluded <= left - suffix_weight_[idx] + kFeasibilityTolerance) return;  // not maximal
      found_ = true;
      best_ = bound;
      best_mask_ = mask_;
      if (decide_) stop_ = true;
      return;
    }
    const ArcId e = free_[idx];
    const double w = inst_.graph.arc(e).weight;
    if (w <= left + kFeasibilityTolerance) search(idx + 1, left - w, min_excluded);
    mask_[static_cast<std::size_t>(e)] = false;
    search(idx + 1, left, std::min(min_excluded, w));
    mask_[static_cast<std::size_t>(e)] = true;
  }

  const DindpInstance& inst_;
  const DindpLimits& limits_;
  bool decide_;
  RoutingEvaluator eval_;
  std::vector<bool> mask_;
  std::vector<ArcId> free_;
  std::vector<double> suffix_weight_;
  double fixed_weight_ = 0.0;
  bool found_ = false;
  bool stop_ = false;
  double best_ = kInfinity;
  std::vector<bool> best_mask_;
  std::int64_t nodes_ = 0;
};

}  // namespace

DindpResult dindp_brute_force(const DindpInstance& inst, const DindpLimits& limits) {
  return DindpSearch(inst, limits, false).run();
}

DindpResult dindp_decide(const DindpInstance& inst, const DindpLimits& limits) {
  return DindpSearch(inst, limits, true).run();
}

// ---------------------------------------------------------------------------
// DiSTP oracle

namespace {

bool reaches_terminals(const DistpInstance& inst, const std::vector<bool>& mask) {
  const auto dist = single_source_distances(inst.graph, inst.root, Orientation::Outbound, mask);
  return std::all_of(inst.terminals.begin(), inst.terminals.end(),
                     [&dist](NodeId t) { return dist[static_cast<std::size_t>(t)] != kInfinity; });
}

bool distp_search(const DistpInstance& inst, std::size_t e, double left, std::vector<bool>& mask) {
  if (!reaches_terminals(inst, mask)) return false;
  if (e == mask.size()) return true;
  mask[e] = false;
  if (distp_search(inst, e + 1, left, mask)) return true;
  mask[e] = true;
  const double w = inst.graph.arc(static_cast<ArcId>(e)).weight;
  return w <= left + kFeasibilityTolerance && distp_search(inst, e + 1, left - w, mask);
}

}  // namespace

DistpResult distp_brute_force(const DistpInstance& inst, int max_arcs) {
  if (inst.graph.arc_count() > max_arcs)
    over_budget(std::to_string(inst.graph.arc_count()) + " arcs exceed the cap of " + std::to_string(max_arcs));
  DistpResult out;
  // arcs are dropped first, so the witness is inclusion-minimal
  std::vector<bool> trial(static_cast<std::size_t>(inst.graph.arc_count()), true);
  if (distp_search(inst, 0, inst.budget, trial)) {
    out.feasible = true;
    std::vector<ArcId> ids;
    for (std::size_t e = 0; e < trial.size(); ++e)
      if (trial[e]) ids.push_back(static_cast<ArcId>(e));
    out.arcs = ArcSubset(inst.graph, std::move(ids));
  }
  return out;
}

}  // namespace msp
