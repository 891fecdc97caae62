#include "msp/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <utility>

#include "msp/error.hpp"

namespace msp {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidGraph: return "InvalidGraph";
    case ErrorCode::InvalidInstance: return "InvalidInstance";
    case ErrorCode::UnreachableNode: return "UnreachableNode";
    case ErrorCode::NotStronglyConnected: return "NotStronglyConnected";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::UnroutableCommodity: return "UnroutableCommodity";
    case ErrorCode::WeightsNotIntegral: return "WeightsNotIntegral";
    case ErrorCode::CapacityTooLargeForDp: return "CapacityTooLargeForDp";
    case ErrorCode::InvalidEpsilon: return "InvalidEpsilon";
    case ErrorCode::SearchBudgetExceeded: return "SearchBudgetExceeded";
    case ErrorCode::PremiseViolated: return "PremiseViolated";
    case ErrorCode::NonIntegralFlow: return "NonIntegralFlow";
    case ErrorCode::WrongModeCount: return "WrongModeCount";
    case ErrorCode::BudgetExceedsSamplingRange: return "BudgetExceedsSamplingRange";
    case ErrorCode::LayoutNotSingleMode: return "LayoutNotSingleMode";
    case ErrorCode::NonUnitWeights: return "NonUnitWeights";
    case ErrorCode::MalformedX3c: return "MalformedX3c";
    case ErrorCode::GadgetTooLarge: return "GadgetTooLarge";
    case ErrorCode::UnboundedObjective: return "UnboundedObjective";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

MspInstance::MspInstance(Digraph graph, std::vector<Mode> modes, std::vector<Commodity> demand,
                         double budget, std::optional<DecisionBounds> bounds)
    : graph_(std::move(graph)), modes_(std::move(modes)), budget_(budget), bounds_(bounds) {
  if (modes_.empty()) throw Error(ErrorCode::InvalidInstance, "mode 0 is required");
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    const Mode& m = modes_[i];
    if (!std::isfinite(m.tau) || !std::isfinite(m.eta) || !std::isfinite(m.cost) || m.tau < 0 ||
        m.eta < 0 || m.cost < 0)
      throw Error(ErrorCode::InvalidInstance, "mode " + std::to_string(i) + " has negative or non-finite data");
    if (m.capacity < 1)
      throw Error(ErrorCode::InvalidInstance, "mode " + std::to_string(i) + " needs capacity >= 1");
  }
  if (modes_[0].cost != 0.0 || modes_[0].capacity != 1)
    throw Error(ErrorCode::InvalidInstance, "mode 0 must have cost 0 and capacity 1");
  if (!std::isfinite(budget_) || budget_ < 0) throw Error(ErrorCode::InvalidInstance, "budget must be >= 0");

  std::map<std::pair<NodeId, NodeId>, std::int64_t> merged;
  for (const Commodity& c : demand) {
    if (c.source < 0 || c.source >= graph_.node_count() || c.target < 0 || c.target >= graph_.node_count())
      throw Error(ErrorCode::InvalidInstance, "demand endpoint outside the node range");
    if (c.demand < 0) throw Error(ErrorCode::InvalidInstance, "negative demand");
    if (c.demand == 0) continue;
    if (c.source == c.target) throw Error(ErrorCode::InvalidInstance, "demand diagonal must be zero");
    if (!merged.emplace(std::make_pair(c.source, c.target), c.demand).second)
      throw Error(ErrorCode::InvalidInstance, "duplicate demand entry " + std::to_string(c.source) + "->" +
                                                  std::to_string(c.target));
  }
  for (const auto& [st, d] : merged) commodities_.push_back({st.first, st.second, d});
}

std::int64_t MspInstance::total_demand() const {
  std::int64_t total = 0;
  for (const Commodity& c : commodities_) total += c.demand;
  return total;
}

Layout Layout::zero(int arc_count, int public_modes) {
  Layout l;
  l.vehicles.assign(static_cast<std::size_t>(arc_count),
                    std::vector<double>(static_cast<std::size_t>(public_modes), 0.0));
  return l;
}

bool Layout::is_zero() const {
  for (const auto& row : vehicles)
    for (double v : row)
      if (v != 0.0) return false;
  return true;
}

std::vector<ArcAggregate> aggregate_flow(const Solution& sol, int public_modes) {
  const std::size_t modes = static_cast<std::size_t>(public_modes) + 1;
  const std::size_t arcs = sol.layout.vehicles.size();
  std::vector<ArcAggregate> out(arcs);
  for (auto& a : out) a.passengers.assign(modes, 0.0);
  for (std::size_t k = 0; k < sol.flows.size(); ++k) {
    for (std::size_t e = 0; e < arcs; ++e) {
      const double f = sol.flows[k].arc_flow[e];
      if (f == 0.0) continue;
      out[e].flow += f;
      for (std::size_t i = 0; i < modes; ++i) out[e].passengers[i] += f * sol.split[k][e][i];
    }
  }
  for (auto& a : out) {
    a.split.assign(modes, 0.0);
    if (a.flow > 0.0) {
      for (std::size_t i = 0; i < modes; ++i) a.split[i] = a.passengers[i] / a.flow;
    } else {
      a.split[0] = 1.0;
    }
  }
  return out;
}

namespace {

std::string structure_problem(const Solution& sol, const MspInstance& inst) {
  const std::size_t arcs = static_cast<std::size_t>(inst.graph().arc_count());
  const std::size_t m = static_cast<std::size_t>(inst.public_mode_count());
  if (sol.layout.vehicles.size() != arcs) return "layout covers a different number of arcs";
  for (const auto& row : sol.layout.vehicles)
    if (row.size() != m) return "layout has a wrong number of public modes";
  if (sol.split.size() != sol.flows.size()) return "split and flows list different commodities";
  for (std::size_t k = 0; k < sol.flows.size(); ++k) {
    if (sol.flows[k].arc_flow.size() != arcs) return "flow of commodity " + std::to_string(k) + " has wrong size";
    if (sol.split[k].size() != arcs) return "split of commodity " + std::to_string(k) + " has wrong size";
    for (const auto& v : sol.split[k])
      if (v.size() != m + 1) return "split of commodity " + std::to_string(k) + " has a wrong mode count";
  }
  return {};
}

}  // namespace

ObjectivePoint evaluate(const Solution& sol, const MspInstance& inst) {
  if (const std::string problem = structure_problem(sol, inst); !problem.empty())
    throw Error(ErrorCode::DimensionMismatch, problem);
  const int m = inst.public_mode_count();
  const auto agg = aggregate_flow(sol, m);
  ObjectivePoint p;
  for (ArcId e = 0; e < inst.graph().arc_count(); ++e) {
    const double w = inst.graph().arc(e).weight;
    const ArcAggregate& a = agg[static_cast<std::size_t>(e)];
    double time = 0.0;
    for (int i = 0; i <= m; ++i) time += inst.mode(i).tau * a.passengers[static_cast<std::size_t>(i)];
    double energy = inst.mode(0).eta * a.passengers[0];
    for (int i = 1; i <= m; ++i) energy += inst.mode(i).eta * sol.layout.at(e, i);
    p.travel_time += w * time;
    p.energy += w * energy;
  }
  return p;
}

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::Structure: return "structure";
    case ViolationKind::Budget: return "budget";
    case ViolationKind::Conservation: return "conservation";
    case ViolationKind::Capacity: return "capacity";
    case ViolationKind::SplitSum: return "split-sum";
    case ViolationKind::SplitRange: return "split-range";
    case ViolationKind::Negative: return "negative";
    case ViolationKind::Integrality: return "integrality";
  }
  return "unknown";
}

std::vector<Violation> check_feasibility(const Solution& sol, const MspInstance& inst) {
  constexpr double tol = kFeasibilityTolerance;
  std::vector<Violation> out;
  if (const std::string problem = structure_problem(sol, inst); !problem.empty()) {
    out.push_back({ViolationKind::Structure, -1, -1, -1, 0.0, problem});
    return out;
  }
  const Digraph& g = inst.graph();
  const int m = inst.public_mode_count();
  const auto& commodities = inst.commodities();
  if (sol.flows.size() != commodities.size()) {
    out.push_back({ViolationKind::Structure, -1, -1, -1, 0.0,
                   "solution routes " + std::to_string(sol.flows.size()) + " commodities, instance has " +
                       std::to_string(commodities.size())});
    return out;
  }
  for (std::size_t k = 0; k < commodities.size(); ++k) {
    if (!(sol.flows[k].commodity == commodities[k])) {
      out.push_back({ViolationKind::Structure, -1, static_cast<int>(k), -1, 0.0,
                     "commodity " + std::to_string(k) + " does not match the instance demand"});
      return out;
    }
  }

  double spent = 0.0;
  for (ArcId e = 0; e < g.arc_count(); ++e) {
    for (int i = 1; i <= m; ++i) {
      const double l = sol.layout.at(e, i);
      spent += g.arc(e).weight * inst.mode(i).cost * l;
      if (l < -tol) {
        out.push_back({ViolationKind::Negative, e, -1, -1, -l,
                       "negative vehicle count on arc " + std::to_string(e) + " mode " + std::to_string(i)});
      }
      if (!sol.layout.relaxed && std::abs(l - std::round(l)) > tol) {
        out.push_back({ViolationKind::Integrality, e, -1, -1, std::abs(l - std::round(l)),
                       "fractional vehicle count on arc " + std::to_string(e) + " mode " + std::to_string(i)});
      }
    }
  }
  if (spent - inst.budget() > tol) {
    std::ostringstream msg;
    msg << "budget exceeded: spent " << spent << " > B = " << inst.budget();
    out.push_back({ViolationKind::Budget, -1, -1, -1, spent - inst.budget(), msg.str()});
  }

  for (std::size_t k = 0; k < commodities.size(); ++k) {
    const Commodity& c = commodities[k];
    const auto& flow = sol.flows[k].arc_flow;
    std::vector<double> divergence(static_cast<std::size_t>(g.node_count()), 0.0);
    for (ArcId e = 0; e < g.arc_count(); ++e) {
      const double f = flow[static_cast<std::size_t>(e)];
      if (f < -tol) {
        out.push_back({ViolationKind::Negative, e, static_cast<int>(k), -1, -f,
                       "negative flow of commodity " + std::to_string(k) + " on arc " + std::to_string(e)});
      }
      divergence[static_cast<std::size_t>(g.arc(e).head)] += f;
      divergence[static_cast<std::size_t>(g.arc(e).tail)] -= f;
      if (f > tol) {
        const auto& split = sol.split[k][static_cast<std::size_t>(e)];
        double sum = 0.0;
        for (int i = 0; i <= m; ++i) {
          const double x = split[static_cast<std::size_t>(i)];
          sum += x;
          if (x < -tol || x > 1.0 + tol) {
            out.push_back({ViolationKind::SplitRange, e, static_cast<int>(k), -1, x < 0 ? -x : x - 1.0,
                           "split fraction outside [0,1] for commodity " + std::to_string(k) + " on arc " +
                               std::to_string(e)});
          }
        }
        if (std::abs(sum - 1.0) > tol) {
          out.push_back({ViolationKind::SplitSum, e, static_cast<int>(k), -1, std::abs(sum - 1.0),
                         "split of commodity " + std::to_string(k) + " on arc " + std::to_string(e) +
                             " does not sum to 1"});
        }
      }
    }
    const auto d = static_cast<double>(c.demand);
    for (NodeId v = 0; v < g.node_count(); ++v) {
      const double expected = v == c.target ? d : (v == c.source ? -d : 0.0);
      const double residual = divergence[static_cast<std::size_t>(v)] - expected;
      if (std::abs(residual) > tol) {
        std::ostringstream msg;
        msg << "conservation violated for commodity " << k << " at node " << v << " (residual " << residual << ")";
        out.push_back({ViolationKind::Conservation, -1, static_cast<int>(k), v, std::abs(residual), msg.str()});
      }
    }
  }

  const auto agg = aggregate_flow(sol, m);
  for (ArcId e = 0; e < g.arc_count(); ++e) {
    for (int i = 1; i <= m; ++i) {
      const double load = agg[static_cast<std::size_t>(e)].passengers[static_cast<std::size_t>(i)];
      const double cap = static_cast<double>(inst.mode(i).capacity) * sol.layout.at(e, i);
      if (load - cap > tol) {
        std::ostringstream msg;
        msg << "capacity violated on arc " << e << " mode " << i << ": load " << load << " exceeds "
            << cap << " (residual " << load - cap << ")";
        out.push_back({ViolationKind::Capacity, e, -1, -1, load - cap, msg.str()});
      }
    }
  }
  return out;
}

Digraph weight_metric(const Digraph& g) {
  std::vector<Arc> arcs(g.arcs().begin(), g.arcs().end());
  for (Arc& a : arcs) a.length = a.weight;
  return Digraph(g.node_count(), std::move(arcs));
}

std::vector<CommodityFlow> shortest_path_flow(const MspInstance& inst) {
  const Digraph metric = weight_metric(inst.graph());
  std::vector<CommodityFlow> flows;
  for (const Commodity& c : inst.commodities()) {
    const auto path = shortest_path(metric, c.source, c.target);
    if (!path)
      throw Error(ErrorCode::UnroutableCommodity,
                  "no path from " + std::to_string(c.source) + " to " + std::to_string(c.target));
    CommodityFlow f{c, std::vector<double>(static_cast<std::size_t>(metric.arc_count()), 0.0)};
    for (ArcId a : *path) f.arc_flow[static_cast<std::size_t>(a)] += static_cast<double>(c.demand);
    flows.push_back(std::move(f));
  }
  return flows;
}

std::vector<double> aggregate_arc_flow(const std::vector<CommodityFlow>& flows, int arc_count) {
  std::vector<double> total(static_cast<std::size_t>(arc_count), 0.0);
  for (const auto& f : flows)
    for (std::size_t e = 0; e < total.size(); ++e) total[e] += f.arc_flow[e];
  return total;
}

double weighted_flow(const MspInstance& inst, const std::vector<CommodityFlow>& flows) {
  const auto total = aggregate_arc_flow(flows, inst.graph().arc_count());
  double sum = 0.0;
  for (ArcId e = 0; e < inst.graph().arc_count(); ++e) sum += inst.graph().arc(e).weight * total[static_cast<std::size_t>(e)];
  return sum;
}

Solution solution_from_loads(const MspInstance& inst, std::vector<CommodityFlow> flows, Layout layout,
                             const std::vector<std::vector<double>>& loads) {
  const int m = inst.public_mode_count();
  const int arcs = inst.graph().arc_count();
  const auto total = aggregate_arc_flow(flows, arcs);
  std::vector<std::vector<double>> per_arc(static_cast<std::size_t>(arcs),
                                           std::vector<double>(static_cast<std::size_t>(m) + 1, 0.0));
  for (std::size_t e = 0; e < per_arc.size(); ++e) {
    per_arc[e][0] = 1.0;
    if (total[e] <= 0.0) continue;
    double public_share = 0.0;
    for (int i = 1; i <= m; ++i) {
      const double x = loads[e][static_cast<std::size_t>(i - 1)] / total[e];
      per_arc[e][static_cast<std::size_t>(i)] = x;
      public_share += x;
    }
    per_arc[e][0] = 1.0 - public_share;
  }
  Solution sol;
  sol.split.assign(flows.size(), per_arc);
  sol.flows = std::move(flows);
  sol.layout = std::move(layout);
  return sol;
}

Solution all_mode0_solution(const MspInstance& inst, std::vector<CommodityFlow> flows) {
  const int arcs = inst.graph().arc_count();
  const int m = inst.public_mode_count();
  std::vector<std::vector<double>> loads(static_cast<std::size_t>(arcs),
                                         std::vector<double>(static_cast<std::size_t>(m), 0.0));
  return solution_from_loads(inst, std::move(flows), Layout::zero(arcs, m), loads);
}

bool dominates(const ObjectivePoint& p, const ObjectivePoint& q) {
  return p.travel_time <= q.travel_time && p.energy <= q.energy &&
         (p.travel_time < q.travel_time || p.energy < q.energy);
}

bool meets_bounds(const ObjectivePoint& p, const MspInstance& inst, double tolerance) {
  if (!inst.bounds()) return true;
  return p.travel_time <= inst.bounds()->travel_time + tolerance &&
         p.energy <= inst.bounds()->energy + tolerance;
}

}  // namespace msp
