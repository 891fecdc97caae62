#include <cmath>
#include <string>

#include "msp/error.hpp"
#include "msp/solvers.hpp"

namespace msp {

ArcSubset dindp_two_approx(const Digraph& g) {
  return shortest_path_subgraph(g, central_node(g));
}

namespace {

void require(bool ok, const std::string& condition) {
  if (!ok) throw Error(ErrorCode::PremiseViolated, condition);
}

}  // namespace

Solution msp_two_approx_extreme(const MspInstance& inst) {
  const Digraph& g = inst.graph();
  const auto n = static_cast<std::int64_t>(g.node_count());
  require(inst.public_mode_count() == 1, "m = 1");
  const Mode& m0 = inst.mode(0);
  const Mode& m1 = inst.mode(1);
  require(m1.capacity >= (n - 1) * (n - 1), "k_1 >= (|V|-1)^2");
  require(m1.cost <= 1.0, "c_1 <= 1");
  require(inst.budget() >= static_cast<double>(g.arc_count()), "B >= |E|");
  for (const Arc& a : g.arcs()) require(a.weight == 1.0, "w(e) = 1 for all arcs");
  require(m0.eta > m1.eta, "eta_0 > eta_1");
  require(static_cast<std::int64_t>(inst.commodities().size()) == n * (n - 1), "D(s,t) = 1 for all s != t");
  for (const Commodity& c : inst.commodities()) require(c.demand == 1, "D(s,t) = 1 for all s != t");

  const Digraph metric = weight_metric(g);
  const ArcSubset ev = dindp_two_approx(metric);
  const std::vector<bool> mask = ev.mask(g);

  std::vector<CommodityFlow> flows;
  for (const Commodity& c : inst.commodities()) {
    CommodityFlow f{c, std::vector<double>(static_cast<std::size_t>(g.arc_count()), 0.0)};
    const auto path = shortest_path(metric, c.source, c.target, mask);
    if (!path) throw Error(ErrorCode::UnroutableCommodity, "no path inside the shortest path subgraph");
    for (ArcId e : *path) f.arc_flow[static_cast<std::size_t>(e)] += static_cast<double>(c.demand);
    flows.push_back(std::move(f));
  }

  Layout layout = Layout::zero(g.arc_count(), 1);
  for (ArcId e : ev.ids()) layout.at(e, 1) = 1.0;
  Solution sol;
  sol.layout = std::move(layout);
  sol.split.resize(flows.size());
  for (std::size_t k = 0; k < flows.size(); ++k) {
    sol.split[k].assign(static_cast<std::size_t>(g.arc_count()), {1.0, 0.0});
    for (ArcId e : ev.ids()) sol.split[k][static_cast<std::size_t>(e)] = {0.0, 1.0};
  }
  sol.flows = std::move(flows);

  const auto violations = check_feasibility(sol, inst);
  if (!violations.empty()) throw Error(ErrorCode::PremiseViolated, "certificate failed: " + violations.front().message);
  return sol;
}

}  // namespace msp
