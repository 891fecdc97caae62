#include <algorithm>
#include <cmath>
#include <string>

#include "msp/error.hpp"
#include "msp/solvers.hpp"

namespace msp {

namespace {

std::int64_t integral_flow(double f, ArcId e) {
  if (f < 0.0 || std::abs(f - std::round(f)) > kFeasibilityTolerance)
    throw Error(ErrorCode::NonIntegralFlow, "flow on arc " + std::to_string(e) + " is " + std::to_string(f));
  return std::llround(f);
}

double weighted_sum(const Digraph& g, const std::vector<double>& flow) {
  double s = 0.0;
  for (ArcId e = 0; e < g.arc_count(); ++e) s += g.arc(e).weight * flow[static_cast<std::size_t>(e)];
  return s;
}

}  // namespace

KnapsackInstance fixed_flow_items_single_mode(const MspInstance& inst, const std::vector<double>& flow) {
  if (inst.public_mode_count() != 1)
    throw Error(ErrorCode::WrongModeCount, "single-mode construction needs m = 1, got " +
                                               std::to_string(inst.public_mode_count()));
  const Digraph& g = inst.graph();
  const Mode& m0 = inst.mode(0);
  const Mode& m1 = inst.mode(1);
  const std::int64_t k = m1.capacity;
  KnapsackInstance ks;
  ks.bounds = {inst.budget()};
  for (ArcId e = 0; e < g.arc_count(); ++e) {
    const std::int64_t f = integral_flow(flow[static_cast<std::size_t>(e)], e);
    if (f == 0) continue;
    const double w = g.arc(e).weight;
    const std::int64_t full = f / k;
    const std::int64_t rest = f - full * k;
    if (full > 0)
      ks.items.push_back({w * (static_cast<double>(k) * m0.eta - m1.eta), {w * m1.cost}, full,
                          {e, 1, static_cast<double>(k)}});
    if (rest > 0 && static_cast<double>(rest) * m0.eta >= m1.eta)
      ks.items.push_back({w * (static_cast<double>(rest) * m0.eta - m1.eta), {w * m1.cost}, 1,
                          {e, 1, static_cast<double>(rest)}});
  }
  return ks;
}

KnapsackInstance fixed_flow_items_multi_mode(const MspInstance& inst, const std::vector<double>& flow) {
  const Digraph& g = inst.graph();
  const int m = inst.public_mode_count();
  const Mode& m0 = inst.mode(0);
  const auto r = static_cast<std::size_t>(g.arc_count()) + 1;
  KnapsackInstance ks;
  ks.bounds.assign(r, 0.0);
  ks.bounds[0] = inst.budget();
  std::vector<std::int64_t> f(static_cast<std::size_t>(g.arc_count()));
  for (ArcId e = 0; e < g.arc_count(); ++e) {
    f[static_cast<std::size_t>(e)] = integral_flow(flow[static_cast<std::size_t>(e)], e);
    ks.bounds[static_cast<std::size_t>(e) + 1] = static_cast<double>(f[static_cast<std::size_t>(e)]);
  }
  auto add = [&](ArcId e, int i, std::int64_t load, std::int64_t copies) {
    const Mode& mi = inst.mode(i);
    const double w = g.arc(e).weight;
    const double value = w * (static_cast<double>(load) * m0.eta - mi.eta);
    if (value < 0.0 || copies <= 0) return;
    KnapsackItem item{value, std::vector<double>(r, 0.0), copies, {e, i, static_cast<double>(load)}};
    item.weights[0] = w * mi.cost;
    item.weights[static_cast<std::size_t>(e) + 1] = static_cast<double>(load);
    ks.items.push_back(std::move(item));
  };
  for (int i = 1; i <= m; ++i) {
    const Mode& mi = inst.mode(i);
    for (ArcId e = 0; e < g.arc_count(); ++e) {
      const std::int64_t fe = f[static_cast<std::size_t>(e)];
      if (fe == 0) continue;
      add(e, i, mi.capacity, fe / mi.capacity);
      // smallest load that pays off: ceil(eta_i / eta_0)
      std::int64_t lo = 1;
      if (m0.eta > 0.0) lo = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(mi.eta / m0.eta - 1e-12)));
      else if (mi.eta > 0.0) continue;
      for (std::int64_t load = lo; load <= std::min(mi.capacity, fe); ++load) add(e, i, load, 1);
    }
  }
  return ks;
}

double fixed_flow_energy_floor(const MspInstance& inst, const std::vector<double>& flow) {
  double rate = inst.mode(0).eta;
  for (int i = 1; i <= inst.public_mode_count(); ++i)
    rate = std::min(rate, inst.mode(i).eta / static_cast<double>(inst.mode(i).capacity));
  return rate * weighted_sum(inst.graph(), flow);
}

Solution fixed_flow_optimize(const MspInstance& inst, const std::vector<CommodityFlow>& flows, double epsilon,
                             const KnapsackLimits& limits) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw Error(ErrorCode::InvalidEpsilon, "epsilon must lie in (0,1), got " + std::to_string(epsilon));
  const Digraph& g = inst.graph();
  const int m = inst.public_mode_count();
  const std::vector<double> flow = aggregate_arc_flow(flows, g.arc_count());
  if (m == 0) {
    for (ArcId e = 0; e < g.arc_count(); ++e) integral_flow(flow[static_cast<std::size_t>(e)], e);
    return all_mode0_solution(inst, flows);
  }

  KnapsackInstance ks;
  Selection sel;
  if (m == 1) {
    ks = fixed_flow_items_single_mode(inst, flow);
    const double top = inst.mode(0).eta * weighted_sum(g, flow);
    const double floor = fixed_flow_energy_floor(inst, flow);
    if (top <= floor) return all_mode0_solution(inst, flows);
    const double delta = epsilon * floor / (top - floor);
    if (delta <= 0.0)
      sel = kps_exact(ks, limits);
    else
      sel = kps_fptas(ks, std::min(delta, 0.5), limits);
  } else {
    ks = fixed_flow_items_multi_mode(inst, flow);
    sel = mkps_exact(ks, limits);
  }

  Layout layout = Layout::zero(g.arc_count(), m);
  std::vector<std::vector<double>> loads(static_cast<std::size_t>(g.arc_count()),
                                         std::vector<double>(static_cast<std::size_t>(m), 0.0));
  for (std::size_t j = 0; j < ks.items.size(); ++j) {
    const std::int64_t count = sel.counts[j];
    if (count == 0) continue;
    const ItemTag& tag = ks.items[j].tag;
    layout.at(tag.arc, tag.mode) += static_cast<double>(count);
    loads[static_cast<std::size_t>(tag.arc)][static_cast<std::size_t>(tag.mode - 1)] +=
        static_cast<double>(count) * tag.passengers;
  }
  return solution_from_loads(inst, flows, std::move(layout), loads);
}

}  // namespace msp
