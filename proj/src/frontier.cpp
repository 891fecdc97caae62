#include <algorithm>
#include <cmath>
#include <string>

#include "msp/error.hpp"
#include "msp/solvers.hpp"

namespace msp {

namespace {

bool integral(double x) { return std::abs(x) < 1e15 && x == std::floor(x); }

// Compares a/b with c/d for b, d > 0. Returns -1, 0, 1.
int compare_fractions(double a, double b, double c, double d) {
  if (integral(a) && integral(b) && integral(c) && integral(d)) {
    const __int128 lhs = static_cast<__int128>(a) * static_cast<__int128>(d);
    const __int128 rhs = static_cast<__int128>(c) * static_cast<__int128>(b);
    return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
  }
  const long double lhs = static_cast<long double>(a) * d;
  const long double rhs = static_cast<long double>(c) * b;
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

// tau_i k_i / eta_i as a fraction; eta = 0 reads as +infinity.
int compare_ratio(const Mode& x, const Mode& y) {
  const double kx = static_cast<double>(x.capacity);
  const double ky = static_cast<double>(y.capacity);
  if (x.eta == 0.0 && y.eta == 0.0) return 0;
  if (x.eta == 0.0) return 1;
  if (y.eta == 0.0) return -1;
  return compare_fractions(x.tau * kx, x.eta, y.tau * ky, y.eta);
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void check_mode_ordering(const std::vector<Mode>& modes) {
  const int m = static_cast<int>(modes.size()) - 1;
  if (m < 1) throw Error(ErrorCode::PremiseViolated, "at least one public mode is required");
  for (int i = 1; i <= m; ++i)
    if (modes[static_cast<std::size_t>(i)].tau < modes[0].tau)
      throw Error(ErrorCode::PremiseViolated, "tau_0 <= tau_" + std::to_string(i) + " fails: " + fmt(modes[0].tau) +
                                                  " > " + fmt(modes[static_cast<std::size_t>(i)].tau));
  for (int i = 0; i < m; ++i)
    if (compare_ratio(modes[static_cast<std::size_t>(i)], modes[static_cast<std::size_t>(i) + 1]) > 0)
      throw Error(ErrorCode::PremiseViolated, "tau_i k_i / eta_i non-decreasing fails between modes " +
                                                  std::to_string(i) + " and " + std::to_string(i + 1));
  const Mode& last = modes.back();
  for (int i = 1; i < m; ++i) {
    const Mode& mi = modes[static_cast<std::size_t>(i)];
    if (compare_ratio(mi, last) != 0) continue;
    if (compare_fractions(last.cost, static_cast<double>(last.capacity), mi.cost, static_cast<double>(mi.capacity)) > 0)
      throw Error(ErrorCode::PremiseViolated, "c_m/k_m <= c_" + std::to_string(i) + "/k_" + std::to_string(i) +
                                                  " fails for a mode tying the last ratio");
  }
}

Segment relaxation_segment(const MspInstance& inst) {
  check_mode_ordering(inst.modes());
  const auto flows = shortest_path_flow(inst);
  const double s = weighted_flow(inst, flows);
  const Mode& m0 = inst.mode(0);
  const Mode& mm = inst.modes().back();
  const double k = static_cast<double>(mm.capacity);
  Segment seg;
  seg.p0 = {s * m0.tau, s * m0.eta};
  seg.p1 = {s * mm.tau, s * mm.eta / k};
  const double x = s * mm.cost / k;
  seg.delta = x == 0.0 ? 1.0 : std::min(inst.budget(), x) / x;
  return seg;
}

std::vector<ObjectivePoint> directional_vectors(const std::vector<Mode>& modes) {
  std::vector<ObjectivePoint> out;
  for (std::size_t i = 1; i < modes.size(); ++i)
    out.push_back({modes[i].tau - modes[0].tau, modes[i].eta / static_cast<double>(modes[i].capacity) - modes[0].eta});
  return out;
}

std::vector<bool> slope_not_steeper(const std::vector<Mode>& modes) {
  // v_i = (tau_i - tau_0, (eta_i - eta_0 k_i) / k_i); compare dy/dx exactly.
  const Mode& m0 = modes.at(0);
  const Mode& mm = modes.back();
  const double km = static_cast<double>(mm.capacity);
  const double dxm = (mm.tau - m0.tau) * km;
  const double dym = mm.eta - m0.eta * km;
  std::vector<bool> out;
  for (std::size_t i = 1; i < modes.size(); ++i) {
    const double ki = static_cast<double>(modes[i].capacity);
    const double dx = (modes[i].tau - m0.tau) * ki;
    const double dy = modes[i].eta - m0.eta * ki;
    if (dxm <= 0.0) {
      // vertical reference: nothing is steeper unless it also points straight down
      out.push_back(!(dx <= 0.0 && dy < 0.0 && dym >= 0.0));
      continue;
    }
    if (dx <= 0.0) {
      out.push_back(dy >= 0.0);
      continue;
    }
    out.push_back(compare_fractions(dy, dx, dym, dxm) >= 0);
  }
  return out;
}

double sampling_budget_limit(const MspInstance& inst) {
  const Mode& mm = inst.modes().back();
  const auto flows = shortest_path_flow(inst);
  const auto flow = aggregate_arc_flow(flows, inst.graph().arc_count());
  double full = 0.0;
  for (ArcId e = 0; e < inst.graph().arc_count(); ++e)
    full += inst.graph().arc(e).weight *
            std::floor(flow[static_cast<std::size_t>(e)] / static_cast<double>(mm.capacity) + 1e-12);
  return mm.cost * full;
}

Solution frontier_sample(const MspInstance& inst, double budget_point, double epsilon, const KnapsackLimits& limits) {
  check_mode_ordering(inst.modes());
  const double limit = sampling_budget_limit(inst);
  if (budget_point < 0.0 || budget_point > limit + kFeasibilityTolerance ||
      budget_point > inst.budget() + kFeasibilityTolerance)
    throw Error(ErrorCode::BudgetExceedsSamplingRange, "budget point " + fmt(budget_point) + " outside [0, " +
                                                           fmt(std::min(limit, inst.budget())) + "]");
  const Digraph& g = inst.graph();
  const int m = inst.public_mode_count();
  const Mode& m0 = inst.mode(0);
  const Mode& mm = inst.mode(m);
  auto flows = shortest_path_flow(inst);
  const auto flow = aggregate_arc_flow(flows, g.arc_count());

  KnapsackInstance ks;
  ks.bounds = {budget_point};
  for (ArcId e = 0; e < g.arc_count(); ++e) {
    const auto copies = static_cast<std::int64_t>(
        std::floor(flow[static_cast<std::size_t>(e)] / static_cast<double>(mm.capacity) + 1e-12));
    const double w = g.arc(e).weight;
    const double value = w * (static_cast<double>(mm.capacity) * m0.eta - mm.eta);
    if (copies == 0 || value <= 0.0) continue;
    ks.items.push_back({value, {w * mm.cost}, copies, {e, m, static_cast<double>(mm.capacity)}});
  }
  const Selection sel = epsilon == 0.0 ? kps_exact(ks, limits) : kps_fptas(ks, epsilon, limits);

  Layout layout = Layout::zero(g.arc_count(), m);
  std::vector<std::vector<double>> loads(static_cast<std::size_t>(g.arc_count()),
                                         std::vector<double>(static_cast<std::size_t>(m), 0.0));
  for (std::size_t j = 0; j < ks.items.size(); ++j) {
    const ItemTag& tag = ks.items[j].tag;
    layout.at(tag.arc, m) = static_cast<double>(sel.counts[j]);
    loads[static_cast<std::size_t>(tag.arc)][static_cast<std::size_t>(m - 1)] =
        static_cast<double>(sel.counts[j]) * tag.passengers;
  }
  return solution_from_loads(inst, std::move(flows), std::move(layout), loads);
}

Solution full_acceptance(const MspInstance& inst, const Solution& sol) {
  const int m = inst.public_mode_count();
  const int arcs = inst.graph().arc_count();
  const auto flow = aggregate_arc_flow(sol.flows, arcs);
  std::vector<std::vector<double>> loads(static_cast<std::size_t>(arcs),
                                         std::vector<double>(static_cast<std::size_t>(m), 0.0));
  for (ArcId e = 0; e < arcs; ++e) {
    double left = flow[static_cast<std::size_t>(e)];
    for (int i = 1; i <= m; ++i) {
      const double seats = static_cast<double>(inst.mode(i).capacity) * sol.layout.at(e, i);
      const double take = std::min(left, seats);
      loads[static_cast<std::size_t>(e)][static_cast<std::size_t>(i - 1)] = take;
      left -= take;
    }
  }
  return solution_from_loads(inst, sol.flows, sol.layout, loads);
}

Segment patch_segment(const MspInstance& inst, const Solution& sol) {
  const Digraph& g = inst.graph();
  const int m = inst.public_mode_count();
  if (m < 1) throw Error(ErrorCode::LayoutNotSingleMode, "no public mode");
  for (ArcId e = 0; e < g.arc_count(); ++e)
    for (int i = 1; i < m; ++i)
      if (sol.layout.at(e, i) != 0.0)
        throw Error(ErrorCode::LayoutNotSingleMode, "arc " + std::to_string(e) + " has vehicles of mode " +
                                                        std::to_string(i));
  const Mode& m0 = inst.mode(0);
  const Mode& mm = inst.mode(m);
  const auto flow = aggregate_arc_flow(sol.flows, g.arc_count());
  double s = 0.0;
  double vehicles = 0.0;
  double seated = 0.0;
  for (ArcId e = 0; e < g.arc_count(); ++e) {
    const double w = g.arc(e).weight;
    const double f = flow[static_cast<std::size_t>(e)];
    const double l = sol.layout.at(e, m);
    s += w * f;
    vehicles += w * l;
    seated += w * std::min(f, static_cast<double>(mm.capacity) * l);
  }
  Segment seg;
  seg.p0 = {m0.tau * s, m0.eta * s + mm.eta * vehicles};
  seg.p1 = {seg.p0.travel_time + seated * (mm.tau - m0.tau), seg.p0.energy - seated * m0.eta};
  return seg;
}

}  // namespace msp
