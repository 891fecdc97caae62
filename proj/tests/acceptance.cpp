#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>

#include "msp/error.hpp"
#include "msp/knapsack.hpp"
#include "msp/reductions.hpp"
#include "msp/solvers.hpp"
#include "support.hpp"

using namespace msp;
using testing::Rng;
using testing::uniform;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void fail(const std::string& why) {
    if (pass) detail << why;
    pass = false;
  }
};

double weight_of(const Digraph& g, const ArcSubset& a) {
  double w = 0.0;
  for (ArcId e : a.ids()) w += g.arc(e).weight;
  return w;
}

bool near_rel(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)}); }

// ---------------------------------------------------------------------------

X3cInstance x3c_with_cover(Rng& rng, int n, int extra) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 1);
  std::shuffle(perm.begin(), perm.end(), rng);
  X3cInstance x{n, {}};
  for (int i = 0; i < n; i += 3)
    x.subsets.push_back({perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(i + 1)],
                         perm[static_cast<std::size_t>(i + 2)]});
  for (int j = 0; j < extra; ++j) {
    std::shuffle(perm.begin(), perm.end(), rng);
    x.subsets.push_back({perm[0], perm[1], perm[2]});
  }
  std::shuffle(x.subsets.begin(), x.subsets.end(), rng);
  return x;
}

void block_formulas(Outcome& out) {
  Rng rng(101);
  int checked = 0;
  for (int n : {3, 6, 9}) {
    for (int extra : {0, 1}) {
      const X3cInstance x = x3c_with_cover(rng, n, extra);
      const DindpReduction red = x3c_to_dindp(x);
      const auto cover = x3c_extract_cover(x, red, ArcSubset::all(red.instance.graph));
      if (!cover) {
        out.fail("no cover found in planted instance");
        continue;
      }
      const DistanceMatrix d = all_pairs_distances(red.instance.graph, x3c_optimal_shape(x, red, *cover));
      const auto& u = red.meta.roles.at("U");
      const auto& v = red.meta.roles.at("V");
      const auto& w = red.meta.roles.at("W");
      const auto k = static_cast<std::int64_t>(x.subsets.size());
      const auto h = static_cast<std::int64_t>(red.meta.params.at("h"));
      const BlockCosts c = gadget_block_costs(h, n, k);
      const std::vector<std::tuple<const char*, double, std::int64_t>> blocks{
          {"UU", testing::block_cost(d, u, u), c.uu}, {"UW", testing::block_cost(d, u, w), c.uw},
          {"WU", testing::block_cost(d, w, u), c.uw}, {"VV", testing::block_cost(d, v, v), c.vv},
          {"VW", testing::block_cost(d, v, w), c.vw}, {"WV", testing::block_cost(d, w, v), c.vw},
          {"WW", testing::block_cost(d, w, w), c.ww}, {"UV", testing::block_cost(d, u, v), c.uv},
          {"VU", testing::block_cost(d, v, u), c.uv}};
      for (const auto& [name, measured, formula] : blocks) {
        ++checked;
        if (measured != static_cast<double>(formula)) {
          std::ostringstream why;
          why << "n=" << n << " k=" << k << " h=" << h << " block " << name << ": measured " << measured
              << " formula " << formula;
          out.fail(why.str());
        }
      }
    }
  }
  if (out.pass) out.detail << checked << " blocks equal";
}

// ---------------------------------------------------------------------------

void esum_identities(Outcome& out) {
  Rng rng(102);
  int agree = 0;
  for (int t = 0; t < 50; ++t) {
    std::vector<std::int64_t> items;
    for (int i = uniform(rng, 1, 6); i > 0; --i) items.push_back(uniform(rng, 1, 9));
    const std::int64_t s = std::accumulate(items.begin(), items.end(), std::int64_t{0});
    const auto n = static_cast<std::int64_t>(items.size());
    const std::int64_t a = uniform(rng, 1, static_cast<int>(s));
    const DindpReduction red = esum_to_dindp(items, a);
    const ArcSubset cyc = esum_cycle_arcs(red);
    if (routing_cost(red.instance.graph, cyc) != static_cast<double>((12 * n - 3) * s))
      out.fail("routing cost of the cycles differs in case " + std::to_string(t));
    if (weight_of(red.instance.graph, cyc) != static_cast<double>(3 * s))
      out.fail("cycle weight differs in case " + std::to_string(t));
    const bool target = dindp_decide(red.instance).decision;
    const bool source = testing::subset_sum_in(items, a, a);
    if (target == source)
      ++agree;
    else
      out.fail("decision mismatch in case " + std::to_string(t));
  }
  if (out.pass) out.detail << agree << "/50 decisions agree";
}

// ---------------------------------------------------------------------------

void two_approx_bound(Outcome& out) {
  Rng rng(103);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const int n = uniform(rng, 2, 7);
    const Digraph g = testing::random_strong(rng, n, uniform(rng, 0, 2 * n));
    const double r_full = routing_cost(g);
    const double r_v = routing_cost(g, dindp_two_approx(g));
    const DindpResult opt = dindp_brute_force({g, 2.0 * (n - 1), kInfinity, {}});
    if (r_v > 2.0 * r_full) out.fail("R(G_v) > 2 R(G) in case " + std::to_string(t));
    if (r_v > 2.0 * opt.routing_cost) out.fail("R(G_v) > 2 OPT in case " + std::to_string(t));
    worst = std::max(worst, r_v / opt.routing_cost);
  }
  if (out.pass) out.detail << "worst R(G_v)/OPT " << worst;
}

// ---------------------------------------------------------------------------

MspInstance tree_instance(Rng& rng) {
  const Digraph g = testing::random_tree_like(rng, uniform(rng, 2, 7));
  const std::vector<Mode> modes{{1, static_cast<double>(uniform(rng, 1, 5)), 0, 1},
                                {static_cast<double>(uniform(rng, 1, 3)), static_cast<double>(uniform(rng, 1, 6)),
                                 static_cast<double>(uniform(rng, 1, 3)), uniform(rng, 1, 4)}};
  return MspInstance(g, modes, testing::random_rooted_demand(rng, g.node_count(), 6), uniform(rng, 0, 6));
}

double layout_cost(const MspInstance& inst, const Solution& sol) {
  double cost = 0.0;
  for (ArcId e = 0; e < inst.graph().arc_count(); ++e)
    for (int i = 1; i <= inst.public_mode_count(); ++i)
      cost += inst.graph().arc(e).weight * inst.mode(i).cost * sol.layout.at(e, i);
  return cost;
}

void fixed_flow_guarantee(Outcome& out) {
  Rng rng(104);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const MspInstance inst = tree_instance(rng);
    const ParetoSet frontier = msp_brute_force(inst);
    double best = kInfinity;
    for (const auto& e : frontier.entries()) best = std::min(best, e.point.energy);
    const auto flows = shortest_path_flow(inst);
    for (double eps : {0.5, 0.1, 0.01}) {
      const Solution sol = fixed_flow_optimize(inst, flows, eps);
      const double energy = evaluate(sol, inst).energy;
      if (layout_cost(inst, sol) > inst.budget()) out.fail("budget exceeded in case " + std::to_string(t));
      if (!check_feasibility(sol, inst).empty()) out.fail("infeasible in case " + std::to_string(t));
      if (energy > (1.0 + eps) * best + 1e-9) {
        std::ostringstream why;
        why << "case " << t << " eps " << eps << ": " << energy << " > (1+eps) " << best;
        out.fail(why.str());
      }
      worst = std::max(worst, energy / best);
    }
  }
  if (out.pass) out.detail << "worst ratio " << worst;
}

// ---------------------------------------------------------------------------

std::vector<Mode> conform_modes(Rng& rng, int m) {
  for (;;) {
    std::vector<Mode> modes{{static_cast<double>(uniform(rng, 1, 2)), static_cast<double>(uniform(rng, 2, 5)), 0, 1}};
    for (int i = 0; i < m; ++i)
      modes.push_back({static_cast<double>(uniform(rng, 1, 4)), static_cast<double>(uniform(rng, 1, 4)),
                       static_cast<double>(uniform(rng, 1, 2)), uniform(rng, 1, 3)});
    try {
      check_mode_ordering(modes);
      return modes;
    } catch (const Error&) {
    }
  }
}

MspInstance conform_instance(Rng& rng, int m) {
  const Digraph g = testing::random_tree_like(rng, uniform(rng, 2, 4));
  std::vector<Commodity> demand;
  for (NodeId v = 1; v < g.node_count(); ++v)
    if (const int d = uniform(rng, 0, 6); d > 0) demand.push_back({0, v, d});
  if (demand.empty()) demand.push_back({0, g.node_count() - 1, 3});
  return MspInstance(g, conform_modes(rng, m), demand, uniform(rng, 2, 10));
}

void frontier_samples(Outcome& out) {
  Rng rng(105);
  int samples = 0;
  int with_vehicles = 0;
  int dominated[3] = {0, 0, 0};
  std::string first;
  for (int t = 0; t < 20; ++t) {
    const MspInstance inst = conform_instance(rng, t % 2 == 0 ? 1 : 2);
    const int m = inst.public_mode_count();
    const Segment psi = relaxation_segment(inst);
    const double top = std::min(inst.budget(), sampling_budget_limit(inst));
    for (int i = 0; i <= 3; ++i) {
      const double bp = top * i / 3.0;
      const Solution sol = frontier_sample(inst, bp, 0.1);
      const ObjectivePoint p = evaluate(sol, inst);
      ++samples;
      for (ArcId e = 0; e < inst.graph().arc_count(); ++e)
        if (sol.layout.at(e, m) > 0.0) {
          ++with_vehicles;
          break;
        }
      std::ostringstream where;
      where << "case " << t << " (m=" << m << ") budget " << bp;
      if (!psi.contains(p, 1e-9)) out.fail(where.str() + ": off the segment");
      const auto agg = aggregate_flow(sol, m);
      for (ArcId e = 0; e < inst.graph().arc_count(); ++e) {
        const double seats = static_cast<double>(inst.mode(m).capacity) * sol.layout.at(e, m);
        if (std::abs(agg[static_cast<std::size_t>(e)].passengers[static_cast<std::size_t>(m)] - seats) > 1e-9)
          out.fail(where.str() + ": vehicle not full");
      }
      // everything affordable with the sampled budget
      const ParetoSet oracle = msp_brute_force(MspInstance(inst.graph(), inst.modes(), inst.commodities(), bp));
      for (const auto& e : oracle.entries())
        if (dominates(e.point, p) && !(near_rel(e.point.travel_time, p.travel_time, 1e-9) &&
                                       near_rel(e.point.energy, p.energy, 1e-9))) {
          ++dominated[m];
          if (first.empty()) {
            std::ostringstream why;
            why << where.str() << ": (" << p.travel_time << ", " << p.energy << ") dominated by ("
                << e.point.travel_time << ", " << e.point.energy << ")";
            first = why.str();
          }
          break;
        }
    }
  }
  if (dominated[1] + dominated[2] > 0)
    out.fail("dominated samples: " + std::to_string(dominated[1]) + " with m=1, " + std::to_string(dominated[2]) +
             " with m=2; first " + first);
  if (out.pass) out.detail << samples << " samples, " << with_vehicles << " with vehicles";
}

// ---------------------------------------------------------------------------

void patch_geometry(Outcome& out) {
  Rng rng(106);
  int nonempty = 0;
  for (int t = 0; t < 30; ++t) {
    const MspInstance inst = conform_instance(rng, 1 + t % 2);
    const int m = inst.public_mode_count();
    const double top = std::min(inst.budget(), sampling_budget_limit(inst));
    const Solution sol = frontier_sample(inst, top * uniform(rng, 1, 2) / 2.0, 0.0);
    const Segment patch = patch_segment(inst, sol);
    const ObjectivePoint full = evaluate(full_acceptance(inst, sol), inst);
    const std::string where = "case " + std::to_string(t);
    if (!near_rel(patch.p1.travel_time, full.travel_time, 1e-12) || !near_rel(patch.p1.energy, full.energy, 1e-12))
      out.fail(where + ": accepting endpoint differs from evaluation");
    bool any = false;
    for (ArcId e = 0; e < inst.graph().arc_count(); ++e) any = any || sol.layout.at(e, m) > 0.0;
    const ObjectivePoint psi0 = relaxation_segment(inst).p0;
    if (any) {
      ++nonempty;
      if (!(psi0.travel_time <= patch.p0.travel_time && psi0.energy < patch.p0.energy))
        out.fail(where + ": rejection endpoint not strictly dominated");
    }
    const double dx = patch.p1.travel_time - patch.p0.travel_time;
    const double dy = patch.p1.energy - patch.p0.energy;
    const double cross = dx * (-inst.mode(0).eta) - dy * (inst.mode(m).tau - inst.mode(0).tau);
    if (std::abs(cross) > 1e-12 * std::max(1.0, std::abs(dx * inst.mode(0).eta)))
      out.fail(where + ": patch direction not parallel");
  }
  if (out.pass) out.detail << "30 patches, " << nonempty << " with vehicles";
}

// ---------------------------------------------------------------------------

bool ukps_source(const std::vector<ValuedItem>& items, std::int64_t target, std::int64_t bound) {
  std::function<bool(std::size_t, std::int64_t, std::int64_t)> rec = [&](std::size_t i, std::int64_t value,
                                                                         std::int64_t left) {
    if (value >= target) return true;
    if (i == items.size()) return false;
    for (std::int64_t c = 0; c * items[i].weight <= left; ++c)
      if (rec(i + 1, value + c * items[i].value, left - c * items[i].weight)) return true;
    return false;
  };
  return rec(0, 0, bound);
}

void round_trips(Outcome& out) {
  std::ostringstream counts;
  auto check = [&](const char* name, int cases, const std::function<std::pair<bool, bool>(Rng&, int)>& one) {
    Rng rng(std::hash<std::string>{}(name) % 1000);
    int yes = 0;
    for (int t = 0; t < cases; ++t) {
      const auto [source, target] = one(rng, t);
      yes += source;
      if (source != target) out.fail(std::string(name) + " mismatch in case " + std::to_string(t));
    }
    counts << name << " " << cases << " (" << yes << " yes) ";
  };

  check("x3c", 24, [](Rng& rng, int t) {
    const int n = t % 3 == 0 ? 3 : 6;
    X3cInstance x;
    if (t % 2 == 0) {
      x = x3c_with_cover(rng, n, uniform(rng, 0, 1));
    } else {
      x.n = n;
      for (int j = uniform(rng, 1, 3); j > 0; --j) {
        std::vector<int> perm(static_cast<std::size_t>(n));
        std::iota(perm.begin(), perm.end(), 1);
        std::shuffle(perm.begin(), perm.end(), rng);
        x.subsets.push_back({perm[0], perm[1], perm[2]});
      }
    }
    return std::pair{x3c_brute_force(x), dindp_decide(x3c_to_dindp(x).instance).decision};
  });

  check("ssum", 24, [](Rng& rng, int) {
    std::vector<std::int64_t> items;
    for (int i = uniform(rng, 1, 10); i > 0; --i) items.push_back(uniform(rng, 1, 9));
    const std::int64_t s = std::accumulate(items.begin(), items.end(), std::int64_t{0});
    const std::int64_t a = uniform(rng, 1, static_cast<int>(s));
    const std::int64_t bound = a + uniform(rng, 0, 1);
    OracleLimits limits;
    limits.max_arcs = 10;
    return std::pair{testing::subset_sum_in(items, a, bound), msp_decide(ssum_to_msp(items, a, bound).instance, limits)};
  });

  check("ukps", 24, [](Rng& rng, int) {
    std::vector<ValuedItem> items;
    for (int i = uniform(rng, 1, 4); i > 0; --i) items.push_back({uniform(rng, 1, 5), uniform(rng, 1, 3)});
    const std::int64_t bound = uniform(rng, 1, 6);
    const std::int64_t target = uniform(rng, 1, 20);
    return std::pair{ukps_source(items, target, bound), msp_decide(ukps_to_msp(items, target, bound).instance)};
  });

  check("esum", 24, [](Rng& rng, int) {
    std::vector<std::int64_t> items;
    for (int i = uniform(rng, 1, 6); i > 0; --i) items.push_back(uniform(rng, 1, 9));
    const std::int64_t s = std::accumulate(items.begin(), items.end(), std::int64_t{0});
    const std::int64_t a = uniform(rng, 1, static_cast<int>(s));
    return std::pair{testing::subset_sum_in(items, a, a), dindp_decide(esum_to_dindp(items, a).instance).decision};
  });

  check("dindp-msp", 24, [](Rng& rng, int) {
    const int n = uniform(rng, 2, 4);
    Digraph g = testing::random_strong(rng, n, uniform(rng, 0, 8 - n));
    if (uniform(rng, 0, 4) == 0) {
      // drop an arc so the graph may lose strong connectivity
      std::vector<Arc> arcs(g.arcs().begin() + 1, g.arcs().end());
      g = Digraph(n, std::move(arcs));
    }
    const double beta = uniform(rng, n, std::max(n, g.arc_count()));
    const DindpResult best = dindp_brute_force({g, beta, kInfinity, {}});
    const double base = std::isinf(best.routing_cost) ? 10.0 : best.routing_cost;
    const double gamma = base + uniform(rng, -2, 1);
    const DindpInstance src{g, beta, gamma, {}};
    return std::pair{dindp_decide(src).decision, msp_decide(dindp_to_msp(src).instance)};
  });

  if (out.pass) out.detail << counts.str();
}

// ---------------------------------------------------------------------------

KnapsackInstance random_kps(Rng& rng, int r) {
  KnapsackInstance ks;
  for (int j = 0; j < r; ++j) ks.bounds.push_back(uniform(rng, 0, 40));
  for (int i = uniform(rng, 0, 8); i > 0; --i) {
    KnapsackItem item;
    item.value = uniform(rng, 1, 50);
    for (int j = 0; j < r; ++j) item.weights.push_back(uniform(rng, 1, 15));
    if (uniform(rng, 0, 3) > 0) item.multiplicity = uniform(rng, 1, 4);
    else item.multiplicity = std::nullopt;
    ks.items.push_back(item);
  }
  return ks;
}

void knapsack_layer(Outcome& out) {
  Rng rng(108);
  for (double eps : {0.3, 0.1}) {
    for (int t = 0; t < 200; ++t) {
      const KnapsackInstance ks = random_kps(rng, 1);
      const Selection approx = kps_fptas(ks, eps);
      if (approx.value < (1.0 - eps) * kps_exact(ks).value - 1e-9 || !selection_respects_bounds(ks, approx, 0.0))
        out.fail("fptas guarantee fails for eps " + std::to_string(eps) + " case " + std::to_string(t));
    }
  }
  for (int t = 0; t < 100; ++t) {
    const KnapsackInstance ks = random_kps(rng, 1);
    if (mkps_exact(ks).value != kps_exact(ks).value) out.fail("mkps and kps disagree in case " + std::to_string(t));
  }
  if (out.pass) out.detail << "400 fptas runs, 100 exact comparisons";
}

// ---------------------------------------------------------------------------

void slope_inequality(Outcome& out) {
  Rng rng(109);
  int steeper = 0;
  std::string first;
  for (int t = 0; t < 50; ++t) {
    const std::vector<Mode> modes = conform_modes(rng, uniform(rng, 1, 3));
    const auto ok = slope_not_steeper(modes);
    for (std::size_t i = 0; i < ok.size(); ++i)
      if (!ok[i]) {
        ++steeper;
        if (first.empty()) {
          std::ostringstream s;
          s << "case " << t << ":";
          for (const Mode& md : modes) s << " (tau " << md.tau << ", eta " << md.eta << ", k " << md.capacity << ")";
          s << " mode " << i + 1 << " steeper";
          first = s.str();
        }
      }
  }
  if (steeper > 0) out.fail(std::to_string(steeper) + " steeper vectors; first " + first);
  else out.detail << "50 mode sets";
}

struct Criterion {
  int id;
  double seconds;
  void (*run)(Outcome&);
};

const Criterion kCriteria[] = {{1, 5, block_formulas},   {2, 10, esum_identities},    {3, 60, two_approx_bound},
                               {4, 60, fixed_flow_guarantee}, {5, 120, frontier_samples}, {6, 5, patch_geometry},
                               {7, 300, round_trips},    {8, 60, knapsack_layer},     {9, 5, slope_inequality}};

}  // namespace

int main(int argc, char** argv) {
  const int only = argc > 1 ? std::atoi(argv[1]) : 0;
  bool all = true;
  for (const Criterion& c : kCriteria) {
    if (only != 0 && only != c.id) continue;
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(out);
    } catch (const std::exception& e) {
      out.fail(std::string("exception: ") + e.what());
    }
    const double took = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (took > c.seconds) out.fail(" over time limit");
    std::printf("criterion %d: %s %s [%.2fs]\n", c.id, out.pass ? "PASS" : "FAIL", out.detail.str().c_str(), took);
    all = all && out.pass;
  }
  return all ? 0 : 1;
}
