#include <gtest/gtest.h>

#include "msp/error.hpp"
#include "msp/model.hpp"
#include "msp/solvers.hpp"
#include "support.hpp"

namespace msp {
namespace {

using testing::Rng;

MspInstance single_arc(std::int64_t demand, std::vector<Mode> modes, double budget) {
  return MspInstance(Digraph(2, {{0, 1, 1.0, 1.0}}), std::move(modes), {{0, 1, demand}}, budget);
}

TEST(Instance, Validation) {
  const Digraph g(2, {{0, 1, 1, 1}});
  EXPECT_THROW(MspInstance(g, {{1, 1, 1, 1}}, {}, 0), Error);      // mode 0 with cost
  EXPECT_THROW(MspInstance(g, {{1, 1, 0, 2}}, {}, 0), Error);      // mode 0 capacity
  EXPECT_THROW(MspInstance(g, {{1, 1, 0, 1}, {1, 1, 1, 0}}, {}, 0), Error);
  EXPECT_THROW(MspInstance(g, {{1, 1, 0, 1}}, {{0, 0, 1}}, 0), Error);  // diagonal demand
  EXPECT_THROW(MspInstance(g, {{1, 1, 0, 1}}, {}, -1), Error);
  const MspInstance ok(g, {{1, 1, 0, 1}}, {{0, 1, 0}, {1, 0, 2}}, 0);
  EXPECT_EQ(ok.commodities().size(), 1u);
  EXPECT_EQ(ok.total_demand(), 2);
}

TEST(Aggregate, ZeroFlowConvention) {
  const MspInstance inst = single_arc(1, {{1, 1, 0, 1}, {1, 1, 1, 2}}, 1);
  Solution sol;
  sol.flows = {{inst.commodities()[0], {0.0}}};
  sol.layout = Layout::zero(1, 1);
  sol.split = {{{0.0, 1.0}}};
  const auto agg = aggregate_flow(sol, 1);
  EXPECT_EQ(agg[0].flow, 0.0);
  EXPECT_EQ(agg[0].split, (std::vector<double>{1.0, 0.0}));
}

TEST(Aggregate, WeightedAverageOfSplits) {
  const Digraph g(3, {{0, 1, 1, 1}, {1, 2, 1, 1}});
  const MspInstance inst(g, {{1, 1, 0, 1}, {1, 1, 1, 2}}, {{0, 2, 1}, {1, 2, 1}}, 5);
  Solution sol;
  sol.flows = {{inst.commodities()[0], {1.0, 1.0}}, {inst.commodities()[1], {0.0, 1.0}}};
  sol.layout = Layout::zero(2, 1);
  sol.split = {{{1.0, 0.0}, {0.0, 1.0}}, {{1.0, 0.0}, {1.0, 0.0}}};
  const auto agg = aggregate_flow(sol, 1);
  EXPECT_EQ(agg[1].flow, 2.0);
  EXPECT_EQ(agg[1].split, (std::vector<double>{0.5, 0.5}));
  EXPECT_EQ(agg[0].split, (std::vector<double>{1.0, 0.0}));
}

TEST(Aggregate, MatchesDirectSummation) {
  Rng rng(21);
  const Digraph g = testing::random_strong(rng, 4, 3);
  const MspInstance inst(g, {{1, 2, 0, 1}, {2, 1, 1, 3}}, {{0, 1, 1}, {1, 2, 2}, {2, 3, 3}}, 10);
  Solution sol = all_mode0_solution(inst, shortest_path_flow(inst));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto& per_arc : sol.split)
    for (auto& s : per_arc) {
      s[1] = u(rng);
      s[0] = 1.0 - s[1];
    }
  const auto agg = aggregate_flow(sol, 1);
  for (ArcId e = 0; e < g.arc_count(); ++e) {
    double f = 0.0, p = 0.0;
    for (std::size_t k = 0; k < sol.flows.size(); ++k) {
      f += sol.flows[k].arc_flow[static_cast<std::size_t>(e)];
      p += sol.flows[k].arc_flow[static_cast<std::size_t>(e)] * sol.split[k][static_cast<std::size_t>(e)][1];
    }
    EXPECT_DOUBLE_EQ(agg[static_cast<std::size_t>(e)].flow, f);
    EXPECT_DOUBLE_EQ(agg[static_cast<std::size_t>(e)].passengers[1], p);
  }
}

TEST(Evaluate, SingleArcFullVehicle) {
  const MspInstance inst = single_arc(2, {{0.25, 1, 0, 1}, {1, 1, 1, 2}}, 1);
  Solution sol = all_mode0_solution(inst, shortest_path_flow(inst));
  sol.layout.at(0, 1) = 1.0;
  sol.split[0][0] = {0.0, 1.0};
  const ObjectivePoint p = evaluate(sol, inst);
  EXPECT_EQ(p.travel_time, 2.0);
  EXPECT_EQ(p.energy, 1.0);
  EXPECT_TRUE(check_feasibility(sol, inst).empty());
}

TEST(Evaluate, AllModeZeroIsSegmentStart) {
  const Digraph g(3, {{0, 1, 2, 1}, {1, 2, 3, 1}});
  const MspInstance inst(g, {{1.5, 4, 0, 1}, {2, 1, 1, 2}}, {{0, 2, 2}}, 3);
  const auto flows = shortest_path_flow(inst);
  const ObjectivePoint p = evaluate(all_mode0_solution(inst, flows), inst);
  const double s = weighted_flow(inst, flows);
  EXPECT_EQ(s, 10.0);
  EXPECT_EQ(p.travel_time, 1.5 * s);
  EXPECT_EQ(p.energy, 4.0 * s);
}

TEST(Evaluate, EmptyDemandAndMismatch) {
  const MspInstance inst(Digraph(2, {{0, 1, 1, 1}}), {{1, 1, 0, 1}, {1, 1, 1, 2}}, {}, 1);
  const Solution sol = all_mode0_solution(inst, {});
  EXPECT_EQ(evaluate(sol, inst), (ObjectivePoint{0.0, 0.0}));
  Solution bad = sol;
  bad.layout = Layout::zero(1, 2);
  try {
    evaluate(bad, inst);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(Evaluate, LinearInDemand) {
  Rng rng(4);
  const Digraph g = testing::random_strong(rng, 4, 2);
  for (int t = 1; t <= 3; ++t) {
    const MspInstance base(g, {{1, 3, 0, 1}, {2, 1, 1, 2}}, {{0, 2, 1}, {3, 1, 2}}, 4);
    const MspInstance scaled(g, {{1, 3, 0, 1}, {2, 1, 1, 2}}, {{0, 2, t}, {3, 1, 2 * t}}, 4);
    const ObjectivePoint a = evaluate(all_mode0_solution(base, shortest_path_flow(base)), base);
    const ObjectivePoint b = evaluate(all_mode0_solution(scaled, shortest_path_flow(scaled)), scaled);
    EXPECT_DOUBLE_EQ(b.travel_time, t * a.travel_time);
    EXPECT_DOUBLE_EQ(b.energy, t * a.energy);
  }
}

TEST(Evaluate, DistributesOverCommodities) {
  const Digraph g(3, {{0, 1, 1, 1}, {1, 2, 2, 1}});
  const std::vector<Mode> modes{{1, 3, 0, 1}, {2, 1, 1, 2}};
  const MspInstance both(g, modes, {{0, 2, 2}, {1, 2, 1}}, 4);
  Solution sol = all_mode0_solution(both, shortest_path_flow(both));
  sol.split[0][1] = {0.5, 0.5};
  const ObjectivePoint whole = evaluate(sol, both);
  double travel = 0.0, private_energy = 0.0;
  for (std::size_t k = 0; k < sol.flows.size(); ++k) {
    const MspInstance one(g, modes, {sol.flows[k].commodity}, 4);
    Solution part;
    part.flows = {sol.flows[k]};
    part.layout = sol.layout;
    part.split = {sol.split[k]};
    const ObjectivePoint p = evaluate(part, one);
    travel += p.travel_time;
    private_energy += p.energy;
  }
  EXPECT_DOUBLE_EQ(whole.travel_time, travel);
  EXPECT_DOUBLE_EQ(whole.energy, private_energy);  // empty layout
}

TEST(Feasibility, AllModeZeroAlwaysFeasible) {
  Rng rng(8);
  for (int t = 0; t < 10; ++t) {
    const Digraph g = testing::random_strong(rng, 5, 3);
    const MspInstance inst(g, {{1, 1, 0, 1}, {1, 1, 1, 3}}, {{0, 3, 2}, {4, 1, 1}}, 0);
    EXPECT_TRUE(check_feasibility(all_mode0_solution(inst, shortest_path_flow(inst)), inst).empty());
  }
}

TEST(Feasibility, CapacityOverloadResidual) {
  const MspInstance inst = single_arc(3, {{1, 1, 0, 1}, {1, 1, 1, 2}}, 5);
  Solution sol = all_mode0_solution(inst, shortest_path_flow(inst));
  sol.layout.at(0, 1) = 1.0;
  sol.split[0][0] = {0.0, 1.0};
  const auto v = check_feasibility(sol, inst);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, ViolationKind::Capacity);
  EXPECT_EQ(v[0].arc, 0);
  EXPECT_DOUBLE_EQ(v[0].residual, 1.0);
  EXPECT_NE(v[0].message.find("capacity"), std::string::npos);
}

TEST(Feasibility, BudgetBoundaryAndExcess) {
  const MspInstance inst = single_arc(4, {{1, 1, 0, 1}, {1, 1, 1.5, 2}}, 3);
  Solution sol = all_mode0_solution(inst, shortest_path_flow(inst));
  sol.layout.at(0, 1) = 2.0;
  sol.split[0][0] = {0.0, 1.0};
  EXPECT_TRUE(check_feasibility(sol, inst).empty());
  sol.layout.at(0, 1) = 3.0;
  const auto v = check_feasibility(sol, inst);
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v[0].kind, ViolationKind::Budget);
}

TEST(Feasibility, ConservationAndSplit) {
  const MspInstance inst = single_arc(2, {{1, 1, 0, 1}, {1, 1, 1, 2}}, 3);
  Solution sol = all_mode0_solution(inst, shortest_path_flow(inst));
  sol.flows[0].arc_flow[0] = 1.0;
  bool conservation = false;
  for (const auto& v : check_feasibility(sol, inst)) conservation |= v.kind == ViolationKind::Conservation;
  EXPECT_TRUE(conservation);
  sol = all_mode0_solution(inst, shortest_path_flow(inst));
  sol.split[0][0] = {0.7, 0.7};
  bool split = false;
  for (const auto& v : check_feasibility(sol, inst)) split |= v.kind == ViolationKind::SplitSum;
  EXPECT_TRUE(split);
}

TEST(ShortestPathFlow, Examples) {
  const MspInstance a = single_arc(5, {{1, 1, 0, 1}}, 0);
  EXPECT_EQ(shortest_path_flow(a)[0].arc_flow, (std::vector<double>{5.0}));

  const Digraph path(4, {{0, 1, 1, 1}, {1, 2, 2, 2}, {2, 3, 3, 3}});
  const MspInstance b(path, {{1, 1, 0, 1}, {1, 1, 1, 2}}, {{0, 3, 2}}, 1);
  EXPECT_EQ(shortest_path_flow(b)[0].arc_flow, (std::vector<double>{2.0, 2.0, 2.0}));

  // diamond: 0 -> 2 -> 3 listed first, 0 -> 1 -> 3 has the smaller predecessor
  const Digraph diamond(4, {{0, 2, 1, 9}, {2, 3, 1, 9}, {0, 1, 1, 9}, {1, 3, 1, 9}});
  const MspInstance c(diamond, {{1, 1, 0, 1}}, {{0, 3, 1}}, 0);
  EXPECT_EQ(shortest_path_flow(c)[0].arc_flow, (std::vector<double>{0.0, 0.0, 1.0, 1.0}));

  const MspInstance d(Digraph(2, {{0, 1, 1, 1}}), {{1, 1, 0, 1}}, {{1, 0, 1}}, 0);
  try {
    shortest_path_flow(d);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnroutableCommodity);
  }
}

TEST(Dominates, Examples) {
  EXPECT_TRUE(dominates({1, 1}, {2, 2}));
  EXPECT_FALSE(dominates({1, 2}, {2, 1}));
  EXPECT_FALSE(dominates({1, 1}, {1, 1}));
  EXPECT_TRUE(dominates({1, 1}, {1, 2}));
}

TEST(DecisionBounds, MeetsBounds) {
  const MspInstance inst(Digraph(2, {{0, 1, 1, 1}}), {{1, 1, 0, 1}}, {{0, 1, 1}}, 0, DecisionBounds{2, kInfinity});
  EXPECT_TRUE(meets_bounds({2, 100}, inst));
  EXPECT_FALSE(meets_bounds({2.1, 0}, inst));
}

TEST(EnergyFloor, HoldsOnOracleFrontiers) {
  Rng rng(30);
  for (int t = 0; t < 15; ++t) {
    const Digraph g = testing::random_tree_like(rng, 4);
    const std::vector<Mode> modes{{1, static_cast<double>(testing::uniform(rng, 1, 3)), 0, 1},
                                  {2, static_cast<double>(testing::uniform(rng, 1, 4)), 1, testing::uniform(rng, 1, 3)}};
    const MspInstance inst(g, modes, testing::random_rooted_demand(rng, 4, 5), testing::uniform(rng, 0, 4));
    const auto flow = aggregate_arc_flow(shortest_path_flow(inst), g.arc_count());
    const double floor = fixed_flow_energy_floor(inst, flow);
    const ParetoSet frontier = msp_brute_force(inst);
    for (const auto& entry : frontier.entries()) EXPECT_GE(entry.point.energy, floor - 1e-9);
  }
}

TEST(EnergyFloor, SmallestEtaAloneIsNotABound) {
  // eta = (1,1), k_1 = 2: a full vehicle moves two riders for energy 1
  const MspInstance inst = single_arc(2, {{0.25, 1, 0, 1}, {1, 1, 1, 2}}, 1);
  Solution sol = all_mode0_solution(inst, shortest_path_flow(inst));
  sol.layout.at(0, 1) = 1.0;
  sol.split[0][0] = {0.0, 1.0};
  const double smallest_eta_bound = 1.0 * 2.0;
  EXPECT_LT(evaluate(sol, inst).energy, smallest_eta_bound);
  EXPECT_GE(evaluate(sol, inst).energy, fixed_flow_energy_floor(inst, {2.0}));
}

}  // namespace
}  // namespace msp
