#include "msp/cli.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "msp/error.hpp"
#include "msp/io.hpp"
#include "msp/reductions.hpp"
#include "msp/solvers.hpp"

namespace msp {

namespace {

using nlohmann::json;

constexpr int kOk = 0;
constexpr int kFalse = 1;
constexpr int kUsage = 2;
constexpr int kPremise = 3;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::PremiseViolated:
    case ErrorCode::NonUnitWeights:
    case ErrorCode::WrongModeCount:
    case ErrorCode::NonIntegralFlow:
    case ErrorCode::LayoutNotSingleMode:
    case ErrorCode::BudgetExceedsSamplingRange:
      return kPremise;
    default:
      return kUsage;
  }
}

template <class T>
const T& expect(const InstanceFile& file, const std::string& command) {
  if (const T* inst = std::get_if<T>(&file.instance)) return *inst;
  throw Error(ErrorCode::SchemaError, command + " does not accept instances of kind '" + file.kind() + "'");
}

void emit(std::ostream& out, const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    out << text;
  else
    write_file(path, text);
}

json arc_list(const ArcSubset& arcs) { return arcs.ids(); }

json bound_or_null(double x) { return std::isinf(x) ? json(nullptr) : json(x); }

std::vector<std::array<int, 3>> parse_subsets(const std::string& text) {
  std::vector<std::array<int, 3>> out;
  std::stringstream groups(text);
  std::string group;
  while (std::getline(groups, group, ';')) {
    if (group.empty()) continue;
    std::stringstream ss(group);
    std::string tok;
    std::vector<int> xs;
    while (std::getline(ss, tok, ',')) xs.push_back(std::stoi(tok));
    if (xs.size() != 3) throw Error(ErrorCode::MalformedX3c, "subset '" + group + "' needs exactly 3 elements");
    out.push_back({xs[0], xs[1], xs[2]});
  }
  return out;
}

std::vector<ValuedItem> parse_valued(const std::vector<std::string>& items) {
  std::vector<ValuedItem> out;
  for (const std::string& it : items) {
    const auto colon = it.find(':');
    if (colon == std::string::npos) throw Error(ErrorCode::SchemaError, "item '" + it + "' must read value:weight");
    out.push_back({std::stoll(it.substr(0, colon)), std::stoll(it.substr(colon + 1))});
  }
  return out;
}

struct Options {
  std::string generator;
  std::string input;
  std::string output;
  std::string instance;
  std::string solution;
  int n = 0;
  std::string subsets;
  std::vector<std::int64_t> items;
  std::vector<std::string> valued;
  std::int64_t target = 0;
  std::int64_t bound = 0;
  double alpha = 1.0;
  double eps = 0.5;
  std::int64_t star_size = 0;
  double epsilon = 0.1;
  int samples = 5;
  bool parallel = false;
  bool oracle = false;
  int max_arcs = OracleLimits{}.max_arcs;
  std::int64_t max_nodes = DindpLimits{}.max_nodes;
};

int cmd_gen(const Options& o, std::ostream& out) {
  InstanceFile file{MspInstance{}, {}};
  if (o.generator == "x3c") {
    X3cInstance x{o.n, parse_subsets(o.subsets)};
    DindpReduction red = x3c_to_dindp(x);
    file = {red.instance, red.meta};
  } else if (o.generator == "esum") {
    DindpReduction red = esum_to_dindp(o.items, o.target);
    file = {red.instance, red.meta};
  } else if (o.generator == "ssum") {
    MspReduction red = ssum_to_msp(o.items, o.target, o.bound);
    file = {red.instance, red.meta};
  } else if (o.generator == "ukps") {
    MspReduction red = ukps_to_msp(parse_valued(o.valued), o.target, o.bound);
    file = {red.instance, red.meta};
  } else {
    if (o.input.empty()) throw Error(ErrorCode::SchemaError, "--input is required for " + o.generator);
    const InstanceFile src = parse_instance(o.input);
    if (o.generator == "dindp2msp") {
      MspReduction red = dindp_to_msp(expect<DindpInstance>(src, "gen dindp2msp"));
      file = {red.instance, red.meta};
    } else if (o.generator == "distp-msp") {
      MspReduction red = distp_to_msp_inapprox(expect<DistpInstance>(src, "gen distp-msp"), o.alpha);
      file = {red.instance, red.meta};
    } else {
      StarGadgetOptions opts;
      if (o.star_size > 0) opts.star_size = o.star_size;
      DindpReduction red = distp_to_dindp_inapprox(expect<DistpInstance>(src, "gen distp-dindp"), o.eps, opts);
      file = {red.instance, red.meta};
    }
  }
  emit(out, o.output, instance_to_text(file));
  return kOk;
}

int cmd_evaluate(const Options& o, std::ostream& out) {
  const MspInstance inst = expect<MspInstance>(parse_instance(o.instance), "evaluate");
  const Solution sol = parse_solution(o.solution, inst);
  const ObjectivePoint p = evaluate(sol, inst);
  out << json{{"T", p.travel_time}, {"E", p.energy}}.dump() << "\n";
  return kOk;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  const MspInstance inst = expect<MspInstance>(parse_instance(o.instance), "verify");
  ObjectivePoint stored;
  const Solution sol = parse_solution(o.solution, inst, &stored);
  const auto violations = check_feasibility(sol, inst);
  for (const Violation& v : violations) err << v.message << "\n";
  if (!violations.empty()) return kFalse;
  const ObjectivePoint p = evaluate(sol, inst);
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); };
  if (!close(p.travel_time, stored.travel_time) || !close(p.energy, stored.energy)) {
    err << "stored objective (" << format_number(stored.travel_time) << ", " << format_number(stored.energy)
        << ") differs from evaluated (" << format_number(p.travel_time) << ", " << format_number(p.energy) << ")\n";
    return kFalse;
  }
  if (!meets_bounds(p, inst)) {
    err << "decision bounds not met\n";
    return kFalse;
  }
  out << "feasible\n";
  return kOk;
}

int cmd_fixed_flow(const Options& o, std::ostream& out) {
  const MspInstance inst = expect<MspInstance>(parse_instance(o.instance), "solve-fixed-flow");
  const Solution sol = fixed_flow_optimize(inst, shortest_path_flow(inst), o.epsilon);
  emit(out, o.output, solution_to_text(sol, evaluate(sol, inst)));
  return kOk;
}

int cmd_segment(const Options& o, std::ostream& out) {
  const MspInstance inst = expect<MspInstance>(parse_instance(o.instance), "segment");
  const Segment s = relaxation_segment(inst);
  out << json{{"psi0", {s.p0.travel_time, s.p0.energy}},
              {"psi1", {s.p1.travel_time, s.p1.energy}},
              {"delta", s.delta}}
             .dump()
      << "\n";
  return kOk;
}

int cmd_two_approx(const Options& o, std::ostream& out) {
  const InstanceFile file = parse_instance(o.instance);
  if (const auto* inst = std::get_if<MspInstance>(&file.instance)) {
    const Solution sol = msp_two_approx_extreme(*inst);
    emit(out, o.output, solution_to_text(sol, evaluate(sol, *inst)));
    return kOk;
  }
  const Digraph g = std::holds_alternative<DindpInstance>(file.instance)
                        ? std::get<DindpInstance>(file.instance).graph
                        : expect<DistpInstance>(file, "two-approx").graph;
  const NodeId v = central_node(g);
  const ArcSubset arcs = shortest_path_subgraph(g, v);
  const json j{{"center", v},
               {"arcs", arc_list(arcs)},
               {"routing_cost", bound_or_null(routing_cost(g, arcs))},
               {"full_routing_cost", bound_or_null(routing_cost(g))}};
  emit(out, o.output, j.dump(2) + "\n");
  return kOk;
}

int cmd_oracle(const Options& o, std::ostream& out) {
  const InstanceFile file = parse_instance(o.instance);
  json j;
  bool decision = true;
  if (const auto* inst = std::get_if<MspInstance>(&file.instance)) {
    OracleLimits limits;
    limits.max_arcs = o.max_arcs;
    const ParetoSet frontier = msp_brute_force(*inst, limits);
    json points = json::array();
    decision = false;
    for (const ParetoEntry& e : frontier.entries()) {
      points.push_back({e.point.travel_time, e.point.energy});
      decision = decision || meets_bounds(e.point, *inst);
    }
    j["frontier"] = std::move(points);
    j["decision"] = decision;
  } else if (const auto* inst = std::get_if<DindpInstance>(&file.instance)) {
    DindpLimits limits;
    limits.max_nodes = o.max_nodes;
    const DindpResult r = dindp_decide(*inst, limits);
    decision = r.decision;
    j = {{"decision", decision}, {"routing_cost", bound_or_null(r.routing_cost)}, {"arcs", arc_list(r.arcs)}};
  } else if (const auto* inst = std::get_if<DistpInstance>(&file.instance)) {
    const DistpResult r = distp_brute_force(*inst);
    decision = r.feasible;
    j = {{"decision", decision}, {"arcs", arc_list(r.arcs)}};
  } else if (const auto* inst = std::get_if<X3cInstance>(&file.instance)) {
    decision = x3c_brute_force(*inst);
    j = {{"decision", decision}};
  } else {
    const auto& ks = std::get<KnapsackInstance>(file.instance);
    const Selection sel = ks.dimensions() == 1 ? kps_exact(ks) : mkps_exact(ks);
    decision = !ks.target || sel.value >= *ks.target - kFeasibilityTolerance;
    j = {{"decision", decision}, {"value", sel.value}, {"counts", sel.counts}};
  }
  emit(out, o.output, j.dump(2) + "\n");
  return decision ? kOk : kFalse;
}

int cmd_frontier(const Options& o, std::ostream& out) {
  const MspInstance inst = expect<MspInstance>(parse_instance(o.instance), "frontier");
  if (o.samples < 1) throw Error(ErrorCode::SchemaError, "--samples must be positive");
  const Segment psi = relaxation_segment(inst);
  const Mode& mm = inst.modes().back();
  const double relaxed_cost = weighted_flow(inst, shortest_path_flow(inst)) * mm.cost / static_cast<double>(mm.capacity);
  const double top = std::min(inst.budget(), sampling_budget_limit(inst));
  const auto n = static_cast<std::size_t>(o.samples);
  auto fraction = [n](std::size_t i) { return n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1); };

  std::vector<std::vector<FrontierRow>> per_sample(n);
  auto work = [&](std::size_t i) {
    const double budget = fraction(i) * top;
    const Solution sol = frontier_sample(inst, budget, o.epsilon);
    const ObjectivePoint p = evaluate(sol, inst);
    const Segment patch = patch_segment(inst, sol);
    per_sample[i] = {{psi.parameter_of(p), budget, p, "sample"},
                     {0.0, budget, patch.p0, "patch0"},
                     {1.0, budget, patch.p1, "patch1"}};
  };
  if (o.parallel && n > 1) {
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(n, std::thread::hardware_concurrency()));
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> failures(workers);
    for (std::size_t t = 0; t < workers; ++t)
      pool.emplace_back([&, t] {
        try {
          for (std::size_t i = t; i < n; i += workers) work(i);
        } catch (...) {
          failures[t] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (auto& f : failures)
      if (f) std::rethrow_exception(f);
  } else {
    for (std::size_t i = 0; i < n; ++i) work(i);
  }

  std::vector<FrontierRow> rows;
  for (std::size_t i = 0; i < n; ++i) {
    const double lambda = fraction(i);
    rows.push_back({lambda, lambda * psi.delta * relaxed_cost, psi.at(lambda), "psi"});
  }
  for (auto& group : per_sample) rows.insert(rows.end(), group.begin(), group.end());
  if (o.oracle) {
    OracleLimits limits;
    limits.max_arcs = o.max_arcs;
    const ParetoSet exact = msp_brute_force(inst, limits);
    for (const ParetoEntry& e : exact.entries()) {
      double cost = 0.0;
      for (ArcId a = 0; a < inst.graph().arc_count(); ++a)
        for (int i = 1; i <= inst.public_mode_count(); ++i)
          cost += inst.graph().arc(a).weight * inst.mode(i).cost * e.solution.layout.at(a, i);
      rows.push_back({psi.parameter_of(e.point), cost, e.point, "oracle"});
    }
  }
  std::ostringstream csv;
  write_frontier_csv(csv, std::move(rows));
  emit(out, o.output, csv.str());
  return kOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Modal split problem toolkit"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("gen", "generate a reduction gadget");
  gen->add_option("generator", o.generator, "gadget")
      ->required()
      ->check(CLI::IsMember({"x3c", "esum", "ssum", "ukps", "dindp2msp", "distp-msp", "distp-dindp"}));
  gen->add_option("--n", o.n, "ground set size (x3c)");
  gen->add_option("--subsets", o.subsets, "subsets as 1,2,3;4,5,6 (x3c)");
  gen->add_option("--items", o.items, "comma separated items")->delimiter(',');
  gen->add_option("--valued-items", o.valued, "value:weight pairs (ukps)")->delimiter(',');
  gen->add_option("--target", o.target, "target A");
  gen->add_option("--bound", o.bound, "bound A'");
  gen->add_option("--input", o.input, "source instance file");
  gen->add_option("--alpha", o.alpha, "approximation factor (distp-msp)");
  gen->add_option("--eps", o.eps, "epsilon (distp-dindp)");
  gen->add_option("--star-size", o.star_size, "override star size (distp-dindp)");
  gen->add_option("-o,--output", o.output, "output file");

  auto* evaluate_cmd = app.add_subcommand("evaluate", "objective values of a solution");
  evaluate_cmd->add_option("instance", o.instance)->required();
  evaluate_cmd->add_option("solution", o.solution)->required();

  auto* verify = app.add_subcommand("verify", "feasibility check of a solution");
  verify->add_option("instance", o.instance)->required();
  verify->add_option("solution", o.solution)->required();

  auto* fixed = app.add_subcommand("solve-fixed-flow", "energy-optimal layout for the shortest path flow");
  fixed->add_option("instance", o.instance)->required();
  fixed->add_option("--epsilon", o.epsilon);
  fixed->add_option("-o,--output", o.output);

  auto* frontier = app.add_subcommand("frontier", "sample the lower left frontier");
  frontier->add_option("instance", o.instance)->required();
  frontier->add_option("--samples", o.samples);
  frontier->add_option("--epsilon", o.epsilon);
  frontier->add_flag("--parallel", o.parallel);
  frontier->add_flag("--oracle", o.oracle, "add exact frontier rows");
  frontier->add_option("--max-arcs", o.max_arcs);
  frontier->add_option("-o,--output", o.output);

  auto* two = app.add_subcommand("two-approx", "shortest path subgraph of the central node");
  two->add_option("instance", o.instance)->required();
  two->add_option("-o,--output", o.output);

  auto* oracle = app.add_subcommand("oracle", "exhaustive search");
  oracle->add_option("instance", o.instance)->required();
  oracle->add_option("--max-arcs", o.max_arcs);
  oracle->add_option("--max-nodes", o.max_nodes);
  oracle->add_option("-o,--output", o.output);

  auto* segment = app.add_subcommand("segment", "relaxation segment");
  segment->add_option("instance", o.instance)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen(o, out);
    if (evaluate_cmd->parsed()) return cmd_evaluate(o, out);
    if (verify->parsed()) return cmd_verify(o, out, err);
    if (fixed->parsed()) return cmd_fixed_flow(o, out);
    if (frontier->parsed()) return cmd_frontier(o, out);
    if (two->parsed()) return cmd_two_approx(o, out);
    if (oracle->parsed()) return cmd_oracle(o, out);
    if (segment->parsed()) return cmd_segment(o, out);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace msp
