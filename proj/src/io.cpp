#include "msp/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "msp/error.hpp"

namespace msp {

using nlohmann::json;

namespace {

[[noreturn]] void schema(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::SchemaError, where + ": " + what);
}

const json& field(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) schema(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema(where.empty() ? key : where + "." + key, "missing");
  return *it;
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) schema(where, "expected a number");
  return j.get<double>();
}

std::int64_t integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) {
    if (j.is_number_float()) {
      const double x = j.get<double>();
      if (x == std::floor(x) && std::abs(x) < 9e15) return static_cast<std::int64_t>(x);
    }
    schema(where, "expected an integer");
  }
  return j.get<std::int64_t>();
}

const json& array(const json& j, const std::string& where, std::size_t size = 0) {
  if (!j.is_array()) schema(where, "expected an array");
  if (size > 0 && j.size() != size) schema(where, "expected " + std::to_string(size) + " entries");
  return j;
}

// null or absent means unbounded
double optional_bound(const json& j, const std::string& key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return kInfinity;
  return number(*it, key);
}

json bound_json(double x) { return std::isinf(x) ? json(nullptr) : json(x); }

std::string at(const std::string& name, std::size_t i) { return name + "[" + std::to_string(i) + "]"; }

Digraph graph_from(const json& j) {
  const std::int64_t n = integer(field(j, "nodes", ""), "nodes");
  if (n < 0) schema("nodes", "must be non-negative");
  std::vector<Arc> arcs;
  const json& list = array(field(j, "arcs", ""), "arcs");
  for (std::size_t i = 0; i < list.size(); ++i) {
    const json& a = array(list[i], at("arcs", i), 4);
    const std::int64_t tail = integer(a[0], at("arcs", i) + ".tail");
    const std::int64_t head = integer(a[1], at("arcs", i) + ".head");
    if (tail < 0 || tail >= n) schema(at("arcs", i), "tail " + std::to_string(tail) + " out of range");
    if (head < 0 || head >= n) schema(at("arcs", i), "head " + std::to_string(head) + " out of range");
    arcs.push_back({static_cast<NodeId>(tail), static_cast<NodeId>(head), number(a[2], at("arcs", i) + ".w"),
                    number(a[3], at("arcs", i) + ".d")});
  }
  return Digraph(static_cast<int>(n), std::move(arcs));
}

void graph_to(json& j, const Digraph& g) {
  j["nodes"] = g.node_count();
  json arcs = json::array();
  for (const Arc& a : g.arcs()) arcs.push_back({a.tail, a.head, a.weight, a.length});
  j["arcs"] = std::move(arcs);
}

NodeId node_in(const json& j, const std::string& where, int n) {
  const std::int64_t v = integer(j, where);
  if (v < 0 || v >= n) schema(where, "node " + std::to_string(v) + " out of range");
  return static_cast<NodeId>(v);
}

MspInstance msp_from(const json& j) {
  Digraph g = graph_from(j);
  std::vector<Mode> modes;
  const json& ml = array(field(j, "modes", ""), "modes");
  for (std::size_t i = 0; i < ml.size(); ++i) {
    const json& m = array(ml[i], at("modes", i), 4);
    modes.push_back({number(m[0], at("modes", i) + ".tau"), number(m[1], at("modes", i) + ".eta"),
                     number(m[2], at("modes", i) + ".cost"), integer(m[3], at("modes", i) + ".capacity")});
  }
  std::vector<Commodity> demand;
  const json& dl = array(field(j, "demand", ""), "demand");
  for (std::size_t i = 0; i < dl.size(); ++i) {
    const json& d = array(dl[i], at("demand", i), 3);
    demand.push_back({node_in(d[0], at("demand", i) + ".source", g.node_count()),
                      node_in(d[1], at("demand", i) + ".target", g.node_count()),
                      integer(d[2], at("demand", i) + ".units")});
  }
  std::optional<DecisionBounds> bounds;
  if (j.contains("a") || j.contains("b")) bounds = DecisionBounds{optional_bound(j, "a"), optional_bound(j, "b")};
  return MspInstance(std::move(g), std::move(modes), std::move(demand), number(field(j, "B", ""), "B"), bounds);
}

void msp_to(json& j, const MspInstance& inst) {
  graph_to(j, inst.graph());
  json modes = json::array();
  for (const Mode& m : inst.modes()) modes.push_back({m.tau, m.eta, m.cost, m.capacity});
  j["modes"] = std::move(modes);
  json demand = json::array();
  for (const Commodity& c : inst.commodities()) demand.push_back({c.source, c.target, c.demand});
  j["demand"] = std::move(demand);
  j["B"] = inst.budget();
  if (inst.bounds()) {
    j["a"] = bound_json(inst.bounds()->travel_time);
    j["b"] = bound_json(inst.bounds()->energy);
  }
}

DindpInstance dindp_from(const json& j) {
  DindpInstance inst;
  inst.graph = graph_from(j);
  inst.beta = number(field(j, "beta", ""), "beta");
  inst.gamma = optional_bound(j, "gamma");
  if (auto it = j.find("demand"); it != j.end() && !it->is_null()) {
    std::vector<DemandEntry> demand;
    for (std::size_t i = 0; i < array(*it, "demand").size(); ++i) {
      const json& d = array((*it)[i], at("demand", i), 3);
      demand.push_back({node_in(d[0], at("demand", i) + ".source", inst.graph.node_count()),
                        node_in(d[1], at("demand", i) + ".target", inst.graph.node_count()),
                        number(d[2], at("demand", i) + ".units")});
    }
    inst.demand = std::move(demand);
  }
  return inst;
}

void dindp_to(json& j, const DindpInstance& inst) {
  graph_to(j, inst.graph);
  j["beta"] = inst.beta;
  j["gamma"] = bound_json(inst.gamma);
  if (inst.demand) {
    json demand = json::array();
    for (const DemandEntry& d : *inst.demand) demand.push_back({d.source, d.target, d.units});
    j["demand"] = std::move(demand);
  }
}

DistpInstance distp_from(const json& j) {
  DistpInstance inst;
  inst.graph = graph_from(j);
  inst.root = node_in(field(j, "root", ""), "root", inst.graph.node_count());
  const json& tl = array(field(j, "terminals", ""), "terminals");
  for (std::size_t i = 0; i < tl.size(); ++i)
    inst.terminals.push_back(node_in(tl[i], at("terminals", i), inst.graph.node_count()));
  inst.budget = number(field(j, "B", ""), "B");
  return inst;
}

void distp_to(json& j, const DistpInstance& inst) {
  graph_to(j, inst.graph);
  j["root"] = inst.root;
  j["terminals"] = inst.terminals;
  j["B"] = inst.budget;
}

X3cInstance x3c_from(const json& j) {
  X3cInstance x;
  x.n = static_cast<int>(integer(field(j, "n", ""), "n"));
  const json& sl = array(field(j, "subsets", ""), "subsets");
  for (std::size_t i = 0; i < sl.size(); ++i) {
    const json& s = array(sl[i], at("subsets", i), 3);
    x.subsets.push_back({static_cast<int>(integer(s[0], at("subsets", i))),
                         static_cast<int>(integer(s[1], at("subsets", i))),
                         static_cast<int>(integer(s[2], at("subsets", i)))});
  }
  return x;
}

KnapsackInstance kps_from(const json& j) {
  KnapsackInstance ks;
  const json& bl = array(field(j, "bounds", ""), "bounds");
  for (std::size_t i = 0; i < bl.size(); ++i) ks.bounds.push_back(number(bl[i], at("bounds", i)));
  const json& il = array(field(j, "items", ""), "items");
  for (std::size_t i = 0; i < il.size(); ++i) {
    const json& it = array(il[i], at("items", i), 3);
    KnapsackItem item;
    item.value = number(it[0], at("items", i) + ".value");
    const json& wl = array(it[1], at("items", i) + ".weights", ks.bounds.size());
    for (const json& w : wl) item.weights.push_back(number(w, at("items", i) + ".weights"));
    if (it[2].is_null())
      item.multiplicity = std::nullopt;
    else
      item.multiplicity = integer(it[2], at("items", i) + ".multiplicity");
    ks.items.push_back(std::move(item));
  }
  if (auto it = j.find("target"); it != j.end() && !it->is_null()) ks.target = number(*it, "target");
  return ks;
}

void kps_to(json& j, const KnapsackInstance& ks) {
  j["bounds"] = ks.bounds;
  json items = json::array();
  for (const KnapsackItem& it : ks.items)
    items.push_back({it.value, it.weights, it.multiplicity ? json(*it.multiplicity) : json(nullptr)});
  j["items"] = std::move(items);
  if (ks.target) j["target"] = *ks.target;
}

ReductionMeta meta_from(const json& j) {
  ReductionMeta meta;
  auto it = j.find("metadata");
  if (it == j.end() || it->is_null()) return meta;
  if (auto p = it->find("params"); p != it->end())
    for (auto& [k, v] : p->items()) meta.params[k] = number(v, "metadata.params." + k);
  if (auto r = it->find("roles"); r != it->end())
    for (auto& [k, v] : r->items())
      for (const json& x : array(v, "metadata.roles." + k))
        meta.roles[k].push_back(static_cast<NodeId>(integer(x, "metadata.roles." + k)));
  if (auto f = it->find("trivially_false"); f != it->end()) meta.trivially_false = f->get<bool>();
  return meta;
}

json meta_to(const ReductionMeta& meta) {
  json j = json::object();
  j["params"] = json::object();
  for (const auto& [k, v] : meta.params) j["params"][k] = v;
  j["roles"] = json::object();
  for (const auto& [k, v] : meta.roles) j["roles"][k] = v;
  j["trivially_false"] = meta.trivially_false;
  return j;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::SchemaError, std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

std::string InstanceFile::kind() const {
  static const char* names[] = {"msp", "dindp", "distp", "x3c", "kps"};
  return names[instance.index()];
}

InstanceFile parse_instance_text(const std::string& text) {
  const json j = parse_json(text);
  const json& kind = field(j, "kind", "");
  if (!kind.is_string()) schema("kind", "expected a string");
  const auto k = kind.get<std::string>();
  InstanceFile file{MspInstance{}, meta_from(j)};
  try {
    if (k == "msp")
      file.instance = msp_from(j);
    else if (k == "dindp")
      file.instance = dindp_from(j);
    else if (k == "distp")
      file.instance = distp_from(j);
    else if (k == "x3c")
      file.instance = x3c_from(j);
    else if (k == "kps")
      file.instance = kps_from(j);
    else
      schema("kind", "unknown kind '" + k + "'");
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaError, e.what());
  }
  return file;
}

InstanceFile parse_instance(const std::string& path) { return parse_instance_text(read_file(path)); }

std::string instance_to_text(const InstanceFile& file) {
  json j;
  j["kind"] = file.kind();
  std::visit(
      [&j](const auto& inst) {
        using T = std::decay_t<decltype(inst)>;
        if constexpr (std::is_same_v<T, MspInstance>) msp_to(j, inst);
        if constexpr (std::is_same_v<T, DindpInstance>) dindp_to(j, inst);
        if constexpr (std::is_same_v<T, DistpInstance>) distp_to(j, inst);
        if constexpr (std::is_same_v<T, KnapsackInstance>) kps_to(j, inst);
        if constexpr (std::is_same_v<T, X3cInstance>) {
          j["n"] = inst.n;
          j["subsets"] = inst.subsets;
        }
      },
      file.instance);
  j["metadata"] = meta_to(file.meta);
  return j.dump(2) + "\n";
}

void write_instance(const std::string& path, const InstanceFile& file) { write_file(path, instance_to_text(file)); }

std::string solution_to_text(const Solution& sol, const ObjectivePoint& point) {
  json j;
  json flows = json::array();
  for (const CommodityFlow& f : sol.flows)
    flows.push_back({{"source", f.commodity.source},
                     {"target", f.commodity.target},
                     {"demand", f.commodity.demand},
                     {"arcs", f.arc_flow}});
  j["flows"] = std::move(flows);
  j["layout"] = sol.layout.vehicles;
  j["relaxed"] = sol.layout.relaxed;
  j["split"] = sol.split;
  j["objective"] = {{"T", point.travel_time}, {"E", point.energy}};
  return j.dump(2) + "\n";
}

Solution parse_solution_text(const std::string& text, const MspInstance& inst, ObjectivePoint* stored) {
  const json j = parse_json(text);
  const auto arcs = static_cast<std::size_t>(inst.graph().arc_count());
  const auto width = static_cast<std::size_t>(inst.public_mode_count());
  Solution sol;
  try {
    const json& fl = array(field(j, "flows", ""), "flows");
    for (std::size_t i = 0; i < fl.size(); ++i) {
      const std::string where = at("flows", i);
      CommodityFlow f;
      f.commodity = {static_cast<NodeId>(integer(field(fl[i], "source", where), where + ".source")),
                     static_cast<NodeId>(integer(field(fl[i], "target", where), where + ".target")),
                     integer(field(fl[i], "demand", where), where + ".demand")};
      for (const json& x : array(field(fl[i], "arcs", where), where + ".arcs", arcs))
        f.arc_flow.push_back(number(x, where + ".arcs"));
      sol.flows.push_back(std::move(f));
    }
    const json& ll = array(field(j, "layout", ""), "layout", arcs);
    for (std::size_t e = 0; e < ll.size(); ++e) {
      std::vector<double> row;
      const json& r = array(ll[e], at("layout", e));
      if (r.size() != width) schema(at("layout", e), "expected " + std::to_string(width) + " entries");
      for (const json& x : r) row.push_back(number(x, at("layout", e)));
      sol.layout.vehicles.push_back(std::move(row));
    }
    if (auto it = j.find("relaxed"); it != j.end()) sol.layout.relaxed = it->get<bool>();
    const json& sl = array(field(j, "split", ""), "split", sol.flows.size());
    for (std::size_t k = 0; k < sl.size(); ++k) {
      std::vector<std::vector<double>> per_arc;
      for (std::size_t e = 0; e < array(sl[k], at("split", k), arcs).size(); ++e) {
        std::vector<double> row;
        for (const json& x : array(sl[k][e], at("split", k) + at("", e), width + 1))
          row.push_back(number(x, at("split", k)));
        per_arc.push_back(std::move(row));
      }
      sol.split.push_back(std::move(per_arc));
    }
    if (stored) {
      const json& obj = field(j, "objective", "");
      *stored = {number(field(obj, "T", "objective"), "objective.T"),
                 number(field(obj, "E", "objective"), "objective.E")};
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaError, e.what());
  }
  return sol;
}

Solution parse_solution(const std::string& path, const MspInstance& inst, ObjectivePoint* stored) {
  return parse_solution_text(read_file(path), inst, stored);
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_frontier_csv(std::ostream& out, std::vector<FrontierRow> rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const FrontierRow& a, const FrontierRow& b) {
    if (a.point.travel_time != b.point.travel_time) return a.point.travel_time < b.point.travel_time;
    if (a.point.energy != b.point.energy) return a.point.energy < b.point.energy;
    if (a.source != b.source) return a.source < b.source;
    return a.lambda < b.lambda;
  });
  out << "lambda,budget,T,E,source\n";
  for (const FrontierRow& r : rows)
    out << format_number(r.lambda) << ',' << format_number(r.budget) << ',' << format_number(r.point.travel_time)
        << ',' << format_number(r.point.energy) << ',' << r.source << '\n';
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

}  // namespace msp
