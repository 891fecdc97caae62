#include "msp/reductions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "msp/error.hpp"

namespace msp {

BlockCosts gadget_block_costs(std::int64_t h, std::int64_t n, std::int64_t k) {
  BlockCosts c;
  c.uu = 2 * h * h;
  c.uw = 3 * h * n + 2 * n;
  c.vv = 2 * k * (k - 1);
  c.vw = 9 * n * k - 2 * n;
  c.ww = 4 * n * n - 8 * n;
  c.uv = 2 * h * k + k;
  return c;
}

std::int64_t cover_vw_cost(std::int64_t n, std::int64_t k) { return 3 * n * k - 2 * n; }

namespace {

std::vector<NodeId> range_nodes(NodeId first, int count) {
  std::vector<NodeId> out(static_cast<std::size_t>(count));
  std::iota(out.begin(), out.end(), first);
  return out;
}

void validate_x3c(const X3cInstance& x) {
  if (x.n < 0 || x.n % 3 != 0) throw Error(ErrorCode::MalformedX3c, "ground set size must be a multiple of 3");
  for (std::size_t j = 0; j < x.subsets.size(); ++j) {
    const auto& s = x.subsets[j];
    for (int e : s)
      if (e < 1 || e > x.n)
        throw Error(ErrorCode::MalformedX3c, "subset " + std::to_string(j) + " has element " + std::to_string(e) +
                                                 " outside 1.." + std::to_string(x.n));
    if (s[0] == s[1] || s[0] == s[2] || s[1] == s[2])
      throw Error(ErrorCode::MalformedX3c, "subset " + std::to_string(j) + " repeats an element");
  }
}

}  // namespace

DindpReduction x3c_to_dindp(const X3cInstance& x) {
  validate_x3c(x);
  const std::int64_t n = x.n;
  const auto k = static_cast<std::int64_t>(x.subsets.size());
  const BlockCosts base = gadget_block_costs(0, n, k);
  const std::int64_t h = base.vv + 2 * base.vw + base.ww;
  const BlockCosts c = gadget_block_costs(h, n, k);
  const std::int64_t vw = cover_vw_cost(n, k);

  const auto hi = static_cast<int>(h);
  const auto ki = static_cast<int>(k);
  const NodeId v0 = hi + 1;
  const NodeId w0 = hi + ki + 1;
  std::vector<Arc> arcs;
  auto both = [&arcs](NodeId a, NodeId b) {
    arcs.push_back({a, b, 1.0, 1.0});
    arcs.push_back({b, a, 1.0, 1.0});
  };
  for (int i = 1; i <= hi; ++i) both(0, i);
  for (int j = 0; j < ki; ++j) both(0, v0 + j);
  for (int j = 0; j < ki; ++j)
    for (int e : x.subsets[static_cast<std::size_t>(j)]) both(v0 + j, w0 + e - 1);

  const int nodes = hi + ki + x.n + 1;
  DindpReduction red;
  red.instance.graph = Digraph(nodes, std::move(arcs));
  red.instance.beta = 2.0 * (nodes - 1);
  red.instance.gamma = static_cast<double>(c.uu + c.vv + c.ww + 2 * (c.uw + c.uv + vw));
  red.meta.params = {{"h", static_cast<double>(h)},         {"n", static_cast<double>(n)},
                     {"k", static_cast<double>(k)},         {"beta", red.instance.beta},
                     {"gamma", red.instance.gamma},         {"C_UU", static_cast<double>(c.uu)},
                     {"C_UW", static_cast<double>(c.uw)},   {"C_VV", static_cast<double>(c.vv)},
                     {"C_VW", static_cast<double>(vw)},     {"C_WW", static_cast<double>(c.ww)},
                     {"C_UV", static_cast<double>(c.uv)},   {"C_VW_formula", static_cast<double>(c.vw)}};
  red.meta.roles["U"] = range_nodes(0, hi + 1);
  red.meta.roles["V"] = range_nodes(v0, ki);
  red.meta.roles["W"] = range_nodes(w0, x.n);
  return red;
}

ArcSubset x3c_optimal_shape(const X3cInstance& x, const DindpReduction& red, const std::vector<int>& cover) {
  const Digraph& g = red.instance.graph;
  const auto& v = red.meta.roles.at("V");
  const auto& w = red.meta.roles.at("W");
  std::set<std::pair<NodeId, NodeId>> wanted;
  for (int j : cover)
    for (int e : x.subsets.at(static_cast<std::size_t>(j))) {
      wanted.insert({v[static_cast<std::size_t>(j)], w[static_cast<std::size_t>(e - 1)]});
      wanted.insert({w[static_cast<std::size_t>(e - 1)], v[static_cast<std::size_t>(j)]});
    }
  const std::set<NodeId> wset(w.begin(), w.end());
  std::vector<ArcId> ids;
  for (ArcId e = 0; e < g.arc_count(); ++e) {
    const Arc& a = g.arc(e);
    const bool touches_w = wset.count(a.tail) > 0 || wset.count(a.head) > 0;
    if (!touches_w || wanted.count({a.tail, a.head}) > 0) ids.push_back(e);
  }
  return ArcSubset(g, std::move(ids));
}

bool x3c_brute_force(const X3cInstance& x) {
  validate_x3c(x);
  std::vector<bool> used(static_cast<std::size_t>(x.n) + 1, false);
  auto rec = [&](auto&& self, int element) -> bool {
    while (element <= x.n && used[static_cast<std::size_t>(element)]) ++element;
    if (element > x.n) return true;
    for (const auto& s : x.subsets) {
      if (std::find(s.begin(), s.end(), element) == s.end()) continue;
      if (std::any_of(s.begin(), s.end(), [&](int e) { return used[static_cast<std::size_t>(e)]; })) continue;
      for (int e : s) used[static_cast<std::size_t>(e)] = true;
      if (self(self, element + 1)) return true;
      for (int e : s) used[static_cast<std::size_t>(e)] = false;
    }
    return false;
  };
  return rec(rec, 1);
}

std::optional<std::vector<int>> x3c_extract_cover(const X3cInstance& x, const DindpReduction& red,
                                                  const ArcSubset& arcs) {
  const Digraph& g = red.instance.graph;
  const auto& v = red.meta.roles.at("V");
  const auto& w = red.meta.roles.at("W");
  std::set<std::pair<NodeId, NodeId>> present;
  for (ArcId e : arcs.ids()) present.insert({g.arc(e).tail, g.arc(e).head});
  std::vector<int> candidates;
  for (std::size_t j = 0; j < x.subsets.size(); ++j) {
    const bool linked = std::all_of(x.subsets[j].begin(), x.subsets[j].end(), [&](int e) {
      const NodeId we = w[static_cast<std::size_t>(e - 1)];
      return present.count({v[j], we}) > 0 && present.count({we, v[j]}) > 0;
    });
    if (linked) candidates.push_back(static_cast<int>(j));
  }
  // exact cover among the linked subsets
  std::vector<int> chosen;
  std::vector<bool> used(static_cast<std::size_t>(x.n) + 1, false);
  auto rec = [&](auto&& self, int element) -> bool {
    while (element <= x.n && used[static_cast<std::size_t>(element)]) ++element;
    if (element > x.n) return true;
    for (int j : candidates) {
      const auto& s = x.subsets[static_cast<std::size_t>(j)];
      if (std::find(s.begin(), s.end(), element) == s.end()) continue;
      if (std::any_of(s.begin(), s.end(), [&](int e) { return used[static_cast<std::size_t>(e)]; })) continue;
      for (int e : s) used[static_cast<std::size_t>(e)] = true;
      chosen.push_back(j);
      if (self(self, element + 1)) return true;
      chosen.pop_back();
      for (int e : s) used[static_cast<std::size_t>(e)] = false;
    }
    return false;
  };
  if (!rec(rec, 1)) return std::nullopt;
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

DindpReduction esum_to_dindp(const std::vector<std::int64_t>& items, std::int64_t target) {
  for (std::size_t i = 0; i < items.size(); ++i)
    if (items[i] <= 0)
      throw Error(ErrorCode::InvalidInstance, "item " + std::to_string(i) + " must be a positive integer");
  const auto n = static_cast<int>(items.size());
  const std::int64_t total = std::accumulate(items.begin(), items.end(), std::int64_t{0});
  std::vector<Arc> arcs;
  for (int i = 1; i <= n; ++i) {
    const auto s = static_cast<double>(items[static_cast<std::size_t>(i - 1)]);
    arcs.push_back({0, i, s, s});
    arcs.push_back({i, n + i, s, s});
    arcs.push_back({n + i, 0, s, s});
    arcs.push_back({n + i, i, s, s});
  }
  DindpReduction red;
  red.instance.graph = Digraph(2 * n + 1, std::move(arcs));
  red.instance.beta = static_cast<double>(3 * total + target);
  red.instance.gamma = static_cast<double>((12 * n - 3) * total - target);
  red.meta.params = {{"n", n}, {"S", static_cast<double>(total)}, {"A", static_cast<double>(target)},
                     {"beta", red.instance.beta}, {"gamma", red.instance.gamma}};
  red.meta.roles["hub"] = {0};
  red.meta.roles["V"] = range_nodes(1, n);
  red.meta.roles["V'"] = range_nodes(n + 1, n);
  return red;
}

ArcSubset esum_cycle_arcs(const DindpReduction& red) {
  std::vector<ArcId> ids;
  for (ArcId e = 0; e < red.instance.graph.arc_count(); ++e)
    if (e % 4 != 3) ids.push_back(e);
  return ArcSubset(red.instance.graph, std::move(ids));
}

std::vector<int> esum_extract_subset(const DindpReduction&, const ArcSubset& arcs) {
  std::vector<int> out;
  for (ArcId e : arcs.ids())
    if (e % 4 == 3) out.push_back(e / 4);
  return out;
}

MspReduction dindp_to_msp(const DindpInstance& inst) {
  const Digraph& g = inst.graph;
  for (ArcId e = 0; e < g.arc_count(); ++e)
    if (g.arc(e).weight != 1.0 || g.arc(e).length != 1.0)
      throw Error(ErrorCode::NonUnitWeights, "arc " + std::to_string(e) + " needs w = d = 1");
  const auto arcs = static_cast<double>(g.arc_count());
  std::vector<Mode> modes{{0.25, arcs * (inst.beta + 1.0), 0.0, 1},
                          {1.0, 1.0, 1.0, static_cast<std::int64_t>(g.arc_count()) * g.arc_count()}};
  std::vector<Commodity> demand;
  for (NodeId u = 0; u < g.node_count(); ++u)
    for (NodeId v = 0; v < g.node_count(); ++v)
      if (u != v) demand.push_back({u, v, 1});
  MspReduction red{MspInstance(g, std::move(modes), std::move(demand), arcs, DecisionBounds{inst.gamma, inst.beta}),
                   {}};
  red.meta.params = {{"beta", inst.beta}, {"gamma", inst.gamma}, {"a", inst.gamma}, {"b", inst.beta}};
  red.meta.trivially_false = !is_strongly_connected(g);
  return red;
}

ArcSubset dindp_extract_arcs(const MspReduction& red, const Solution& sol) {
  std::vector<ArcId> ids;
  for (ArcId e = 0; e < red.instance.graph().arc_count(); ++e)
    if (sol.layout.at(e, 1) > 0.0) ids.push_back(e);
  return ArcSubset(red.instance.graph(), std::move(ids));
}

MspReduction ssum_to_msp(const std::vector<std::int64_t>& items, std::int64_t target, std::int64_t bound) {
  for (std::size_t i = 0; i < items.size(); ++i)
    if (items[i] <= 0)
      throw Error(ErrorCode::InvalidInstance, "item " + std::to_string(i) + " must be a positive integer");
  const auto n = static_cast<int>(items.size());
  const std::int64_t total = std::accumulate(items.begin(), items.end(), std::int64_t{0});
  std::vector<Arc> arcs;
  for (int i = 0; i < n; ++i) {
    const auto s = static_cast<double>(items[static_cast<std::size_t>(i)]);
    arcs.push_back({i, i + 1, s, s});
  }
  std::vector<Mode> modes{{1.0, 1.0, 0.0, 1}, {1.0, 1.0, 1.0, 2}};
  std::vector<Commodity> demand;
  if (n > 0) demand.push_back({0, n, 2});
  const double b = static_cast<double>(2 * total - target);
  MspReduction red{MspInstance(Digraph(n + 1, std::move(arcs)), std::move(modes), std::move(demand),
                               static_cast<double>(bound), DecisionBounds{kInfinity, b}),
                   {}};
  red.meta.params = {{"S", static_cast<double>(total)}, {"A", static_cast<double>(target)},
                     {"A'", static_cast<double>(bound)}, {"b", b}};
  red.meta.roles["path"] = range_nodes(0, n + 1);
  return red;
}

std::vector<int> ssum_extract_subset(const MspReduction& red, const Solution& sol) {
  std::vector<int> out;
  for (ArcId e = 0; e < red.instance.graph().arc_count(); ++e)
    if (sol.layout.at(e, 1) > 0.0) out.push_back(e);
  return out;
}

MspReduction ukps_to_msp(const std::vector<ValuedItem>& items, std::int64_t target, std::int64_t bound) {
  std::int64_t s_max = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].value < 1 || items[i].weight < 1)
      throw Error(ErrorCode::InvalidInstance, "item " + std::to_string(i) + " needs integral s, w >= 1");
    s_max = std::max(s_max, items[i].value);
  }
  std::vector<Mode> modes{{1.0, 1.0, 0.0, 1}};
  for (const ValuedItem& it : items)
    modes.push_back({1.0, static_cast<double>(it.value), static_cast<double>(it.weight), 2 * it.value});
  const std::int64_t d = 2 * s_max * bound;
  std::vector<Commodity> demand;
  if (d > 0) demand.push_back({0, 1, d});
  const std::int64_t slack = d - target;
  const double b = static_cast<double>(std::max<std::int64_t>(0, slack));
  MspReduction red{MspInstance(Digraph(2, {{0, 1, 1.0, 1.0}}), std::move(modes), std::move(demand),
                               static_cast<double>(bound), DecisionBounds{kInfinity, b}),
                   {}};
  red.meta.params = {{"s_max", static_cast<double>(s_max)}, {"D", static_cast<double>(d)},
                     {"A", static_cast<double>(target)}, {"A'", static_cast<double>(bound)}, {"b", b}};
  red.meta.trivially_false = slack <= 0 && target > 0;
  return red;
}

std::vector<std::int64_t> ukps_extract_counts(const MspReduction& red, const Solution& sol) {
  std::vector<std::int64_t> out;
  for (int i = 1; i <= red.instance.public_mode_count(); ++i) out.push_back(std::llround(sol.layout.at(0, i)));
  return out;
}

MspReduction distp_to_msp_inapprox(const DistpInstance& inst, double alpha) {
  const Digraph& g = inst.graph;
  for (ArcId e = 0; e < g.arc_count(); ++e)
    if (g.arc(e).weight != 1.0) throw Error(ErrorCode::PremiseViolated, "w = 1 fails on arc " + std::to_string(e));
  if (inst.budget > static_cast<double>(g.arc_count()))
    throw Error(ErrorCode::PremiseViolated, "budget <= |E| fails");
  if (!(alpha > 0.0)) throw Error(ErrorCode::PremiseViolated, "alpha must be positive");
  const auto units = static_cast<std::int64_t>(std::ceil(alpha * (g.arc_count() + 1) - 1e-9));
  std::vector<Commodity> demand;
  std::set<NodeId> seen;
  for (NodeId t : inst.terminals)
    if (t != inst.root && seen.insert(t).second) demand.push_back({inst.root, t, units});
  std::int64_t total = 0;
  for (const Commodity& c : demand) total += c.demand;
  std::vector<Mode> modes{{1.0, 1.0, 0.0, 1}, {1.0, 1.0, 1.0, std::max<std::int64_t>(1, total)}};
  const double threshold = alpha * g.arc_count();
  MspReduction red{MspInstance(g, std::move(modes), std::move(demand), inst.budget,
                               DecisionBounds{kInfinity, threshold}),
                   {}};
  red.meta.params = {{"alpha", alpha}, {"D", static_cast<double>(units)}, {"k_1", static_cast<double>(total)},
                     {"threshold", threshold}};
  red.meta.roles["root"] = {inst.root};
  red.meta.roles["terminals"] = inst.terminals;
  return red;
}

ArcSubset distp_extract_from_msp(const MspReduction& red, const Solution& sol) {
  std::vector<ArcId> ids;
  for (ArcId e = 0; e < red.instance.graph().arc_count(); ++e)
    if (sol.layout.at(e, 1) > 0.0) ids.push_back(e);
  return ArcSubset(red.instance.graph(), std::move(ids));
}

int star_exponent(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorCode::InvalidEpsilon, "eps must lie in (0,1)");
  for (int k = 3;; ++k)
    if (static_cast<double>(k - 2) / (k + 2) >= 1.0 - eps - 1e-12) return k;
}

DindpReduction distp_to_dindp_inapprox(const DistpInstance& inst, double eps, const StarGadgetOptions& options) {
  const Digraph& g = inst.graph;
  const int h = g.node_count();
  if (h < 4) throw Error(ErrorCode::PremiseViolated, "|V| >= 4 fails");
  const int k = star_exponent(eps);
  std::int64_t star = 1;
  if (options.star_size) {
    star = *options.star_size;
  } else {
    for (int i = 0; i < k; ++i) {
      star *= h;
      if (star > options.max_nodes) break;
    }
  }
  std::vector<NodeId> terminals;
  for (NodeId t : inst.terminals)
    if (std::find(terminals.begin(), terminals.end(), t) == terminals.end()) terminals.push_back(t);
  if (std::find(terminals.begin(), terminals.end(), inst.root) == terminals.end())
    terminals.insert(terminals.begin(), inst.root);
  const std::int64_t nodes = h + 1 + star * static_cast<std::int64_t>(terminals.size());
  if (nodes > options.max_nodes)
    throw Error(ErrorCode::GadgetTooLarge, std::to_string(nodes) + " nodes exceed the cap of " +
                                               std::to_string(options.max_nodes));

  std::vector<Arc> arcs;
  for (const Arc& a : g.arcs()) arcs.push_back({a.tail, a.head, a.weight, 0.0});
  const NodeId q = h;
  for (NodeId v = 0; v < h; ++v) {
    arcs.push_back({q, v, 0.0, 2.0});
    arcs.push_back({v, q, 0.0, 2.0});
  }
  DindpReduction red;
  std::map<NodeId, std::vector<NodeId>> stars;
  NodeId next = h + 1;
  for (NodeId t : terminals) {
    auto& members = stars[t];
    for (std::int64_t j = 0; j < star; ++j, ++next) {
      members.push_back(next);
      arcs.push_back({t, next, 0.0, 0.0});
      arcs.push_back({next, t, 0.0, 0.0});
    }
    red.meta.roles["star" + std::to_string(t)] = members;
  }
  std::vector<DemandEntry> demand;
  for (NodeId t : terminals) {
    if (t == inst.root) continue;
    for (NodeId a : stars[inst.root])
      for (NodeId b : stars[t]) demand.push_back({a, b, 1.0});
  }
  const double threshold = 4.0 * static_cast<double>(star) * static_cast<double>(star);
  red.instance.graph = Digraph(static_cast<int>(nodes), std::move(arcs));
  red.instance.beta = inst.budget;
  red.instance.gamma = threshold - 1.0;
  red.instance.demand = std::move(demand);
  red.meta.params = {{"h", h}, {"k", k}, {"star", static_cast<double>(star)}, {"threshold", threshold}};
  red.meta.roles["q"] = {q};
  return red;
}

ArcSubset distp_extract_from_dindp(const DistpInstance& inst, const ArcSubset& arcs) {
  std::vector<ArcId> ids;
  for (ArcId e : arcs.ids())
    if (e < inst.graph.arc_count()) ids.push_back(e);
  return ArcSubset(inst.graph, std::move(ids));
}

}  // namespace msp
