#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "msp/graph.hpp"
#include "msp/model.hpp"

namespace msp::testing {

using Rng = std::mt19937_64;

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline Digraph cycle(int n, double w = 1.0, double d = 1.0) {
  std::vector<Arc> arcs;
  for (int i = 0; i < n; ++i) arcs.push_back({i, (i + 1) % n, w, d});
  return Digraph(n, std::move(arcs));
}

inline Digraph complete_symmetric(int n) {
  std::vector<Arc> arcs;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (u != v) arcs.push_back({u, v, 1.0, 1.0});
  return Digraph(n, std::move(arcs));
}

// Hamiltonian cycle plus random chords; unit weights unless `lengths` is set.
inline Digraph random_strong(Rng& rng, int n, int extra, bool lengths = false) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Arc> arcs;
  auto len = [&] { return lengths ? static_cast<double>(uniform(rng, 1, 5)) : 1.0; };
  for (int i = 0; i < n; ++i)
    arcs.push_back({perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>((i + 1) % n)], 1.0, len()});
  for (int j = 0; j < extra; ++j) {
    const int u = uniform(rng, 0, n - 1);
    int v = uniform(rng, 0, n - 2);
    if (v >= u) ++v;
    arcs.push_back({u, v, 1.0, len()});
  }
  return Digraph(n, std::move(arcs));
}

// Random out-tree with arcs pointing away from node 0 (weakly connected, acyclic).
inline Digraph random_tree_like(Rng& rng, int n) {
  std::vector<Arc> arcs;
  for (int v = 1; v < n; ++v) arcs.push_back({uniform(rng, 0, v - 1), v, static_cast<double>(uniform(rng, 1, 3)), 1.0});
  return Digraph(n, std::move(arcs));
}

// Commodities from node 0 (the root of random_tree_like) to random nodes.
inline std::vector<Commodity> random_rooted_demand(Rng& rng, int n, int max_total) {
  std::vector<Commodity> out;
  int left = max_total;
  for (int v = 1; v < n && left > 0; ++v) {
    if (uniform(rng, 0, 1) == 0) continue;
    const int d = uniform(rng, 1, std::min(3, left));
    out.push_back({0, v, d});
    left -= d;
  }
  if (out.empty()) out.push_back({0, n - 1, 1});
  return out;
}

}  // namespace msp::testing

namespace msp::testing {

inline double block_cost(const DistanceMatrix& d, const std::vector<NodeId>& from, const std::vector<NodeId>& to) {
  double sum = 0.0;
  for (NodeId u : from)
    for (NodeId v : to)
      if (u != v) sum += d.at(u, v);
  return sum;
}

// Exact subset sum by enumeration: some subset sums into [lo, hi].
inline bool subset_sum_in(const std::vector<std::int64_t>& items, std::int64_t lo, std::int64_t hi) {
  for (unsigned mask = 0; mask < (1u << items.size()); ++mask) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < items.size(); ++i)
      if (mask >> i & 1u) s += items[i];
    if (s >= lo && s <= hi) return true;
  }
  return false;
}

}  // namespace msp::testing
