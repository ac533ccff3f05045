#pragma once

// Independent brute-force oracles for the solver tests. Everything here is
// deliberately naive and shares no code with the implementation paths it
// checks.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "aubry/dense_graph.hpp"

namespace oracle {

struct SimpleCycle {
  std::vector<int> edge_ids;
  double cost_sum = 0.0;
  int length = 0;
};

/// Every simple cycle of a small graph (self-loops included), by DFS rooted
/// at the cycle's smallest node. Intended for graphs with <= 10 nodes.
inline std::vector<SimpleCycle> enumerate_simple_cycles(const aubry::DenseGraph& g) {
  const int V = g.node_count();
  std::vector<SimpleCycle> out;
  std::vector<int> path_edges;
  std::vector<char> on_path(V, 0);

  std::function<void(int, int)> dfs = [&](int root, int u) {
    for (int e : g.out_edges(u)) {
      int to = g.edges[e].to;
      if (to < root) continue;  // canonical root = smallest node on the cycle
      if (to == root) {
        SimpleCycle c;
        c.edge_ids = path_edges;
        c.edge_ids.push_back(e);
        for (int id : c.edge_ids) c.cost_sum += g.edges[id].cost;
        c.length = static_cast<int>(c.edge_ids.size());
        out.push_back(std::move(c));
        continue;
      }
      if (on_path[to]) continue;
      on_path[to] = 1;
      path_edges.push_back(e);
      dfs(root, to);
      path_edges.pop_back();
      on_path[to] = 0;
    }
  };
  for (int root = 0; root < V; ++root) {
    on_path.assign(V, 0);
    on_path[root] = 1;
    path_edges.clear();
    dfs(root, root);
  }
  return out;
}

/// Minimum mean cost per unit time over all simple cycles.
inline double brute_min_mean_per_time(const aubry::DenseGraph& g) {
  auto cycles = enumerate_simple_cycles(g);
  double best = std::numeric_limits<double>::infinity();
  for (const SimpleCycle& c : cycles)
    best = std::min(best, c.cost_sum / (c.length * g.h_time));
  return best;
}

/// Exists a cycle with total cost below -tol at offset k? (A negative cycle
/// exists iff a simple one does.)
inline bool brute_has_negative_cycle(const aubry::DenseGraph& g, double k, double tol) {
  for (const SimpleCycle& c : enumerate_simple_cycles(g))
    if (c.cost_sum + k * g.h_time * c.length < -tol) return true;
  return false;
}

/// Random graph with every node carrying at least one out-edge (so cycles
/// exist), occasional self-loops, costs in [-5, 5].
inline aubry::DenseGraph random_graph(std::mt19937_64& rng, int max_nodes = 8) {
  int V = 2 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_nodes - 1));
  aubry::DenseGraph g(V, 1.0);
  std::uniform_real_distribution<double> cost(-5.0, 5.0);
  for (int u = 0; u < V; ++u) {
    int extra = static_cast<int>(rng() % 3);
    for (int e = 0; e <= extra; ++e) {
      int to = static_cast<int>(rng() % static_cast<std::uint64_t>(V));
      g.add_edge(u, to, cost(rng));
    }
  }
  return g;
}

}  // namespace oracle
