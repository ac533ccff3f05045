#pragma once

#include <span>
#include <vector>

#include "aubry/torus.hpp"

namespace aubry {

/// Explicit directed graph with uniform edge duration. Companion carrier to
/// PhaseGraph for the solvers: small enough to brute-force, used by the
/// oracle tests and anywhere an arbitrary topology is needed.
struct DenseGraph {
  struct Edge {
    int from = 0;
    int to = 0;
    double cost = 0.0;
  };

  explicit DenseGraph(int nodes, double h_time = 1.0)
      : num_nodes(nodes), h_time(h_time) {}

  void add_edge(int from, int to, double cost);

  int node_count() const { return num_nodes; }
  double edge_time() const { return h_time; }

  /// Out-edge indices of `node` (CSR; finalized lazily).
  std::span<const int> out_edges(int node) const;
  void finalize() const;

  int num_nodes = 0;
  double h_time = 1.0;
  std::vector<Edge> edges;

 private:
  mutable std::vector<int> csr_off_;
  mutable std::vector<int> csr_edge_;
  mutable bool finalized_ = false;
};

}  // namespace aubry
