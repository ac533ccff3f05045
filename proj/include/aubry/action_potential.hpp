#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "aubry/phase_graph.hpp"
#include "aubry/torus.hpp"

namespace aubry {

/// Finite values of the action potential at level k on the graph nodes.
/// phi[i][j] is the minimal cost over walks of >= 1 edge from i to j; the
/// diagonal stores self_loop[i], the minimal nontrivial cycle cost through i
/// (the continuum convention Phi(x,x) = 0 is recovered by clamping at zero
/// where needed). Valid only when no negative cycle exists at k, which is
/// certified before filling.
///
/// Dense storage is capped (default 96^2 nodes); above the cap only rows for
/// requested source nodes are kept, while self_loop is always complete.
struct PotentialTable {
  double k_used = 0.0;
  int num_nodes = 0;
  double h_time = 0.0;
  double cost_scale = 1.0;
  double tol_zero = 1e-9;
  bool dense = false;

  std::vector<double> phi;        // dense mode: num_nodes x num_nodes
  std::vector<int> row_index;     // sampled mode: sources with stored rows
  std::vector<std::vector<double>> rows;
  std::vector<double> self_loop;

  bool has_row(int i) const;
  /// phi value for i != j (diagonal: self_loop[i]). Throws when the row was
  /// not computed in sampled mode.
  double phi_at(int i, int j) const;
};

struct PotentialOptions {
  /// Sources to keep rows for in sampled mode; empty keeps every row (dense)
  /// when the node count allows it.
  std::vector<int> sources;
  int dense_node_cap = 96 * 96;
};

/// All-pairs minimal walk costs at level k via one virtual-root relaxation
/// pass (node potential) followed by reweighted nonnegative-cost shortest
/// paths from every source. Requires k to admit no negative cycle; throws
/// NumericalError otherwise.
PotentialTable potential_table(const PhaseGraph& g, const CohomologyClass& c,
                               double k, const PotentialOptions& opts = {});

/// delta[i][j] = phi[i][j] + phi[j][i] (diagonal: self_loop). Dense mode only.
std::vector<double> mather_semidistance(const PotentialTable& pt);

/// Nodes whose cheapest nontrivial recurrence costs at most eps_aubry.
std::vector<int> aubry_nodes(const PotentialTable& pt, double eps_aubry);

/// Disjoint clusters of the Aubry node set under near-vanishing symmetrized
/// potential, connected through chains of pairs with delta <= eps_class.
struct StaticClassPartition {
  std::vector<int> aubry_nodes;            // sorted
  std::vector<std::vector<int>> classes;   // sorted by size desc, then min node
  double eps_aubry = 0.0;
  double eps_class = 0.0;
};

StaticClassPartition static_classes(const PotentialTable& pt,
                                    std::span<const int> aubry, double eps_class,
                                    double eps_aubry_record = 0.0);

/// Sparse CSV export (i,j,phi), rows with phi <= threshold only.
void write_potential_csv(std::ostream& os, const PotentialTable& pt,
                         double threshold);

/// JSON export {classes:[[node,...],...], eps_aubry, eps_class}.
void write_partition_json(std::ostream& os, const StaticClassPartition& p);

}  // namespace aubry
