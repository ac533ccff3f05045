#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "aubry/lagrangian.hpp"

namespace aubry {

/// Discretization parameters for the speed-capped phase space.
struct GridSpec {
  int n = 64;               // grid cells per axis; nodes = n^2, cell-centered
  double speed_cap = 5.0;   // |v| <= speed_cap on every edge
  double h_time = 1.0 / 32; // duration of every edge
  int windings = 1;         // max |w| per coordinate per edge

  /// Throws std::invalid_argument when the invariants fail:
  /// n >= 8, positive cap and step, speed_cap*h_time < 1/2 (edges shorter
  /// than half the torus, so the straight representative is unambiguous),
  /// 1 <= windings <= speed_cap*h_time + 1.
  void validate() const;

  int node_count() const { return n * n; }
};

/// One displacement of the translation-invariant edge stencil, in cells.
struct StencilEntry {
  int dx = 0;
  int dy = 0;
  Velocity velocity;        // (dx,dy)/(n*h_time)
  double disp_x = 0.0;      // dx/n, the lifted displacement
  double disp_y = 0.0;
};

/// Materialized edge of the phase graph.
struct PhaseEdge {
  int from = 0;
  int to = 0;
  int w1 = 0;               // winding of the straight representative
  int w2 = 0;
  Velocity velocity;
  double base_action = 0.0; // h_time * L(segment midpoint, velocity)
  double disp_x = 0.0;
  double disp_y = 0.0;
  double duration = 0.0;    // = spec.h_time
};

/// cost of e under L - c + k: base_action - <c, displacement> + k*duration.
inline double edge_cost(const PhaseEdge& e, const CohomologyClass& c, double k) {
  return e.base_action - (c.c1 * e.disp_x + c.c2 * e.disp_y) + k * e.duration;
}

/// Speed-capped discretization of the tangent bundle: n^2 cell-centered
/// torus grid nodes, and at every node one outgoing edge per stencil entry
/// (all integer cell displacements with |v| <= speed_cap, including the rest
/// displacement (0,0) whose action is exactly zero). Edge actions are
/// midpoint evaluations of L along the lifted straight segment, stored as
/// per-stencil-entry planes over the nodes. Immutable once built; safe to
/// share across threads.
class PhaseGraph {
 public:
  PhaseGraph(MagneticLagrangian L, const GridSpec& spec);

  const GridSpec& spec() const { return spec_; }
  const MagneticLagrangian& lagrangian() const { return lagr_; }

  int node_count() const { return num_nodes_; }
  int stencil_size() const { return static_cast<int>(stencil_.size()); }
  long long edge_count() const {
    return static_cast<long long>(num_nodes_) * stencil_size();
  }
  const std::vector<StencilEntry>& stencil() const { return stencil_; }

  // Row-major node layout: id = iy*n + ix, position ((ix+.5)/n, (iy+.5)/n).
  TorusPoint node_position(int id) const;
  int node_of(int ix, int iy) const { return iy * spec_.n + ix; }

  int head(int node, int stencil_idx) const;
  PhaseEdge edge(int node, int stencil_idx) const;

  /// base_action of edge (node, stencil_idx); the plane layout is
  /// planes()[stencil_idx * node_count() + node].
  double base_action(int node, int stencil_idx) const {
    return planes_[static_cast<std::size_t>(stencil_idx) * num_nodes_ + node];
  }
  const std::vector<double>& planes() const { return planes_; }

  /// Extremes of base_action over all edges (bisection brackets, cost scales).
  double min_base() const { return min_base_; }
  double max_base() const { return max_base_; }
  double max_abs_disp() const { return max_abs_disp_; }

  /// Debug dump: one JSON object per line, {from,to,w1,w2,base_action},
  /// nodes in row-major order, stencil entries in their fixed order.
  void dump_jsonl(std::ostream& os) const;

 private:
  void build_stencil();
  void build_planes();

  GridSpec spec_;
  MagneticLagrangian lagr_;
  int num_nodes_ = 0;
  std::vector<StencilEntry> stencil_;
  std::vector<double> planes_;
  double min_base_ = 0.0;
  double max_base_ = 0.0;
  double max_abs_disp_ = 0.0;
};

/// Lift a contiguous edge walk to a piecewise-straight path with time
/// h_time per edge; sample count = walk length + 1. The curve action of the
/// result matches the summed edge costs up to the midpoint-rule quadrature
/// error. Throws std::invalid_argument on non-contiguous walks.
std::vector<PathSample> walk_to_path(const PhaseGraph& g,
                                     std::span<const PhaseEdge> walk);

}  // namespace aubry
