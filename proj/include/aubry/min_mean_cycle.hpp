#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "aubry/dense_graph.hpp"
#include "aubry/kernels.hpp"
#include "aubry/phase_graph.hpp"
#include "aubry/torus.hpp"

// Solver core shared by the critical-value and potential modules. The three
// algorithms (Karp's exact DP, Howard's policy iteration, Bellman-Ford
// negative-cycle scan) are templates over a cost view; a view binds a graph
// to a cohomology class and an action offset k:
//
//   GridCostView   - phase graph; edges are stencil planes, relaxation rounds
//                    run through the runtime-dispatched min-plus kernels.
//   DenseCostView  - explicit edge list, scalar relaxation.
//
// A view exposes uniform edge duration, Jacobi relaxation of all edges, and
// per-edge access through (head, tag) pairs, where the tag identifies an
// incoming edge of `head` (stencil index for the grid, edge index for dense
// graphs).

namespace aubry::mmc {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Edge into `head`, named by the view-specific tag.
struct Hop {
  int head = 0;
  int32_t tag = -1;
};

class GridCostView {
 public:
  GridCostView(const PhaseGraph& g, const CohomologyClass& c, double k);

  int node_count() const { return g_->node_count(); }
  double edge_time() const { return g_->spec().h_time; }
  double cost(int node, int s) const { return g_->base_action(node, s) + off_[s]; }
  int head(int node, int s) const { return g_->head(node, s); }

  int pred_tail(int head, int32_t tag) const;
  double pred_cost(int head, int32_t tag) const {
    return cost(pred_tail(head, tag), tag);
  }

  bool relax_round(const double* din, double* dout, int32_t* pred, double eps) const;

  template <class F>
  void for_each_out(int node, F&& f) const {
    const int S = g_->stencil_size();
    for (int s = 0; s < S; ++s)
      f(static_cast<int32_t>(s), head(node, s), cost(node, s));
  }

  double min_cost_per_time() const { return min_cost_ / edge_time(); }
  double max_cost_per_time() const { return max_cost_ / edge_time(); }
  double cost_scale() const {
    return std::max(1.0, std::max(std::abs(min_cost_per_time()),
                                  std::abs(max_cost_per_time())));
  }
  /// Scale of a single edge cost; the right yardstick for sums along walks.
  double edge_cost_scale() const {
    return std::max(1.0, std::max(std::abs(min_cost_), std::abs(max_cost_)));
  }

  const PhaseGraph& graph() const { return *g_; }

 private:
  const PhaseGraph* g_;
  std::vector<double> off_;  // per stencil entry: -<c,disp> + k*h
  double min_cost_ = 0.0;
  double max_cost_ = 0.0;
  const kern::Kernels* kern_;
};

class DenseCostView {
 public:
  DenseCostView(const DenseGraph& g, double k) : g_(&g), k_(k) {
    g.finalize();
    min_cost_ = kInf;
    max_cost_ = -kInf;
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      double c = cost_of_edge(static_cast<int>(e));
      min_cost_ = std::min(min_cost_, c);
      max_cost_ = std::max(max_cost_, c);
    }
    if (g.edges.empty()) min_cost_ = max_cost_ = 0.0;
  }

  int node_count() const { return g_->node_count(); }
  double edge_time() const { return g_->edge_time(); }
  double cost_of_edge(int e) const {
    return g_->edges[e].cost + k_ * g_->edge_time();
  }

  int pred_tail(int /*head*/, int32_t tag) const { return g_->edges[tag].from; }
  double pred_cost(int /*head*/, int32_t tag) const { return cost_of_edge(tag); }

  bool relax_round(const double* din, double* dout, int32_t* pred, double eps) const {
    bool big = false;
    const auto& edges = g_->edges;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      double cand = din[edges[e].from] + cost_of_edge(static_cast<int>(e));
      double& slot = dout[edges[e].to];
      if (cand < slot) {
        if (slot - cand > eps) big = true;
        slot = cand;
        pred[edges[e].to] = static_cast<int32_t>(e);
      }
    }
    return big;
  }

  template <class F>
  void for_each_out(int node, F&& f) const {
    for (int e : g_->out_edges(node))
      f(static_cast<int32_t>(e), g_->edges[e].to, cost_of_edge(e));
  }

  double min_cost_per_time() const { return min_cost_ / edge_time(); }
  double max_cost_per_time() const { return max_cost_ / edge_time(); }
  double cost_scale() const {
    return std::max(1.0, std::max(std::abs(min_cost_per_time()),
                                  std::abs(max_cost_per_time())));
  }
  double edge_cost_scale() const {
    return std::max(1.0, std::max(std::abs(min_cost_), std::abs(max_cost_)));
  }

  const DenseGraph& graph() const { return *g_; }

 private:
  const DenseGraph* g_;
  double k_ = 0.0;
  double min_cost_ = 0.0;
  double max_cost_ = 0.0;
};

struct MinMeanResult {
  double mean_per_time = 0.0;  // exact mean of the returned cycle
  std::vector<Hop> cycle;      // hops in walk order
};

struct ScanResult {
  bool negative = false;
  std::vector<Hop> cycle;    // certified cycle when negative
  double cycle_cost = 0.0;   // exact cost sum of that cycle
  int rounds = 0;
  std::vector<double> dist;  // converged distances when not negative
};

// ---------------------------------------------------------------------------
// implementation

namespace detail {

template <class View>
double cycle_cost(const View& view, const std::vector<Hop>& cycle) {
  double total = 0.0;
  for (const Hop& h : cycle) total += view.pred_cost(h.head, h.tag);
  return total;
}

/// Walk the predecessor graph from every node and return the cheapest cycle
/// found (empty when the predecessor graph is acyclic).
template <class View>
std::pair<std::vector<Hop>, double> best_pred_cycle(const View& view,
                                                    const std::vector<int32_t>& pred) {
  const int V = view.node_count();
  std::vector<int> color(V, -1);
  std::vector<Hop> best;
  double best_cost = kInf;
  std::vector<int> path;
  for (int start = 0; start < V; ++start) {
    if (color[start] >= 0 || pred[start] < 0) continue;
    path.clear();
    int cur = start;
    while (cur >= 0 && color[cur] < 0 && pred[cur] >= 0) {
      color[cur] = start;
      path.push_back(cur);
      cur = view.pred_tail(cur, pred[cur]);
    }
    if (cur >= 0 && color[cur] == start) {
      auto it = std::find(path.begin(), path.end(), cur);
      std::vector<Hop> cyc;
      for (auto p = it; p != path.end(); ++p) cyc.push_back({*p, pred[*p]});
      std::reverse(cyc.begin(), cyc.end());  // walk order
      double cost = cycle_cost(view, cyc);
      if (cost < best_cost) {
        best_cost = cost;
        best = std::move(cyc);
      }
    }
  }
  return {std::move(best), best_cost};
}

}  // namespace detail

/// Virtual-root Bellman-Ford (Jacobi rounds, all distances start at 0).
/// A negative verdict is certified by an explicit cycle with exact cost below
/// -tol_zero. The non-negative verdict returns once a round brings no
/// improvement above tol_zero/(4V), or after the round cap with only
/// cycles of cost >= -tol_zero in the predecessor graph (roundoff dust being
/// pumped around near-zero cycles). Converged distances form a feasible
/// potential and are returned when want_dist is set.
template <class View>
ScanResult bellman_ford_scan(const View& view, double tol_zero,
                             bool want_dist = false) {
  const int V = view.node_count();
  const double eps_conv = tol_zero / (4.0 * static_cast<double>(V) + 4.0);
  std::vector<double> d(V, 0.0), dn(V);
  std::vector<int32_t> pred(V, -1);
  const int hard_cap = V + 64;

  ScanResult res;
  int next_checkpoint = 8;
  for (int r = 1; r <= hard_cap; ++r) {
    std::copy(d.begin(), d.end(), dn.begin());
    bool improved = view.relax_round(d.data(), dn.data(), pred.data(), eps_conv);
    d.swap(dn);
    res.rounds = r;
    if (!improved) break;
    if (r >= next_checkpoint || r >= V) {
      next_checkpoint *= 2;
      auto [cycle, cost] = detail::best_pred_cycle(view, pred);
      if (!cycle.empty() && cost < -tol_zero) {
        res.negative = true;
        res.cycle = std::move(cycle);
        res.cycle_cost = cost;
        return res;
      }
    }
  }
  res.negative = false;
  if (want_dist) res.dist = std::move(d);
  return res;
}

/// Karp's dynamic program with walk recovery. Exact in O(V*E) time and
/// O(V^2) memory; intended for graphs small enough to cross-check (the
/// public wrapper guards the size).
template <class View>
MinMeanResult karp_min_mean(const View& view) {
  const int V = view.node_count();
  const std::size_t Vz = static_cast<std::size_t>(V);
  // D[r][u] = min cost over walks of exactly r edges ending at u, any start.
  std::vector<double> D((Vz + 1) * Vz, 0.0);
  std::vector<int32_t> P(Vz * Vz, -1);
  for (int r = 1; r <= V; ++r) {
    double* dout = &D[static_cast<std::size_t>(r) * Vz];
    std::fill(dout, dout + Vz, kInf);
    view.relax_round(&D[static_cast<std::size_t>(r - 1) * Vz], dout,
                     &P[static_cast<std::size_t>(r - 1) * Vz], kInf);
  }

  const double* Dv = &D[Vz * Vz];
  double best_ratio = kInf;
  int best_u = -1;
  for (int u = 0; u < V; ++u) {
    if (!std::isfinite(Dv[u])) continue;
    double ratio = -kInf;
    for (int k = 0; k < V; ++k) {
      double dk = D[static_cast<std::size_t>(k) * Vz + u];
      if (!std::isfinite(dk)) continue;
      ratio = std::max(ratio, (Dv[u] - dk) / static_cast<double>(V - k));
    }
    if (ratio < best_ratio) {
      best_ratio = ratio;
      best_u = u;
    }
  }
  if (best_u < 0) throw NumericalError("karp_min_mean: graph has no cycles");

  // The V-edge walk ending at best_u contains a min-mean cycle; collect every
  // closure along the back-walk and keep the best exact mean.
  std::vector<int> nodes(Vz + 1);
  std::vector<int32_t> tags(Vz + 1, -1);
  nodes[V] = best_u;
  for (int r = V; r >= 1; --r) {
    int32_t tag = P[static_cast<std::size_t>(r - 1) * Vz + nodes[r]];
    if (tag < 0) throw NumericalError("karp_min_mean: broken predecessor chain");
    tags[r] = tag;
    nodes[r - 1] = view.pred_tail(nodes[r], tag);
  }
  std::vector<int> seen(Vz, -1);
  MinMeanResult best_cyc;
  double best_mean = kInf;
  for (int r = V; r >= 0; --r) {
    int u = nodes[r];
    if (seen[u] >= 0) {
      int j = seen[u];  // nodes[j] == nodes[r], j > r
      std::vector<Hop> cyc;
      for (int t = r + 1; t <= j; ++t) cyc.push_back({nodes[t], tags[t]});
      double mean = detail::cycle_cost(view, cyc) /
                    (static_cast<double>(cyc.size()) * view.edge_time());
      if (mean < best_mean) {
        best_mean = mean;
        best_cyc.cycle = std::move(cyc);
      }
    }
    seen[u] = r;
  }
  if (best_cyc.cycle.empty())
    throw NumericalError("karp_min_mean: recovery walk contained no cycle");
  best_cyc.mean_per_time = best_mean;

  double tol = 1e-7 * std::max(1.0, std::abs(best_ratio) / view.edge_time());
  if (best_mean > best_ratio / view.edge_time() + tol)
    throw NumericalError("karp_min_mean: recovered cycle misses the DP optimum");
  return best_cyc;
}

/// Howard's policy iteration (multi-chain, minimizing). Fast on the large
/// stencil graphs; the test suite cross-checks it against Karp and against
/// the bisection route.
template <class View>
MinMeanResult howard_min_mean(const View& view) {
  const int V = view.node_count();
  const double ht = view.edge_time();
  const double eps = 1e-12 * view.cost_scale();
  constexpr int kMaxIters = 2000;

  std::vector<int32_t> pol(V, -1);
  for (int u = 0; u < V; ++u) {
    double best = kInf;
    view.for_each_out(u, [&](int32_t tag, int, double cost) {
      if (cost < best) {
        best = cost;
        pol[u] = tag;
      }
    });
    if (pol[u] < 0) throw NumericalError("howard_min_mean: node without out-edges");
  }

  std::vector<double> bias(V, 0.0), mu(V, 0.0), pcost(V);
  std::vector<int> comp(V, -1), pos(V, -1), succ(V);
  std::vector<int> cycle_rep;  // one on-cycle node per component
  std::vector<double> comp_mu;
  std::vector<int> walk;

  for (int iter = 0; iter < kMaxIters; ++iter) {
    for (int u = 0; u < V; ++u) {
      view.for_each_out(u, [&](int32_t tag, int hd, double cost) {
        if (tag == pol[u]) {
          succ[u] = hd;
          pcost[u] = cost;
        }
      });
    }

    // --- policy evaluation: cycles, per-component means, bias ---
    std::fill(comp.begin(), comp.end(), -1);
    std::fill(pos.begin(), pos.end(), -1);
    cycle_rep.clear();
    comp_mu.clear();
    for (int start = 0; start < V; ++start) {
      if (comp[start] >= 0) continue;
      walk.clear();
      int cur = start;
      while (comp[cur] < 0 && pos[cur] < 0) {
        pos[cur] = static_cast<int>(walk.size());
        walk.push_back(cur);
        cur = succ[cur];
      }
      int comp_id;
      if (comp[cur] >= 0) {
        comp_id = comp[cur];  // drains into an existing component
      } else {
        comp_id = static_cast<int>(comp_mu.size());
        int c0 = pos[cur];
        double total = 0.0;
        int len = static_cast<int>(walk.size()) - c0;
        for (int i = c0; i < static_cast<int>(walk.size()); ++i) total += pcost[walk[i]];
        double m = total / (static_cast<double>(len) * ht);
        comp_mu.push_back(m);
        cycle_rep.push_back(cur);
        bias[cur] = 0.0;
        for (int i = static_cast<int>(walk.size()) - 1; i > c0; --i) {
          int u = walk[i];
          bias[u] = pcost[u] - m * ht + bias[succ[u]];
        }
        for (int i = c0; i < static_cast<int>(walk.size()); ++i) comp[walk[i]] = comp_id;
        walk.resize(c0);  // the prefix drains into the new cycle
      }
      for (int i = static_cast<int>(walk.size()) - 1; i >= 0; --i) {
        int u = walk[i];
        comp[u] = comp_id;
        bias[u] = pcost[u] - comp_mu[comp_id] * ht + bias[succ[u]];
      }
      for (int u : walk) pos[u] = -1;
    }
    for (int u = 0; u < V; ++u) mu[u] = comp_mu[comp[u]];

    // --- policy improvement: component mean first, then bias ---
    bool changed = false;
    for (int u = 0; u < V; ++u) {
      double cur_mu = mu[u];
      int32_t tag_mu = -1;
      double best_mu = cur_mu;
      view.for_each_out(u, [&](int32_t tag, int hd, double) {
        if (mu[hd] < best_mu - eps) {
          best_mu = mu[hd];
          tag_mu = tag;
        }
      });
      if (tag_mu >= 0) {
        pol[u] = tag_mu;
        changed = true;
        continue;
      }
      double best_val = pcost[u] - cur_mu * ht + bias[succ[u]];
      int32_t best_tag = pol[u];
      view.for_each_out(u, [&](int32_t tag, int hd, double cost) {
        if (mu[hd] > cur_mu + eps) return;
        double val = cost - cur_mu * ht + bias[hd];
        if (val < best_val - eps) {
          best_val = val;
          best_tag = tag;
        }
      });
      if (best_tag != pol[u]) {
        pol[u] = best_tag;
        changed = true;
      }
    }
    if (changed) continue;

    int best_comp = 0;
    for (std::size_t i = 1; i < comp_mu.size(); ++i)
      if (comp_mu[i] < comp_mu[best_comp]) best_comp = static_cast<int>(i);
    MinMeanResult res;
    int startn = cycle_rep[best_comp];
    int u = startn;
    do {
      int h = succ[u];
      res.cycle.push_back({h, pol[u]});
      u = h;
    } while (u != startn);
    res.mean_per_time = detail::cycle_cost(view, res.cycle) /
                        (static_cast<double>(res.cycle.size()) * ht);
    return res;
  }
  throw NumericalError("howard_min_mean: did not converge");
}

}  // namespace aubry::mmc
