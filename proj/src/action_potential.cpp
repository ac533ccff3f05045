#include "aubry/action_potential.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "aubry/io.hpp"
#include "aubry/min_mean_cycle.hpp"

namespace aubry {

namespace {

/// Indexed 4-ary min-heap with decrease-key, reused across sources.
class DaryHeap {
 public:
  explicit DaryHeap(int n) : pos_(n, -1) { heap_.reserve(n); }

  bool empty() const { return heap_.empty(); }

  void clear() {
    for (int v : heap_) pos_[v] = -1;
    heap_.clear();
  }

  void push_or_decrease(int v, const std::vector<double>& key) {
    if (pos_[v] < 0) {
      pos_[v] = static_cast<int>(heap_.size());
      heap_.push_back(v);
    }
    sift_up(pos_[v], key);
  }

  int pop_min(const std::vector<double>& key) {
    int top = heap_.front();
    pos_[top] = -1;
    int last = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
      heap_[0] = last;
      pos_[last] = 0;
      sift_down(0, key);
    }
    return top;
  }

 private:
  void sift_up(int i, const std::vector<double>& key) {
    int v = heap_[i];
    while (i > 0) {
      int p = (i - 1) >> 2;
      if (key[heap_[p]] <= key[v]) break;
      heap_[i] = heap_[p];
      pos_[heap_[i]] = i;
      i = p;
    }
    heap_[i] = v;
    pos_[v] = i;
  }

  void sift_down(int i, const std::vector<double>& key) {
    int v = heap_[i];
    int n = static_cast<int>(heap_.size());
    for (;;) {
      int c0 = (i << 2) + 1;
      if (c0 >= n) break;
      int best = c0;
      int cend = std::min(c0 + 4, n);
      for (int c = c0 + 1; c < cend; ++c)
        if (key[heap_[c]] < key[heap_[best]]) best = c;
      if (key[heap_[best]] >= key[v]) break;
      heap_[i] = heap_[best];
      pos_[heap_[i]] = i;
      i = best;
    }
    heap_[i] = v;
    pos_[v] = i;
  }

  std::vector<int> heap_;
  std::vector<int> pos_;
};

}  // namespace

PotentialTable potential_table(const PhaseGraph& g, const CohomologyClass& c,
                               double k, const PotentialOptions& opts) {
  mmc::GridCostView view(g, c, k);
  const int V = g.node_count();
  const int n = g.spec().n;
  const int S = g.stencil_size();
  const double tol_zero = 1e-9 * view.edge_cost_scale();

  auto scan = mmc::bellman_ford_scan(view, tol_zero, /*want_dist=*/true);
  if (scan.negative)
    throw NumericalError(
        "potential_table: negative cycle certified at this level; raise k");
  const std::vector<double>& pot = scan.dist;

  // Reduced nonnegative costs r(u,s) = cost + pot[u] - pot[head]; tiny
  // negative residue from the relaxation tolerance is clamped.
  std::vector<double> rplanes(static_cast<std::size_t>(S) * V);
  std::vector<int> heads(static_cast<std::size_t>(S) * V);
  for (int s = 0; s < S; ++s) {
    for (int u = 0; u < V; ++u) {
      int h = g.head(u, s);
      double r = view.cost(u, s) + pot[u] - pot[h];
      if (r < 0.0) {
        if (r < -16.0 * tol_zero)
          throw NumericalError("potential_table: potential is not feasible");
        r = 0.0;
      }
      rplanes[static_cast<std::size_t>(s) * V + u] = r;
      heads[static_cast<std::size_t>(s) * V + u] = h;
    }
  }

  PotentialTable pt;
  pt.k_used = k;
  pt.num_nodes = V;
  pt.h_time = g.spec().h_time;
  pt.cost_scale = view.cost_scale();
  pt.tol_zero = tol_zero;
  pt.self_loop.assign(V, std::numeric_limits<double>::infinity());

  pt.dense = opts.sources.empty() && V <= opts.dense_node_cap;
  std::vector<char> keep(V, 0);
  if (pt.dense) {
    pt.phi.assign(static_cast<std::size_t>(V) * V, 0.0);
  } else {
    if (opts.sources.empty() && V > opts.dense_node_cap)
      throw std::invalid_argument(
          "potential_table: node count above the dense cap; pass explicit sources");
    for (int s : opts.sources) {
      if (s < 0 || s >= V) throw std::invalid_argument("potential_table: bad source");
      keep[s] = 1;
    }
  }

  // Rest displacement: the cheapest cycle through a node starts at the rest
  // loop cost when present.
  for (int s = 0; s < S; ++s) {
    if (g.stencil()[s].dx == 0 && g.stencil()[s].dy == 0) {
      for (int u = 0; u < V; ++u)
        pt.self_loop[u] = std::min(pt.self_loop[u], view.cost(u, s));
    }
  }

  // One Dijkstra per source j over the reduced costs. Rows are kept when
  // requested; self_loop accumulates through the in-edges of j:
  //   self_loop[i] <= cost(i -> j) + phi[j][i].
  std::vector<double> dist(V);
  std::vector<char> done(V);
  DaryHeap heap(V);
  std::vector<double> row(V);
  const double inf = std::numeric_limits<double>::infinity();

  for (int j = 0; j < V; ++j) {
    std::fill(dist.begin(), dist.end(), inf);
    std::fill(done.begin(), done.end(), 0);
    heap.clear();
    dist[j] = 0.0;
    heap.push_or_decrease(j, dist);
    while (!heap.empty()) {
      int u = heap.pop_min(dist);
      if (done[u]) continue;
      done[u] = 1;
      double du = dist[u];
      for (int s = 0; s < S; ++s) {
        int h = heads[static_cast<std::size_t>(s) * V + u];
        if (done[h]) continue;
        double nd = du + rplanes[static_cast<std::size_t>(s) * V + u];
        if (nd < dist[h]) {
          dist[h] = nd;
          heap.push_or_decrease(h, dist);
        }
      }
    }
    // undo the reweighting: phi[j][i] = dist_r(j,i) - pot[j] + pot[i]
    for (int i = 0; i < V; ++i)
      row[i] = std::isfinite(dist[i]) ? dist[i] - pot[j] + pot[i] : inf;

    for (int s = 0; s < S; ++s) {
      const StencilEntry& e = g.stencil()[s];
      if (e.dx == 0 && e.dy == 0) continue;
      // tail of the s-edge into j
      int ix = j % n - e.dx, iy = j / n - e.dy;
      if (ix < 0) ix += n; else if (ix >= n) ix -= n;
      if (iy < 0) iy += n; else if (iy >= n) iy -= n;
      int i = iy * n + ix;
      double cyc = view.cost(i, s) + row[i];
      if (cyc < pt.self_loop[i]) pt.self_loop[i] = cyc;
    }

    if (pt.dense) {
      std::copy(row.begin(), row.end(), pt.phi.begin() + static_cast<std::size_t>(j) * V);
    } else if (keep[j]) {
      pt.row_index.push_back(j);
      pt.rows.push_back(row);
    }
  }
  if (pt.dense)
    for (int i = 0; i < V; ++i)
      pt.phi[static_cast<std::size_t>(i) * V + i] = pt.self_loop[i];
  return pt;
}

bool PotentialTable::has_row(int i) const {
  if (dense) return true;
  return std::find(row_index.begin(), row_index.end(), i) != row_index.end();
}

double PotentialTable::phi_at(int i, int j) const {
  if (i == j) return self_loop[i];
  if (dense) return phi[static_cast<std::size_t>(i) * num_nodes + j];
  auto it = std::find(row_index.begin(), row_index.end(), i);
  if (it == row_index.end())
    throw std::invalid_argument("PotentialTable: row not computed for this source");
  return rows[static_cast<std::size_t>(it - row_index.begin())][j];
}

std::vector<double> mather_semidistance(const PotentialTable& pt) {
  if (!pt.dense)
    throw std::invalid_argument("mather_semidistance: requires a dense table");
  const int V = pt.num_nodes;
  std::vector<double> delta(static_cast<std::size_t>(V) * V);
  for (int i = 0; i < V; ++i) {
    for (int j = 0; j < V; ++j) {
      delta[static_cast<std::size_t>(i) * V + j] =
          (i == j) ? pt.self_loop[i]
                   : pt.phi[static_cast<std::size_t>(i) * V + j] +
                         pt.phi[static_cast<std::size_t>(j) * V + i];
    }
  }
  return delta;
}

std::vector<int> aubry_nodes(const PotentialTable& pt, double eps_aubry) {
  std::vector<int> out;
  for (int i = 0; i < pt.num_nodes; ++i)
    if (pt.self_loop[i] <= eps_aubry) out.push_back(i);
  return out;
}

StaticClassPartition static_classes(const PotentialTable& pt,
                                    std::span<const int> aubry, double eps_class,
                                    double eps_aubry_record) {
  const int m = static_cast<int>(aubry.size());
  std::vector<int> idx(aubry.begin(), aubry.end());
  std::sort(idx.begin(), idx.end());

  std::vector<int> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (int a = 0; a < m; ++a) {
    for (int b = a + 1; b < m; ++b) {
      double delta = pt.phi_at(idx[a], idx[b]) + pt.phi_at(idx[b], idx[a]);
      if (delta <= eps_class) {
        int ra = find(a), rb = find(b);
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
      }
    }
  }

  std::vector<std::vector<int>> groups(m);
  for (int a = 0; a < m; ++a) groups[find(a)].push_back(idx[a]);
  StaticClassPartition part;
  part.aubry_nodes = idx;
  part.eps_class = eps_class;
  part.eps_aubry = eps_aubry_record;
  for (auto& grp : groups)
    if (!grp.empty()) part.classes.push_back(std::move(grp));
  std::sort(part.classes.begin(), part.classes.end(),
            [](const std::vector<int>& a, const std::vector<int>& b) {
              if (a.size() != b.size()) return a.size() > b.size();
              return a.front() < b.front();
            });
  return part;
}

void write_potential_csv(std::ostream& os, const PotentialTable& pt, double threshold) {
  os << "i,j,phi\n";
  auto emit = [&](int i, int j, double v) {
    if (v <= threshold)
      os << i << ',' << j << ',' << fmt_double(v) << '\n';
  };
  if (pt.dense) {
    for (int i = 0; i < pt.num_nodes; ++i)
      for (int j = 0; j < pt.num_nodes; ++j)
        emit(i, j, pt.phi_at(i, j));
  } else {
    for (std::size_t r = 0; r < pt.row_index.size(); ++r)
      for (int j = 0; j < pt.num_nodes; ++j)
        emit(pt.row_index[r], j, pt.rows[r][j]);
  }
}

void write_partition_json(std::ostream& os, const StaticClassPartition& p) {
  os << "{\"eps_aubry\":" << fmt_double(p.eps_aubry)
     << ",\"eps_class\":" << fmt_double(p.eps_class) << ",\"classes\":[";
  for (std::size_t i = 0; i < p.classes.size(); ++i) {
    if (i) os << ',';
    os << '[';
    for (std::size_t j = 0; j < p.classes[i].size(); ++j) {
      if (j) os << ',';
      os << p.classes[i][j];
    }
    os << ']';
  }
  os << "]}\n";
}

}  // namespace aubry
