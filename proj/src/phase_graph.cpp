#include "aubry/phase_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "aubry/io.hpp"
#include "aubry/kernels.hpp"

namespace aubry {

void GridSpec::validate() const {
  if (n < 8) throw std::invalid_argument("GridSpec: n must be >= 8");
  if (!(h_time > 0.0)) throw std::invalid_argument("GridSpec: h_time must be positive");
  if (!(speed_cap > 0.0)) throw std::invalid_argument("GridSpec: speed_cap must be positive");
  if (!(speed_cap * h_time < 0.5))
    throw std::invalid_argument(
        "GridSpec: speed_cap*h_time must stay below 1/2 so edges are unambiguous");
  if (windings < 1) throw std::invalid_argument("GridSpec: windings must be >= 1");
  if (static_cast<double>(windings) > speed_cap * h_time + 1.0)
    throw std::invalid_argument("GridSpec: windings exceeds speed_cap*h_time + 1");
}

PhaseGraph::PhaseGraph(MagneticLagrangian L, const GridSpec& spec)
    : spec_(spec), lagr_(std::move(L)), num_nodes_(spec.n * spec.n) {
  spec_.validate();
  build_stencil();
  build_planes();
}

void PhaseGraph::build_stencil() {
  const int n = spec_.n;
  const double scale = 1.0 / (n * spec_.h_time);  // velocity per cell
  const double rad = spec_.speed_cap * spec_.h_time * n;  // cells
  const int r = static_cast<int>(std::floor(rad));
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      double vx = dx * scale, vy = dy * scale;
      if (std::sqrt(vx * vx + vy * vy) > spec_.speed_cap) continue;
      StencilEntry e;
      e.dx = dx;
      e.dy = dy;
      e.velocity = {vx, vy};
      e.disp_x = static_cast<double>(dx) / n;
      e.disp_y = static_cast<double>(dy) / n;
      stencil_.push_back(e);
    }
  }
  if (stencil_.empty()) throw std::invalid_argument("PhaseGraph: empty stencil");
  max_abs_disp_ = rad / n;
}

namespace {

// One Fourier term accumulated into a plane over the midpoint grid
// X_i = (2i+1+dx)/(2n), Y_j = (2j+1+dy)/(2n): the phase splits as
// theta = A_i + B_j with A_i = pi*kx*(2i+1+dx)/n, and each row collapses to
// out_row += P*cosA + Q*sinA with row scalars P,Q.
void accumulate_trig_term(double* plane, int n, int dx, int dy, double weight,
                          const TrigTerm& t, std::vector<double>& ca,
                          std::vector<double>& sa, const kern::Kernels& K) {
  ca.resize(n);
  sa.resize(n);
  for (int i = 0; i < n; ++i) {
    long long num = static_cast<long long>(t.deg_x) * (2LL * i + 1 + dx);
    cos_sin_pi_frac(num, n, ca[i], sa[i]);
  }
  double wc = weight * t.cos_coef, ws = weight * t.sin_coef;
  for (int j = 0; j < n; ++j) {
    double cb, sb;
    long long num = static_cast<long long>(t.deg_y) * (2LL * j + 1 + dy);
    cos_sin_pi_frac(num, n, cb, sb);
    double p = wc * cb + ws * sb;
    double q = ws * cb - wc * sb;
    K.axpby2(plane + static_cast<std::size_t>(j) * n, ca.data(), sa.data(), p, q, n);
  }
}

}  // namespace

void PhaseGraph::build_planes() {
  const int n = spec_.n;
  const double h = spec_.h_time;
  const std::size_t V = static_cast<std::size_t>(num_nodes_);
  planes_.assign(stencil_.size() * V, 0.0);
  const auto& K = kern::active();
  const auto& fourier = lagr_.fourier();
  const XProfile* prof = lagr_.profile();

  std::vector<double> ca, sa, frow;
  min_base_ = std::numeric_limits<double>::infinity();
  max_base_ = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < stencil_.size(); ++s) {
    const StencilEntry& e = stencil_[s];
    double* plane = planes_.data() + s * V;
    double kinetic = h * 0.5 * (e.velocity.v1 * e.velocity.v1 +
                                e.velocity.v2 * e.velocity.v2);
    std::fill(plane, plane + V, kinetic);

    double w1 = h * e.velocity.v1;  // weight of the eta1 pairing
    double w2 = h * e.velocity.v2;
    if (w1 != 0.0)
      for (const TrigTerm& t : fourier.comp1())
        accumulate_trig_term(plane, n, e.dx, e.dy, w1, t, ca, sa, K);
    if (w2 != 0.0) {
      for (const TrigTerm& t : fourier.comp2())
        accumulate_trig_term(plane, n, e.dx, e.dy, w2, t, ca, sa, K);
      if (prof) {
        frow.resize(n);
        for (int i = 0; i < n; ++i) {
          double xm = (2.0 * i + 1.0 + e.dx) / (2.0 * n);
          frow[i] = w2 * prof->value(xm);
        }
        for (int j = 0; j < n; ++j) {
          double* row = plane + static_cast<std::size_t>(j) * n;
          for (int i = 0; i < n; ++i) row[i] += frow[i];
        }
      }
    }
    for (std::size_t i = 0; i < V; ++i) {
      min_base_ = std::min(min_base_, plane[i]);
      max_base_ = std::max(max_base_, plane[i]);
    }
  }
}

TorusPoint PhaseGraph::node_position(int id) const {
  int ix = id % spec_.n;
  int iy = id / spec_.n;
  return {(ix + 0.5) / spec_.n, (iy + 0.5) / spec_.n};
}

int PhaseGraph::head(int node, int stencil_idx) const {
  const int n = spec_.n;
  const StencilEntry& e = stencil_[stencil_idx];
  int ix = node % n + e.dx;
  int iy = node / n + e.dy;
  if (ix < 0) ix += n; else if (ix >= n) ix -= n;
  if (iy < 0) iy += n; else if (iy >= n) iy -= n;
  return iy * n + ix;
}

PhaseEdge PhaseGraph::edge(int node, int stencil_idx) const {
  const int n = spec_.n;
  const StencilEntry& e = stencil_[stencil_idx];
  int ix = node % n, iy = node / n;
  int tx = ix + e.dx, ty = iy + e.dy;
  PhaseEdge out;
  out.w1 = (tx < 0) ? -1 : (tx >= n ? 1 : 0);
  out.w2 = (ty < 0) ? -1 : (ty >= n ? 1 : 0);
  out.from = node;
  out.to = (ty - out.w2 * n) * n + (tx - out.w1 * n);
  out.velocity = e.velocity;
  out.base_action = base_action(node, stencil_idx);
  out.disp_x = e.disp_x;
  out.disp_y = e.disp_y;
  out.duration = spec_.h_time;
  return out;
}

void PhaseGraph::dump_jsonl(std::ostream& os) const {
  for (int u = 0; u < num_nodes_; ++u) {
    for (int s = 0; s < stencil_size(); ++s) {
      PhaseEdge e = edge(u, s);
      os << "{\"from\":" << e.from << ",\"to\":" << e.to << ",\"w1\":" << e.w1
         << ",\"w2\":" << e.w2 << ",\"base_action\":" << fmt_double(e.base_action)
         << "}\n";
    }
  }
}

std::vector<PathSample> walk_to_path(const PhaseGraph& g,
                                     std::span<const PhaseEdge> walk) {
  if (walk.empty()) throw std::invalid_argument("walk_to_path: empty walk");
  for (std::size_t i = 0; i + 1 < walk.size(); ++i)
    if (walk[i].to != walk[i + 1].from)
      throw std::invalid_argument("walk_to_path: edges are not contiguous");

  const double h = g.spec().h_time;
  std::vector<PathSample> path;
  path.reserve(walk.size() + 1);
  TorusPoint q = g.node_position(walk.front().from);
  double lx = q.x, ly = q.y;  // positional lift
  path.push_back({0.0, {q, walk.front().velocity}});
  for (std::size_t i = 0; i < walk.size(); ++i) {
    lx += walk[i].disp_x;
    ly += walk[i].disp_y;
    Velocity v = (i + 1 < walk.size()) ? walk[i + 1].velocity : walk[i].velocity;
    path.push_back({(i + 1) * h, {TorusPoint::reduced(lx, ly), v}});
  }
  return path;
}

}  // namespace aubry
