#include "aubry/critical_value.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "aubry/io.hpp"
#include "aubry/min_mean_cycle.hpp"

namespace aubry {

namespace mmc {

GridCostView::GridCostView(const PhaseGraph& g, const CohomologyClass& c, double k)
    : g_(&g), kern_(&kern::active()) {
  const auto& st = g.stencil();
  off_.resize(st.size());
  for (std::size_t s = 0; s < st.size(); ++s)
    off_[s] = -(c.c1 * st[s].disp_x + c.c2 * st[s].disp_y) + k * g.spec().h_time;
  double off_min = *std::min_element(off_.begin(), off_.end());
  double off_max = *std::max_element(off_.begin(), off_.end());
  // conservative envelope from the plane extrema and offset extrema
  min_cost_ = g.planes().empty() ? 0.0 : (g.min_base() + off_min);
  max_cost_ = g.planes().empty() ? 0.0 : (g.max_base() + off_max);
}

int GridCostView::pred_tail(int head, int32_t tag) const {
  const int n = g_->spec().n;
  const StencilEntry& e = g_->stencil()[tag];
  int ix = head % n - e.dx;
  int iy = head / n - e.dy;
  if (ix < 0) ix += n; else if (ix >= n) ix -= n;
  if (iy < 0) iy += n; else if (iy >= n) iy -= n;
  return iy * n + ix;
}

bool GridCostView::relax_round(const double* din, double* dout, int32_t* pred,
                               double eps) const {
  const int n = g_->spec().n;
  const std::size_t V = static_cast<std::size_t>(g_->node_count());
  const auto& st = g_->stencil();
  const double* planes = g_->planes().data();
  bool big = false;
  for (std::size_t s = 0; s < st.size(); ++s) {
    const int dx = st[s].dx, dy = st[s].dy;
    const double off = off_[s];
    const double* plane = planes + s * V;
    const int32_t tag = static_cast<int32_t>(s);
    int sh = dx % n;
    if (sh < 0) sh += n;
    for (int jy = 0; jy < n; ++jy) {  // destination row
      int sy = jy - dy;
      if (sy < 0) sy += n; else if (sy >= n) sy -= n;
      double* drow = dout + static_cast<std::size_t>(jy) * n;
      const double* srow = din + static_cast<std::size_t>(sy) * n;
      const double* arow = plane + static_cast<std::size_t>(sy) * n;
      int32_t* prow = pred + static_cast<std::size_t>(jy) * n;
      // dest x in [sh, n) reads source x in [0, n-sh); the wrapped remainder
      // dest x in [0, sh) reads source x in [n-sh, n)
      if (n - sh > 0)
        big |= kern_->minplus_pred(drow + sh, srow, arow, off, prow + sh, tag, eps,
                                   static_cast<std::size_t>(n - sh));
      if (sh > 0)
        big |= kern_->minplus_pred(drow, srow + (n - sh), arow + (n - sh), off, prow,
                                   tag, eps, static_cast<std::size_t>(sh));
    }
  }
  return big;
}

}  // namespace mmc

namespace {

using mmc::Hop;

CycleCertificate materialize(const PhaseGraph& g, const CohomologyClass& c,
                             const std::vector<Hop>& hops) {
  mmc::GridCostView v0(g, c, 0.0);
  CycleCertificate cert;
  cert.edges.reserve(hops.size());
  double total = 0.0;
  for (const Hop& h : hops) {
    int from = v0.pred_tail(h.head, h.tag);
    PhaseEdge e = g.edge(from, h.tag);
    CertificateEdge ce;
    ce.from = e.from;
    ce.to = e.to;
    ce.w1 = e.w1;
    ce.w2 = e.w2;
    ce.velocity = e.velocity;
    ce.duration = e.duration;
    ce.cost = edge_cost(e, c, 0.0);
    total += ce.cost;
    cert.edges.push_back(ce);
  }
  cert.total_time = static_cast<double>(hops.size()) * g.spec().h_time;
  cert.mean_cost = total / cert.total_time;
  return cert;
}

CycleCertificate materialize(const DenseGraph& g, const std::vector<Hop>& hops) {
  CycleCertificate cert;
  cert.edges.reserve(hops.size());
  double total = 0.0;
  for (const Hop& h : hops) {
    const DenseGraph::Edge& e = g.edges[h.tag];
    CertificateEdge ce;
    ce.from = e.from;
    ce.to = e.to;
    ce.cost = e.cost;
    ce.duration = g.h_time;
    total += ce.cost;
    cert.edges.push_back(ce);
  }
  cert.total_time = static_cast<double>(hops.size()) * g.h_time;
  cert.mean_cost = total / cert.total_time;
  return cert;
}

// Karp keeps the full DP table; cap the node count so memory stays modest.
constexpr int kKarpNodeCap = 2048;
constexpr long long kAutoKarpWork = 500'000'000;  // V*E

template <class View>
mmc::MinMeanResult run_min_mean(const View& view, MeanCycleMethod method,
                                long long edge_count) {
  const long long work = static_cast<long long>(view.node_count()) * edge_count;
  switch (method) {
    case MeanCycleMethod::karp:
      if (view.node_count() > kKarpNodeCap)
        throw std::invalid_argument(
            "min_mean_cycle: graph too large for the Karp reference; use howard");
      return mmc::karp_min_mean(view);
    case MeanCycleMethod::howard:
      return mmc::howard_min_mean(view);
    case MeanCycleMethod::automatic:
    default:
      if (view.node_count() <= kKarpNodeCap && work <= kAutoKarpWork)
        return mmc::karp_min_mean(view);
      return mmc::howard_min_mean(view);
  }
}

// Zero-cycle comparisons are sums of edge costs along walks, so the
// tolerance scales with the single-edge cost magnitude.
double default_tol_zero(double edge_cost_scale) { return 1e-9 * edge_cost_scale; }

template <class MakeView>
double bisect_impl(MakeView make_view, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("critical_value_bisection: tol must be positive");
  auto probe_view = make_view(0.0);
  double lo = -probe_view.max_cost_per_time() - 1.0;
  double hi = -probe_view.min_cost_per_time() + 1.0;
  double tz = default_tol_zero(probe_view.edge_cost_scale());
  auto negative_at = [&](double k) {
    auto view = make_view(k);
    return mmc::bellman_ford_scan(view, tz).negative;
  };
  if (!negative_at(lo) || negative_at(hi))
    throw NumericalError("critical_value_bisection: could not establish a bracket");
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (negative_at(mid))
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

CycleCertificate min_mean_cycle(const PhaseGraph& g, const CohomologyClass& c,
                                MeanCycleMethod method) {
  mmc::GridCostView view(g, c, 0.0);
  auto res = run_min_mean(view, method, g.edge_count());
  return materialize(g, c, res.cycle);
}

CycleCertificate min_mean_cycle(const DenseGraph& g, MeanCycleMethod method) {
  mmc::DenseCostView view(g, 0.0);
  auto res = run_min_mean(view, method, static_cast<long long>(g.edges.size()));
  return materialize(g, res.cycle);
}

NegativeCycleReport has_negative_cycle(const PhaseGraph& g, const CohomologyClass& c,
                                       double k, double tol_zero) {
  mmc::GridCostView view(g, c, k);
  if (tol_zero <= 0.0) tol_zero = default_tol_zero(view.edge_cost_scale());
  auto scan = mmc::bellman_ford_scan(view, tol_zero);
  NegativeCycleReport rep;
  rep.found = scan.negative;
  rep.rounds = scan.rounds;
  if (scan.negative) rep.certificate = materialize(g, c, scan.cycle);
  return rep;
}

NegativeCycleReport has_negative_cycle(const DenseGraph& g, double k, double tol_zero) {
  mmc::DenseCostView view(g, k);
  if (tol_zero <= 0.0) tol_zero = default_tol_zero(view.edge_cost_scale());
  auto scan = mmc::bellman_ford_scan(view, tol_zero);
  NegativeCycleReport rep;
  rep.found = scan.negative;
  rep.rounds = scan.rounds;
  if (scan.negative) rep.certificate = materialize(g, scan.cycle);
  return rep;
}

double critical_value_bisection(const PhaseGraph& g, const CohomologyClass& c,
                                double tol) {
  return bisect_impl([&](double k) { return mmc::GridCostView(g, c, k); }, tol);
}

double critical_value_bisection(const DenseGraph& g, double tol) {
  return bisect_impl([&](double k) { return mmc::DenseCostView(g, k); }, tol);
}

double alpha_discrete(const PhaseGraph& g, const CohomologyClass& c,
                      MeanCycleMethod method) {
  return -min_mean_cycle(g, c, method).mean_cost;
}

AlphaTable alpha_function(const PhaseGraph& g, std::span<const CohomologyClass> classes,
                          MeanCycleMethod method) {
  if (classes.empty())
    throw std::invalid_argument("alpha_function: class list must be nonempty");
  AlphaTable table;
  table.classes.assign(classes.begin(), classes.end());
  table.values.reserve(classes.size());
  for (const CohomologyClass& c : classes)
    table.values.push_back(alpha_discrete(g, c, method));
  return table;
}

void write_alpha_csv(std::ostream& os, const AlphaTable& table) {
  os << "c1,c2,alpha\n";
  for (std::size_t i = 0; i < table.classes.size(); ++i)
    os << fmt_double(table.classes[i].c1) << ',' << fmt_double(table.classes[i].c2)
       << ',' << fmt_double(table.values[i]) << '\n';
}

void write_certificate_json(std::ostream& os, const CycleCertificate& cert) {
  os << "{\"mean_cost\":" << fmt_double(cert.mean_cost)
     << ",\"total_time\":" << fmt_double(cert.total_time) << ",\"edges\":[";
  for (std::size_t i = 0; i < cert.edges.size(); ++i) {
    const CertificateEdge& e = cert.edges[i];
    if (i) os << ',';
    os << "{\"from\":" << e.from << ",\"to\":" << e.to << ",\"w1\":" << e.w1
       << ",\"w2\":" << e.w2 << ",\"cost\":" << fmt_double(e.cost) << "}";
  }
  os << "]}\n";
}

}  // namespace aubry
