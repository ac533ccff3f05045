#include "aubry/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <memory>
#include <ostream>
#include <random>

#include "aubry/flow.hpp"
#include "aubry/io.hpp"
#include "aubry/min_mean_cycle.hpp"
#include "json.hpp"

namespace aubry {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t i) {
  std::uint64_t z = seed + (i + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

void SweepSpec::validate() const {
  if (num_perturbations < 1)
    throw std::invalid_argument("SweepSpec: num_perturbations must be >= 1");
  if (amplitude < 0.0)
    throw std::invalid_argument("SweepSpec: amplitude must be >= 0");
  if (fourier_degree < 0 || fourier_degree > 16)
    throw std::invalid_argument("SweepSpec: fourier_degree out of range [0,16]");
  if (classes.empty())
    throw std::invalid_argument("SweepSpec: classes must be nonempty");
}

double auto_eps_class(const GridSpec& grid, double observed_alpha_err) {
  // Structural floor: a few times the action of one sideways cell hop,
  // h*(1/(n*h))^2 = 1/(n^2 h). Keeps flat minimum components chained even
  // when the alpha error vanishes on exactly grid-aligned minima.
  double floor_eps = 4.0 / (static_cast<double>(grid.n) * grid.n * grid.h_time);
  double err_part = observed_alpha_err > 0.0 ? 3.0 * observed_alpha_err : 0.0;
  return std::max(err_part, floor_eps);
}

double auto_eps_aubry(const GridSpec& grid, double alpha) {
  // One sideways cell hop and back costs 1/(n^2 h) plus the off-minimum
  // penalty, so this threshold keeps the detected set within one cell of
  // the true minimum columns. Capped below the rest-loop cost alpha*h.
  double hop = 1.0 / (static_cast<double>(grid.n) * grid.n * grid.h_time);
  double rest_guard = 0.45 * std::abs(alpha) * grid.h_time;
  return rest_guard > 0.0 ? std::min(hop, rest_guard) : hop;
}

ClassAnalysis analyze_classes(const PhaseGraph& g, const CohomologyClass& c,
                              const Tolerances& tol, double known_alpha_ref) {
  ClassAnalysis out;
  out.certificate = min_mean_cycle(g, c);
  out.alpha0 = -out.certificate.mean_cost;
  out.measure_value = out.certificate.mean_cost;

  ClosedMeasure mu = measure_from_certificate(out.certificate);
  out.conservation_residual = mu.conservation_residual();
  out.normalization_residual = mu.normalization_residual();
  out.energy_residual = energy_level_check(mu, out.alpha0);
  out.graph_residual = graph_property_check(mu);

  mmc::GridCostView view(g, c, 0.0);
  double scale = view.cost_scale();
  out.eps_lift = tol.eps_lift_rel * scale;

  double err = std::isfinite(known_alpha_ref) ? std::abs(out.alpha0 - known_alpha_ref) : -1.0;
  out.eps_aubry =
      tol.eps_aubry > 0.0 ? tol.eps_aubry : auto_eps_aubry(g.spec(), out.alpha0);
  out.eps_class =
      tol.eps_class > 0.0 ? tol.eps_class : auto_eps_class(g.spec(), err);

  PotentialTable pt = potential_table(g, c, out.alpha0 + out.eps_lift);
  auto aubry = aubry_nodes(pt, out.eps_aubry);
  out.partition = static_classes(pt, aubry, out.eps_class, out.eps_aubry);
  return out;
}

std::string RunReport::to_json() const {
  nlohmann::json j;
  j["toolkit_version"] = toolkit_version;
  j["schema_version"] = schema_version;
  if (!config_echo.empty()) j["config"] = nlohmann::json::parse(config_echo);
  j["alpha0"] = alpha0;
  j["alpha_reference"] = alpha_reference;
  j["alpha_abs_err"] = alpha_abs_err;
  j["alpha_bisection"] = alpha_bisection;
  j["alpha_consistency"] = alpha_consistency;
  j["alpha_err_coarse"] = alpha_err_coarse;
  j["refinement_ratio"] = refinement_ratio;
  j["class_count"] = class_count;
  j["minimum_component_count"] = minimum_component_count;
  j["static_x_residual"] = static_x_residual;
  j["static_energy_drift"] = static_energy_drift;
  j["measure_value"] = measure_value;
  j["measure_consistency"] = measure_consistency;
  j["energy_residual"] = energy_residual;
  j["graph_residual"] = graph_residual;
  j["conservation_residual"] = conservation_residual;
  j["normalization_residual"] = normalization_residual;
  j["action_audit_min"] = action_audit_min;
  j["eps_aubry"] = eps_aubry;
  j["eps_class"] = eps_class;
  j["ok"] = ok;
  j["stage_errors"] = stage_errors;
  nlohmann::json t;
  for (const auto& [name, sec] : timings_sec) t[name] = sec;
  j["timings_sec"] = t;
  if (!class_count_histogram.empty()) {
    nlohmann::json h;
    for (const auto& [count, rows] : class_count_histogram)
      h[std::to_string(count)] = rows;
    j["class_count_histogram"] = h;
  }
  if (!notes.empty()) j["notes"] = notes;
  return j.dump(2) + "\n";
}

namespace {

nlohmann::json spec_echo(const ExampleSpec& spec) {
  nlohmann::json j;
  j["grid"] = {{"n", spec.grid.n},
               {"h_time", spec.grid.h_time},
               {"speed_cap", spec.grid.speed_cap},
               {"windings", spec.grid.windings}};
  nlohmann::json lag;
  lag["f_kind"] = to_string(spec.f_kind);
  lag["f_min"] = spec.f_min;
  lag["f_top"] = spec.f_top;
  if (spec.f_kind == FKind::cantor_stage) {
    lag["cantor_stage"] = spec.cantor_stage;
    lag["cantor_span"] = spec.cantor_span;
    lag["cantor_center"] = spec.cantor_center;
  }
  j["lagrangian"] = lag;
  return j;
}

/// Deterministic closed walks on the graph for the action audit: stencil
/// steps paired with their reversals (net displacement zero), plus full
/// vertical loops when the speed cap allows them.
double action_audit(const PhaseGraph& g, const MagneticLagrangian& L, double k,
                    std::uint64_t seed) {
  const auto& st = g.stencil();
  const int S = static_cast<int>(st.size());
  std::vector<int> reverse_of(S, -1);
  for (int a = 0; a < S; ++a)
    for (int b = 0; b < S; ++b)
      if (st[b].dx == -st[a].dx && st[b].dy == -st[a].dy) reverse_of[a] = b;

  std::mt19937_64 rng(seed);
  double worst = std::numeric_limits<double>::infinity();
  auto eval_walk = [&](int node, const std::vector<int>& steps) {
    std::vector<PhaseEdge> walk;
    int cur = node;
    double total = 0.0;
    for (int s : steps) {
      PhaseEdge e = g.edge(cur, s);
      total += edge_cost(e, {}, k);
      walk.push_back(e);
      cur = e.to;
    }
    worst = std::min(worst, total);
    auto path = walk_to_path(g, walk);
    worst = std::min(worst, curve_action(L, {}, k, path));
  };

  const int V = g.node_count();
  for (int trial = 0; trial < 32; ++trial) {
    int node = static_cast<int>(rng() % static_cast<std::uint64_t>(V));
    std::vector<int> fwd, steps;
    for (int i = 0; i < 4; ++i)
      fwd.push_back(static_cast<int>(rng() % static_cast<std::uint64_t>(S)));
    for (int s : fwd) steps.push_back(s);
    for (auto it = fwd.rbegin(); it != fwd.rend(); ++it)
      steps.push_back(reverse_of[*it]);
    eval_walk(node, steps);
  }
  // vertical loops: dy cells per step must divide n
  const int n = g.spec().n;
  for (int s = 0; s < S; ++s) {
    if (st[s].dx != 0 || st[s].dy <= 0 || n % st[s].dy != 0) continue;
    std::vector<int> steps(static_cast<std::size_t>(n / st[s].dy), s);
    eval_walk(static_cast<int>(rng() % static_cast<std::uint64_t>(V)), steps);
  }
  return worst;
}

}  // namespace

RunReport verify_example(const ExampleSpec& spec, const Tolerances& tol) {
  RunReport rep;
  rep.config_echo = spec_echo(spec).dump();
  rep.alpha_reference = 0.5 * spec.f_min * spec.f_min;
  rep.minimum_component_count = static_cast<int>(minimum_components(spec).size());

  MagneticLagrangian L;
  std::unique_ptr<PhaseGraph> g;
  auto stage = [&](const char* name, auto&& fn) {
    auto t0 = Clock::now();
    try {
      fn();
    } catch (const std::exception& ex) {
      rep.ok = false;
      rep.stage_errors.push_back(std::string(name) + ": " + ex.what());
    }
    rep.timings_sec[name] = seconds_since(t0);
  };

  stage("build", [&] {
    L = build_example(spec);
    g = std::make_unique<PhaseGraph>(L, spec.grid);
  });
  if (!g) return rep;

  stage("alpha_and_classes", [&] {
    ClassAnalysis ca = analyze_classes(*g, {}, tol, rep.alpha_reference);
    rep.alpha0 = ca.alpha0;
    rep.alpha_abs_err = std::abs(ca.alpha0 - rep.alpha_reference);
    rep.class_count = static_cast<int>(ca.partition.classes.size());
    rep.measure_value = ca.measure_value;
    rep.measure_consistency = std::abs(ca.measure_value + ca.alpha0);
    rep.energy_residual = ca.energy_residual;
    rep.graph_residual = ca.graph_residual;
    rep.conservation_residual = ca.conservation_residual;
    rep.normalization_residual = ca.normalization_residual;
    rep.eps_aubry = ca.eps_aubry;
    rep.eps_class = ca.eps_class;
  });

  stage("bisection", [&] {
    rep.alpha_bisection = critical_value_bisection(*g, {}, tol.bisect_tol);
    rep.alpha_consistency = std::abs(rep.alpha_bisection - rep.alpha0);
  });

  stage("static_orbit", [&] {
    double a = minimum_components(spec).front().first;
    PhaseState s0{{a, 0.0}, {0.0, -spec.f_min}};
    Trajectory tr = integrate(L, s0, 10.0, 1e-3);
    double xres = 0.0;
    for (const auto& smp : tr.samples)
      xres = std::max(xres, std::abs(wrap_shortest(smp.s.q.x - a)));
    rep.static_x_residual = xres;
    rep.static_energy_drift = energy_drift(tr);
  });

  stage("action_audit", [&] {
    rep.action_audit_min = action_audit(*g, L, rep.alpha_reference, 2024);
  });

  stage("refinement", [&] {
    if (spec.grid.n / 2 < 8) return;
    ExampleSpec coarse = spec;
    coarse.grid.n = spec.grid.n / 2;
    coarse.grid.h_time = spec.grid.h_time * 2.0;
    // keep the coarse grid valid; the cap only shrinks for tiny grids
    coarse.grid.speed_cap =
        std::min(coarse.grid.speed_cap, 0.45 / coarse.grid.h_time);
    PhaseGraph cg(build_example(coarse), coarse.grid);
    double alpha_c = alpha_discrete(cg, {});
    rep.alpha_err_coarse = std::abs(alpha_c - rep.alpha_reference);
    rep.refinement_ratio =
        rep.alpha_abs_err > 0.0 ? rep.alpha_err_coarse / rep.alpha_abs_err : 0.0;
  });

  return rep;
}

SweepResult perturb_sweep(const MagneticLagrangian& L, const GridSpec& grid,
                          const SweepSpec& sweep, const Tolerances& tol) {
  sweep.validate();
  grid.validate();
  SweepResult out;
  auto t0 = Clock::now();

  for (int i = 0; i < sweep.num_perturbations; ++i) {
    std::uint64_t seed_i = mix_seed(sweep.seed, static_cast<std::uint64_t>(i));
    FourierOneForm omega =
        random_one_form(seed_i, sweep.fourier_degree, sweep.amplitude);
    MagneticLagrangian Lp = L.perturbed(omega);
    std::unique_ptr<PhaseGraph> g;
    std::string build_error;
    try {
      g = std::make_unique<PhaseGraph>(Lp, grid);
    } catch (const std::exception& ex) {
      build_error = ex.what();
    }
    for (std::size_t ci = 0; ci < sweep.classes.size(); ++ci) {
      SweepRow row;
      row.seed = sweep.seed;
      row.perturbation = i;
      row.c = sweep.classes[ci];
      if (!g) {
        row.status = "build failed: " + build_error;
        out.rows.push_back(row);
        continue;
      }
      try {
        ClassAnalysis ca = analyze_classes(*g, row.c, tol);
        row.alpha = ca.alpha0;
        row.class_count = static_cast<int>(ca.partition.classes.size());
        row.energy_residual = ca.energy_residual;
        row.graph_residual = ca.graph_residual;
        out.report.class_count_histogram[row.class_count] += 1;
      } catch (const std::exception& ex) {
        row.status = std::string("failed: ") + ex.what();
        out.report.ok = false;
        out.report.stage_errors.push_back("perturbation " + std::to_string(i) + ": " +
                                          ex.what());
      }
      out.rows.push_back(row);
    }
  }

  out.report.timings_sec["sweep"] = seconds_since(t0);
  out.report.notes =
      "class counts are empirical observations at this resolution and "
      "amplitude; no claim about generic Lagrangians is made or checkable";
  nlohmann::json echo;
  echo["sweep"] = {{"seed", sweep.seed},
                   {"num_perturbations", sweep.num_perturbations},
                   {"amplitude", sweep.amplitude},
                   {"fourier_degree", sweep.fourier_degree}};
  echo["grid"] = {{"n", grid.n},
                  {"h_time", grid.h_time},
                  {"speed_cap", grid.speed_cap},
                  {"windings", grid.windings}};
  out.report.config_echo = echo.dump();
  return out;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "seed,perturbation,c1,c2,alpha,class_count,energy_residual,graph_residual,status\n";
  for (const SweepRow& r : rows) {
    os << r.seed << ',' << r.perturbation << ',' << fmt_double(r.c.c1) << ','
       << fmt_double(r.c.c2) << ',' << fmt_double(r.alpha) << ',' << r.class_count
       << ',' << fmt_double(r.energy_residual) << ',' << fmt_double(r.graph_residual)
       << ',' << r.status << '\n';
  }
}

}  // namespace aubry
