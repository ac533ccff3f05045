#pragma once

#include <iosfwd>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "aubry/action_potential.hpp"
#include "aubry/closed_measure.hpp"
#include "aubry/config.hpp"
#include "aubry/critical_value.hpp"
#include "aubry/models.hpp"

namespace aubry {

inline constexpr const char* kToolkitVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

/// Default clustering tolerance: max(3 * |observed alpha error|,
/// 4/(n^2 * h_time)). The structural floor covers one-cell sideways
/// transport, which stays positive even when the minimum set is exactly
/// grid-aligned and the alpha error vanishes.
double auto_eps_class(const GridSpec& grid, double observed_alpha_err);

/// Default Aubry detection threshold: one-cell commute cost 1/(n^2 * h_time),
/// capped below the rest-loop cost alpha * h_time.
double auto_eps_aubry(const GridSpec& grid, double alpha);

/// One full solve of a Lagrangian on a grid: alpha, minimizing measure,
/// potential at alpha + eps_lift, Aubry nodes and static classes, and the
/// structural residuals.
struct ClassAnalysis {
  double alpha0 = 0.0;
  double eps_lift = 0.0;
  double eps_aubry = 0.0;
  double eps_class = 0.0;
  double measure_value = 0.0;
  double conservation_residual = 0.0;
  double normalization_residual = 0.0;
  double energy_residual = 0.0;
  double graph_residual = 0.0;
  StaticClassPartition partition;
  CycleCertificate certificate;
};

/// known_alpha_ref: exact critical value when available (the model family);
/// its observed error feeds the automatic eps defaults. NaN = unknown.
ClassAnalysis analyze_classes(
    const PhaseGraph& g, const CohomologyClass& c, const Tolerances& tol,
    double known_alpha_ref = std::numeric_limits<double>::quiet_NaN());

/// Verification report of one model run; serializes to JSON.
struct RunReport {
  std::string toolkit_version = kToolkitVersion;
  int schema_version = kReportSchemaVersion;
  std::string config_echo;  // JSON text

  double alpha0 = 0.0;
  double alpha_reference = 0.0;  // f_min^2/2 for the model family
  double alpha_abs_err = 0.0;
  double alpha_bisection = 0.0;
  double alpha_consistency = 0.0;  // |bisection - (-min mean)|
  double alpha_err_coarse = 0.0;   // same error at (n/2, 2*h_time)
  double refinement_ratio = 0.0;   // coarse err / fine err

  int class_count = 0;
  int minimum_component_count = 0;

  double static_x_residual = 0.0;   // max |x(t) - a| on the vertical orbit
  double static_energy_drift = 0.0;
  double measure_value = 0.0;
  double measure_consistency = 0.0;  // |value + alpha0|
  double energy_residual = 0.0;
  double graph_residual = 0.0;
  double conservation_residual = 0.0;
  double normalization_residual = 0.0;
  double action_audit_min = 0.0;  // min sampled closed-walk action at k = f_min^2/2

  double eps_aubry = 0.0;
  double eps_class = 0.0;

  bool ok = true;
  std::vector<std::string> stage_errors;
  std::map<std::string, double> timings_sec;
  std::map<int, int> class_count_histogram;  // sweeps only
  std::string notes;

  std::string to_json() const;
};

/// End-to-end verification of a model spec: alpha against f_min^2/2, the
/// vertical static orbit, class count against the minimum-set components,
/// measure residuals, and a closed-walk action audit at k = f_min^2/2.
/// Pipeline failures are recorded per stage; the report is always returned.
RunReport verify_example(const ExampleSpec& spec, const Tolerances& tol = {});

struct SweepRow {
  std::uint64_t seed = 0;
  int perturbation = 0;
  CohomologyClass c;
  double alpha = 0.0;
  int class_count = 0;
  double energy_residual = 0.0;
  double graph_residual = 0.0;
  std::string status = "ok";  // per-row failures recorded, sweep continues
};

struct SweepResult {
  RunReport report;
  std::vector<SweepRow> rows;
};

/// For each seeded random 1-form omega and each class c: alpha, class count
/// and residual checks of L + omega. Counts are reported, never asserted
/// against any finiteness statement; the report says so.
SweepResult perturb_sweep(const MagneticLagrangian& L, const GridSpec& grid,
                          const SweepSpec& sweep, const Tolerances& tol = {});

/// CSV export, one row per (perturbation, class), stable order.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace aubry
