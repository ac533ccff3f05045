#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "aubry/models.hpp"
#include "aubry/one_form.hpp"
#include "aubry/phase_graph.hpp"
#include "aubry/torus.hpp"

namespace aubry {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Tolerances {
  double tol_zero_rel = 1e-9;   // zero-cycle comparisons, x cost scale
  double bisect_tol = 1e-9;     // absolute bisection width
  double eps_lift_rel = 1e-8;   // potential level above alpha, x cost scale
  double eps_aubry = 0.0;       // 0 = automatic (see pipeline)
  double eps_class = 0.0;       // 0 = automatic
  double weight_floor = 1e-12;  // measure support floor
  double phi_export_threshold = 0.1;
};

struct SweepSpec {
  std::uint64_t seed = 1;
  int num_perturbations = 4;
  double amplitude = 0.05;  // sup-norm scale of the random 1-forms; >= 0
  int fourier_degree = 3;
  std::vector<CohomologyClass> classes = {{0.0, 0.0}};

  void validate() const;
};

struct IntegrateParams {
  double x = 0.25, y = 0.0, v1 = 0.0, v2 = 2.0;
  double T = 10.0, h = 1e-3;
};

/// Run configuration; mirrors the versioned JSON schema:
/// {schema_version, grid:{n,h_time,windings,speed_cap},
///  lagrangian:{f_kind,f_min,f_top,cantor_stage,cantor_span}|{oneform:{...}},
///  sweep:{seed,num_perturbations,amplitude,fourier_degree,classes},
///  tolerances:{...}, integrate:{x,y,v1,v2,T,h}}
struct Config {
  int schema_version = 1;
  GridSpec grid;
  std::optional<ExampleSpec> example = ExampleSpec{};  // model-family lagrangian
  std::optional<FourierOneForm> oneform;               // or explicit Fourier data
  SweepSpec sweep;
  Tolerances tol;
  IntegrateParams integrate;

  MagneticLagrangian lagrangian() const;

  /// Parse + validate. Parse errors carry line:column; validation errors
  /// carry the offending field path. Both throw ConfigError.
  static Config from_json_text(const std::string& text);
  static Config from_file(const std::string& path);

  /// Echo of the effective configuration for reports.
  std::string echo_json() const;
};

}  // namespace aubry
