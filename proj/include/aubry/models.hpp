#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "aubry/lagrangian.hpp"
#include "aubry/phase_graph.hpp"

namespace aubry {

enum class FKind { two_well, single_well, cantor_stage };

std::string to_string(FKind k);
FKind fkind_from_string(const std::string& s);

/// Model family eta = (0, f(x)) with f C^2, periodic, nonpositive and
/// constant on its minimum set.
///
///   two_well      f = f_top - d*(1 - cos(4 pi x))/2, minima at x = 1/4, 3/4
///   single_well   f = f_top - d*(1 - cos(2 pi x))/2, minimum at x = 1/2
///   cantor_stage  f = f_min on the stage-s middle-thirds approximation of a
///                 Cantor set inside [center - span/2, center + span/2],
///                 C^2 sin^4 blends toward f_top on the gaps
///
/// with d = f_top - f_min.
struct ExampleSpec {
  FKind f_kind = FKind::two_well;
  double f_min = -2.0;
  double f_top = 0.0;
  int cantor_stage = 0;
  double cantor_span = 0.6;
  double cantor_center = 0.5;
  GridSpec grid;

  /// Throws std::invalid_argument when f would be positive somewhere
  /// (f_top > 0), f_min >= f_top, or the Cantor parameters are out of range.
  void validate() const;
};

MagneticLagrangian build_example(const ExampleSpec& spec);

/// Connected components of the minimum set of f, as closed x-intervals
/// (possibly degenerate points), derived from the construction.
std::vector<std::pair<double, double>> minimum_components(const ExampleSpec& spec);

/// Seeded random trigonometric 1-form with modes up to `degree` per axis,
/// coefficients decaying like 1/(1 + |kx| + |ky|)^2, scaled so the pointwise
/// sup-norm of (omega1, omega2) over a dense grid equals `amplitude`.
/// amplitude = 0 yields the empty form. Deterministic across platforms.
FourierOneForm random_one_form(std::uint64_t seed, int degree, double amplitude);

}  // namespace aubry
