#pragma once

#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "aubry/one_form.hpp"
#include "aubry/torus.hpp"

namespace aubry {

/// Exact magnetic Lagrangian on the flat 2-torus,
///   L(q,v) = |v|^2/2 + <eta(q), v>,
/// with eta = fourier part + optional x-only profile added to the second
/// component. The flat metric is implicit and L(q,0) = 0 everywhere.
class MagneticLagrangian {
 public:
  MagneticLagrangian() = default;
  explicit MagneticLagrangian(FourierOneForm eta,
                              std::shared_ptr<const XProfile> eta2_profile = nullptr)
      : eta_(std::move(eta)), profile_(std::move(eta2_profile)) {}

  std::pair<double, double> eta(const TorusPoint& q) const;

  /// d(eta) at q; exact (term-wise Fourier derivative + profile derivative).
  double magnetic_field(const TorusPoint& q) const;

  /// True iff d(eta) is not identically zero, decided on coefficient level.
  bool non_closed() const;

  const FourierOneForm& fourier() const { return eta_; }
  const XProfile* profile() const { return profile_.get(); }

  /// Lagrangian with the trig-polynomial form `omega` added to eta.
  MagneticLagrangian perturbed(const FourierOneForm& omega) const;

 private:
  FourierOneForm eta_;
  std::shared_ptr<const XProfile> profile_;
};

/// L(q,v) = |v|^2/2 + eta1(q) v1 + eta2(q) v2.
double eval_lagrangian(const MagneticLagrangian& L, const PhaseState& s);

/// Energy E(q,v) = |v|^2/2; independent of eta.
double eval_energy(const PhaseState& s);

/// d(eta) of a bare trigonometric 1-form.
double magnetic_field(const FourierOneForm& eta, const TorusPoint& q);

/// Euler-Lagrange vector field: (qdot, vdot) = (v, -B(q) J v) with
/// J(v1,v2) = (-v2, v1), i.e. vdot = (B v2, -B v1).
std::pair<Velocity, Velocity> el_vector_field(const MagneticLagrangian& L,
                                              const PhaseState& s);

/// Sample of a curve: time plus phase state with the position reduced mod 1.
struct PathSample {
  double t = 0.0;
  PhaseState s;
};

/// Action of the piecewise-straight path under L - c + k, midpoint rule per
/// segment. Segment displacements use the shortest torus representative, so
/// the c(gamma-dot) pairing is winding-aware as long as no single segment
/// moves half the torus or more. Segment velocities are the finite
/// differences of the positions.
///
/// Throws std::invalid_argument for fewer than 2 samples or non-increasing
/// times.
double curve_action(const MagneticLagrangian& L, const CohomologyClass& c,
                    double k, std::span<const PathSample> path);

}  // namespace aubry
