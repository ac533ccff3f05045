#include "aubry/lagrangian.hpp"

#include <cmath>
#include <stdexcept>

namespace aubry {

std::pair<double, double> MagneticLagrangian::eta(const TorusPoint& q) const {
  double e1 = eta_.eval1(q);
  double e2 = eta_.eval2(q);
  if (profile_) e2 += profile_->value(q.x);
  return {e1, e2};
}

double MagneticLagrangian::magnetic_field(const TorusPoint& q) const {
  double b = eta_.curl(q);
  if (profile_) b += profile_->derivative(q.x);
  return b;
}

bool MagneticLagrangian::non_closed() const {
  if (!eta_.is_closed()) return true;
  return profile_ && !profile_->is_constant();
}

MagneticLagrangian MagneticLagrangian::perturbed(const FourierOneForm& omega) const {
  return MagneticLagrangian(eta_ + omega, profile_);
}

double eval_lagrangian(const MagneticLagrangian& L, const PhaseState& s) {
  auto [e1, e2] = L.eta(s.q);
  return 0.5 * (s.v.v1 * s.v.v1 + s.v.v2 * s.v.v2) + e1 * s.v.v1 + e2 * s.v.v2;
}

double eval_energy(const PhaseState& s) {
  return 0.5 * (s.v.v1 * s.v.v1 + s.v.v2 * s.v.v2);
}

double magnetic_field(const FourierOneForm& eta, const TorusPoint& q) {
  return eta.curl(q);
}

std::pair<Velocity, Velocity> el_vector_field(const MagneticLagrangian& L,
                                              const PhaseState& s) {
  double b = L.magnetic_field(s.q);
  // vdot = -B J v, J(v1,v2) = (-v2, v1)
  return {s.v, Velocity{b * s.v.v2, -b * s.v.v1}};
}

double curve_action(const MagneticLagrangian& L, const CohomologyClass& c,
                    double k, std::span<const PathSample> path) {
  if (path.size() < 2)
    throw std::invalid_argument("curve_action: need at least 2 samples");
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const PathSample& a = path[i];
    const PathSample& b = path[i + 1];
    double dt = b.t - a.t;
    if (!(dt > 0.0))
      throw std::invalid_argument("curve_action: times must be strictly increasing");
    double dx = wrap_shortest(b.s.q.x - a.s.q.x);
    double dy = wrap_shortest(b.s.q.y - a.s.q.y);
    PhaseState mid;
    mid.q = TorusPoint::reduced(a.s.q.x + 0.5 * dx, a.s.q.y + 0.5 * dy);
    mid.v = {dx / dt, dy / dt};
    total += dt * (eval_lagrangian(L, mid) + k) - (c.c1 * dx + c.c2 * dy);
  }
  return total;
}

}  // namespace aubry
