#include "aubry/flow.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "aubry/io.hpp"

namespace aubry {

namespace {

struct Lift {
  double x, y, v1, v2;  // unbounded positional lift
};

inline Lift field(const MagneticLagrangian& L, const Lift& s, double sign) {
  double b = L.magnetic_field(TorusPoint::reduced(s.x, s.y));
  return {sign * s.v1, sign * s.v2, sign * (b * s.v2), sign * (-b * s.v1)};
}

inline Lift axpy(const Lift& a, double h, const Lift& d) {
  return {a.x + h * d.x, a.y + h * d.y, a.v1 + h * d.v1, a.v2 + h * d.v2};
}

}  // namespace

Trajectory integrate(const MagneticLagrangian& L, const PhaseState& s0, double T,
                     double h, FlowDirection dir) {
  if (!s0.finite()) throw std::invalid_argument("integrate: non-finite initial state");
  if (!(h > 0.0)) throw std::invalid_argument("integrate: step must be positive");
  if (!(T >= h)) throw std::invalid_argument("integrate: need 0 < h <= T");

  const double sign = (dir == FlowDirection::forward) ? 1.0 : -1.0;
  const long long steps = static_cast<long long>(std::ceil(T / h - 1e-9));

  Trajectory tr;
  tr.step = h;
  tr.samples.reserve(static_cast<std::size_t>(steps) + 1);

  Lift s{s0.q.x, s0.q.y, s0.v.v1, s0.v.v2};
  auto push = [&](long long i, const Lift& st) {
    double w1 = std::floor(st.x);
    double w2 = std::floor(st.y);
    Trajectory::Sample smp;
    smp.t = static_cast<double>(i) * h;
    smp.s.q = {st.x - w1, st.y - w2};
    smp.s.v = {st.v1, st.v2};
    smp.w1 = static_cast<long long>(w1);
    smp.w2 = static_cast<long long>(w2);
    tr.samples.push_back(smp);
  };
  push(0, s);

  for (long long i = 1; i <= steps; ++i) {
    Lift k1 = field(L, s, sign);
    Lift k2 = field(L, axpy(s, 0.5 * h, k1), sign);
    Lift k3 = field(L, axpy(s, 0.5 * h, k2), sign);
    Lift k4 = field(L, axpy(s, h, k3), sign);
    s.x += h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
    s.y += h / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y);
    s.v1 += h / 6.0 * (k1.v1 + 2.0 * k2.v1 + 2.0 * k3.v1 + k4.v1);
    s.v2 += h / 6.0 * (k1.v2 + 2.0 * k2.v2 + 2.0 * k3.v2 + k4.v2);
    push(i, s);
  }
  return tr;
}

double energy_drift(const Trajectory& tr) {
  if (tr.samples.empty()) throw std::invalid_argument("energy_drift: empty trajectory");
  double e0 = eval_energy(tr.samples.front().s);
  double drift = 0.0;
  for (const auto& smp : tr.samples)
    drift = std::max(drift, std::abs(eval_energy(smp.s) - e0));
  return drift;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
  os << "t,x,y,v1,v2,w1,w2\n";
  for (const auto& s : tr.samples) {
    os << fmt_double(s.t) << ',' << fmt_double(s.s.q.x) << ',' << fmt_double(s.s.q.y)
       << ',' << fmt_double(s.s.v.v1) << ',' << fmt_double(s.s.v.v2) << ',' << s.w1
       << ',' << s.w2 << '\n';
  }
}

}  // namespace aubry
