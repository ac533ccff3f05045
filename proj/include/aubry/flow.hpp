#pragma once

#include <iosfwd>
#include <vector>

#include "aubry/lagrangian.hpp"

namespace aubry {

/// Integrated orbit of the Euler-Lagrange flow. Positions are stored reduced
/// mod 1 with cumulative winding counters; times are uniformly spaced.
struct Trajectory {
  struct Sample {
    double t = 0.0;
    PhaseState s;
    long long w1 = 0;  // cumulative x-winding of the lift
    long long w2 = 0;
  };
  std::vector<Sample> samples;
  double step = 0.0;
};

enum class FlowDirection { forward, backward };

/// Classical fixed-step RK4 integration of the Euler-Lagrange field from s0.
/// The final time is within one step of T; winding counters track each wrap
/// of the positional lift. Throws std::invalid_argument for non-finite s0,
/// h <= 0 or T < h.
Trajectory integrate(const MagneticLagrangian& L, const PhaseState& s0, double T,
                     double h, FlowDirection dir = FlowDirection::forward);

/// max_t |E(s(t)) - E(s(0))|. Throws std::invalid_argument on an empty
/// trajectory.
double energy_drift(const Trajectory& tr);

/// CSV export, header t,x,y,v1,v2,w1,w2, one row per sample.
void write_trajectory_csv(std::ostream& os, const Trajectory& tr);

}  // namespace aubry
