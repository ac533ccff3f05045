#pragma once

#include <cmath>
#include <stdexcept>

namespace aubry {

/// Reduce a coordinate to the fundamental domain [0,1).
inline double wrap01(double x) {
  double r = x - std::floor(x);
  return (r >= 1.0) ? 0.0 : r;  // guards x = -1e-17 style roundoff
}

/// Shortest representative of a coordinate difference, in (-1/2, 1/2].
inline double wrap_shortest(double d) {
  double r = d - std::nearbyint(d);
  return r;
}

/// Point on the flat 2-torus, coordinates reduced modulo 1.
struct TorusPoint {
  double x = 0.0;
  double y = 0.0;

  static TorusPoint reduced(double x, double y) { return {wrap01(x), wrap01(y)}; }
};

/// Flat-metric distance between torus points (minimum over integer shifts).
inline double torus_distance(const TorusPoint& a, const TorusPoint& b) {
  double dx = wrap_shortest(b.x - a.x);
  double dy = wrap_shortest(b.y - a.y);
  return std::sqrt(dx * dx + dy * dy);
}

/// Tangent vector in torus lengths per unit time.
struct Velocity {
  double v1 = 0.0;
  double v2 = 0.0;

  double speed() const { return std::sqrt(v1 * v1 + v2 * v2); }
};

struct PhaseState {
  TorusPoint q;
  Velocity v;

  bool finite() const {
    return std::isfinite(q.x) && std::isfinite(q.y) && std::isfinite(v.v1) &&
           std::isfinite(v.v2);
  }
};

/// A class in H^1(T^2,R) ~ R^2, represented by the closed form c1*dx + c2*dy.
struct CohomologyClass {
  double c1 = 0.0;
  double c2 = 0.0;
};

/// Raised when a solver cannot certify or produce a numerical result
/// (negative cycle where none is allowed, bisection bracket failure, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace aubry
