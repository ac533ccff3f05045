#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "aubry/torus.hpp"

namespace aubry {

/// cos/sin pair for the angle pi*num/den, evaluated after exact integer
/// folding into the first quadrant. Arguments that are exact multiples of
/// pi/2 come out as exact 0/±1, so grid symmetries survive in floating point.
void cos_sin_pi_frac(long long num, long long den, double& c, double& s);

/// One (kx,ky) mode of a real trigonometric polynomial on the torus:
///   cos_coef * cos(2*pi*(kx*x + ky*y)) + sin_coef * sin(2*pi*(kx*x + ky*y))
struct TrigTerm {
  double cos_coef = 0.0;
  double sin_coef = 0.0;
  int deg_x = 0;
  int deg_y = 0;
};

/// 1-form on the flat 2-torus with trigonometric-polynomial components.
/// Derivatives (and therefore the magnetic field d(eta)) are exact,
/// computed term-wise on the coefficients.
class FourierOneForm {
 public:
  FourierOneForm() = default;
  FourierOneForm(std::vector<TrigTerm> comp1, std::vector<TrigTerm> comp2);

  double eval1(const TorusPoint& q) const;
  double eval2(const TorusPoint& q) const;

  /// d(eta) in coordinates: dx(eta2) - dy(eta1), exact term-wise.
  double curl(const TorusPoint& q) const;

  /// The curl as a trigonometric polynomial (terms merged by mode).
  std::vector<TrigTerm> curl_terms() const;

  /// Closed iff every coefficient of the curl vanishes exactly.
  bool is_closed() const;

  int max_degree() const { return max_degree_; }
  const std::vector<TrigTerm>& comp1() const { return comp1_; }
  const std::vector<TrigTerm>& comp2() const { return comp2_; }
  bool empty() const { return comp1_.empty() && comp2_.empty(); }

  /// Componentwise sum; terms with equal modes are merged.
  friend FourierOneForm operator+(const FourierOneForm& a, const FourierOneForm& b);

  /// JSON round-trip: {max_degree, coeffs1:[[a,b,deg_x,deg_y],...], coeffs2:[...]}.
  /// Serialization is bit-exact (shortest round-trip doubles).
  std::string to_json() const;
  static FourierOneForm from_json(const std::string& text);

 private:
  std::vector<TrigTerm> comp1_;
  std::vector<TrigTerm> comp2_;
  int max_degree_ = 0;
};

/// Piecewise closed-form profile f(x) on the circle: constant floor plateaus
/// joined by C^2 sin^4 blends rising to `peak` over each blend interval.
/// Used for minimum sets that are unions of intervals (which no truncated
/// Fourier series can represent with an exactly flat bottom); value and
/// derivative are exact.
class XProfile {
 public:
  struct Blend {
    double lo = 0.0;  // blend start, in [0,1)
    double hi = 0.0;  // blend end; hi > 1 means the interval wraps through 0
  };

  XProfile(double floor_value, double peak_value, std::vector<Blend> blends);

  double value(double x) const;
  double derivative(double x) const;

  double floor_value() const { return floor_; }
  double peak_value() const { return peak_; }
  bool is_constant() const { return blends_.empty() || peak_ == floor_; }
  const std::vector<Blend>& blends() const { return blends_; }

  /// Plateau intervals (complement of the blends), as [lo,hi] pairs with
  /// hi possibly > 1 for a wrapping component.
  std::vector<std::pair<double, double>> plateaus() const;

 private:
  double floor_ = 0.0;
  double peak_ = 0.0;
  std::vector<Blend> blends_;  // sorted by lo, pairwise disjoint
};

}  // namespace aubry
