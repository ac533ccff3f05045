#include "aubry/one_form.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "aubry/io.hpp"
#include "json.hpp"

namespace aubry {

void cos_sin_pi_frac(long long num, long long den, double& c, double& s) {
  const long long p = 2 * den;
  long long m = num % p;
  if (m < 0) m += p;
  double cs = 1.0, ss = 1.0;
  if (m > den) {  // theta -> 2pi - theta
    m = p - m;
    ss = -1.0;
  }
  if (2 * m > den) {  // theta -> pi - theta
    m = den - m;
    cs = -1.0;
  }
  if (2 * m == den) {  // theta = pi/2 exactly
    c = cs * 0.0;
    s = ss * 1.0;
    return;
  }
  double t = M_PI * static_cast<double>(m) / static_cast<double>(den);
  c = cs * std::cos(t);
  s = ss * std::sin(t);
}

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// cos/sin of 2*pi*t with exact quadrant folding: the subtractions below are
// exact (Sterbenz), so arguments on the quarter symmetries produce exact
// 0/+-1 values. Orbits pinned to symmetry lines then stay on them instead of
// being kicked off by the rounding of pi.
void cos_sin_two_pi(double t, double& c, double& s) {
  double u = 2.0 * (t - std::floor(t));  // theta = pi*u, u in [0, 2)
  double cs = 1.0, ss = 1.0;
  if (u > 1.0) {
    u = 2.0 - u;
    ss = -1.0;
  }
  if (u > 0.5) {
    u = 1.0 - u;
    cs = -1.0;
  }
  if (u == 0.5) {
    c = cs * 0.0;
    s = ss * 1.0;
    return;
  }
  c = cs * std::cos(M_PI * u);
  s = ss * std::sin(M_PI * u);
}

double eval_terms(const std::vector<TrigTerm>& terms, const TorusPoint& q) {
  double total = 0.0;
  for (const TrigTerm& t : terms) {
    double c, s;
    cos_sin_two_pi(t.deg_x * q.x + t.deg_y * q.y, c, s);
    total += t.cos_coef * c + t.sin_coef * s;
  }
  return total;
}

int terms_degree(const std::vector<TrigTerm>& terms) {
  int d = 0;
  for (const TrigTerm& t : terms)
    d = std::max({d, std::abs(t.deg_x), std::abs(t.deg_y)});
  return d;
}

std::vector<TrigTerm> merge_terms(const std::vector<TrigTerm>& a,
                                  const std::vector<TrigTerm>& b) {
  std::map<std::pair<int, int>, TrigTerm> merged;
  auto add = [&](const TrigTerm& t) {
    auto& slot = merged[{t.deg_x, t.deg_y}];
    slot.deg_x = t.deg_x;
    slot.deg_y = t.deg_y;
    slot.cos_coef += t.cos_coef;
    slot.sin_coef += t.sin_coef;
  };
  for (const TrigTerm& t : a) add(t);
  for (const TrigTerm& t : b) add(t);
  std::vector<TrigTerm> out;
  out.reserve(merged.size());
  for (auto& [key, t] : merged) out.push_back(t);
  return out;
}

nlohmann::json terms_to_json(const std::vector<TrigTerm>& terms) {
  nlohmann::json arr = nlohmann::json::array();
  for (const TrigTerm& t : terms)
    arr.push_back({t.cos_coef, t.sin_coef, t.deg_x, t.deg_y});
  return arr;
}

std::vector<TrigTerm> terms_from_json(const nlohmann::json& arr) {
  std::vector<TrigTerm> out;
  for (const auto& e : arr) {
    if (!e.is_array() || e.size() != 4)
      throw std::invalid_argument("one-form coefficient entries must be [a,b,deg_x,deg_y]");
    out.push_back({e[0].get<double>(), e[1].get<double>(), e[2].get<int>(),
                   e[3].get<int>()});
  }
  return out;
}

}  // namespace

FourierOneForm::FourierOneForm(std::vector<TrigTerm> comp1, std::vector<TrigTerm> comp2)
    : comp1_(std::move(comp1)), comp2_(std::move(comp2)) {
  max_degree_ = std::max(terms_degree(comp1_), terms_degree(comp2_));
}

double FourierOneForm::eval1(const TorusPoint& q) const { return eval_terms(comp1_, q); }
double FourierOneForm::eval2(const TorusPoint& q) const { return eval_terms(comp2_, q); }

std::vector<TrigTerm> FourierOneForm::curl_terms() const {
  // d/dx [a cos + b sin](theta) = 2 pi kx * (b cos - a sin), same with ky for d/dy
  std::vector<TrigTerm> from2, from1;
  for (const TrigTerm& t : comp2_)
    from2.push_back({kTwoPi * t.deg_x * t.sin_coef, -kTwoPi * t.deg_x * t.cos_coef,
                     t.deg_x, t.deg_y});
  for (const TrigTerm& t : comp1_)
    from1.push_back({-kTwoPi * t.deg_y * t.sin_coef, kTwoPi * t.deg_y * t.cos_coef,
                     t.deg_x, t.deg_y});
  auto merged = merge_terms(from2, from1);
  std::erase_if(merged, [](const TrigTerm& t) {
    return t.cos_coef == 0.0 && t.sin_coef == 0.0;
  });
  return merged;
}

double FourierOneForm::curl(const TorusPoint& q) const {
  double total = 0.0;
  for (const TrigTerm& t : comp2_) {
    double c, s;
    cos_sin_two_pi(t.deg_x * q.x + t.deg_y * q.y, c, s);
    total += kTwoPi * t.deg_x * (t.sin_coef * c - t.cos_coef * s);
  }
  for (const TrigTerm& t : comp1_) {
    double c, s;
    cos_sin_two_pi(t.deg_x * q.x + t.deg_y * q.y, c, s);
    total -= kTwoPi * t.deg_y * (t.sin_coef * c - t.cos_coef * s);
  }
  return total;
}

bool FourierOneForm::is_closed() const { return curl_terms().empty(); }

FourierOneForm operator+(const FourierOneForm& a, const FourierOneForm& b) {
  auto c1 = merge_terms(a.comp1_, b.comp1_);
  auto c2 = merge_terms(a.comp2_, b.comp2_);
  return FourierOneForm(std::move(c1), std::move(c2));
}

std::string FourierOneForm::to_json() const {
  nlohmann::json j;
  j["max_degree"] = max_degree_;
  j["coeffs1"] = terms_to_json(comp1_);
  j["coeffs2"] = terms_to_json(comp2_);
  return j.dump();
}

FourierOneForm FourierOneForm::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  FourierOneForm f(terms_from_json(j.at("coeffs1")), terms_from_json(j.at("coeffs2")));
  if (j.contains("max_degree") && j["max_degree"].get<int>() < f.max_degree_)
    throw std::invalid_argument("one-form max_degree below actual term degrees");
  return f;
}

XProfile::XProfile(double floor_value, double peak_value, std::vector<Blend> blends)
    : floor_(floor_value), peak_(peak_value), blends_(std::move(blends)) {
  for (const Blend& b : blends_) {
    if (!(b.hi > b.lo) || b.lo < 0.0 || b.lo >= 1.0 || b.hi - b.lo > 1.0)
      throw std::invalid_argument("profile blend intervals must be nonempty, start in [0,1) and span < 1");
  }
  std::sort(blends_.begin(), blends_.end(),
            [](const Blend& a, const Blend& b) { return a.lo < b.lo; });
  for (std::size_t i = 1; i < blends_.size(); ++i)
    if (blends_[i].lo < blends_[i - 1].hi)
      throw std::invalid_argument("profile blend intervals must be disjoint");
  if (!blends_.empty() && blends_.back().hi > 1.0 && blends_.front().lo < blends_.back().hi - 1.0)
    throw std::invalid_argument("wrapping blend overlaps the first blend");
}

namespace {

// s(u) = sin^4(pi u): C^2 bump with s(0)=s(1)=0, s(1/2)=1, s'=s''=0 at ends.
inline double bump(double u) {
  double s = std::sin(M_PI * u);
  double s2 = s * s;
  return s2 * s2;
}

inline double bump_deriv(double u) {
  double s = std::sin(M_PI * u);
  double c = std::cos(M_PI * u);
  return 4.0 * M_PI * s * s * s * c;
}

}  // namespace

double XProfile::value(double x) const {
  double xr = wrap01(x);
  for (const Blend& b : blends_) {
    double t = xr;
    if (b.hi > 1.0 && t < b.hi - 1.0) t += 1.0;  // wrapping interval
    if (t >= b.lo && t < b.hi)
      return floor_ + (peak_ - floor_) * bump((t - b.lo) / (b.hi - b.lo));
  }
  return floor_;
}

double XProfile::derivative(double x) const {
  double xr = wrap01(x);
  for (const Blend& b : blends_) {
    double t = xr;
    if (b.hi > 1.0 && t < b.hi - 1.0) t += 1.0;
    if (t >= b.lo && t < b.hi) {
      double w = b.hi - b.lo;
      return (peak_ - floor_) * bump_deriv((t - b.lo) / w) / w;
    }
  }
  return 0.0;
}

std::vector<std::pair<double, double>> XProfile::plateaus() const {
  std::vector<std::pair<double, double>> out;
  if (blends_.empty()) {
    out.emplace_back(0.0, 1.0);
    return out;
  }
  for (std::size_t i = 0; i < blends_.size(); ++i) {
    double lo = blends_[i].hi;
    double hi = (i + 1 < blends_.size()) ? blends_[i + 1].lo : blends_.front().lo + 1.0;
    if (lo > 1.0) lo -= 1.0, hi -= 1.0;
    if (hi > lo) out.emplace_back(lo, hi);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace aubry
