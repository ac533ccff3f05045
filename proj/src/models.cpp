#include "aubry/models.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace aubry {

std::string to_string(FKind k) {
  switch (k) {
    case FKind::two_well: return "two_well";
    case FKind::single_well: return "single_well";
    case FKind::cantor_stage: return "cantor_stage";
  }
  return "?";
}

FKind fkind_from_string(const std::string& s) {
  if (s == "two_well") return FKind::two_well;
  if (s == "single_well") return FKind::single_well;
  if (s == "cantor_stage") return FKind::cantor_stage;
  throw std::invalid_argument("unknown f_kind: " + s);
}

void ExampleSpec::validate() const {
  if (!(f_min < f_top))
    throw std::invalid_argument("ExampleSpec: need f_min < f_top");
  if (f_top > 0.0)
    throw std::invalid_argument("ExampleSpec: f must be nonpositive (f_top <= 0)");
  if (f_kind == FKind::cantor_stage) {
    if (cantor_stage < 0 || cantor_stage > 12)
      throw std::invalid_argument("ExampleSpec: cantor_stage out of range [0,12]");
    double lo = cantor_center - 0.5 * cantor_span;
    double hi = cantor_center + 0.5 * cantor_span;
    if (!(cantor_span > 0.0) || lo < 0.0 || hi > 1.0)
      throw std::invalid_argument("ExampleSpec: cantor support must fit inside [0,1]");
  }
  grid.validate();
}

namespace {

/// Stage-s middle-thirds intervals inside [lo, lo+span].
std::vector<std::pair<double, double>> cantor_components(double lo, double span,
                                                         int stage) {
  std::vector<std::pair<double, double>> comps = {{lo, lo + span}};
  for (int s = 0; s < stage; ++s) {
    std::vector<std::pair<double, double>> next;
    next.reserve(comps.size() * 2);
    for (auto [a, b] : comps) {
      double third = (b - a) / 3.0;
      next.emplace_back(a, a + third);
      next.emplace_back(b - third, b);
    }
    comps = std::move(next);
  }
  return comps;
}

}  // namespace

MagneticLagrangian build_example(const ExampleSpec& spec) {
  spec.validate();
  const double d = spec.f_top - spec.f_min;
  switch (spec.f_kind) {
    case FKind::two_well: {
      // f = A + B cos(4 pi x), minima exactly at x = 1/4 and 3/4
      double A = 0.5 * (spec.f_top + spec.f_min);
      double B = 0.5 * d;
      std::vector<TrigTerm> comp2 = {{A, 0.0, 0, 0}, {B, 0.0, 2, 0}};
      return MagneticLagrangian(FourierOneForm({}, std::move(comp2)));
    }
    case FKind::single_well: {
      // f = A + B cos(2 pi x), minimum exactly at x = 1/2
      double A = 0.5 * (spec.f_top + spec.f_min);
      double B = 0.5 * d;
      std::vector<TrigTerm> comp2 = {{A, 0.0, 0, 0}, {B, 0.0, 1, 0}};
      return MagneticLagrangian(FourierOneForm({}, std::move(comp2)));
    }
    case FKind::cantor_stage: {
      double lo = spec.cantor_center - 0.5 * spec.cantor_span;
      auto comps = cantor_components(lo, spec.cantor_span, spec.cantor_stage);
      std::vector<XProfile::Blend> blends;
      for (std::size_t i = 0; i + 1 < comps.size(); ++i)
        blends.push_back({comps[i].second, comps[i + 1].first});
      blends.push_back({comps.back().second, comps.front().first + 1.0});  // wrap
      auto prof = std::make_shared<const XProfile>(spec.f_min, spec.f_top,
                                                   std::move(blends));
      return MagneticLagrangian(FourierOneForm{}, std::move(prof));
    }
  }
  throw std::invalid_argument("build_example: unknown f_kind");
}

std::vector<std::pair<double, double>> minimum_components(const ExampleSpec& spec) {
  switch (spec.f_kind) {
    case FKind::two_well:
      return {{0.25, 0.25}, {0.75, 0.75}};
    case FKind::single_well:
      return {{0.5, 0.5}};
    case FKind::cantor_stage:
      return cantor_components(spec.cantor_center - 0.5 * spec.cantor_span,
                               spec.cantor_span, spec.cantor_stage);
  }
  return {};
}

namespace {

double eval_form_max_norm(const FourierOneForm& f, int grid) {
  // Factorized evaluation on a grid x = i/G, y = j/G.
  auto component_values = [&](const std::vector<TrigTerm>& terms) {
    std::vector<double> vals(static_cast<std::size_t>(grid) * grid, 0.0);
    std::vector<double> ca(grid), sa(grid);
    for (const TrigTerm& t : terms) {
      for (int i = 0; i < grid; ++i)
        cos_sin_pi_frac(2LL * t.deg_x * i, grid, ca[i], sa[i]);
      for (int j = 0; j < grid; ++j) {
        double cb, sb;
        cos_sin_pi_frac(2LL * t.deg_y * j, grid, cb, sb);
        double p = t.cos_coef * cb + t.sin_coef * sb;
        double q = t.sin_coef * cb - t.cos_coef * sb;
        double* row = vals.data() + static_cast<std::size_t>(j) * grid;
        for (int i = 0; i < grid; ++i) row[i] += p * ca[i] + q * sa[i];
      }
    }
    return vals;
  };
  auto v1 = component_values(f.comp1());
  auto v2 = component_values(f.comp2());
  double m = 0.0;
  for (std::size_t i = 0; i < v1.size(); ++i)
    m = std::max(m, std::sqrt(v1[i] * v1[i] + v2[i] * v2[i]));
  return m;
}

}  // namespace

FourierOneForm random_one_form(std::uint64_t seed, int degree, double amplitude) {
  if (degree < 0) throw std::invalid_argument("random_one_form: degree must be >= 0");
  if (amplitude < 0.0)
    throw std::invalid_argument("random_one_form: amplitude must be >= 0");
  if (amplitude == 0.0) return FourierOneForm{};

  std::mt19937_64 rng(seed);
  auto uniform = [&]() {
    // [-1, 1), mapped from the top 53 bits; portable across platforms
    return static_cast<double>(rng() >> 11) * 0x1p-52 - 1.0;
  };

  auto synth = [&]() {
    std::vector<TrigTerm> terms;
    for (int kx = 0; kx <= degree; ++kx) {
      int ky_lo = (kx == 0) ? 0 : -degree;
      for (int ky = ky_lo; ky <= degree; ++ky) {
        double w = 1.0 / ((1.0 + kx + std::abs(ky)) * (1.0 + kx + std::abs(ky)));
        TrigTerm t;
        t.deg_x = kx;
        t.deg_y = ky;
        t.cos_coef = w * uniform();
        t.sin_coef = (kx == 0 && ky == 0) ? 0.0 : w * uniform();
        terms.push_back(t);
      }
    }
    return terms;
  };
  FourierOneForm raw(synth(), synth());
  double m = eval_form_max_norm(raw, 128);
  if (m == 0.0) return FourierOneForm{};
  double scale = amplitude / m;
  auto rescale = [&](std::vector<TrigTerm> terms) {
    for (TrigTerm& t : terms) {
      t.cos_coef *= scale;
      t.sin_coef *= scale;
    }
    return terms;
  };
  return FourierOneForm(rescale(raw.comp1()), rescale(raw.comp2()));
}

}  // namespace aubry
