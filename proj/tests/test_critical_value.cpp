#include <cmath>
#include <random>

#include "aubry/critical_value.hpp"
#include "aubry/models.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace aubry;

namespace {

// 2-node oracle graph: edges 0->1 cost 1, 1->0 cost -3, unit edge time.
DenseGraph two_node_graph() {
  DenseGraph g(2, 1.0);
  g.add_edge(0, 1, 1.0);
  g.add_edge(1, 0, -3.0);
  return g;
}

GridSpec test_grid(int n) {
  GridSpec spec;
  spec.n = n;
  spec.h_time = 2.0 / n;
  spec.speed_cap = std::min(5.0, 0.225 * n);  // keep speed_cap*h_time < 1/2
  return spec;
}

ExampleSpec two_well_spec(int n) {
  ExampleSpec spec;
  spec.grid = test_grid(n);
  return spec;
}

}  // namespace

TEST_SUITE_BEGIN("critical_value");

TEST_CASE("two-node graph: all routes agree with enumeration") {
  DenseGraph g = two_node_graph();
  double brute = oracle::brute_min_mean_per_time(g);
  CHECK(brute == -1.0);  // frozen: (1 - 3)/2

  for (auto method : {MeanCycleMethod::karp, MeanCycleMethod::howard}) {
    CycleCertificate cert = min_mean_cycle(g, method);
    CHECK(cert.mean_cost == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(cert.edges.size() == 2);
    CHECK(cert.total_time == doctest::Approx(2.0));
    double sum = 0.0;
    for (const auto& e : cert.edges) sum += e.cost;
    CHECK(cert.mean_cost * cert.total_time == doctest::Approx(sum).epsilon(1e-14));
  }

  // negative cycle iff k < 1 (cycle cost 2k - 2)
  CHECK(has_negative_cycle(g, 0.9).found);
  CHECK(has_negative_cycle(g, 0.999999).found);
  CHECK_FALSE(has_negative_cycle(g, 1.000001).found);
  CHECK_FALSE(has_negative_cycle(g, 100.0).found);
  CHECK(critical_value_bisection(g, 1e-9) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("negative-cycle certificates are genuine") {
  DenseGraph g = two_node_graph();
  auto rep = has_negative_cycle(g, 0.5);
  REQUIRE(rep.found);
  REQUIRE(rep.certificate.has_value());
  double sum = 0.0;
  for (const auto& e : rep.certificate->edges) sum += e.cost + 0.5 * e.duration;
  CHECK(sum < 0.0);
}

TEST_CASE("random small graphs: karp, howard, bisection vs enumeration") {
  std::mt19937_64 rng(20240601);
  for (int trial = 0; trial < 60; ++trial) {
    DenseGraph g = oracle::random_graph(rng);
    double brute = oracle::brute_min_mean_per_time(g);
    CAPTURE(trial);

    CycleCertificate karp = min_mean_cycle(g, MeanCycleMethod::karp);
    CycleCertificate howard = min_mean_cycle(g, MeanCycleMethod::howard);
    CHECK(std::abs(karp.mean_cost - brute) <= 1e-12 * std::max(1.0, std::abs(brute)));
    CHECK(std::abs(howard.mean_cost - brute) <= 1e-12 * std::max(1.0, std::abs(brute)));

    double bis = critical_value_bisection(g, 1e-9);
    CHECK(std::abs(bis + brute) <= 1e-8);

    // monotonicity of the negative-cycle verdict in k
    double alpha = -brute;
    std::uniform_real_distribution<double> du(0.01, 2.0);
    double below = alpha - du(rng), above = alpha + du(rng);
    CHECK(has_negative_cycle(g, below).found);
    CHECK_FALSE(has_negative_cycle(g, above).found);
  }
}

TEST_CASE("uniform cost shift moves the mean exactly") {
  std::mt19937_64 rng(99);
  DenseGraph g = oracle::random_graph(rng);
  double mean0 = min_mean_cycle(g, MeanCycleMethod::karp).mean_cost;
  double delta = 0.73;
  DenseGraph shifted(g.node_count(), g.h_time);
  for (const auto& e : g.edges) shifted.add_edge(e.from, e.to, e.cost + delta * g.h_time);
  double mean1 = min_mean_cycle(shifted, MeanCycleMethod::karp).mean_cost;
  CHECK(mean1 - mean0 == doctest::Approx(delta).epsilon(1e-12));

  // and the bisection threshold decreases by the same delta
  double b0 = critical_value_bisection(g, 1e-9);
  double b1 = critical_value_bisection(shifted, 1e-9);
  CHECK(b0 - b1 == doctest::Approx(delta).epsilon(1e-7));
}

TEST_CASE("two-well grid: vertical loop attains the critical value") {
  PhaseGraph g(build_example(two_well_spec(16)), test_grid(16));
  CycleCertificate cert = min_mean_cycle(g, {}, MeanCycleMethod::karp);
  double alpha = -cert.mean_cost;
  // reference value 2, coarse grid tolerance
  CHECK(alpha == doctest::Approx(2.0).epsilon(0.1));
  // certificate loops vertically near a minimum column: at most one cell of
  // sideways motion per edge, no net horizontal winding, one vertical wrap
  double vq = 1.0 / (g.spec().n * g.spec().h_time);
  int w1 = 0, w2 = 0;
  for (const auto& e : cert.edges) {
    CHECK(std::abs(e.velocity.v1) <= vq + 1e-12);
    w1 += e.w1;
    w2 += e.w2;
  }
  CHECK(w1 == 0);
  CHECK(std::abs(w2) == 1);
}

TEST_CASE("grid routes agree: karp vs howard vs bisection") {
  PhaseGraph g(build_example(two_well_spec(16)), test_grid(16));
  double ak = -min_mean_cycle(g, {}, MeanCycleMethod::karp).mean_cost;
  double ah = -min_mean_cycle(g, {}, MeanCycleMethod::howard).mean_cost;
  double ab = critical_value_bisection(g, {}, 1e-9);
  CHECK(std::abs(ak - ah) <= 1e-10);
  CHECK(std::abs(ab - ak) <= 1e-8);

  CohomologyClass c{0.3, -0.2};
  double ck = -min_mean_cycle(g, c, MeanCycleMethod::karp).mean_cost;
  double ch = -min_mean_cycle(g, c, MeanCycleMethod::howard).mean_cost;
  double cb = critical_value_bisection(g, c, 1e-9);
  CHECK(std::abs(ck - ch) <= 1e-10);
  CHECK(std::abs(cb - ck) <= 1e-8);
}

TEST_CASE("alpha exceeds the kinetic-only value on the same stencil") {
  GridSpec spec = test_grid(16);
  PhaseGraph g(build_example(two_well_spec(16)), spec);
  PhaseGraph kinetic(MagneticLagrangian{}, spec);  // eta = 0
  double a = -min_mean_cycle(g, {}, MeanCycleMethod::karp).mean_cost;
  double a0 = -min_mean_cycle(kinetic, {}, MeanCycleMethod::karp).mean_cost;
  CHECK(a >= a0 - 1e-12);
  CHECK(a0 == doctest::Approx(0.0).epsilon(1e-12));  // rest edges are free
}

TEST_CASE("alpha is positive for the non-closed model family") {
  for (int n : {16, 24}) {
    PhaseGraph g(build_example(two_well_spec(n)), test_grid(n));
    double a = -min_mean_cycle(g, {}).mean_cost;
    CHECK(a > 1e-9);
  }
}

TEST_CASE("alpha_function: table shape and midpoint convexity") {
  PhaseGraph g(build_example(two_well_spec(16)), test_grid(16));
  std::vector<CohomologyClass> classes;
  for (int i = -2; i <= 2; ++i) classes.push_back({0.25 * i, 0.1 * i});
  AlphaTable t = alpha_function(g, classes);
  REQUIRE(t.values.size() == 5);
  // collinear triples: midpoint below chord
  for (int i = 1; i <= 3; ++i) {
    double chord = 0.5 * (t.values[i - 1] + t.values[i + 1]);
    CHECK(t.values[i] <= chord + 1e-9);
  }
  CHECK_THROWS_AS(alpha_function(g, {}), std::invalid_argument);
}

TEST_CASE("howard matches karp on a 24-grid with a perturbed form") {
  GridSpec spec = test_grid(24);
  MagneticLagrangian L =
      build_example(two_well_spec(24)).perturbed(random_one_form(7, 2, 0.1));
  PhaseGraph g(L, spec);
  double ak = -min_mean_cycle(g, {}, MeanCycleMethod::karp).mean_cost;
  double ah = -min_mean_cycle(g, {}, MeanCycleMethod::howard).mean_cost;
  CHECK(std::abs(ak - ah) <= 1e-9);
}

TEST_SUITE_END();
