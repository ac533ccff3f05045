#include <algorithm>
#include <cmath>
#include <random>

#include "aubry/closed_measure.hpp"
#include "aubry/models.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace aubry;

namespace {

DenseGraph two_node_graph() {
  DenseGraph g(2, 1.0);
  g.add_edge(0, 1, 1.0);
  g.add_edge(1, 0, -3.0);
  return g;
}

GridSpec grid(int n) {
  GridSpec s;
  s.n = n;
  s.h_time = 2.0 / n;
  s.speed_cap = std::min(5.0, 0.225 * n);
  return s;
}

PhaseGraph two_well_graph(int n) {
  ExampleSpec spec;
  spec.grid = grid(n);
  return PhaseGraph(build_example(spec), spec.grid);
}

}  // namespace

TEST_SUITE_BEGIN("closed_measure");

TEST_CASE("two-node program: uniform optimal measure, value -1") {
  DenseGraph g = two_node_graph();
  auto [value, mu] = min_closed_measure(g);
  // brute force over all cycle measures: the single 2-cycle, value -1
  CHECK(value == doctest::Approx(-1.0).epsilon(1e-14));
  REQUIRE(mu.edges.size() == 2);
  for (const auto& e : mu.edges) CHECK(e.weight == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(mu.conservation_residual() <= 1e-9);
  CHECK(mu.normalization_residual() <= 1e-9);
}

TEST_CASE("optimal value matches enumeration and undercuts random measures") {
  std::mt19937_64 rng(2025);
  for (int trial = 0; trial < 30; ++trial) {
    DenseGraph g = oracle::random_graph(rng, 6);
    auto [value, mu] = min_closed_measure(g);
    double brute = oracle::brute_min_mean_per_time(g);
    CHECK(value == doctest::Approx(brute).epsilon(1e-12));
    CHECK(mu.conservation_residual() <= 1e-9);
    CHECK(mu.normalization_residual() <= 1e-9);

    // every simple-cycle occupation measure pays at least the optimum
    for (const auto& cyc : oracle::enumerate_simple_cycles(g)) {
      double mean = cyc.cost_sum / (cyc.length * g.h_time);
      CHECK(mean >= value - 1e-12);
    }
  }
}

TEST_CASE("value equals minus the bisection critical value") {
  std::mt19937_64 rng(91);
  DenseGraph g = oracle::random_graph(rng);
  auto [value, mu] = min_closed_measure(g);
  double alpha = critical_value_bisection(g, 1e-9);
  CHECK(std::abs(value + alpha) <= 1e-8);
}

TEST_CASE("integration against observables") {
  PhaseGraph g = two_well_graph(16);
  auto [value, mu] = min_closed_measure(g, {});
  // normalization: the constant observable integrates to one
  CHECK(measure_integrate(mu, [](const MeasureEdge&) { return 1.0; }) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // kinetic energy integrates to alpha up to the grid tolerance
  double alpha = -value;
  double energy = measure_integrate(mu, [](const MeasureEdge& e) {
    return 0.5 * (e.velocity.v1 * e.velocity.v1 + e.velocity.v2 * e.velocity.v2);
  });
  CHECK(std::abs(energy - alpha) <= 0.3);
}

TEST_CASE("one-form observables separate distinct cycle measures") {
  PhaseGraph g = two_well_graph(16);
  // uniform measures on the vertical loops over the two wells
  auto loop_measure = [&](double column) {
    int n = g.spec().n;
    int ix = static_cast<int>(std::floor(column * n));
    int si = -1;
    for (int s = 0; s < g.stencil_size(); ++s)
      if (g.stencil()[s].dx == 0 && g.stencil()[s].dy == 4) si = s;
    REQUIRE(si >= 0);
    CycleCertificate cert;
    int cur = g.node_of(ix, 0);
    for (int i = 0; i < n / 4; ++i) {
      PhaseEdge e = g.edge(cur, si);
      cert.edges.push_back({e.from, e.to, e.w1, e.w2, e.velocity,
                            edge_cost(e, {}, 0.0), e.duration});
      cur = e.to;
    }
    cert.total_time = g.spec().h_time * (n / 4);
    return measure_from_certificate(cert);
  };
  ClosedMeasure a = loop_measure(0.25), b = loop_measure(0.75);
  // pairing with a 1-form X supported near x = 1/4
  auto observable = [](const MeasureEdge& e) {
    return (std::abs(wrap_shortest(e.velocity.v2)) > 0) * 0.0 +
           ((e.from % 16) < 8 ? e.velocity.v2 : 0.0);
  };
  double ia = measure_integrate(a, observable);
  double ib = measure_integrate(b, observable);
  CHECK(ia != ib);
  CHECK(ia == doctest::Approx(2.0).epsilon(1e-12));  // v2 = 2 on the loop
  CHECK(ib == doctest::Approx(0.0));
}

TEST_CASE("graph property detector") {
  PhaseGraph g = two_well_graph(16);
  auto [value, mu] = min_closed_measure(g, {});
  // single-cycle measures visit each node with one velocity
  CHECK(graph_property_check(mu) <= 1.0 / (16 * g.spec().h_time) + 1e-12);

  // artificial union of two opposite loops through the same nodes
  ClosedMeasure bad;
  bad.h_time = 1.0;
  bad.edges.push_back({0, 1, 0, 0, {0.0, 2.0}, 0.25, 0.0, 1.0});
  bad.edges.push_back({1, 0, 0, 0, {0.0, 2.0}, 0.25, 0.0, 1.0});
  bad.edges.push_back({0, 1, 0, 0, {0.0, -2.0}, 0.25, 0.0, 1.0});
  bad.edges.push_back({1, 0, 0, 0, {0.0, -2.0}, 0.25, 0.0, 1.0});
  CHECK(graph_property_check(bad) == doctest::Approx(4.0));
}

TEST_CASE("energy level check") {
  ClosedMeasure rest;
  rest.h_time = 1.0;
  rest.edges.push_back({0, 0, 0, 0, {0.0, 0.0}, 1.0, 0.0, 1.0});
  CHECK(energy_level_check(rest, 0.0) == 0.0);
  CHECK(energy_level_check(rest, 1.0) == 1.0);
}

TEST_CASE("optimum invariant under discrete coboundaries") {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> up(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    DenseGraph g = oracle::random_graph(rng);
    std::vector<double> p(g.node_count());
    for (double& v : p) v = up(rng);
    DenseGraph rw(g.node_count(), g.h_time);
    for (const auto& e : g.edges)
      rw.add_edge(e.from, e.to, e.cost + p[e.from] - p[e.to]);
    double v0 = min_closed_measure(g).first;
    double v1 = min_closed_measure(rw).first;
    CHECK(v0 == doctest::Approx(v1).epsilon(1e-11));
  }
}

TEST_CASE("rescaled and rebuilt measures keep their residuals tiny") {
  PhaseGraph g = two_well_graph(24);
  auto [value, mu] = min_closed_measure(g, {});
  CHECK(mu.conservation_residual() <= 1e-12);
  CHECK(mu.normalization_residual() <= 1e-12);
  // support lives near a minimum column
  for (const auto& e : mu.edges) {
    double x = g.node_position(e.from).x;
    double d = std::min(std::abs(wrap_shortest(x - 0.25)),
                        std::abs(wrap_shortest(x - 0.75)));
    CHECK(d <= 2.0 / g.spec().n);
  }
}

TEST_SUITE_END();
