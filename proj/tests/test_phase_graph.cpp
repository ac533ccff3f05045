#include <cmath>
#include <random>
#include <sstream>

#include "aubry/models.hpp"
#include "aubry/phase_graph.hpp"
#include "doctest.h"

using namespace aubry;

namespace {

GridSpec grid(int n, double cap) {
  GridSpec s;
  s.n = n;
  s.h_time = 2.0 / n;
  s.speed_cap = cap;
  return s;
}

MagneticLagrangian two_well() {
  ExampleSpec spec;
  return build_example(spec);
}

int stencil_index(const PhaseGraph& g, int dx, int dy) {
  const auto& st = g.stencil();
  for (int s = 0; s < static_cast<int>(st.size()); ++s)
    if (st[s].dx == dx && st[s].dy == dy) return s;
  return -1;
}

}  // namespace

TEST_SUITE_BEGIN("phase_graph");

TEST_CASE("grid spec validation") {
  GridSpec bad = grid(4, 1.0);
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = grid(16, 5.0);  // cap*h = 0.625
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = grid(16, 3.0);
  bad.windings = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.windings = 3;  // > cap*h + 1
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_NOTHROW(grid(16, 3.0).validate());
}

TEST_CASE("degenerate speed cap leaves only rest edges") {
  GridSpec s = grid(16, 0.4);  // under one cell per step
  PhaseGraph g(two_well(), s);
  CHECK(g.stencil_size() == 1);
  CHECK(g.edge_count() == 16 * 16);
  PhaseEdge e = g.edge(37, 0);
  CHECK(e.from == 37);
  CHECK(e.to == 37);
  CHECK(e.base_action == 0.0);
}

TEST_CASE("kinetic-only edges cost |v|^2/2 per unit time") {
  GridSpec s = grid(16, 3.0);
  PhaseGraph g(MagneticLagrangian{}, s);  // eta = 0
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    int u = static_cast<int>(rng() % 256);
    int si = static_cast<int>(rng() % g.stencil_size());
    PhaseEdge e = g.edge(u, si);
    double v2 = e.velocity.v1 * e.velocity.v1 + e.velocity.v2 * e.velocity.v2;
    CHECK(e.base_action == doctest::Approx(s.h_time * 0.5 * v2).epsilon(1e-15));
    if (v2 > 0) CHECK(e.base_action > 0.0);
  }
}

TEST_CASE("vertical edge over an on-node minimum column hits the bound") {
  // n = 10 puts x = 1/4 exactly on a cell center (i = 2, (2+.5)/10)
  GridSpec s = grid(10, 2.2);
  PhaseGraph g(two_well(), s);
  int dy = static_cast<int>(std::lround(2.0 * s.n * s.h_time));  // cells at speed 2
  int si = stencil_index(g, 0, dy);
  REQUIRE(si >= 0);
  int node = g.node_of(2, 3);
  CHECK(g.node_position(node).x == 0.25);
  PhaseEdge e = g.edge(node, si);
  // h * (|v|^2/2 + f(a) * 2) = h * (2 - 4) = -h * f(a)^2/2
  CHECK(e.base_action == doctest::Approx(-s.h_time * 2.0).epsilon(1e-14));
  CHECK(e.velocity.v2 == 2.0);
}

TEST_CASE("stencil symmetry: forward plus reverse is purely kinetic") {
  GridSpec s = grid(16, 3.0);
  PhaseGraph g(two_well(), s);
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    int u = static_cast<int>(rng() % 256);
    int si = static_cast<int>(rng() % g.stencil_size());
    const StencilEntry& st = g.stencil()[si];
    int sr = stencil_index(g, -st.dx, -st.dy);
    REQUIRE(sr >= 0);
    PhaseEdge fwd = g.edge(u, si);
    PhaseEdge rev = g.edge(fwd.to, sr);
    CHECK(rev.to == u);
    double v2 = fwd.velocity.v1 * fwd.velocity.v1 + fwd.velocity.v2 * fwd.velocity.v2;
    CHECK(fwd.base_action + rev.base_action ==
          doctest::Approx(s.h_time * v2).epsilon(1e-13));
  }
}

TEST_CASE("cycle cost difference under c equals minus the winding pairing") {
  GridSpec s = grid(16, 3.0);
  PhaseGraph g(two_well(), s);
  // a horizontal loop around the torus: dx = 2 cells per edge, 8 edges
  int si = stencil_index(g, 2, 0);
  REQUIRE(si >= 0);
  CohomologyClass c{1.3, -0.8};
  int u = g.node_of(0, 5);
  double with_c = 0.0, base = 0.0;
  int w1 = 0, w2 = 0, cur = u;
  for (int i = 0; i < 8; ++i) {
    PhaseEdge e = g.edge(cur, si);
    with_c += edge_cost(e, c, 0.0);
    base += edge_cost(e, {}, 0.0);
    w1 += e.w1;
    w2 += e.w2;
    cur = e.to;
  }
  CHECK(cur == u);
  CHECK(w1 == 1);
  CHECK(w2 == 0);
  CHECK(with_c - base == doctest::Approx(-(c.c1 * 1 + c.c2 * 0)).epsilon(1e-13));
}

TEST_CASE("edge cost linearity in c and k") {
  GridSpec s = grid(16, 3.0);
  PhaseGraph g(two_well(), s);
  PhaseEdge rest = g.edge(12, stencil_index(g, 0, 0));
  CHECK(edge_cost(rest, {2.5, -7.0}, 3.0) == doctest::Approx(3.0 * s.h_time));
  PhaseEdge e = g.edge(12, stencil_index(g, 1, 2));
  CHECK(edge_cost(e, {}, 0.0) == e.base_action);
  CHECK(edge_cost(e, {1.0, 0.0}, 0.0) - edge_cost(e, {}, 0.0) ==
        doctest::Approx(-e.disp_x).epsilon(1e-15));
}

TEST_CASE("walk_to_path lifts walks consistently") {
  GridSpec s = grid(16, 3.0);
  MagneticLagrangian L = two_well();
  PhaseGraph g(L, s);

  // single rest edge: constant path of duration h
  PhaseEdge rest = g.edge(40, stencil_index(g, 0, 0));
  auto path1 = walk_to_path(g, std::vector<PhaseEdge>{rest});
  CHECK(path1.size() == 2);
  CHECK(path1[0].s.q.x == path1[1].s.q.x);
  CHECK(path1[1].t == doctest::Approx(s.h_time));

  // vertical static loop at the column nearest 1/4: winding (0, 1)
  int best_ix = 0;
  double best_f = 1e300;
  for (int ix = 0; ix < s.n; ++ix) {
    double f = L.eta({(ix + 0.5) / s.n, 0.0}).second;
    if (f < best_f) {
      best_f = f;
      best_ix = ix;
    }
  }
  int si = stencil_index(g, 0, 4);  // speed 2 at n*h = 2
  REQUIRE(si >= 0);
  std::vector<PhaseEdge> loop;
  int cur = g.node_of(best_ix, 0);
  for (int i = 0; i < s.n / 4; ++i) {
    loop.push_back(g.edge(cur, si));
    cur = loop.back().to;
  }
  CHECK(cur == g.node_of(best_ix, 0));
  int w2 = 0;
  for (const auto& e : loop) w2 += e.w2;
  CHECK(w2 == 1);
  auto path = walk_to_path(g, loop);
  CHECK(path.size() == loop.size() + 1);

  // summed edge costs match the curve action of the lift
  CohomologyClass c{0.2, 0.4};
  double k = 1.7;
  double edges_cost = 0.0;
  for (const auto& e : loop) edges_cost += edge_cost(e, c, k);
  double action = curve_action(L, c, k, path);
  CHECK(action == doctest::Approx(edges_cost).epsilon(1e-12));

  // non-contiguous walks are rejected
  std::vector<PhaseEdge> broken = {g.edge(0, si), g.edge(7, si)};
  CHECK_THROWS_AS(walk_to_path(g, broken), std::invalid_argument);
}

TEST_CASE("static loop cost at the critical level vanishes under refinement") {
  double k = 2.0;  // f_min^2/2
  std::vector<double> costs;
  for (int n : {16, 32, 64}) {
    GridSpec s = grid(n, std::min(5.0, 0.225 * n));
    ExampleSpec spec;
    spec.grid = s;
    MagneticLagrangian L = build_example(spec);
    PhaseGraph g(L, s);
    int best_ix = 0;
    double best_f = 1e300;
    for (int ix = 0; ix < n; ++ix) {
      double f = L.eta({(ix + 0.5) / n, 0.0}).second;
      if (f < best_f) {
        best_f = f;
        best_ix = ix;
      }
    }
    int si = stencil_index(g, 0, 4);
    REQUIRE(si >= 0);
    double total = 0.0;
    int cur = g.node_of(best_ix, 0);
    for (int i = 0; i < n / 4; ++i) {
      PhaseEdge e = g.edge(cur, si);
      total += edge_cost(e, {}, k);
      cur = e.to;
    }
    costs.push_back(total);
  }
  CHECK(costs[2] <= 0.01);
  CHECK(costs[0] / costs[1] == doctest::Approx(4.0).epsilon(0.3));
  CHECK(costs[1] / costs[2] == doctest::Approx(4.0).epsilon(0.3));
}

TEST_CASE("jsonl dump is deterministic and well formed") {
  GridSpec s = grid(16, 1.2);
  PhaseGraph g(two_well(), s);
  std::ostringstream a, b;
  g.dump_jsonl(a);
  g.dump_jsonl(b);
  std::string text = a.str();
  CHECK(text == b.str());
  CHECK(static_cast<long long>(std::count(text.begin(), text.end(), '\n')) ==
        g.edge_count());
  CHECK(text.rfind("{\"from\":0,\"to\":", 0) == 0);
}

TEST_SUITE_END();
