#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "aubry/dense_graph.hpp"
#include "aubry/phase_graph.hpp"
#include "aubry/torus.hpp"

namespace aubry {

enum class MeanCycleMethod { automatic, karp, howard };

/// Edge of a certified cycle, with its cost under L - c (k = 0).
struct CertificateEdge {
  int from = 0;
  int to = 0;
  int w1 = 0;
  int w2 = 0;
  Velocity velocity;
  double cost = 0.0;
  double duration = 0.0;
};

/// A closed walk certifying a mean value: mean_cost * total_time equals the
/// exact sum of the edge costs at k = 0.
struct CycleCertificate {
  std::vector<CertificateEdge> edges;
  double mean_cost = 0.0;  // per unit time
  double total_time = 0.0;
};

/// Directed cycle minimizing cost per unit time under L - c. The discrete
/// critical value is -mean_cost. `automatic` picks Karp (exact reference,
/// O(V*E) time, O(V^2) memory) on small graphs and Howard's policy iteration
/// on large ones.
CycleCertificate min_mean_cycle(const PhaseGraph& g, const CohomologyClass& c,
                                MeanCycleMethod method = MeanCycleMethod::automatic);
CycleCertificate min_mean_cycle(const DenseGraph& g,
                                MeanCycleMethod method = MeanCycleMethod::automatic);

struct NegativeCycleReport {
  bool found = false;
  std::optional<CycleCertificate> certificate;  // present when found
  int rounds = 0;
};

/// True iff some cycle has summed cost below -tol_zero under L - c + k,
/// by virtual-root Bellman-Ford relaxation. tol_zero <= 0 selects the
/// default 1e-9 * (cost scale).
NegativeCycleReport has_negative_cycle(const PhaseGraph& g, const CohomologyClass& c,
                                       double k, double tol_zero = -1.0);
NegativeCycleReport has_negative_cycle(const DenseGraph& g, double k,
                                       double tol_zero = -1.0);

/// Smallest k (to width <= tol) admitting no negative cycle; the initial
/// bracket comes from the extreme edge costs per unit time and is verified.
/// Throws NumericalError when the bracket cannot be established.
double critical_value_bisection(const PhaseGraph& g, const CohomologyClass& c,
                                double tol = 1e-9);
double critical_value_bisection(const DenseGraph& g, double tol = 1e-9);

/// alpha_discrete(c) = -(min mean cycle cost per unit time).
double alpha_discrete(const PhaseGraph& g, const CohomologyClass& c,
                      MeanCycleMethod method = MeanCycleMethod::automatic);

struct AlphaTable {
  std::vector<CohomologyClass> classes;
  std::vector<double> values;
};

/// alpha_discrete over a list of classes; edge costs are re-derived per class
/// from the stored displacements, the graph is built once by the caller.
/// Throws std::invalid_argument on an empty class list.
AlphaTable alpha_function(const PhaseGraph& g, std::span<const CohomologyClass> classes,
                          MeanCycleMethod method = MeanCycleMethod::automatic);

/// CSV export, header c1,c2,alpha.
void write_alpha_csv(std::ostream& os, const AlphaTable& table);

/// JSON export of a certificate's edge list.
void write_certificate_json(std::ostream& os, const CycleCertificate& cert);

}  // namespace aubry
