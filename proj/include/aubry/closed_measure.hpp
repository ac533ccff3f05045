#pragma once

#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

#include "aubry/critical_value.hpp"
#include "aubry/dense_graph.hpp"
#include "aubry/phase_graph.hpp"

namespace aubry {

struct MeasureEdge {
  int from = 0;
  int to = 0;
  int w1 = 0;
  int w2 = 0;
  Velocity velocity;
  double weight = 0.0;  // time density; weight * duration = time fraction
  double cost0 = 0.0;   // edge cost at the measure's class, k = 0
  double duration = 0.0;
};

/// Nonnegative edge weights with flow conservation at every node and unit
/// total time: the discrete stand-in for holonomic probabilities.
struct ClosedMeasure {
  std::vector<MeasureEdge> edges;  // support, weight floor 1e-12
  double h_time = 0.0;

  /// max over nodes of |sum of incoming - sum of outgoing| weights.
  double conservation_residual() const;
  /// |sum of weight*duration - 1|.
  double normalization_residual() const;
};

/// Uniform measure on a cycle certificate (weight 1/(len*h) per edge;
/// repeated edges merge their weights).
ClosedMeasure measure_from_certificate(const CycleCertificate& cert);

/// Minimize the integral of (L - c) over flow-conserving, unit-time edge
/// measures. The optimum of this linear program is attained on a cycle
/// occupation measure, so it reduces exactly to the minimum mean cycle;
/// returns (optimal value, measure) with value = mean cost = -alpha(c).
std::pair<double, ClosedMeasure> min_closed_measure(
    const PhaseGraph& g, const CohomologyClass& c,
    MeanCycleMethod method = MeanCycleMethod::automatic);
std::pair<double, ClosedMeasure> min_closed_measure(
    const DenseGraph& g, MeanCycleMethod method = MeanCycleMethod::automatic);

/// Time-average pairing: sum of weight * duration * observable(edge).
double measure_integrate(const ClosedMeasure& mu,
                         const std::function<double(const MeasureEdge&)>& observable);

/// max over support base nodes of the diameter of the velocity set carried
/// by that node's outgoing weighted edges; near zero certifies that the
/// support is a graph over its projection.
double graph_property_check(const ClosedMeasure& mu);

/// max over support edges of | |v|^2/2 - alpha |.
double energy_level_check(const ClosedMeasure& mu, double alpha);

/// JSON export {edges:[{from,to,w1,w2,weight}...], value, class:[c1,c2]}.
void write_measure_json(std::ostream& os, const ClosedMeasure& mu, double value,
                        const CohomologyClass& c);

}  // namespace aubry
