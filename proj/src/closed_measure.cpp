#include "aubry/closed_measure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include "aubry/io.hpp"

namespace aubry {

namespace {
constexpr double kWeightFloor = 1e-12;
}

double ClosedMeasure::conservation_residual() const {
  std::map<int, double> balance;
  for (const MeasureEdge& e : edges) {
    balance[e.from] -= e.weight;
    balance[e.to] += e.weight;
  }
  double worst = 0.0;
  for (const auto& [node, b] : balance) worst = std::max(worst, std::abs(b));
  return worst;
}

double ClosedMeasure::normalization_residual() const {
  double total = 0.0;
  for (const MeasureEdge& e : edges) total += e.weight * e.duration;
  return std::abs(total - 1.0);
}

ClosedMeasure measure_from_certificate(const CycleCertificate& cert) {
  ClosedMeasure mu;
  mu.h_time = cert.edges.empty() ? 0.0 : cert.edges.front().duration;
  double w = 1.0 / cert.total_time;
  std::map<std::pair<int, int>, MeasureEdge> merged;
  for (const CertificateEdge& e : cert.edges) {
    auto key = std::make_pair(e.from, e.to);
    auto it = merged.find(key);
    if (it == merged.end()) {
      MeasureEdge me;
      me.from = e.from;
      me.to = e.to;
      me.w1 = e.w1;
      me.w2 = e.w2;
      me.velocity = e.velocity;
      me.weight = w;
      me.cost0 = e.cost;
      me.duration = e.duration;
      merged.emplace(key, me);
    } else {
      it->second.weight += w;
    }
  }
  for (auto& [key, e] : merged)
    if (e.weight > kWeightFloor) mu.edges.push_back(e);
  return mu;
}

std::pair<double, ClosedMeasure> min_closed_measure(const PhaseGraph& g,
                                                    const CohomologyClass& c,
                                                    MeanCycleMethod method) {
  CycleCertificate cert = min_mean_cycle(g, c, method);
  return {cert.mean_cost, measure_from_certificate(cert)};
}

std::pair<double, ClosedMeasure> min_closed_measure(const DenseGraph& g,
                                                    MeanCycleMethod method) {
  CycleCertificate cert = min_mean_cycle(g, method);
  return {cert.mean_cost, measure_from_certificate(cert)};
}

double measure_integrate(const ClosedMeasure& mu,
                         const std::function<double(const MeasureEdge&)>& observable) {
  double total = 0.0;
  for (const MeasureEdge& e : mu.edges) total += e.weight * e.duration * observable(e);
  return total;
}

double graph_property_check(const ClosedMeasure& mu) {
  std::map<int, std::vector<const MeasureEdge*>> by_node;
  for (const MeasureEdge& e : mu.edges)
    if (e.weight > kWeightFloor) by_node[e.from].push_back(&e);
  double worst = 0.0;
  for (const auto& [node, list] : by_node) {
    for (std::size_t a = 0; a < list.size(); ++a) {
      for (std::size_t b = a + 1; b < list.size(); ++b) {
        double d1 = list[a]->velocity.v1 - list[b]->velocity.v1;
        double d2 = list[a]->velocity.v2 - list[b]->velocity.v2;
        worst = std::max(worst, std::sqrt(d1 * d1 + d2 * d2));
      }
    }
  }
  return worst;
}

double energy_level_check(const ClosedMeasure& mu, double alpha) {
  double worst = 0.0;
  for (const MeasureEdge& e : mu.edges) {
    if (e.weight <= kWeightFloor) continue;
    double energy = 0.5 * (e.velocity.v1 * e.velocity.v1 + e.velocity.v2 * e.velocity.v2);
    worst = std::max(worst, std::abs(energy - alpha));
  }
  return worst;
}

void write_measure_json(std::ostream& os, const ClosedMeasure& mu, double value,
                        const CohomologyClass& c) {
  os << "{\"value\":" << fmt_double(value) << ",\"class\":[" << fmt_double(c.c1)
     << ',' << fmt_double(c.c2) << "],\"edges\":[";
  for (std::size_t i = 0; i < mu.edges.size(); ++i) {
    const MeasureEdge& e = mu.edges[i];
    if (i) os << ',';
    os << "{\"from\":" << e.from << ",\"to\":" << e.to << ",\"w1\":" << e.w1
       << ",\"w2\":" << e.w2 << ",\"weight\":" << fmt_double(e.weight) << "}";
  }
  os << "]}\n";
}

}  // namespace aubry
