#include "aubry/dense_graph.hpp"

#include <span>
#include <stdexcept>

namespace aubry {

void DenseGraph::add_edge(int from, int to, double cost) {
  if (from < 0 || from >= num_nodes || to < 0 || to >= num_nodes)
    throw std::invalid_argument("DenseGraph::add_edge: node out of range");
  edges.push_back({from, to, cost});
  finalized_ = false;
}

void DenseGraph::finalize() const {
  if (finalized_) return;
  csr_off_.assign(num_nodes + 1, 0);
  for (const Edge& e : edges) ++csr_off_[e.from + 1];
  for (int u = 0; u < num_nodes; ++u) csr_off_[u + 1] += csr_off_[u];
  csr_edge_.resize(edges.size());
  std::vector<int> cursor(csr_off_.begin(), csr_off_.end() - 1);
  for (int e = 0; e < static_cast<int>(edges.size()); ++e)
    csr_edge_[cursor[edges[e].from]++] = e;
  finalized_ = true;
}

std::span<const int> DenseGraph::out_edges(int node) const {
  finalize();
  return {csr_edge_.data() + csr_off_[node],
          static_cast<std::size_t>(csr_off_[node + 1] - csr_off_[node])};
}

}  // namespace aubry
