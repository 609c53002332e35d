#include "pcmmap/oracle.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdint>
#include <string>

namespace pcmmap {

namespace {

std::uint64_t state_count(std::span<const Var> query, std::size_t budget) {
  if (query.size() > budget || query.size() >= 63) {
    throw BudgetExceeded("query has " + std::to_string(query.size()) + " variables; budget is " +
                         std::to_string(budget));
  }
  return std::uint64_t{1} << query.size();
}

struct Best {
  double value = -1.0;
  std::uint64_t index = 0;

  void offer(double v, std::uint64_t i) {
    if (v > value || (v == value && i < index)) {
      value = v;
      index = i;
    }
  }
};

void activate(const Circuit& circuit, const std::vector<double>& value, std::vector<bool>& nodes,
              std::vector<bool>& edges) {
  const NodeId root = circuit.root();
  if (value[root] <= 0.0) return;
  nodes[root] = true;
  for (NodeId id = root + 1; id-- > 0;) {
    if (!nodes[id]) continue;
    const Node& n = circuit.node(id);
    for (std::size_t k = 0; k < n.children.size(); ++k) {
      const NodeId c = n.children[k];
      if (value[c] > 0.0) {
        edges[circuit.edge_index(id, k)] = true;
        nodes[c] = true;
      }
    }
  }
}

void accumulate_edges(const Circuit& circuit, std::span<const Var> query, std::uint64_t begin,
                      std::uint64_t end, std::vector<double>& best) {
  std::vector<bool> nodes(circuit.size());
  std::vector<bool> edges(circuit.num_edges());
  for (std::uint64_t i = begin; i < end; ++i) {
    const Assignment q = query_state(circuit.num_vars(), query, i);
    const auto value = evaluate_nodes(circuit, q);
    std::fill(nodes.begin(), nodes.end(), false);
    std::fill(edges.begin(), edges.end(), false);
    activate(circuit, value, nodes, edges);
    const double c = value[circuit.root()];
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (edges[e]) best[e] = std::max(best[e], c);
    }
  }
}

std::vector<std::optional<double>> finish(const std::vector<double>& best) {
  std::vector<std::optional<double>> out(best.size());
  for (std::size_t e = 0; e < best.size(); ++e) {
    if (best[e] >= 0.0) out[e] = best[e];
  }
  return out;
}

}  // namespace

Assignment query_state(std::size_t num_vars, std::span<const Var> query, std::uint64_t index) {
  Assignment q(num_vars);
  const std::size_t k = query.size();
  for (std::size_t i = 0; i < k; ++i) {
    q.set(query[i], ((index >> (k - 1 - i)) & 1U) != 0);
  }
  return q;
}

OracleResult oracle_mmap_serial(const Circuit& circuit, std::span<const Var> query, std::size_t budget) {
  const std::uint64_t n = state_count(query, budget);
  Best best;
  for (std::uint64_t i = 0; i < n; ++i) {
    best.offer(evaluate_marginal(circuit, query_state(circuit.num_vars(), query, i)), i);
  }
  return {best.value, query_state(circuit.num_vars(), query, best.index)};
}

OracleResult oracle_mmap(const Circuit& circuit, std::span<const Var> query, std::size_t budget) {
  const auto n = static_cast<std::int64_t>(state_count(query, budget));
  Best best;
#pragma omp parallel
  {
    Best local;
#pragma omp for schedule(static) nowait
    for (std::int64_t i = 0; i < n; ++i) {
      const auto idx = static_cast<std::uint64_t>(i);
      local.offer(evaluate_marginal(circuit, query_state(circuit.num_vars(), query, idx)), idx);
    }
#pragma omp critical(pcmmap_oracle_mmap)
    best.offer(local.value, local.index);
  }
  return {best.value, query_state(circuit.num_vars(), query, best.index)};
}

SubcircuitMask oracle_subcircuit(const Circuit& circuit, const Assignment& q) {
  SubcircuitMask mask{std::vector<bool>(circuit.size(), false), std::vector<bool>(circuit.num_edges(), false)};
  activate(circuit, evaluate_nodes(circuit, q), mask.active_nodes, mask.active_edges);
  return mask;
}

std::optional<double> oracle_edge_mmap(const Circuit& circuit, std::span<const Var> query, EdgeRef edge,
                                       std::size_t budget) {
  if (edge.parent >= circuit.size() || edge.ordinal >= circuit.node(edge.parent).children.size()) {
    throw std::invalid_argument("oracle_edge_mmap: no such edge");
  }
  const std::uint64_t n = state_count(query, budget);
  const std::size_t e = circuit.edge_index(edge.parent, edge.ordinal);
  std::optional<double> best;
  for (std::uint64_t i = 0; i < n; ++i) {
    const Assignment q = query_state(circuit.num_vars(), query, i);
    const SubcircuitMask mask = oracle_subcircuit(circuit, q);
    if (!mask.active_edges[e]) continue;
    const double v = evaluate_marginal(circuit, q);
    if (!best || v > *best) best = v;
  }
  return best;
}

std::vector<std::optional<double>> oracle_all_edge_mmap_serial(const Circuit& circuit,
                                                               std::span<const Var> query,
                                                               std::size_t budget) {
  const std::uint64_t n = state_count(query, budget);
  std::vector<double> best(circuit.num_edges(), -1.0);
  accumulate_edges(circuit, query, 0, n, best);
  return finish(best);
}

std::vector<std::optional<double>> oracle_all_edge_mmap(const Circuit& circuit, std::span<const Var> query,
                                                        std::size_t budget) {
  const std::uint64_t n = state_count(query, budget);
  std::vector<double> best(circuit.num_edges(), -1.0);
#pragma omp parallel
  {
    const auto threads = static_cast<std::uint64_t>(omp_get_num_threads());
    const auto tid = static_cast<std::uint64_t>(omp_get_thread_num());
    const std::uint64_t chunk = (n + threads - 1) / threads;
    const std::uint64_t begin = std::min(n, tid * chunk);
    const std::uint64_t end = std::min(n, begin + chunk);
    std::vector<double> local(circuit.num_edges(), -1.0);
    accumulate_edges(circuit, query, begin, end, local);
#pragma omp critical(pcmmap_oracle_edges)
    for (std::size_t e = 0; e < best.size(); ++e) best[e] = std::max(best[e], local[e]);
  }
  return finish(best);
}

}  // namespace pcmmap
