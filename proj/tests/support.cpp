#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "pcmmap/generate.hpp"
#include "pcmmap/io.hpp"

namespace pcmmap::testing {

Circuit fixture(const std::string& name) { return read_circuit(std::string(PCMMAP_TEST_DATA) + "/" + name); }

bool close_relative(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1e-300, std::abs(a), std::abs(b)});
}

CorpusCase corpus_case(std::size_t index) {
  CorpusCase out;
  out.seed = 0x9e3779b97f4a7c15ULL * (index + 1);
  std::mt19937_64 rng(out.seed);

  RandomCircuitOptions options;
  options.num_vars = 4 + index % 9;
  options.depth = 2 + (index / 9) % 5;
  options.deterministic_share = std::uniform_real_distribution<double>(0.2, 0.6)(rng);
  options.mixture_share = std::uniform_real_distribution<double>(0.2, 0.5)(rng);
  out.circuit = random_circuit(options, rng());

  Proportions p;
  p.query = std::uniform_int_distribution<unsigned>(10, 60)(rng);
  p.evidence = std::uniform_int_distribution<unsigned>(0, 100 - p.query)(rng);
  p.hidden = 100 - p.query - p.evidence;
  out.instance = generate_instance(out.circuit, p, rng());
  out.conditioned = condition(out.circuit, out.instance.evidence_assignment(out.circuit.num_vars()));
  return out;
}

Assignment full_assignment(std::size_t num_vars, std::uint64_t index) {
  Assignment x(num_vars);
  for (Var v = 0; v < num_vars; ++v) x.set(v, (index >> v) & 1U);
  return x;
}

namespace {

std::uint64_t project(const Assignment& x, std::span<const Var> query) {
  std::uint64_t q = 0;
  for (Var v : query) q = (q << 1) | (*x.get(v) ? 1U : 0U);
  return q;
}

Assignment query_assignment(std::size_t num_vars, std::span<const Var> query, std::uint64_t q) {
  Assignment a(num_vars);
  for (std::size_t i = 0; i < query.size(); ++i) a.set(query[i], (q >> (query.size() - 1 - i)) & 1U);
  return a;
}

}  // namespace

ContextOracle context_oracle(const Circuit& circuit, std::span<const Var> query) {
  const std::size_t n = circuit.num_vars();
  const std::uint64_t states = std::uint64_t{1} << query.size();
  ContextOracle out;
  out.edge_states.assign(circuit.num_edges(), std::vector<bool>(states, false));
  out.node_states.assign(circuit.size(), std::vector<bool>(states, false));

  for (std::uint64_t index = 0; index < (std::uint64_t{1} << n); ++index) {
    const Assignment x = full_assignment(n, index);
    const std::vector<double> value = evaluate_nodes(circuit, x);
    // A node is in context when some root path to it is nonzero throughout.
    std::vector<bool> in_context(circuit.size(), false);
    in_context[circuit.root()] = value[circuit.root()] > 0.0;
    const std::uint64_t q = project(x, query);
    for (NodeId id = circuit.root() + 1; id-- > 0;) {
      if (!in_context[id]) continue;
      out.node_states[id][q] = true;
      const Node& node = circuit.node(id);
      for (std::size_t k = 0; k < node.children.size(); ++k) {
        const NodeId c = node.children[k];
        if (value[c] > 0.0) {
          in_context[c] = true;
          out.edge_states[circuit.edge_index(id, k)][q] = true;
        }
      }
    }
  }

  std::vector<double> marginal(states);
  for (std::uint64_t q = 0; q < states; ++q) marginal[q] = evaluate_marginal(circuit, query_assignment(n, query, q));
  out.edge_best.assign(circuit.num_edges(), std::nullopt);
  for (std::size_t e = 0; e < circuit.num_edges(); ++e) {
    for (std::uint64_t q = 0; q < states; ++q) {
      if (!out.edge_states[e][q]) continue;
      if (!out.edge_best[e] || marginal[q] > *out.edge_best[e]) out.edge_best[e] = marginal[q];
    }
  }
  return out;
}

double table_mmap(const Circuit& circuit, std::span<const Var> query, std::uint64_t* argmax_index) {
  const std::size_t n = circuit.num_vars();
  std::vector<double> table(std::uint64_t{1} << query.size(), 0.0);
  for (std::uint64_t index = 0; index < (std::uint64_t{1} << n); ++index) {
    const Assignment x = full_assignment(n, index);
    table[project(x, query)] += evaluate_marginal(circuit, x);
  }
  const auto best = std::max_element(table.begin(), table.end());
  if (argmax_index) *argmax_index = static_cast<std::uint64_t>(best - table.begin());
  return *best;
}

}  // namespace pcmmap::testing
