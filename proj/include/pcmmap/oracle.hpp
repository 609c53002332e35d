#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "pcmmap/circuit.hpp"
#include "pcmmap/transform.hpp"

namespace pcmmap {

// Brute-force ground truth over val(Q). Everything here enumerates 2^|Q|
// query states, so it is meant for small instances and verification only.

/// Default limit on |Q| (2^20 marginal evaluations).
inline constexpr std::size_t kDefaultOracleBudget = 20;

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleResult {
  double value = 0.0;
  Assignment state;
};

/// The `index`-th query state in lexicographic order: the first (lowest)
/// query variable is the most significant bit, value 0 before value 1.
Assignment query_state(std::size_t num_vars, std::span<const Var> query, std::uint64_t index);

/// Exact MMAP by enumeration. Ties resolve to the lexicographically smallest
/// state. The OpenMP version shards the enumeration across threads.
OracleResult oracle_mmap(const Circuit& circuit, std::span<const Var> query,
                         std::size_t budget = kDefaultOracleBudget);
OracleResult oracle_mmap_serial(const Circuit& circuit, std::span<const Var> query,
                                std::size_t budget = kDefaultOracleBudget);

/// Membership of nodes and edges in the subcircuit activated by `q`.
struct SubcircuitMask {
  std::vector<bool> active_nodes;
  std::vector<bool> active_edges;  // indexed by Circuit::edge_index
};

SubcircuitMask oracle_subcircuit(const Circuit& circuit, const Assignment& q);

/// Best marginal over query states whose subcircuit contains `edge`;
/// nullopt when no state activates it.
std::optional<double> oracle_edge_mmap(const Circuit& circuit, std::span<const Var> query, EdgeRef edge,
                                       std::size_t budget = kDefaultOracleBudget);

/// oracle_edge_mmap for every edge at once, indexed by Circuit::edge_index.
std::vector<std::optional<double>> oracle_all_edge_mmap(const Circuit& circuit, std::span<const Var> query,
                                                        std::size_t budget = kDefaultOracleBudget);
std::vector<std::optional<double>> oracle_all_edge_mmap_serial(const Circuit& circuit,
                                                               std::span<const Var> query,
                                                               std::size_t budget = kDefaultOracleBudget);

}  // namespace pcmmap
