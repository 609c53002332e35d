#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pcmmap/circuit.hpp"
#include "pcmmap/solver.hpp"

namespace pcmmap::testing {

Circuit fixture(const std::string& name);

// F1 node ids (0-based): leaves [X0=1]=0, [X0=0]=1, [X1=1]=2, [X1=0]=3;
// sums 4 and 5 over X1; products 6 and 7; root sum 8.
inline constexpr NodeId kF1Root = 8;
inline constexpr NodeId kF1LeftSum = 4;
inline constexpr NodeId kF1RightSum = 5;
inline constexpr NodeId kF1LeftProduct = 6;
inline constexpr NodeId kF1RightProduct = 7;

bool close_relative(double a, double b, double tol);

/// Seeded random circuit with a random query/evidence/hidden split. The
/// corpus spans 4 to 12 variables and depths 2 to 6.
struct CorpusCase {
  std::uint64_t seed = 0;
  Circuit circuit;
  MmapInstance instance;
  Circuit conditioned;
};
CorpusCase corpus_case(std::size_t index);

/// Full assignment with index bits mapped to variables 0..n-1 (variable 0 is bit 0).
Assignment full_assignment(std::size_t num_vars, std::uint64_t index);

/// Edge-restricted MMAP from the context definition: enumerate complete
/// assignments, walk nonzero root-to-node paths, project onto the query.
/// Indexed by Circuit::edge_index; nullopt for edges no query state reaches.
struct ContextOracle {
  std::vector<std::optional<double>> edge_best;
  std::vector<std::vector<bool>> edge_states;  // [edge][query-state index]
  std::vector<std::vector<bool>> node_states;  // [node][query-state index]
};
ContextOracle context_oracle(const Circuit& circuit, std::span<const Var> query);

/// Brute-force MMAP over an explicit joint table (independent of the library oracle).
double table_mmap(const Circuit& circuit, std::span<const Var> query, std::uint64_t* argmax_index = nullptr);

}  // namespace pcmmap::testing
