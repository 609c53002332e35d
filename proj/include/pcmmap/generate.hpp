#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "pcmmap/circuit.hpp"
#include "pcmmap/solver.hpp"

namespace pcmmap {

/// Percentages of query, evidence and hidden variables; must sum to 100.
struct Proportions {
  unsigned query = 30;
  unsigned evidence = 30;
  unsigned hidden = 40;

  /// Parses "q,e,h"; throws std::invalid_argument.
  static Proportions parse(const std::string& text);
  std::string str() const;

  friend bool operator==(const Proportions&, const Proportions&) = default;
};

/// Partition sizes: evidence and hidden are floored, query takes the rest
/// (at least one variable).
struct PartitionSizes {
  std::size_t query = 0;
  std::size_t evidence = 0;
  std::size_t hidden = 0;
};
PartitionSizes partition_sizes(std::size_t num_vars, const Proportions& p);

/// Draws a full assignment from the circuit's (possibly unnormalized)
/// distribution by top-down sampling.
Assignment sample_assignment(const Circuit& circuit, std::mt19937_64& rng);

/// Random variable partition plus evidence projected from a sampled world,
/// so the evidence always has nonzero probability. Deterministic in `seed`.
MmapInstance generate_instance(const Circuit& circuit, const Proportions& proportions, std::uint64_t seed);

struct RandomCircuitOptions {
  std::size_t num_vars = 8;
  std::size_t depth = 4;              // sum/product alternations before factorizing
  double deterministic_share = 0.4;   // sums that branch on a variable
  double mixture_share = 0.3;         // sums over full-scope mixtures
  std::size_t max_sum_children = 3;
  double reuse_probability = 0.25;    // reuse an earlier node with the same scope
  double literal_probability = 0.1;   // single literal instead of a univariate sum
};

/// Seeded smooth and decomposable random circuit over all `num_vars` variables.
Circuit random_circuit(const RandomCircuitOptions& options, std::uint64_t seed);

}  // namespace pcmmap
