#pragma once

#include <cstddef>
#include <vector>

#include "pcmmap/circuit.hpp"

namespace pcmmap {

/// A sum-node input edge, addressed by parent and child position.
struct EdgeRef {
  NodeId parent = 0;
  std::size_t ordinal = 0;

  friend bool operator==(const EdgeRef&, const EdgeRef&) = default;
};

using PruneSet = std::vector<EdgeRef>;

/// Removes dead and unreachable nodes, folds single-child sums into sum
/// parents (multiplying weights), drops single-child products, merges
/// parallel edges and reindexes the arena. Throws DeadRootError if the root
/// has no support left.
Circuit cleanup(const Circuit& circuit);

/// Removes the listed sum edges, then cleans up. Throws std::invalid_argument
/// for edges that do not exist, are duplicated or leave a product node, and
/// DeadRootError when the cascade kills the root.
Circuit prune_edges(const Circuit& circuit, const PruneSet& edges);

/// Turns the root into Sum(1 * C<X=1>, 1 * C<X=0>). Only ancestors of
/// X-leaves are copied; everything else is shared between both branches.
/// Throws std::out_of_range if `variable` is not a circuit variable.
Circuit split(const Circuit& circuit, Var variable);

}  // namespace pcmmap
