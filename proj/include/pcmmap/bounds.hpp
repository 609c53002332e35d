#pragma once

#include <span>
#include <vector>

#include "pcmmap/circuit.hpp"

namespace pcmmap {

/// Registers of the forward/backward bound passes, all indexed by NodeId
/// except `r_edge`, which uses Circuit::edge_index.
struct BoundRegisters {
  std::vector<double> m;       // output bound per node
  std::vector<double> r_node;  // edge bound per node (max over in-edges)
  std::vector<double> r_edge;  // edge bound per edge
  std::vector<double> t;       // min over root paths of sum weights times product-sibling bounds
};

/// Feedforward max/sum pass: Q-deterministic sums take the weighted max,
/// other sums the weighted sum, leaves evaluate to 1. The root entry is an
/// upper bound on the MMAP value; exact when every relevant sum is marked.
std::vector<double> output_bounds(const Circuit& circuit, const QDetMap& qdet);

/// Backward pass computing an upper bound, for every edge, on the best
/// marginal among query states whose subcircuit uses that edge.
BoundRegisters edge_bounds(const Circuit& circuit, const QDetMap& qdet);

/// Same as above with output bounds already at hand.
BoundRegisters edge_bounds(const Circuit& circuit, const QDetMap& qdet, std::vector<double> m);

struct LowerBoundResult {
  Assignment state;   // assigns exactly the query variables
  double value = 0.0; // marginal of `state` in the circuit
  bool filled_missing = false;
};

/// Max-product style pass (max at Q-deterministic sums and their ancestors),
/// followed by a top-down argmax walk that reads off a query state. The state's
/// marginal is a lower bound on the MMAP value.
LowerBoundResult lower_bound(const Circuit& circuit, std::span<const Var> query, const QDetMap& qdet);

}  // namespace pcmmap
