#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "pcmmap/circuit.hpp"

namespace pcmmap {

/// Query variables Q (sorted, unique) and evidence e. Hidden variables are
/// everything else.
struct MmapInstance {
  std::vector<Var> query;
  std::vector<Literal> evidence;

  /// Throws std::invalid_argument on overlap, empty Q or out-of-range indexes.
  void validate(std::size_t num_vars) const;
  Assignment evidence_assignment(std::size_t num_vars) const;
};

enum class SplitHeuristic { Pruned, UB };

struct SolverConfig {
  SplitHeuristic heuristic = SplitHeuristic::UB;
  double timeout_seconds = 3600.0;
  double tolerance = 1e-9;  // relative gap accepted as converged
  bool trace = false;       // keep per-iteration records
};

struct IterationRecord {
  std::size_t iteration = 0;
  double upper = 0.0;
  double lower = 0.0;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t pruned = 0;
  std::int32_t split = kNoVar;
};

enum class SolveStatus { Solved, Timeout };

struct SolverReport {
  SolveStatus status = SolveStatus::Solved;
  double value = 0.0;  // MMAP probability (lower bound on timeout)
  double upper = 0.0;
  Assignment state;    // best query state found
  std::size_t iterations = 0;
  std::vector<IterationRecord> records;  // iteration 0 holds the initial bounds
  std::size_t final_nodes = 0;
  std::size_t final_edges = 0;
};

/// Iterative prune-and-split solver. Evidence is conditioned in first.
/// Throws DeadRootError if the evidence has probability zero.
SolverReport iter_solve(const Circuit& circuit, const MmapInstance& instance, const SolverConfig& config);

/// Same, on a circuit that already has evidence conditioned in.
SolverReport iter_solve(const Circuit& conditioned, std::span<const Var> query, const SolverConfig& config);

/// Most pruned-edge count, ties to the lowest variable.
Var pick_var_pruned(std::span<const Var> candidates, const std::map<Var, std::size_t>& pruned_counts);

/// Output bounds after conditioning on Q=0 and Q=1.
struct SplitScore {
  double b0 = 0.0;
  double b1 = 0.0;
};

/// Scores for every candidate against `circuit` (OpenMP over candidates).
std::vector<SplitScore> ub_scores(const Circuit& circuit, std::span<const Var> query,
                                  std::span<const Var> candidates);
std::vector<SplitScore> ub_scores_serial(const Circuit& circuit, std::span<const Var> query,
                                         std::span<const Var> candidates);

/// Position of the UB-rule choice among the scored candidates.
std::size_t select_ub(std::span<const SplitScore> scores, double lower);

Var pick_var_ub(const Circuit& circuit, std::span<const Var> query, std::span<const Var> candidates,
                double lower);

/// One `iter=... u=... l=... size=N/E pruned=P split=V|-` line per record.
void write_trace(std::ostream& out, const SolverReport& report);

}  // namespace pcmmap
