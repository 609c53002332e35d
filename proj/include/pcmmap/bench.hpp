#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pcmmap/generate.hpp"
#include "pcmmap/oracle.hpp"
#include "pcmmap/solver.hpp"

namespace pcmmap {

struct BenchOptions {
  std::vector<Proportions> proportions{Proportions{}};
  std::size_t count = 10;  // instances per circuit and proportion
  std::uint64_t seed = 1;
  SolverConfig solver;
  bool verify = true;  // cross-check against the oracle when |Q| fits the budget
  std::size_t oracle_budget = kDefaultOracleBudget;
  double verify_tolerance = 1e-9;
};

struct BenchRecord {
  std::string circuit;
  Proportions proportions;
  std::size_t index = 0;
  std::size_t query_size = 0;
  SolveStatus status = SolveStatus::Solved;
  double seconds = 0.0;
  double value = 0.0;
  std::size_t iterations = 0;
  std::size_t final_nodes = 0;
  std::size_t final_edges = 0;
  std::optional<bool> verified;  // unset when the oracle was skipped
  std::string error;             // nonempty if the instance could not be run
};

struct BenchSummary {
  std::string circuit;
  Proportions proportions;
  std::size_t instances = 0;
  std::size_t solved = 0;
  double mean_seconds = 0.0;  // over solved instances
  std::size_t mismatches = 0;
};

struct BenchResult {
  std::vector<BenchRecord> records;
  std::vector<BenchSummary> summaries;
};

/// Seed of the `index`-th instance for a given proportion slot.
std::uint64_t instance_seed(std::uint64_t base, std::size_t proportion_slot, std::size_t index);

/// Generates and solves instances for every circuit and proportion. Files that
/// cannot be read are skipped with a warning on `log`.
BenchResult run_bench(const std::vector<std::filesystem::path>& circuits, const BenchOptions& options,
                      std::ostream& log);

std::vector<BenchSummary> summarize(const std::vector<BenchRecord>& records);

void write_bench_csv(std::ostream& out, const BenchResult& result);
void write_bench_table(std::ostream& out, const BenchResult& result);

}  // namespace pcmmap
