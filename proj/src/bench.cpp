#include "pcmmap/bench.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>

#include "pcmmap/io.hpp"

namespace pcmmap {

namespace {

struct Job {
  std::size_t circuit = 0;
  std::size_t slot = 0;
  std::size_t index = 0;
};

BenchRecord run_one(const Circuit& circuit, const std::string& name, const Proportions& prop,
                    std::uint64_t seed, std::size_t index, const BenchOptions& options) {
  BenchRecord rec;
  rec.circuit = name;
  rec.proportions = prop;
  rec.index = index;
  try {
    const MmapInstance inst = generate_instance(circuit, prop, seed);
    rec.query_size = inst.query.size();
    const auto start = std::chrono::steady_clock::now();
    const SolverReport report = iter_solve(circuit, inst, options.solver);
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rec.status = report.status;
    rec.value = report.value;
    rec.iterations = report.iterations;
    rec.final_nodes = report.final_nodes;
    rec.final_edges = report.final_edges;
    if (options.verify && report.status == SolveStatus::Solved && inst.query.size() <= options.oracle_budget) {
      const Circuit conditioned = condition(circuit, inst.evidence_assignment(circuit.num_vars()));
      const double truth = oracle_mmap_serial(conditioned, inst.query, options.oracle_budget).value;
      rec.verified = std::abs(report.value - truth) <= options.verify_tolerance * std::max(1.0, std::abs(truth));
    }
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  return rec;
}

}  // namespace

std::uint64_t instance_seed(std::uint64_t base, std::size_t proportion_slot, std::size_t index) {
  return base * 1000003ULL + proportion_slot * 1009ULL + index;
}

BenchResult run_bench(const std::vector<std::filesystem::path>& circuits, const BenchOptions& options,
                      std::ostream& log) {
  std::vector<Circuit> loaded;
  std::vector<std::string> names;
  for (const auto& path : circuits) {
    try {
      loaded.push_back(read_circuit(path));
      names.push_back(path.filename().string());
    } catch (const std::exception& e) {
      log << "warning: skipping " << path.string() << ": " << e.what() << '\n';
    }
  }

  std::vector<Job> jobs;
  for (std::size_t c = 0; c < loaded.size(); ++c) {
    for (std::size_t s = 0; s < options.proportions.size(); ++s) {
      for (std::size_t i = 0; i < options.count; ++i) jobs.push_back({c, s, i});
    }
  }

  BenchResult result;
  result.records.resize(jobs.size());
  const auto n = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    const Job& job = jobs[static_cast<std::size_t>(j)];
    const Circuit local = loaded[job.circuit];  // private copy per worker
    result.records[static_cast<std::size_t>(j)] =
        run_one(local, names[job.circuit], options.proportions[job.slot],
                instance_seed(options.seed, job.slot, job.index), job.index, options);
  }
  for (const auto& rec : result.records) {
    if (!rec.error.empty()) {
      log << "warning: " << rec.circuit << " [" << rec.proportions.str() << "] #" << rec.index << ": " << rec.error
          << '\n';
    }
  }
  result.summaries = summarize(result.records);
  return result;
}

std::vector<BenchSummary> summarize(const std::vector<BenchRecord>& records) {
  std::vector<BenchSummary> out;
  std::map<std::pair<std::string, std::string>, std::size_t> slot;
  std::vector<double> total_seconds;
  for (const auto& rec : records) {
    auto key = std::make_pair(rec.circuit, rec.proportions.str());
    auto [it, inserted] = slot.emplace(key, out.size());
    if (inserted) {
      out.push_back({rec.circuit, rec.proportions, 0, 0, 0.0, 0});
      total_seconds.push_back(0.0);
    }
    BenchSummary& s = out[it->second];
    ++s.instances;
    if (rec.error.empty() && rec.status == SolveStatus::Solved) {
      ++s.solved;
      total_seconds[it->second] += rec.seconds;
    }
    if (rec.verified && !*rec.verified) ++s.mismatches;
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].mean_seconds = out[i].solved ? total_seconds[i] / static_cast<double>(out[i].solved) : 0.0;
  }
  return out;
}

void write_bench_csv(std::ostream& out, const BenchResult& result) {
  out << "circuit,q,e,h,index,query_size,status,seconds,value,iterations,nodes,edges,verified,error\n";
  const auto old_precision = out.precision(17);
  for (const auto& r : result.records) {
    out << r.circuit << ',' << r.proportions.query << ',' << r.proportions.evidence << ',' << r.proportions.hidden
        << ',' << r.index << ',' << r.query_size << ','
        << (!r.error.empty() ? "error" : r.status == SolveStatus::Solved ? "solved" : "timeout") << ','
        << r.seconds << ',' << r.value << ',' << r.iterations << ',' << r.final_nodes << ',' << r.final_edges << ','
        << (r.verified ? (*r.verified ? "yes" : "no") : "") << ',';
    // Errors are free text; quote them.
    if (!r.error.empty()) {
      out << '"';
      for (char c : r.error) out << (c == '"' ? std::string("\"\"") : std::string(1, c));
      out << '"';
    }
    out << '\n';
  }
  out.precision(old_precision);
}

void write_bench_table(std::ostream& out, const BenchResult& result) {
  out << std::left << std::setw(24) << "circuit" << std::setw(10) << "q,e,h" << std::right << std::setw(8)
      << "solved" << std::setw(12) << "mean_s" << std::setw(12) << "mismatch" << '\n';
  for (const auto& s : result.summaries) {
    out << std::left << std::setw(24) << s.circuit << std::setw(10) << s.proportions.str() << std::right
        << std::setw(4) << s.solved << '/' << std::left << std::setw(3) << s.instances << std::right << std::setw(12)
        << std::fixed << std::setprecision(4) << s.mean_seconds << std::defaultfloat << std::setw(12)
        << s.mismatches << '\n';
  }
}

}  // namespace pcmmap
