// Command-line front end: check, solve, bound, oracle, gen, bench, random.
// Exit codes: 0 success, 1 usage or input error, 2 timeout.

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "pcmmap/bench.hpp"
#include "pcmmap/bounds.hpp"
#include "pcmmap/generate.hpp"
#include "pcmmap/io.hpp"
#include "pcmmap/oracle.hpp"
#include "pcmmap/solver.hpp"
#include "pcmmap/transform.hpp"

namespace fs = std::filesystem;
using namespace pcmmap;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitTimeout = 2;

std::string num(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

std::string state_string(const Assignment& state, std::span<const Var> query) {
  std::string out;
  for (Var v : query) {
    if (!out.empty()) out += ' ';
    const auto value = state.get(v);
    out += std::to_string(v) + '=' + (value ? (*value ? "1" : "0") : "?");
  }
  return out;
}

SplitHeuristic parse_heuristic(const std::string& name) {
  return name == "pruned" ? SplitHeuristic::Pruned : SplitHeuristic::UB;
}

int cmd_check(const std::string& circuit_path) {
  const Circuit c = read_circuit(circuit_path);
  const auto smooth = check_smooth(c);
  const auto decomposable = check_decomposable(c);
  std::cout << "vars " << c.num_vars() << "\nnodes " << c.size() << "\nedges " << c.num_edges() << '\n';
  std::cout << "smooth " << (smooth.ok ? "yes" : "no (node " + std::to_string(*smooth.violating) + ")") << '\n';
  std::cout << "decomposable "
            << (decomposable.ok ? "yes" : "no (node " + std::to_string(*decomposable.violating) + ")") << '\n';
  return smooth.ok && decomposable.ok ? kExitOk : kExitError;
}

int cmd_solve(const std::string& circuit_path, const std::string& instance_path, const std::string& heuristic,
              double timeout, const std::string& trace_path) {
  const Circuit c = read_circuit(circuit_path);
  const MmapInstance inst = read_instance(instance_path, c.num_vars());
  SolverConfig config;
  config.heuristic = parse_heuristic(heuristic);
  config.timeout_seconds = timeout;
  config.trace = !trace_path.empty();
  const SolverReport report = iter_solve(c, inst, config);
  if (!trace_path.empty()) {
    std::ofstream trace(trace_path);
    if (!trace) throw std::runtime_error("cannot write " + trace_path);
    write_trace(trace, report);
  }
  std::cout << "status " << (report.status == SolveStatus::Solved ? "solved" : "timeout") << '\n'
            << "value " << num(report.value) << '\n'
            << "upper " << num(report.upper) << '\n'
            << "iterations " << report.iterations << '\n'
            << "size " << report.final_nodes << '/' << report.final_edges << '\n'
            << "state " << state_string(report.state, inst.query) << '\n';
  return report.status == SolveStatus::Solved ? kExitOk : kExitTimeout;
}

int cmd_bound(const std::string& circuit_path, const std::string& instance_path) {
  const Circuit c = read_circuit(circuit_path);
  const MmapInstance inst = read_instance(instance_path, c.num_vars());
  const Circuit conditioned = condition(c, inst.evidence_assignment(c.num_vars()));
  const QDetMap qdet = detect_q_deterministic(conditioned, inst.query);
  const auto m = output_bounds(conditioned, qdet);
  const LowerBoundResult lb = lower_bound(conditioned, inst.query, qdet);
  std::cout << "upper " << num(m[conditioned.root()]) << '\n'
            << "lower " << num(lb.value) << '\n'
            << "state " << state_string(lb.state, inst.query) << '\n';
  return kExitOk;
}

int cmd_oracle(const std::string& circuit_path, const std::string& instance_path, std::vector<Var> query,
               std::size_t budget) {
  const Circuit c = read_circuit(circuit_path);
  MmapInstance inst;
  if (!instance_path.empty()) {
    inst = read_instance(instance_path, c.num_vars());
  } else {
    std::sort(query.begin(), query.end());
    inst.query = query;
    inst.validate(c.num_vars());
  }
  const Circuit conditioned = condition(c, inst.evidence_assignment(c.num_vars()));
  const OracleResult r = oracle_mmap(conditioned, inst.query, budget);
  std::cout << "value " << num(r.value) << '\n' << "state " << state_string(r.state, inst.query) << '\n';
  return kExitOk;
}

int cmd_gen(const std::string& circuit_path, const std::string& proportions, std::size_t count,
            std::uint64_t seed, const std::string& out_dir) {
  const Circuit c = read_circuit(circuit_path);
  const Proportions prop = Proportions::parse(proportions);
  fs::create_directories(out_dir);
  const std::string stem = fs::path(circuit_path).stem().string();
  const std::string tag = std::to_string(prop.query) + '-' + std::to_string(prop.evidence) + '-' +
                          std::to_string(prop.hidden);
  for (std::size_t i = 0; i < count; ++i) {
    const MmapInstance inst = generate_instance(c, prop, instance_seed(seed, 0, i));
    const fs::path path = fs::path(out_dir) / (stem + '_' + tag + '_' + std::to_string(i) + ".inst");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_instance(out, inst);
    std::cout << path.string() << '\n';
  }
  return kExitOk;
}

int cmd_bench(const std::string& circuit_dir, const std::vector<std::string>& proportions, std::size_t count,
              double timeout, std::uint64_t seed, const std::string& heuristic, bool verify,
              const std::string& csv_path) {
  std::vector<fs::path> circuits;
  for (const auto& entry : fs::directory_iterator(circuit_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".pc") circuits.push_back(entry.path());
  }
  std::sort(circuits.begin(), circuits.end());

  BenchOptions options;
  options.proportions.clear();
  for (const auto& p : proportions) options.proportions.push_back(Proportions::parse(p));
  options.count = count;
  options.seed = seed;
  options.solver.timeout_seconds = timeout;
  options.solver.heuristic = parse_heuristic(heuristic);
  options.verify = verify;

  const BenchResult result = run_bench(circuits, options, std::cerr);
  write_bench_table(std::cout, result);
  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    if (!csv) throw std::runtime_error("cannot write " + csv_path);
    write_bench_csv(csv, result);
  }
  const bool mismatch = std::any_of(result.summaries.begin(), result.summaries.end(),
                                    [](const BenchSummary& s) { return s.mismatches > 0; });
  return mismatch ? kExitError : kExitOk;
}

int cmd_random(std::size_t vars, std::size_t depth, std::uint64_t seed, const std::string& out_path) {
  RandomCircuitOptions options;
  options.num_vars = vars;
  options.depth = depth;
  const Circuit c = random_circuit(options, seed);
  if (out_path.empty()) {
    write_circuit(std::cout, c);
  } else {
    save_circuit(out_path, c);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact marginal MAP on probabilistic circuits by pruning and splitting"};
  app.require_subcommand(1);

  std::string circuit;
  std::string instance;
  std::string heuristic = "ub";
  double timeout = 3600.0;
  std::string trace;
  std::size_t budget = kDefaultOracleBudget;
  std::vector<Var> query;
  std::string proportions = "30,30,40";
  std::vector<std::string> proportion_list{"30,30,40", "50,20,30"};
  std::size_t count = 10;
  std::uint64_t seed = 1;
  std::string out;
  std::string circuit_dir;
  bool no_verify = false;
  std::size_t vars = 16;
  std::size_t depth = 4;

  const auto heuristic_check = CLI::IsMember({"pruned", "ub"});

  auto* check = app.add_subcommand("check", "Validate a circuit file and report its structure");
  check->add_option("--circuit", circuit, "Circuit file")->required();

  auto* solve = app.add_subcommand("solve", "Solve an MMAP instance exactly");
  solve->add_option("--circuit", circuit, "Circuit file")->required();
  solve->add_option("--instance", instance, "Instance file")->required();
  solve->add_option("--heuristic", heuristic, "Split heuristic")->check(heuristic_check);
  solve->add_option("--timeout", timeout, "Wall-clock limit in seconds")->check(CLI::NonNegativeNumber);
  solve->add_option("--trace", trace, "Write per-iteration bounds and sizes to this file");

  auto* bound = app.add_subcommand("bound", "Print the upper and lower bound of an instance");
  bound->add_option("--circuit", circuit, "Circuit file")->required();
  bound->add_option("--instance", instance, "Instance file")->required();

  auto* oracle = app.add_subcommand("oracle", "Brute-force MMAP by enumerating query states");
  oracle->add_option("--circuit", circuit, "Circuit file")->required();
  auto* oracle_instance = oracle->add_option("--instance", instance, "Instance file");
  auto* oracle_query = oracle->add_option("--query", query, "Query variables (no evidence)");
  oracle_instance->excludes(oracle_query);
  oracle->add_option("--budget", budget, "Largest query size to enumerate");

  auto* gen = app.add_subcommand("gen", "Generate random instances for a circuit");
  gen->add_option("--circuit", circuit, "Circuit file")->required();
  gen->add_option("--proportions", proportions, "Query,evidence,hidden percentages");
  gen->add_option("--count", count, "Number of instances");
  gen->add_option("--seed", seed, "Base seed");
  gen->add_option("--out", out, "Output directory")->required();

  auto* bench = app.add_subcommand("bench", "Generate and solve instances for every circuit in a directory");
  bench->add_option("--circuits", circuit_dir, "Directory of .pc files")->required()->check(CLI::ExistingDirectory);
  bench->add_option("--proportions", proportion_list, "One or more q,e,h settings");
  bench->add_option("--count", count, "Instances per circuit and setting");
  bench->add_option("--timeout", timeout, "Per-instance limit in seconds")->check(CLI::NonNegativeNumber);
  bench->add_option("--seed", seed, "Base seed");
  bench->add_option("--heuristic", heuristic, "Split heuristic")->check(heuristic_check);
  bench->add_flag("--no-verify", no_verify, "Skip the oracle cross-check");
  bench->add_option("--out", out, "CSV output file");

  auto* random = app.add_subcommand("random", "Write a random smooth decomposable circuit");
  random->add_option("--vars", vars, "Number of variables")->check(CLI::PositiveNumber);
  random->add_option("--depth", depth, "Sum/product depth");
  random->add_option("--seed", seed, "Seed");
  random->add_option("--out", out, "Output file (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*check) return cmd_check(circuit);
    if (*solve) return cmd_solve(circuit, instance, heuristic, timeout, trace);
    if (*bound) return cmd_bound(circuit, instance);
    if (*oracle) {
      if (instance.empty() && query.empty()) throw std::invalid_argument("oracle needs --instance or --query");
      return cmd_oracle(circuit, instance, query, budget);
    }
    if (*gen) return cmd_gen(circuit, proportions, count, seed, out);
    if (*bench) return cmd_bench(circuit_dir, proportion_list, count, timeout, seed, heuristic, !no_verify, out);
    if (*random) return cmd_random(vars, depth, seed, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
