#include "pcmmap/solver.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <limits>
#include <optional>
#include <ostream>
#include <string>

#include "pcmmap/bounds.hpp"
#include "pcmmap/transform.hpp"

namespace pcmmap {

void MmapInstance::validate(std::size_t num_vars) const {
  if (query.empty()) throw std::invalid_argument("instance: empty query set");
  if (!std::is_sorted(query.begin(), query.end()) ||
      std::adjacent_find(query.begin(), query.end()) != query.end()) {
    throw std::invalid_argument("instance: query variables must be sorted and unique");
  }
  std::vector<bool> seen(num_vars, false);
  for (Var v : query) {
    if (v >= num_vars) throw std::invalid_argument("instance: query variable " + std::to_string(v) + " out of range");
    seen[v] = true;
  }
  std::vector<bool> in_evidence(num_vars, false);
  for (const Literal& lit : evidence) {
    if (lit.var >= num_vars) {
      throw std::invalid_argument("instance: evidence variable " + std::to_string(lit.var) + " out of range");
    }
    if (seen[lit.var]) {
      throw std::invalid_argument("instance: variable " + std::to_string(lit.var) + " is both query and evidence");
    }
    if (in_evidence[lit.var]) {
      throw std::invalid_argument("instance: variable " + std::to_string(lit.var) + " has repeated evidence");
    }
    in_evidence[lit.var] = true;
  }
}

Assignment MmapInstance::evidence_assignment(std::size_t num_vars) const {
  return Assignment::from_literals(num_vars, evidence);
}

Var pick_var_pruned(std::span<const Var> candidates, const std::map<Var, std::size_t>& pruned_counts) {
  if (candidates.empty()) throw std::invalid_argument("pick_var_pruned: no candidates");
  Var best = candidates.front();
  std::size_t best_count = 0;
  bool first = true;
  for (Var v : candidates) {
    const auto it = pruned_counts.find(v);
    const std::size_t count = it == pruned_counts.end() ? 0 : it->second;
    if (first || count > best_count || (count == best_count && v < best)) {
      best = v;
      best_count = count;
      first = false;
    }
  }
  return best;
}

namespace {

SplitScore score_candidate(const Circuit& circuit, std::span<const Var> query, Var v) {
  SplitScore score;
  for (bool value : {false, true}) {
    Assignment e(circuit.num_vars());
    e.set(v, value);
    double bound = 0.0;
    try {
      const Circuit conditioned = condition(circuit, e);
      bound = output_bounds(conditioned, detect_q_deterministic(conditioned, query))[conditioned.root()];
    } catch (const DeadRootError&) {
      bound = 0.0;
    }
    (value ? score.b1 : score.b0) = bound;
  }
  return score;
}

}  // namespace

std::vector<SplitScore> ub_scores_serial(const Circuit& circuit, std::span<const Var> query,
                                         std::span<const Var> candidates) {
  std::vector<SplitScore> scores(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) scores[i] = score_candidate(circuit, query, candidates[i]);
  return scores;
}

std::vector<SplitScore> ub_scores(const Circuit& circuit, std::span<const Var> query,
                                  std::span<const Var> candidates) {
  std::vector<SplitScore> scores(candidates.size());
  const auto n = static_cast<std::int64_t>(candidates.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    scores[k] = score_candidate(circuit, query, candidates[k]);
  }
  return scores;
}

std::size_t select_ub(std::span<const SplitScore> scores, double lower) {
  if (scores.empty()) throw std::invalid_argument("select_ub: no candidates");
  std::optional<std::size_t> below;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const auto& s = scores[i];
    if (std::min(s.b0, s.b1) >= lower) continue;
    if (!below || std::max(s.b0, s.b1) < std::max(scores[*below].b0, scores[*below].b1)) below = i;
  }
  if (below) return *below;
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i].b0 + scores[i].b1 < scores[best].b0 + scores[best].b1) best = i;
  }
  return best;
}

Var pick_var_ub(const Circuit& circuit, std::span<const Var> query, std::span<const Var> candidates,
                double lower) {
  if (candidates.empty()) throw std::invalid_argument("pick_var_ub: no candidates");
  if (candidates.size() == 1) return candidates.front();
  const auto scores = ub_scores(circuit, query, candidates);
  return candidates[select_ub(scores, lower)];
}

SolverReport iter_solve(const Circuit& circuit, const MmapInstance& instance, const SolverConfig& config) {
  instance.validate(circuit.num_vars());
  const Circuit conditioned = condition(circuit, instance.evidence_assignment(circuit.num_vars()));
  return iter_solve(conditioned, instance.query, config);
}

SolverReport iter_solve(const Circuit& conditioned, std::span<const Var> query, const SolverConfig& config) {
  using Clock = std::chrono::steady_clock;
  if (config.tolerance < 0.0) throw std::invalid_argument("solver: negative tolerance");
  if (!(config.timeout_seconds > 0.0)) throw std::invalid_argument("solver: timeout must be positive");
  const auto start = Clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };

  SolverReport report;
  Circuit c = conditioned;
  QDetMap qdet = detect_q_deterministic(c, query);
  std::vector<double> m = output_bounds(c, qdet);
  double u = m[c.root()];
  LowerBoundResult lb = lower_bound(c, query, qdet);
  double l = lb.value;
  Assignment best = lb.state;
  // The lower bound is a concrete state's marginal; pruning cannot push the
  // remaining states' optimum above max(l, bound of the pruned circuit).
  u = std::max(u, l);

  std::vector<Var> remaining(query.begin(), query.end());
  std::map<Var, std::size_t> pruned_counts;

  auto record = [&](std::size_t iter, std::size_t pruned, std::int32_t split_var) {
    report.records.push_back({iter, u, l, c.size(), c.num_edges(), pruned, split_var});
  };
  record(0, 0, kNoVar);

  std::size_t iteration = 0;
  while (true) {
    if (elapsed() >= config.timeout_seconds) {
      report.status = SolveStatus::Timeout;
      break;
    }
    if (!(u > l * (1.0 + config.tolerance)) || remaining.empty()) break;
    ++iteration;

    const BoundRegisters reg = edge_bounds(c, qdet, std::move(m));
    PruneSet prune;
    for (NodeId id = 0; id < c.size(); ++id) {
      const Node& n = c.node(id);
      if (!n.is_sum() || reg.t[id] == std::numeric_limits<double>::infinity()) continue;
      for (std::size_t k = 0; k < n.children.size(); ++k) {
        if (reg.r_edge[c.edge_index(id, k)] <= l) {
          prune.push_back({id, k});
          if (qdet[id] && qdet.deciding_var[id] != kNoVar) ++pruned_counts[static_cast<Var>(qdet.deciding_var[id])];
        }
      }
    }
    try {
      c = prune_edges(c, prune);
    } catch (const DeadRootError&) {
      // Every remaining state used a pruned edge, so none exceeds l.
      u = l;
      record(iteration, prune.size(), kNoVar);
      break;
    }

    Var x;
    if (config.heuristic == SplitHeuristic::Pruned) {
      x = pick_var_pruned(remaining, pruned_counts);
    } else {
      x = pick_var_ub(c, query, remaining, l);
    }
    remaining.erase(std::find(remaining.begin(), remaining.end(), x));
    c = split(c, x);

    qdet = detect_q_deterministic(c, query);
    m = output_bounds(c, qdet);
    lb = lower_bound(c, query, qdet);
    if (lb.value > l) {
      l = lb.value;
      best = lb.state;
    }
    u = std::min(u, std::max(l, m[c.root()]));
    if (remaining.empty()) u = l;
    record(iteration, prune.size(), static_cast<std::int32_t>(x));
  }

  report.iterations = iteration;
  report.upper = u;
  report.state = best;
  report.value = evaluate_marginal(conditioned, best);
  report.final_nodes = c.size();
  report.final_edges = c.num_edges();
  if (!config.trace) {
    // Keep only the endpoints when tracing is off.
    if (report.records.size() > 2) report.records.erase(report.records.begin() + 1, report.records.end() - 1);
  }
  return report;
}

namespace {

std::string shortest(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

}  // namespace

void write_trace(std::ostream& out, const SolverReport& report) {
  for (const auto& r : report.records) {
    out << "iter=" << r.iteration << " u=" << shortest(r.upper) << " l=" << shortest(r.lower) << " size=" << r.nodes << '/'
        << r.edges << " pruned=" << r.pruned << " split=";
    if (r.split == kNoVar) {
      out << '-';
    } else {
      out << r.split;
    }
    out << '\n';
  }
}

}  // namespace pcmmap
