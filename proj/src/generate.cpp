#include "pcmmap/generate.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace pcmmap {

Proportions Proportions::parse(const std::string& text) {
  std::istringstream ss(text);
  Proportions p;
  char c1 = 0;
  char c2 = 0;
  long q = -1;
  long e = -1;
  long h = -1;
  if (!(ss >> q >> c1 >> e >> c2 >> h) || c1 != ',' || c2 != ',' || !(ss >> std::ws).eof() || q < 0 || e < 0 ||
      h < 0) {
    throw std::invalid_argument("proportions must look like 'q,e,h', got '" + text + "'");
  }
  if (q + e + h != 100) throw std::invalid_argument("proportions must sum to 100: '" + text + "'");
  p.query = static_cast<unsigned>(q);
  p.evidence = static_cast<unsigned>(e);
  p.hidden = static_cast<unsigned>(h);
  return p;
}

std::string Proportions::str() const {
  return std::to_string(query) + "," + std::to_string(evidence) + "," + std::to_string(hidden);
}

PartitionSizes partition_sizes(std::size_t num_vars, const Proportions& p) {
  if (p.query + p.evidence + p.hidden != 100) throw std::invalid_argument("proportions must sum to 100");
  if (num_vars == 0) throw std::invalid_argument("circuit has no variables");
  PartitionSizes s;
  s.evidence = num_vars * p.evidence / 100;
  s.hidden = num_vars * p.hidden / 100;
  s.query = num_vars - s.evidence - s.hidden;
  if (s.query == 0) {
    // Q must be nonempty; take one from the larger of the other two.
    (s.hidden >= s.evidence ? s.hidden : s.evidence) -= 1;
    s.query = 1;
  }
  return s;
}

Assignment sample_assignment(const Circuit& circuit, std::mt19937_64& rng) {
  const std::vector<double> mass = node_masses(circuit);
  Assignment x(circuit.num_vars());
  std::vector<bool> visit(circuit.size(), false);
  visit[circuit.root()] = true;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  // Each node is reached at most once per sample: decomposable products
  // route disjoint scopes, and sums pick a single child.
  for (NodeId id = circuit.root() + 1; id-- > 0;) {
    if (!visit[id]) continue;
    const Node& n = circuit.node(id);
    switch (n.kind) {
      case NodeKind::Leaf:
        x.set(n.var, n.value);
        break;
      case NodeKind::Product:
        for (NodeId c : n.children) visit[c] = true;
        break;
      case NodeKind::Sum: {
        double total = 0.0;
        for (std::size_t k = 0; k < n.children.size(); ++k) total += n.weights[k] * mass[n.children[k]];
        double r = unit(rng) * total;
        std::size_t pick = n.children.size() - 1;
        for (std::size_t k = 0; k < n.children.size(); ++k) {
          r -= n.weights[k] * mass[n.children[k]];
          if (r < 0.0) {
            pick = k;
            break;
          }
        }
        visit[n.children[pick]] = true;
        break;
      }
    }
  }
  std::bernoulli_distribution coin(0.5);
  for (Var v = 0; v < circuit.num_vars(); ++v) {
    if (!x.assigned(v)) x.set(v, coin(rng));
  }
  return x;
}

MmapInstance generate_instance(const Circuit& circuit, const Proportions& proportions, std::uint64_t seed) {
  const PartitionSizes sizes = partition_sizes(circuit.num_vars(), proportions);
  std::mt19937_64 rng(seed);
  std::vector<Var> vars(circuit.num_vars());
  std::iota(vars.begin(), vars.end(), Var{0});
  std::shuffle(vars.begin(), vars.end(), rng);

  MmapInstance inst;
  inst.query.assign(vars.begin(), vars.begin() + static_cast<std::ptrdiff_t>(sizes.query));
  std::vector<Var> evidence_vars(vars.begin() + static_cast<std::ptrdiff_t>(sizes.query),
                                 vars.begin() + static_cast<std::ptrdiff_t>(sizes.query + sizes.evidence));
  std::sort(inst.query.begin(), inst.query.end());
  std::sort(evidence_vars.begin(), evidence_vars.end());

  const Assignment world = sample_assignment(circuit, rng);
  for (Var v : evidence_vars) inst.evidence.push_back({v, *world.get(v)});
  return inst;
}

namespace {

class RandomCircuitGenerator {
 public:
  RandomCircuitGenerator(const RandomCircuitOptions& options, std::uint64_t seed)
      : opt_(options), rng_(seed), builder_(options.num_vars) {}

  Circuit run() {
    std::vector<Var> vars(opt_.num_vars);
    std::iota(vars.begin(), vars.end(), Var{0});
    const NodeId root = node(vars, opt_.depth);
    return std::move(builder_).build(root);
  }

 private:
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
  std::size_t pick(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_); }

  std::vector<double> weights(std::size_t k) {
    std::uniform_real_distribution<double> w(0.05, 1.0);
    std::vector<double> out(k);
    for (auto& x : out) x = w(rng_);
    const double total = std::accumulate(out.begin(), out.end(), 0.0);
    for (auto& x : out) x /= total;
    return out;
  }

  NodeId literal(Var v, bool value) {
    auto key = std::make_pair(v, value);
    auto it = literals_.find(key);
    if (it != literals_.end()) return it->second;
    const NodeId id = builder_.leaf(v, value);
    literals_.emplace(key, id);
    return id;
  }

  NodeId remember(const std::vector<Var>& vars, NodeId id) {
    pool_[vars].push_back(id);
    return id;
  }

  NodeId node(const std::vector<Var>& vars, std::size_t depth) {
    auto pooled = pool_.find(vars);
    if (pooled != pool_.end() && chance(opt_.reuse_probability)) {
      return pooled->second[pick(0, pooled->second.size() - 1)];
    }
    if (vars.size() == 1) {
      const Var v = vars.front();
      if (chance(opt_.literal_probability)) return literal(v, chance(0.5));
      return remember(vars, builder_.sum({literal(v, true), literal(v, false)}, weights(2)));
    }
    if (depth == 0) {
      std::vector<NodeId> children;
      for (Var v : vars) children.push_back(node({v}, 0));
      return remember(vars, builder_.product(std::move(children)));
    }

    const double r = std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
    if (r < opt_.deterministic_share) {
      const Var x = vars[pick(0, vars.size() - 1)];
      std::vector<Var> rest;
      std::copy_if(vars.begin(), vars.end(), std::back_inserter(rest), [x](Var v) { return v != x; });
      std::vector<NodeId> children;
      for (bool value : {true, false}) {
        children.push_back(builder_.product({literal(x, value), node(rest, depth - 1)}));
      }
      return remember(vars, builder_.sum(std::move(children), weights(2)));
    }
    if (r < opt_.deterministic_share + opt_.mixture_share) {
      const std::size_t k = pick(2, std::max<std::size_t>(2, opt_.max_sum_children));
      std::vector<NodeId> children;
      for (std::size_t i = 0; i < k; ++i) children.push_back(partition(vars, depth - 1));
      return remember(vars, builder_.sum(std::move(children), weights(k)));
    }
    return remember(vars, partition(vars, depth - 1));
  }

  // Product over a random split of `vars` into two or three blocks.
  NodeId partition(const std::vector<Var>& vars, std::size_t depth) {
    const std::size_t blocks = std::min<std::size_t>(vars.size(), pick(2, 3));
    std::vector<Var> shuffled = vars;
    std::shuffle(shuffled.begin(), shuffled.end(), rng_);
    std::vector<std::vector<Var>> parts(blocks);
    for (std::size_t i = 0; i < shuffled.size(); ++i) {
      parts[i < blocks ? i : pick(0, blocks - 1)].push_back(shuffled[i]);
    }
    std::vector<NodeId> children;
    for (auto& part : parts) {
      std::sort(part.begin(), part.end());
      children.push_back(node(part, depth));
    }
    return builder_.product(std::move(children));
  }

  RandomCircuitOptions opt_;
  std::mt19937_64 rng_;
  CircuitBuilder builder_;
  std::map<std::pair<Var, bool>, NodeId> literals_;
  std::map<std::vector<Var>, std::vector<NodeId>> pool_;
};

}  // namespace

Circuit random_circuit(const RandomCircuitOptions& options, std::uint64_t seed) {
  if (options.num_vars == 0) throw std::invalid_argument("random_circuit: need at least one variable");
  return RandomCircuitGenerator(options, seed).run();
}

}  // namespace pcmmap
