#include "pcmmap/bounds.hpp"

#include <algorithm>
#include <limits>

namespace pcmmap {

namespace {

// Weighted argmax over children; ties go to the lowest child position.
std::size_t weighted_argmax(const Node& n, const std::vector<double>& m) {
  std::size_t best = 0;
  double best_value = n.weights[0] * m[n.children[0]];
  for (std::size_t k = 1; k < n.children.size(); ++k) {
    const double v = n.weights[k] * m[n.children[k]];
    if (v > best_value) {
      best = k;
      best_value = v;
    }
  }
  return best;
}

std::vector<double> max_sum_pass(const Circuit& circuit, const std::vector<bool>& use_max) {
  std::vector<double> m(circuit.size());
  for (NodeId id = 0; id < circuit.size(); ++id) {
    const Node& n = circuit.node(id);
    switch (n.kind) {
      case NodeKind::Leaf:
        m[id] = 1.0;
        break;
      case NodeKind::Product: {
        double acc = 1.0;
        for (NodeId c : n.children) acc *= m[c];
        m[id] = acc;
        break;
      }
      case NodeKind::Sum:
        if (use_max[id]) {
          const std::size_t k = weighted_argmax(n, m);
          m[id] = n.weights[k] * m[n.children[k]];
        } else {
          double acc = 0.0;
          for (std::size_t k = 0; k < n.children.size(); ++k) acc += n.weights[k] * m[n.children[k]];
          m[id] = acc;
        }
        break;
    }
  }
  return m;
}

}  // namespace

std::vector<double> output_bounds(const Circuit& circuit, const QDetMap& qdet) {
  return max_sum_pass(circuit, qdet.is_qdet);
}

BoundRegisters edge_bounds(const Circuit& circuit, const QDetMap& qdet) {
  return edge_bounds(circuit, qdet, output_bounds(circuit, qdet));
}

BoundRegisters edge_bounds(const Circuit& circuit, const QDetMap& qdet, std::vector<double> m) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  BoundRegisters reg;
  reg.m = std::move(m);
  reg.r_node.assign(circuit.size(), -kInf);
  reg.t.assign(circuit.size(), kInf);
  reg.r_edge.assign(circuit.num_edges(), -kInf);

  const NodeId root = circuit.root();
  reg.t[root] = 1.0;
  reg.r_node[root] = reg.m[root];

  std::vector<double> others;
  for (NodeId id = root + 1; id-- > 0;) {
    // Unreached nodes keep t = +inf.
    if (reg.t[id] == kInf) continue;
    const Node& n = circuit.node(id);
    if (n.is_product()) {
      // A child's contribution reaches the root scaled by its siblings' bounds,
      // so t carries their product: prefix times suffix, no division.
      others.assign(n.children.size(), 1.0);
      double prefix = 1.0;
      for (std::size_t k = 0; k < n.children.size(); ++k) {
        others[k] = prefix;
        prefix *= reg.m[n.children[k]];
      }
      double suffix = 1.0;
      for (std::size_t k = n.children.size(); k-- > 0;) {
        others[k] *= suffix;
        suffix *= reg.m[n.children[k]];
      }
    }
    for (std::size_t k = 0; k < n.children.size(); ++k) {
      const NodeId c = n.children[k];
      const std::size_t e = circuit.edge_index(id, k);
      if (n.is_product()) {
        reg.r_edge[e] = reg.r_node[id];
        reg.t[c] = std::min(reg.t[c], reg.t[id] * others[k]);
      } else {
        if (qdet[id]) {
          reg.r_edge[e] = reg.r_node[id] + reg.t[id] * (n.weights[k] * reg.m[c] - reg.m[id]);
        } else {
          reg.r_edge[e] = reg.r_node[id];
        }
        reg.t[c] = std::min(reg.t[c], n.weights[k] * reg.t[id]);
      }
      reg.r_node[c] = std::max(reg.r_node[c], reg.r_edge[e]);
    }
  }
  return reg;
}

LowerBoundResult lower_bound(const Circuit& circuit, std::span<const Var> query, const QDetMap& qdet) {
  // A sum is maxed when it or any descendant is Q-deterministic.
  std::vector<bool> use_max(circuit.size(), false);
  std::vector<bool> below(circuit.size(), false);
  for (NodeId id = 0; id < circuit.size(); ++id) {
    const Node& n = circuit.node(id);
    bool any = n.is_sum() && qdet[id];
    for (NodeId c : n.children) any = any || below[c];
    below[id] = any;
    use_max[id] = n.is_sum() && any;
  }
  const std::vector<double> m = max_sum_pass(circuit, use_max);

  std::vector<bool> in_query(circuit.num_vars(), false);
  for (Var v : query) in_query.at(v) = true;

  LowerBoundResult result;
  result.state = Assignment(circuit.num_vars());
  std::vector<bool> visit(circuit.size(), false);
  visit[circuit.root()] = true;
  for (NodeId id = circuit.root() + 1; id-- > 0;) {
    if (!visit[id]) continue;
    const Node& n = circuit.node(id);
    switch (n.kind) {
      case NodeKind::Leaf:
        if (in_query[n.var]) result.state.set(n.var, n.value);
        break;
      case NodeKind::Product:
        for (NodeId c : n.children) visit[c] = true;
        break;
      case NodeKind::Sum:
        visit[n.children[weighted_argmax(n, m)]] = true;
        break;
    }
  }
  for (Var v : query) {
    if (!result.state.assigned(v)) {
      result.state.set(v, false);
      result.filled_missing = true;
    }
  }
  result.value = evaluate_marginal(circuit, result.state);
  return result;
}

}  // namespace pcmmap
