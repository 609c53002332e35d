#include "pcmmap/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <string>

namespace pcmmap {

namespace {

std::vector<Var> merge_scopes(const std::vector<Var>& a, const std::vector<Var>& b) {
  std::vector<Var> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool disjoint(const std::vector<Var>& a, const std::vector<Var>& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return false;
    if (*i < *j) ++i; else ++j;
  }
  return true;
}

}  // namespace

Assignment Assignment::from_literals(std::size_t num_vars, std::span<const Literal> literals) {
  Assignment a(num_vars);
  for (const auto& lit : literals) {
    if (lit.var >= num_vars) {
      throw std::out_of_range("variable " + std::to_string(lit.var) + " out of range (num_vars=" +
                              std::to_string(num_vars) + ")");
    }
    a.set(lit.var, lit.value);
  }
  return a;
}

std::vector<Literal> Assignment::literals() const {
  std::vector<Literal> out;
  for (std::size_t v = 0; v < values_.size(); ++v) {
    if (values_[v] != kUnset) out.push_back({static_cast<Var>(v), values_[v] == 1});
  }
  return out;
}

std::size_t Assignment::count_assigned() const {
  return static_cast<std::size_t>(
      std::count_if(values_.begin(), values_.end(), [](auto x) { return x != kUnset; }));
}

Circuit::Circuit(std::size_t num_vars, std::vector<Node> nodes, NodeId root)
    : num_vars_(num_vars), nodes_(std::move(nodes)), root_(root) {
  if (nodes_.empty()) throw std::invalid_argument("circuit has no nodes");
  if (root_ >= nodes_.size()) throw std::invalid_argument("root id out of range");
  scopes_.resize(nodes_.size());
  edge_offset_.assign(nodes_.size() + 1, 0);
  for (std::size_t id = 0; id < nodes_.size(); ++id) {
    const Node& n = nodes_[id];
    const std::string where = "node " + std::to_string(id) + ": ";
    if (n.is_leaf()) {
      if (n.var >= num_vars_) throw std::invalid_argument(where + "leaf variable out of range");
      if (!n.children.empty()) throw std::invalid_argument(where + "leaf with children");
      scopes_[id] = {n.var};
    } else {
      if (n.children.empty()) throw std::invalid_argument(where + "inner node without children");
      if (n.is_sum() && n.weights.size() != n.children.size()) {
        throw std::invalid_argument(where + "weight count does not match child count");
      }
      if (n.is_product() && !n.weights.empty()) {
        throw std::invalid_argument(where + "product node with weights");
      }
      for (double w : n.weights) {
        if (!std::isfinite(w) || w <= 0.0) throw std::invalid_argument(where + "non-positive weight");
      }
      for (NodeId c : n.children) {
        if (c >= id) throw std::invalid_argument(where + "child does not precede parent");
        scopes_[id] = merge_scopes(scopes_[id], scopes_[c]);
      }
    }
    edge_offset_[id + 1] = edge_offset_[id] + n.children.size();
  }
}

bool operator==(const Circuit& a, const Circuit& b) {
  if (a.num_vars_ != b.num_vars_ || a.root_ != b.root_ || a.nodes_.size() != b.nodes_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.nodes_.size(); ++i) {
    const Node& x = a.nodes_[i];
    const Node& y = b.nodes_[i];
    if (x.kind != y.kind || x.children != y.children || x.weights != y.weights) return false;
    if (x.is_leaf() && (x.var != y.var || x.value != y.value)) return false;
  }
  return true;
}

NodeId CircuitBuilder::leaf(Var var, bool value) {
  Node n;
  n.kind = NodeKind::Leaf;
  n.var = var;
  n.value = value;
  nodes_.push_back(std::move(n));
  return static_cast<NodeId>(nodes_.size() - 1);
}

NodeId CircuitBuilder::product(std::vector<NodeId> children) {
  Node n;
  n.kind = NodeKind::Product;
  n.children = std::move(children);
  nodes_.push_back(std::move(n));
  return static_cast<NodeId>(nodes_.size() - 1);
}

NodeId CircuitBuilder::sum(std::vector<NodeId> children, std::vector<double> weights) {
  Node n;
  n.kind = NodeKind::Sum;
  n.children = std::move(children);
  n.weights = std::move(weights);
  nodes_.push_back(std::move(n));
  return static_cast<NodeId>(nodes_.size() - 1);
}

Circuit CircuitBuilder::build(NodeId root) && {
  return Circuit(num_vars_, std::move(nodes_), root);
}

std::vector<double> evaluate_nodes(const Circuit& circuit, const Assignment& partial) {
  if (partial.num_vars() != circuit.num_vars()) {
    throw std::out_of_range("assignment size does not match circuit variable count");
  }
  std::vector<double> value(circuit.size());
  for (NodeId id = 0; id < circuit.size(); ++id) {
    const Node& n = circuit.node(id);
    switch (n.kind) {
      case NodeKind::Leaf:
        value[id] = partial.consistent(n.var, n.value) ? 1.0 : 0.0;
        break;
      case NodeKind::Product: {
        double acc = 1.0;
        for (NodeId c : n.children) acc *= value[c];
        value[id] = acc;
        break;
      }
      case NodeKind::Sum: {
        double acc = 0.0;
        for (std::size_t k = 0; k < n.children.size(); ++k) acc += n.weights[k] * value[n.children[k]];
        value[id] = acc;
        break;
      }
    }
  }
  return value;
}

double evaluate_marginal(const Circuit& circuit, const Assignment& partial) {
  return evaluate_nodes(circuit, partial)[circuit.root()];
}

double evaluate_marginal(const Circuit& circuit, std::span<const Literal> partial) {
  return evaluate_marginal(circuit, Assignment::from_literals(circuit.num_vars(), partial));
}

std::vector<double> node_masses(const Circuit& circuit) {
  return evaluate_nodes(circuit, Assignment(circuit.num_vars()));
}

StructureCheck check_smooth(const Circuit& circuit) {
  for (NodeId id = 0; id < circuit.size(); ++id) {
    const Node& n = circuit.node(id);
    if (!n.is_sum()) continue;
    for (NodeId c : n.children) {
      if (circuit.scope(c) != circuit.scope(n.children.front())) return {false, id};
    }
  }
  return {};
}

StructureCheck check_decomposable(const Circuit& circuit) {
  for (NodeId id = 0; id < circuit.size(); ++id) {
    const Node& n = circuit.node(id);
    if (!n.is_product()) continue;
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      for (std::size_t j = i + 1; j < n.children.size(); ++j) {
        if (!disjoint(circuit.scope(n.children[i]), circuit.scope(n.children[j]))) return {false, id};
      }
    }
  }
  return {};
}

SupportSummary::SupportSummary(const Circuit& circuit) : entries_(circuit.size()) {
  for (NodeId id = 0; id < circuit.size(); ++id) {
    const Node& n = circuit.node(id);
    auto& out = entries_[id];
    if (n.is_leaf()) {
      out.emplace_back(n.var, static_cast<std::uint8_t>(n.value ? 2 : 1));
      continue;
    }
    // Products see disjoint scopes and sums identical ones; a per-variable
    // OR-merge covers both (and stays sound on malformed input).
    for (NodeId c : n.children) {
      const auto& in = entries_[c];
      std::vector<std::pair<Var, std::uint8_t>> merged;
      merged.reserve(out.size() + in.size());
      auto i = out.begin();
      auto j = in.begin();
      while (i != out.end() || j != in.end()) {
        if (j == in.end() || (i != out.end() && i->first < j->first)) {
          merged.push_back(*i++);
        } else if (i == out.end() || j->first < i->first) {
          merged.push_back(*j++);
        } else {
          merged.emplace_back(i->first, static_cast<std::uint8_t>(i->second | j->second));
          ++i;
          ++j;
        }
      }
      out = std::move(merged);
    }
  }
}

std::uint8_t SupportSummary::possible(NodeId node, Var v) const {
  const auto& e = entries_[node];
  auto it = std::lower_bound(e.begin(), e.end(), v, [](const auto& p, Var x) { return p.first < x; });
  return (it != e.end() && it->first == v) ? it->second : 0;
}

QDetMap detect_q_deterministic(const Circuit& circuit, std::span<const Var> query) {
  std::vector<bool> in_query(circuit.num_vars(), false);
  for (Var v : query) in_query.at(v) = true;

  QDetMap map{std::vector<bool>(circuit.size(), false), std::vector<std::int32_t>(circuit.size(), kNoVar)};
  const SupportSummary support(circuit);

  for (NodeId id = 0; id < circuit.size(); ++id) {
    const Node& n = circuit.node(id);
    if (!n.is_sum()) continue;

    std::vector<Var> qvars;
    for (Var v : circuit.scope(id)) {
      if (in_query[v]) qvars.push_back(v);
    }
    if (qvars.empty()) continue;

    if (n.split_var != kNoVar && in_query[static_cast<Var>(n.split_var)]) {
      map.is_qdet[id] = true;
      map.deciding_var[id] = n.split_var;
      continue;
    }
    // Single-child sums stay unmarked: max and sum agree there, and marking
    // them would switch their ancestors to max in the lower-bound pass.
    if (n.children.size() == 1) continue;

    // Every child pair must be separated by some query variable whose
    // possible-value sets are disjoint.
    std::int32_t lowest = kNoVar;
    bool all_separated = true;
    for (std::size_t i = 0; i < n.children.size() && all_separated; ++i) {
      for (std::size_t j = i + 1; j < n.children.size(); ++j) {
        bool separated = false;
        for (Var v : qvars) {
          if ((support.possible(n.children[i], v) & support.possible(n.children[j], v)) == 0) {
            separated = true;
            if (lowest == kNoVar || static_cast<std::int32_t>(v) < lowest) lowest = static_cast<std::int32_t>(v);
            break;
          }
        }
        if (!separated) {
          all_separated = false;
          break;
        }
      }
    }
    if (all_separated) {
      map.is_qdet[id] = true;
      map.deciding_var[id] = lowest;
    }
  }
  return map;
}

bool fully_q_deterministic(const Circuit& circuit, std::span<const Var> query, const QDetMap& qdet) {
  std::vector<bool> in_query(circuit.num_vars(), false);
  for (Var v : query) in_query.at(v) = true;
  for (NodeId id = 0; id < circuit.size(); ++id) {
    const Node& n = circuit.node(id);
    if (!n.is_sum() || n.children.size() == 1 || qdet[id]) continue;
    for (Var v : circuit.scope(id)) {
      if (in_query[v]) return false;
    }
  }
  return true;
}

}  // namespace pcmmap
