#include "pcmmap/transform.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <string>

namespace pcmmap {

namespace {

constexpr NodeId kDead = std::numeric_limits<NodeId>::max();

// Rebuilds a circuit after some leaves were zeroed and/or some sum edges
// removed. Dead nodes cascade upward; single-child nodes are forwarded to
// their child with an accumulated weight factor.
class Rebuilder {
 public:
  Rebuilder(const Circuit& in, const std::vector<bool>& dead_leaf, const std::vector<bool>& removed_edge)
      : in_(in), dead_leaf_(dead_leaf), removed_edge_(removed_edge) {}

  Circuit run() {
    mark_alive();
    if (!alive_[in_.root()]) throw DeadRootError("root has empty support");
    mark_reachable();

    refs_.assign(in_.size(), Ref{});
    materialized_.assign(in_.size(), kDead);
    for (NodeId id = 0; id < in_.size(); ++id) {
      if (reachable_[id]) build(id);
    }
    const NodeId root = as_node(in_.root());
    return compact(root);
  }

 private:
  struct Ref {
    NodeId target = kDead;
    double factor = 1.0;
  };

  bool edge_live(NodeId parent, std::size_t k) const {
    const NodeId c = in_.node(parent).children[k];
    if (!alive_[c]) return false;
    return removed_edge_.empty() || !removed_edge_[in_.edge_index(parent, k)];
  }

  void mark_alive() {
    alive_.assign(in_.size(), false);
    for (NodeId id = 0; id < in_.size(); ++id) {
      const Node& n = in_.node(id);
      switch (n.kind) {
        case NodeKind::Leaf:
          alive_[id] = dead_leaf_.empty() || !dead_leaf_[id];
          break;
        case NodeKind::Product:
          alive_[id] = std::all_of(n.children.begin(), n.children.end(), [&](NodeId c) { return alive_[c]; });
          break;
        case NodeKind::Sum: {
          bool any = false;
          for (std::size_t k = 0; k < n.children.size() && !any; ++k) any = edge_live(id, k);
          alive_[id] = any;
          break;
        }
      }
    }
  }

  void mark_reachable() {
    reachable_.assign(in_.size(), false);
    reachable_[in_.root()] = true;
    for (NodeId id = in_.root() + 1; id-- > 0;) {
      if (!reachable_[id]) continue;
      const Node& n = in_.node(id);
      for (std::size_t k = 0; k < n.children.size(); ++k) {
        if (n.is_product() || edge_live(id, k)) reachable_[n.children[k]] = true;
      }
    }
  }

  NodeId emit(Node n) {
    out_.push_back(std::move(n));
    return static_cast<NodeId>(out_.size() - 1);
  }

  // Concrete node for an old id, wrapping forwarded weight factors in a
  // single-child sum when they cannot be folded into a parent edge.
  NodeId as_node(NodeId old) {
    const Ref r = refs_[old];
    if (r.factor == 1.0) return r.target;
    if (materialized_[old] == kDead) {
      Node s;
      s.kind = NodeKind::Sum;
      s.children = {r.target};
      s.weights = {r.factor};
      materialized_[old] = emit(std::move(s));
    }
    return materialized_[old];
  }

  void build(NodeId id) {
    const Node& n = in_.node(id);
    switch (n.kind) {
      case NodeKind::Leaf: {
        Node leaf;
        leaf.kind = NodeKind::Leaf;
        leaf.var = n.var;
        leaf.value = n.value;
        refs_[id] = {emit(std::move(leaf)), 1.0};
        return;
      }
      case NodeKind::Product: {
        if (n.children.size() == 1) {
          refs_[id] = refs_[n.children.front()];
          return;
        }
        Node p;
        p.kind = NodeKind::Product;
        for (NodeId c : n.children) p.children.push_back(as_node(c));
        refs_[id] = {emit(std::move(p)), 1.0};
        return;
      }
      case NodeKind::Sum: {
        Node s;
        s.kind = NodeKind::Sum;
        s.split_var = n.split_var;
        for (std::size_t k = 0; k < n.children.size(); ++k) {
          if (!edge_live(id, k)) continue;
          const Ref r = refs_[n.children[k]];
          const double w = n.weights[k] * r.factor;
          auto it = std::find(s.children.begin(), s.children.end(), r.target);
          if (it != s.children.end()) {
            s.weights[static_cast<std::size_t>(it - s.children.begin())] += w;
          } else {
            s.children.push_back(r.target);
            s.weights.push_back(w);
          }
        }
        if (s.children.size() == 1) {
          refs_[id] = {s.children.front(), s.weights.front()};
        } else {
          refs_[id] = {emit(std::move(s)), 1.0};
        }
        return;
      }
    }
  }

  Circuit compact(NodeId root) {
    std::vector<bool> keep(out_.size(), false);
    keep[root] = true;
    for (NodeId id = root + 1; id-- > 0;) {
      if (!keep[id]) continue;
      for (NodeId c : out_[id].children) keep[c] = true;
    }
    std::vector<NodeId> remap(out_.size(), kDead);
    std::vector<Node> nodes;
    nodes.reserve(out_.size());
    for (NodeId id = 0; id <= root; ++id) {
      if (!keep[id]) continue;
      Node n = std::move(out_[id]);
      for (NodeId& c : n.children) c = remap[c];
      remap[id] = static_cast<NodeId>(nodes.size());
      nodes.push_back(std::move(n));
    }
    return Circuit(in_.num_vars(), std::move(nodes), remap[root]);
  }

  const Circuit& in_;
  const std::vector<bool>& dead_leaf_;
  const std::vector<bool>& removed_edge_;
  std::vector<bool> alive_;
  std::vector<bool> reachable_;
  std::vector<Ref> refs_;
  std::vector<NodeId> materialized_;
  std::vector<Node> out_;
};

Circuit rebuild(const Circuit& circuit, const std::vector<bool>& dead_leaf, const std::vector<bool>& removed_edge) {
  return Rebuilder(circuit, dead_leaf, removed_edge).run();
}

bool scope_contains(const Circuit& circuit, NodeId id, Var v) {
  const auto& s = circuit.scope(id);
  return std::binary_search(s.begin(), s.end(), v);
}

}  // namespace

Circuit cleanup(const Circuit& circuit) { return rebuild(circuit, {}, {}); }

Circuit condition(const Circuit& circuit, const Assignment& evidence) {
  if (evidence.num_vars() != circuit.num_vars()) {
    throw std::out_of_range("evidence size does not match circuit variable count");
  }
  std::vector<bool> dead(circuit.size(), false);
  for (NodeId id = 0; id < circuit.size(); ++id) {
    const Node& n = circuit.node(id);
    if (n.is_leaf() && !evidence.consistent(n.var, n.value)) dead[id] = true;
  }
  try {
    return rebuild(circuit, dead, {});
  } catch (const DeadRootError&) {
    throw DeadRootError("evidence has probability zero");
  }
}

Circuit prune_edges(const Circuit& circuit, const PruneSet& edges) {
  std::vector<bool> removed(circuit.num_edges(), false);
  for (const EdgeRef& e : edges) {
    if (e.parent >= circuit.size()) throw std::invalid_argument("prune: parent out of range");
    const Node& n = circuit.node(e.parent);
    if (!n.is_sum()) {
      throw std::invalid_argument("prune: node " + std::to_string(e.parent) + " is not a sum node");
    }
    if (e.ordinal >= n.children.size()) throw std::invalid_argument("prune: child ordinal out of range");
    const std::size_t idx = circuit.edge_index(e.parent, e.ordinal);
    if (removed[idx]) throw std::invalid_argument("prune: duplicate edge");
    removed[idx] = true;
  }
  if (edges.empty()) return circuit;
  try {
    return rebuild(circuit, {}, removed);
  } catch (const DeadRootError&) {
    throw DeadRootError("pruning removed the root's entire support");
  }
}

Circuit split(const Circuit& circuit, Var variable) {
  if (variable >= circuit.num_vars()) {
    throw std::out_of_range("split: variable " + std::to_string(variable) + " is not a circuit variable");
  }
  std::vector<Node> nodes = circuit.nodes();

  auto emit = [&nodes](Node n) {
    nodes.push_back(std::move(n));
    return static_cast<NodeId>(nodes.size() - 1);
  };

  if (!scope_contains(circuit, circuit.root(), variable)) {
    std::vector<NodeId> branches;
    for (bool v : {true, false}) {
      Node leaf;
      leaf.kind = NodeKind::Leaf;
      leaf.var = variable;
      leaf.value = v;
      const NodeId l = emit(std::move(leaf));
      Node p;
      p.kind = NodeKind::Product;
      p.children = {l, circuit.root()};
      branches.push_back(emit(std::move(p)));
    }
    Node s;
    s.kind = NodeKind::Sum;
    s.children = branches;
    s.weights = {1.0, 1.0};
    s.split_var = static_cast<std::int32_t>(variable);
    const NodeId root = emit(std::move(s));
    return Circuit(circuit.num_vars(), std::move(nodes), root);
  }

  // Branch images: shared id, a fresh copy, or kDead.
  NodeId branch_root[2] = {kDead, kDead};
  for (bool v : {true, false}) {
    std::vector<NodeId> image(circuit.size(), kDead);
    for (NodeId id = 0; id < circuit.size(); ++id) {
      const Node& n = circuit.node(id);
      if (!scope_contains(circuit, id, variable)) {
        image[id] = id;
        continue;
      }
      if (n.is_leaf()) {
        image[id] = (n.value == v) ? id : kDead;
        continue;
      }
      Node copy;
      copy.kind = n.kind;
      copy.split_var = n.split_var;
      bool unchanged = true;
      bool dead = false;
      for (std::size_t k = 0; k < n.children.size(); ++k) {
        const NodeId c = image[n.children[k]];
        if (c != n.children[k]) unchanged = false;
        if (c == kDead) {
          if (n.is_product()) {
            dead = true;
            break;
          }
          continue;
        }
        copy.children.push_back(c);
        if (n.is_sum()) copy.weights.push_back(n.weights[k]);
      }
      if (dead || copy.children.empty()) continue;
      image[id] = unchanged ? id : emit(std::move(copy));
    }
    branch_root[v ? 1 : 0] = image[circuit.root()];
  }

  NodeId root;
  if (branch_root[0] == kDead && branch_root[1] == kDead) {
    throw DeadRootError("split: both branches have empty support");
  } else if (branch_root[0] == kDead) {
    root = branch_root[1];
  } else if (branch_root[1] == kDead) {
    root = branch_root[0];
  } else {
    Node s;
    s.kind = NodeKind::Sum;
    s.children = {branch_root[1], branch_root[0]};
    s.weights = {1.0, 1.0};
    s.split_var = static_cast<std::int32_t>(variable);
    root = emit(std::move(s));
  }
  return cleanup(Circuit(circuit.num_vars(), std::move(nodes), root));
}

}  // namespace pcmmap
