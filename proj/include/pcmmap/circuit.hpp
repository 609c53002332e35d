#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pcmmap {

using NodeId = std::uint32_t;
using Var = std::uint32_t;

inline constexpr std::int32_t kNoVar = -1;

/// Thrown when a transform leaves the root with empty support (infeasible
/// evidence, over-pruning, or a split branch that cannot be satisfied).
class DeadRootError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class NodeKind : std::uint8_t { Leaf, Product, Sum };

struct Literal {
  Var var = 0;
  bool value = false;

  friend bool operator==(const Literal&, const Literal&) = default;
};

/// One arena slot. Leaves carry the indicator [X_var = value]; sums carry one
/// strictly positive weight per child.
struct Node {
  NodeKind kind = NodeKind::Leaf;
  Var var = 0;
  bool value = false;
  std::vector<NodeId> children;
  std::vector<double> weights;
  // Set on sum nodes produced by split(): the variable the node decides.
  std::int32_t split_var = kNoVar;

  bool is_leaf() const { return kind == NodeKind::Leaf; }
  bool is_product() const { return kind == NodeKind::Product; }
  bool is_sum() const { return kind == NodeKind::Sum; }
};

/// Partial assignment over binary variables; unassigned slots read as nullopt.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::size_t num_vars) : values_(num_vars, kUnset) {}

  /// Throws std::out_of_range if a literal names a variable >= num_vars.
  static Assignment from_literals(std::size_t num_vars, std::span<const Literal> literals);

  std::size_t num_vars() const { return values_.size(); }
  bool assigned(Var v) const { return values_.at(v) != kUnset; }
  std::optional<bool> get(Var v) const {
    const auto x = values_.at(v);
    if (x == kUnset) return std::nullopt;
    return x == 1;
  }
  void set(Var v, bool value) { values_.at(v) = value ? 1 : 0; }
  void unset(Var v) { values_.at(v) = kUnset; }

  /// Indicator value of a leaf under this assignment (1 when unassigned).
  bool consistent(Var v, bool value) const {
    const auto x = values_[v];
    return x == kUnset || (x == 1) == value;
  }

  std::vector<Literal> literals() const;
  std::size_t count_assigned() const;

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  static constexpr std::int8_t kUnset = -1;
  std::vector<std::int8_t> values_;
};

/// Arena-indexed DAG. Children always precede their parents, so the arena
/// order is a feedforward order and reverse arena order a backward order.
class Circuit {
 public:
  Circuit() = default;
  /// Validates arena ordering, arities and weights; throws std::invalid_argument.
  Circuit(std::size_t num_vars, std::vector<Node> nodes, NodeId root);

  std::size_t num_vars() const { return num_vars_; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t num_edges() const { return edge_offset_.empty() ? 0 : edge_offset_.back(); }
  NodeId root() const { return root_; }
  const Node& node(NodeId id) const { return nodes_[id]; }
  const std::vector<Node>& nodes() const { return nodes_; }

  /// Sorted variable scope of a node.
  const std::vector<Var>& scope(NodeId id) const { return scopes_[id]; }

  /// Flat edge index of the `ordinal`-th input of `parent`.
  std::size_t edge_index(NodeId parent, std::size_t ordinal) const {
    return edge_offset_[parent] + ordinal;
  }
  std::size_t edge_begin(NodeId parent) const { return edge_offset_[parent]; }

  friend bool operator==(const Circuit& a, const Circuit& b);

 private:
  std::size_t num_vars_ = 0;
  std::vector<Node> nodes_;
  NodeId root_ = 0;
  std::vector<std::vector<Var>> scopes_;
  std::vector<std::size_t> edge_offset_;  // size() + 1 entries
};

/// Convenience builder used by parsers, generators and tests.
class CircuitBuilder {
 public:
  explicit CircuitBuilder(std::size_t num_vars) : num_vars_(num_vars) {}

  NodeId leaf(Var var, bool value);
  NodeId product(std::vector<NodeId> children);
  NodeId sum(std::vector<NodeId> children, std::vector<double> weights);

  std::size_t size() const { return nodes_.size(); }
  Circuit build(NodeId root) &&;
  Circuit build() && { return std::move(*this).build(static_cast<NodeId>(nodes_.size() - 1)); }

 private:
  std::size_t num_vars_;
  std::vector<Node> nodes_;
};

/// Marginal C(partial): leaves on unassigned variables evaluate to 1.
double evaluate_marginal(const Circuit& circuit, const Assignment& partial);
double evaluate_marginal(const Circuit& circuit, std::span<const Literal> partial);

/// Values of every node under `partial`, indexed by NodeId.
std::vector<double> evaluate_nodes(const Circuit& circuit, const Assignment& partial);

/// Total mass of every node (the empty-assignment marginal per node).
std::vector<double> node_masses(const Circuit& circuit);

struct StructureCheck {
  bool ok = true;
  std::optional<NodeId> violating;
};

StructureCheck check_smooth(const Circuit& circuit);
StructureCheck check_decomposable(const Circuit& circuit);

/// Replaces leaves inconsistent with `evidence` by zero and cleans up.
/// Throws DeadRootError when the evidence has probability zero.
Circuit condition(const Circuit& circuit, const Assignment& evidence);

/// Over-approximation of each node's support projected per variable:
/// a two-bit mask (bit v set when value v is possible) for every scope variable.
class SupportSummary {
 public:
  explicit SupportSummary(const Circuit& circuit);

  /// Possible-values mask of `v` at `node`; 0 when `v` is outside the scope.
  std::uint8_t possible(NodeId node, Var v) const;
  std::span<const std::pair<Var, std::uint8_t>> entries(NodeId node) const { return entries_[node]; }

 private:
  std::vector<std::vector<std::pair<Var, std::uint8_t>>> entries_;
};

/// Which sum nodes are provably Q-deterministic. `deciding_var` names the
/// lowest query variable separating some pair of children (kNoVar otherwise).
struct QDetMap {
  std::vector<bool> is_qdet;
  std::vector<std::int32_t> deciding_var;

  bool operator[](NodeId n) const { return is_qdet[n]; }
};

/// `query` must be sorted; indexes >= num_vars throw std::out_of_range.
QDetMap detect_q_deterministic(const Circuit& circuit, std::span<const Var> query);

/// True when every sum whose scope meets Q is marked.
bool fully_q_deterministic(const Circuit& circuit, std::span<const Var> query, const QDetMap& qdet);

}  // namespace pcmmap
