#include <gtest/gtest.h>

#include <vector>

#include "pcmmap/bounds.hpp"
#include "pcmmap/oracle.hpp"
#include "support.hpp"

namespace pcmmap {
namespace {

using testing::close_relative;
using testing::fixture;

TEST(Oracle, QueryStateOrder) {
  const std::vector<Var> q{1, 3};
  const Assignment a = query_state(4, q, 0b10);
  EXPECT_EQ(a.get(1), true);
  EXPECT_EQ(a.get(3), false);
  EXPECT_FALSE(a.assigned(0));
}

TEST(Oracle, F1BothVariables) {
  const Circuit f1 = fixture("f1.pc");
  const std::vector<Var> q{0, 1};
  const OracleResult r = oracle_mmap(f1, q);
  EXPECT_DOUBLE_EQ(r.value, 0.42);
  EXPECT_EQ(r.state.get(0), true);
  EXPECT_EQ(r.state.get(1), true);
}

TEST(Oracle, F1SecondVariable) {
  const Circuit f1 = fixture("f1.pc");
  const std::vector<Var> q{1};
  const OracleResult r = oracle_mmap(f1, q);
  // Both states have probability one half up to rounding; the winner
  // follows the computed marginals.
  const std::vector<Literal> one{{1, true}};
  const std::vector<Literal> zero{{1, false}};
  const double p1 = evaluate_marginal(f1, one);
  const double p0 = evaluate_marginal(f1, zero);
  EXPECT_NEAR(r.value, 0.5, 1e-15);
  EXPECT_EQ(r.state.get(1), p1 > p0);
  EXPECT_EQ(r.value, std::max(p0, p1));
  EXPECT_EQ(r.state.get(1), false);
}

TEST(Oracle, TiesGoToSmallestState) {
  CircuitBuilder b(1);
  const auto x1 = b.leaf(0, true);
  const auto x0 = b.leaf(0, false);
  b.sum({x1, x0}, {0.5, 0.5});
  const Circuit c = std::move(b).build();
  const std::vector<Var> q{0};
  EXPECT_EQ(oracle_mmap(c, q).state.get(0), false);
  EXPECT_EQ(oracle_mmap_serial(c, q).state.get(0), false);
}

TEST(Oracle, AllVariablesIsMpe) {
  for (std::size_t i = 0; i < 40; ++i) {
    const auto cs = testing::corpus_case(i);
    const Circuit& c = cs.circuit;
    std::vector<Var> all(c.num_vars());
    for (Var v = 0; v < c.num_vars(); ++v) all[v] = v;
    double best = 0.0;
    for (std::uint64_t x = 0; x < (1ULL << c.num_vars()); ++x) {
      best = std::max(best, evaluate_marginal(c, testing::full_assignment(c.num_vars(), x)));
    }
    EXPECT_TRUE(close_relative(oracle_mmap(c, all).value, best, 1e-12));
  }
}

TEST(Oracle, MatchesJointTableOnCorpus) {
  for (std::size_t i = 0; i < 100; ++i) {
    const auto cs = testing::corpus_case(i);
    const double table = testing::table_mmap(cs.conditioned, cs.instance.query);
    EXPECT_TRUE(close_relative(oracle_mmap(cs.conditioned, cs.instance.query).value, table, 1e-10)) << "case " << i;
  }
}

TEST(Oracle, BudgetExceeded) {
  const Circuit f1 = fixture("f1.pc");
  const std::vector<Var> q{0, 1};
  EXPECT_THROW(oracle_mmap(f1, q, 1), BudgetExceeded);
  EXPECT_THROW(oracle_edge_mmap(f1, q, {testing::kF1Root, 0}, 1), BudgetExceeded);
}

TEST(Subcircuit, F1ActiveEdges) {
  const Circuit f1 = fixture("f1.pc");
  const std::vector<Literal> lits{{0, true}, {1, false}};
  const Assignment q = Assignment::from_literals(2, lits);
  const SubcircuitMask mask = oracle_subcircuit(f1, q);
  std::vector<std::size_t> active;
  for (std::size_t e = 0; e < f1.num_edges(); ++e) {
    if (mask.active_edges[e]) active.push_back(e);
  }
  const std::vector<std::size_t> expected{
      f1.edge_index(testing::kF1LeftSum, 1),      // S1 -> [X1=0]
      f1.edge_index(testing::kF1LeftProduct, 0),  // P1 -> [X0=1]
      f1.edge_index(testing::kF1LeftProduct, 1),  // P1 -> S1
      f1.edge_index(testing::kF1Root, 0),
  };
  EXPECT_EQ(active, expected);
  EXPECT_DOUBLE_EQ(evaluate_marginal(f1, q), 0.18);
}

TEST(Subcircuit, ZeroStateIsEmpty) {
  CircuitBuilder b(2);
  const auto x1 = b.leaf(0, true);
  const auto y1 = b.leaf(1, true);
  b.product({x1, y1});
  const Circuit c = std::move(b).build();
  const std::vector<Literal> lits{{0, false}};
  const SubcircuitMask mask = oracle_subcircuit(c, Assignment::from_literals(2, lits));
  for (bool b2 : mask.active_nodes) EXPECT_FALSE(b2);
  for (bool b2 : mask.active_edges) EXPECT_FALSE(b2);
}

TEST(Subcircuit, FullyDeterministicHasOneInputPerSum) {
  const Circuit f1 = fixture("f1.pc");
  const std::vector<Var> q{0, 1};
  for (std::uint64_t s = 0; s < 4; ++s) {
    const SubcircuitMask mask = oracle_subcircuit(f1, query_state(2, q, s));
    for (NodeId id = 0; id < f1.size(); ++id) {
      if (!f1.node(id).is_sum() || !mask.active_nodes[id]) continue;
      std::size_t k = 0;
      for (std::size_t j = 0; j < f1.node(id).children.size(); ++j) k += mask.active_edges[f1.edge_index(id, j)];
      EXPECT_EQ(k, 1u);
    }
  }
}

TEST(EdgeOracle, F1Examples) {
  const Circuit f1 = fixture("f1.pc");
  const std::vector<Var> q{0};
  EXPECT_DOUBLE_EQ(*oracle_edge_mmap(f1, q, {testing::kF1Root, 1}), 0.4);
  EXPECT_DOUBLE_EQ(*oracle_edge_mmap(f1, q, {testing::kF1LeftSum, 0}), 0.6);
}

TEST(EdgeOracle, RestrictedToActivatingStates) {
  CircuitBuilder b(2);
  const auto x1 = b.leaf(0, true);
  const auto x0 = b.leaf(0, false);
  const auto y1 = b.leaf(1, true);
  const auto y0 = b.leaf(1, false);
  const auto s = b.sum({y1, y0}, {0.5, 0.5});
  const auto left = b.product({x1, s});
  const auto right = b.product({x0, y1});
  b.sum({left, right}, {0.5, 0.5});
  const Circuit c = std::move(b).build();
  // s -> [X1=0] is only reached through X0=1.
  const std::vector<Var> q{0, 1};
  const auto r = oracle_edge_mmap(c, q, {s, 1});
  ASSERT_TRUE(r.has_value());
  EXPECT_DOUBLE_EQ(*r, 0.25);
}

TEST(EdgeOracle, DeadBranchHasNoActivatingState) {
  // The contradictory product is zero under every state.
  CircuitBuilder b(1);
  const auto x1 = b.leaf(0, true);
  const auto x0 = b.leaf(0, false);
  const auto dead = b.product({x1, x0});
  const auto root = b.sum({x1, dead}, {0.5, 0.5});
  const Circuit c = std::move(b).build(root);
  const std::vector<Var> q{0};
  EXPECT_FALSE(oracle_edge_mmap(c, q, {root, 1}).has_value());
  EXPECT_DOUBLE_EQ(*oracle_edge_mmap(c, q, {root, 0}), 0.5);
}

TEST(EdgeOracle, AllEdgesMatchesSingleEdge) {
  for (std::size_t i = 0; i < 30; ++i) {
    const auto cs = testing::corpus_case(i);
    const Circuit& c = cs.conditioned;
    const auto all = oracle_all_edge_mmap_serial(c, cs.instance.query);
    for (NodeId id = 0; id < c.size(); ++id) {
      for (std::size_t k = 0; k < c.node(id).children.size(); ++k) {
        EXPECT_EQ(all[c.edge_index(id, k)], oracle_edge_mmap(c, cs.instance.query, {id, k}));
      }
    }
  }
}

// The nonzero-path activation agrees with the context definition.
TEST(EdgeOracle, AgreesWithContextDefinition) {
  for (std::size_t i = 0; i < 120; ++i) {
    const auto cs = testing::corpus_case(i);
    const Circuit& c = cs.conditioned;
    const auto& query = cs.instance.query;
    const auto ctx = testing::context_oracle(c, query);
    for (std::uint64_t s = 0; s < (1ULL << query.size()); ++s) {
      const SubcircuitMask mask = oracle_subcircuit(c, query_state(c.num_vars(), query, s));
      for (std::size_t e = 0; e < c.num_edges(); ++e) {
        ASSERT_EQ(mask.active_edges[e], ctx.edge_states[e][s]) << "case " << i << " edge " << e << " state " << s;
      }
      for (NodeId id = 0; id < c.size(); ++id) {
        ASSERT_EQ(mask.active_nodes[id], ctx.node_states[id][s]) << "case " << i << " node " << id;
      }
    }
    const auto all = oracle_all_edge_mmap_serial(c, query);
    for (std::size_t e = 0; e < c.num_edges(); ++e) {
      ASSERT_EQ(all[e].has_value(), ctx.edge_best[e].has_value());
      if (all[e]) EXPECT_DOUBLE_EQ(*all[e], *ctx.edge_best[e]);
    }
  }
}

TEST(EdgeOracle, EdgeBoundsDominate) {
  for (std::size_t i = 0; i < 150; ++i) {
    const auto cs = testing::corpus_case(i);
    const Circuit& c = cs.conditioned;
    const auto reg = edge_bounds(c, detect_q_deterministic(c, cs.instance.query));
    const auto truth = oracle_all_edge_mmap(c, cs.instance.query);
    for (std::size_t e = 0; e < c.num_edges(); ++e) {
      if (truth[e]) EXPECT_GE(reg.r_edge[e], *truth[e] * (1 - 1e-12)) << "case " << i << " edge " << e;
    }
  }
}

}  // namespace
}  // namespace pcmmap
