#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <sstream>

#include "pcmmap/generate.hpp"
#include "pcmmap/io.hpp"
#include "pcmmap/oracle.hpp"
#include "support.hpp"

namespace pcmmap {
namespace {

using testing::fixture;

TEST(Proportions, Parse) {
  const Proportions p = Proportions::parse("50,20,30");
  EXPECT_EQ(p.query, 50u);
  EXPECT_EQ(p.evidence, 20u);
  EXPECT_EQ(p.hidden, 30u);
  EXPECT_EQ(p.str(), "50,20,30");
  EXPECT_THROW(Proportions::parse("50,20"), std::invalid_argument);
  EXPECT_THROW(Proportions::parse("50,20,20"), std::invalid_argument);
  EXPECT_THROW(Proportions::parse("50;20;30"), std::invalid_argument);
  EXPECT_THROW(Proportions::parse("-10,80,30"), std::invalid_argument);
  EXPECT_THROW(Proportions::parse("50,20,30x"), std::invalid_argument);
}

TEST(Partition, EvidenceAndHiddenFloored) {
  const auto s = partition_sizes(10, {30, 30, 40});
  EXPECT_EQ(s.query, 3u);
  EXPECT_EQ(s.evidence, 3u);
  EXPECT_EQ(s.hidden, 4u);

  const auto r = partition_sizes(16, {30, 30, 40});
  EXPECT_EQ(r.evidence, 4u);
  EXPECT_EQ(r.hidden, 6u);
  EXPECT_EQ(r.query, 6u);

  const auto t = partition_sizes(16, {50, 20, 30});
  EXPECT_EQ(t.evidence, 3u);
  EXPECT_EQ(t.hidden, 4u);
  EXPECT_EQ(t.query, 9u);

  const auto u = partition_sizes(2, {0, 50, 50});
  EXPECT_EQ(u.query, 1u);
  EXPECT_EQ(u.query + u.evidence + u.hidden, 2u);
}

TEST(Generate, F1HalfAndHalf) {
  const Circuit f1 = fixture("f1.pc");
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const MmapInstance inst = generate_instance(f1, {50, 50, 0}, seed);
    ASSERT_EQ(inst.query.size(), 1u);
    ASSERT_EQ(inst.evidence.size(), 1u);
    EXPECT_NE(inst.query[0], inst.evidence[0].var);
    EXPECT_NO_THROW(condition(f1, inst.evidence_assignment(2)));
  }
}

TEST(Generate, SameSeedSameBytes) {
  const Circuit c = fixture("rand16.pc");
  auto bytes = [&](std::uint64_t seed) {
    std::ostringstream out;
    write_instance(out, generate_instance(c, {30, 30, 40}, seed));
    return out.str();
  };
  EXPECT_EQ(bytes(7), bytes(7));
  EXPECT_NE(bytes(7), bytes(8));
}

TEST(Generate, EvidenceAlwaysPossible) {
  for (std::size_t i = 0; i < 100; ++i) {
    const auto cs = testing::corpus_case(i);
    EXPECT_GT(evaluate_marginal(cs.circuit, cs.instance.evidence), 0.0);
    EXPECT_NO_THROW(cs.instance.validate(cs.circuit.num_vars()));
  }
}

TEST(Sample, MatchesDistribution) {
  // Empirical frequencies of F1 worlds against the exact joint.
  const Circuit f1 = fixture("f1.pc");
  std::mt19937_64 rng(11);
  std::map<std::pair<bool, bool>, int> counts;
  const int n = 40000;
  for (int i = 0; i < n; ++i) {
    const Assignment x = sample_assignment(f1, rng);
    ++counts[{*x.get(0), *x.get(1)}];
  }
  const std::map<std::pair<bool, bool>, double> exact{
      {{true, true}, 0.42}, {{true, false}, 0.18}, {{false, true}, 0.08}, {{false, false}, 0.32}};
  for (const auto& [world, p] : exact) {
    // Five standard deviations of a binomial proportion.
    EXPECT_NEAR(counts[world] / static_cast<double>(n), p, 5 * std::sqrt(p * (1 - p) / n));
  }
}

TEST(RandomCircuit, SmoothDecomposableFullScope) {
  for (std::size_t vars : {1, 2, 5, 9, 12}) {
    for (std::size_t depth : {0, 2, 4, 6}) {
      RandomCircuitOptions opt;
      opt.num_vars = vars;
      opt.depth = depth;
      const Circuit c = random_circuit(opt, vars * 100 + depth);
      EXPECT_TRUE(check_smooth(c).ok);
      EXPECT_TRUE(check_decomposable(c).ok);
      EXPECT_EQ(c.scope(c.root()).size(), vars);
      EXPECT_NEAR(evaluate_marginal(c, Assignment(vars)), 1.0, 1e-12);
    }
  }
  EXPECT_THROW(random_circuit(RandomCircuitOptions{.num_vars = 0}, 1), std::invalid_argument);
}

TEST(RandomCircuit, CorpusMixesSumKinds) {
  // The corpus must exercise both deterministic and plain mixtures.
  std::size_t marked = 0;
  std::size_t unmarked = 0;
  for (std::size_t i = 0; i < 50; ++i) {
    const auto cs = testing::corpus_case(i);
    const QDetMap map = detect_q_deterministic(cs.conditioned, cs.instance.query);
    for (NodeId id = 0; id < cs.conditioned.size(); ++id) {
      if (cs.conditioned.node(id).is_sum() && cs.conditioned.node(id).children.size() > 1) {
        (map[id] ? marked : unmarked)++;
      }
    }
  }
  EXPECT_GT(marked, 50u);
  EXPECT_GT(unmarked, 50u);
}

}  // namespace
}  // namespace pcmmap
