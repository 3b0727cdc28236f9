#include <gtest/gtest.h>

#include "support.hpp"

using namespace specstruct;
namespace ts = testsupport;

namespace {

EvalVector vec(std::vector<std::uint32_t> v) { return EvalVector::from_most_significant(std::move(v)); }

}  // namespace

TEST(EvalVector, LexicographicHighestRankFirst) {
  EXPECT_GT(vec({1, 0, 0}), vec({0, 5, 5}));
  EXPECT_LT(vec({1, 0, 2}), vec({1, 1, 0}));
  EXPECT_EQ(w_compare(vec({0, 1}), vec({0, 1})), std::strong_ordering::equal);
  EXPECT_THROW(w_compare(vec({1}), vec({1, 0})), RankMismatch);
  EXPECT_EQ(vec({1, 0, 2}).to_string(), "[1,0,2]");
  EXPECT_STREQ(ordering_name(w_compare(vec({1}), vec({0}))), "Greater");
}

TEST(Evaluator, Road6Values) {
  const RankPartition rp = require_rank_partition(ts::load({"road6.structure"}).structure("road6"));
  EXPECT_EQ(rp.rank_count(), 3u);
  EXPECT_EQ(w_evaluate(rp, PropertySet{"S", "ND", "FE"}), vec({1, 1, 1}));
  EXPECT_EQ(w_evaluate(rp, PropertySet{"S", "Cf", "C"}), vec({1, 0, 2}));
  EXPECT_EQ(w_evaluate(rp, Mask{0}), vec({0, 0, 0}));
  EXPECT_THROW(w_evaluate(rp, PropertySet{"nope"}), UnknownElement);
}

TEST(Evaluator, GradedPairBothEvaluable) {
  auto ws = ts::load({"graded_pair.structure"});
  EXPECT_TRUE(is_consistently_evaluable(ws.structure("diamond")));
  const auto rp = require_rank_partition(ws.structure("skewed"));
  EXPECT_EQ(rp.rank_count(), 3u);
  EXPECT_EQ(rp.rank_of(PropertyId("u")), 2u);
  EXPECT_EQ(rp.rank_of(PropertyId("x")), 0u);
}

TEST(Evaluator, CounterexamplesNamed) {
  auto ws = ts::load({"counterexamples.structure"});
  auto iso = rank_partition(ws.structure("isolated"));
  ASSERT_TRUE(std::holds_alternative<NotEvaluable>(iso));
  EXPECT_EQ(std::get<NotEvaluable>(iso).witness, PropertyId("x"));
  EXPECT_THROW(require_rank_partition(ws.structure("hanging")), NotEvaluableError);
}

TEST(Evaluator, HangingPosetValuationsFailRequirementFive) {
  // Both order-respecting choices for p fail, for different reasons.
  const Poset p = ts::load({"counterexamples.structure"}).structure("hanging");
  const std::size_t a = *p.index_of("a"), b = *p.index_of("b"), c = *p.index_of("c"), q = *p.index_of("p");
  for (double pv : {0.0, 1.0}) {
    std::vector<double> s(4);
    s[a] = 0, s[b] = 1, s[c] = 2, s[q] = pv;
    auto f = EvaluatorTable::from_function(p, [&](Mask m) {
      double t = 0;
      for_each_bit(m, [&](std::size_t i) { t += s[i]; });
      return t;
    });
    auto v = check_requirement(f, 5);
    ASSERT_TRUE(v.has_value()) << pv;
    EXPECT_EQ(v->requirement, 5);
  }
}

TEST(Evaluator, DecimalIsMixedRadix) {
  const RankPartition rp = require_rank_partition(ts::load({"chain.structure"}).structure("chain3"));
  EXPECT_EQ(w_decimal(rp, vec({1, 1, 0})), 6u);
  EXPECT_EQ(w_decimal(rp, vec({1, 0, 1})), 5u);
}

TEST(Evaluator, PowersetOrderGroupsEqualValues) {
  const RankPartition rp = require_rank_partition(build_poset({"a", "b"}, {}));
  const auto classes = powerset_order(rp);
  ASSERT_EQ(classes.size(), 3u);
  EXPECT_EQ(classes[1].members, (std::vector<PropertySet>{{"a"}, {"b"}}));
  std::vector<PropertyId> many;
  for (int i = 0; i < 13; ++i) many.emplace_back("p" + std::to_string(i));
  EXPECT_THROW(powerset_order(require_rank_partition(build_poset(many, {}))), TooLarge);
}

TEST(Evaluator, CanonicalizeDropsSkippingCover) {
  const Poset right = ts::load({"graded_pair.structure"}).structure("skewed");
  const Poset c = canonicalize(right);
  EXPECT_TRUE(is_graded(c));
  EXPECT_FALSE(c.covered_by(*c.index_of("x"), *c.index_of("u")));
  EXPECT_EQ(c.covers().size(), 4u);
}

TEST(Evaluator, ExhaustiveSearchAgreesOnFixtures) {
  auto ws = ts::load_all();
  for (const auto& [name, p] : ws.structures) {
    if (p.size() > 8) continue;
    const auto parts = exhaustive_rank_partitions(p);
    EXPECT_EQ(parts.empty(), !is_consistently_evaluable(p)) << name;
    if (!parts.empty()) {
      EXPECT_EQ(parts.size(), 1u) << name;
    }
  }
}

TEST(EvaluatorTable, PartialTablesAndBounds) {
  const Poset p = build_poset({"a", "b"}, {{"a", "b"}});
  EvaluatorTable t(p);
  t.set(Mask{0}, 0);
  EXPECT_FALSE(t.has(Mask{1}));
  EXPECT_THROW(t.at(Mask{1}), PartialTable);
  EXPECT_THROW(check_requirement(t, 1), PartialTable);
  std::vector<PropertyId> many;
  for (int i = 0; i < 11; ++i) many.emplace_back("p" + std::to_string(i));
  const Poset big = build_poset(many, {});
  auto f = EvaluatorTable::from_function(big, [](Mask m) { return double(std::popcount(m)); });
  EXPECT_THROW(verify_consistent_evaluator(big, f), TooLarge);
}

TEST(EvaluatorTable, VerifierNamesRequirement) {
  const Poset p = build_poset({"a", "b"}, {{"a", "b"}});
  const RankPartition rp = require_rank_partition(p);
  EXPECT_FALSE(verify_consistent_evaluator(p, w_table(rp)).has_value());
  // Constant table: empty set not strictly worst.
  auto flat = EvaluatorTable::from_function(p, [](Mask) { return 1.0; });
  EXPECT_EQ(verify_consistent_evaluator(p, flat)->requirement, 1);
  // Order reversed on singletons.
  auto reversed = EvaluatorTable::from_function(p, [&](Mask m) {
    return (m & bit(*p.index_of("a")) ? 2.0 : 0.0) + (m & bit(*p.index_of("b")) ? 1.0 : 0.0);
  });
  auto v = verify_consistent_evaluator(p, reversed);
  ASSERT_TRUE(v);
  EXPECT_GE(v->requirement, 3);
}
