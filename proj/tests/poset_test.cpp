#include <gtest/gtest.h>

#include "support.hpp"

using namespace specstruct;
namespace ts = testsupport;

namespace {

Poset road6() { return ts::load({"road6.structure"}).structure("road6"); }

}  // namespace

TEST(PropertyId, RejectsMalformedTokens) {
  EXPECT_THROW(PropertyId(""), InvalidIdentifier);
  EXPECT_THROW(PropertyId("a b"), InvalidIdentifier);
  EXPECT_THROW(PropertyId("a,b"), InvalidIdentifier);
  EXPECT_THROW(PropertyId("a#b"), InvalidIdentifier);
  EXPECT_EQ(PropertyId("safety").str(), "safety");
}

TEST(Poset, BuildNormalisesToCovers) {
  const Poset p = build_poset({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}, {"a", "c"}});
  const std::vector<Relation> covers = {{"a", "b"}, {"b", "c"}};
  EXPECT_EQ(p.covers(), covers);
  EXPECT_TRUE(leq(p, "a", "c"));
  EXPECT_TRUE(leq(p, "a", "a"));
  EXPECT_FALSE(leq(p, "c", "a"));
}

TEST(Poset, ConstructionErrors) {
  EXPECT_THROW(build_poset({}, {}), EmptyPoset);
  EXPECT_THROW(build_poset({"a", "a"}, {}), DuplicateNode);
  EXPECT_THROW(build_poset({"a"}, {{"a", "z"}}), UnknownElement);
  EXPECT_THROW(build_poset({"a", "b"}, {{"a", "b"}, {"b", "a"}}), CycleError);
  EXPECT_THROW(build_poset({"a"}, {{"a", "a"}}), CycleError);
  std::vector<PropertyId> many;
  for (int i = 0; i < 65; ++i) many.emplace_back("p" + std::to_string(i));
  EXPECT_THROW(build_poset(many, {}), TooLarge);
}

TEST(Poset, Road6ChainsAndAntichains) {
  const Poset p = road6();
  const std::vector<Chain> chains = {
      {"C", "L", "S"}, {"Cf", "L", "S"}, {"Cf", "ND", "S"}, {"FE", "ND", "S"}};
  EXPECT_EQ(maximal_chains(p), chains);
  EXPECT_TRUE(is_graded(p));
  EXPECT_EQ(height(p), 3u);
  const auto ranks = rank_function(p);
  EXPECT_EQ(ranks.at("S"), 2u);
  EXPECT_EQ(ranks.at("ND"), 1u);
  EXPECT_EQ(ranks.at("L"), 1u);
  EXPECT_EQ(ranks.at("FE"), 0u);
  const auto antichains = maximal_antichains(p);
  EXPECT_NE(std::find(antichains.begin(), antichains.end(), Antichain{"C", "Cf", "FE"}), antichains.end());
  EXPECT_NE(std::find(antichains.begin(), antichains.end(), Antichain{"L", "ND"}), antichains.end());
  EXPECT_NE(std::find(antichains.begin(), antichains.end(), Antichain{"S"}), antichains.end());
}

TEST(Poset, UngradedRankFunctionThrows) {
  const Poset p = ts::load({"graded_pair.structure"}).structure("skewed");
  EXPECT_FALSE(is_graded(p));
  EXPECT_THROW(rank_indices(p), NotGraded);
}

TEST(Poset, SingleElementAndAntichain) {
  const Poset one = build_poset({"x"}, {});
  EXPECT_TRUE(is_graded(one));
  EXPECT_EQ(maximal_chains(one).size(), 1u);
  const Poset flat = build_poset({"x", "y", "z"}, {});
  EXPECT_TRUE(is_graded(flat));
  EXPECT_EQ(maximal_antichains(flat), std::vector<Antichain>{Antichain({"x", "y", "z"})});
}

TEST(Poset, EqualityIgnoresName) {
  EXPECT_EQ(build_poset({"a", "b"}, {{"a", "b"}}, "one"), build_poset({"b", "a"}, {{"a", "b"}}, "two"));
  EXPECT_FALSE(build_poset({"a", "b"}, {{"a", "b"}}) == build_poset({"a", "b"}, {}));
}
