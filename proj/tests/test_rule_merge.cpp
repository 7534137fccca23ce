#include <gtest/gtest.h>

#include <random>

#include "nomoforge/errors.hpp"
#include "nomoforge/rule_merge.hpp"
#include "support.hpp"

using namespace nomoforge;
using nomoforge::testing::binary_space;
using nomoforge::testing::check_rule_invariants;
using nomoforge::testing::make_ranking;
using nomoforge::testing::random_instance;
using nomoforge::testing::rule_set;

namespace {

// Features A (index 0) and B (index 1); expand_grid order is 00, 01, 10, 11.
struct TwoFeatures {
  FeatureSpace space{{FeatureSpec::categorical("A", "0", "1"), FeatureSpec::categorical("B", "0", "1")}};
  CombinationTable combos = expand_grid(space);
  PredictorRanking ranking = make_ranking(space, {0.3, 0.1});

  OutputVector outputs(double y00, double y01, double y10, double y11) const {
    return {OutputKind::Probability, {y00, y01, y10, y11}};
  }
};

Rule rule(std::vector<Assignment> a, Polarity p) {
  const int s = static_cast<int>(a.size());
  return {std::move(a), p, s};
}

constexpr std::size_t A = 0, B = 1;

}  // namespace

TEST(DeriveRules, HandTrace) {
  TwoFeatures t;
  const auto out = t.outputs(0.2, 0.7, 0.8, 0.9);
  const auto rules = derive_rules(t.combos, out, t.ranking, 0.5);
  const std::vector<Rule> positive = {rule({{A, 1}}, Polarity::Positive), rule({{A, 0}, {B, 1}}, Polarity::Positive)};
  const std::vector<Rule> negative = {rule({{B, 0}, {A, 0}}, Polarity::Negative)};
  EXPECT_EQ(rules.positive, positive);
  EXPECT_EQ(rules.negative, negative);
  EXPECT_EQ(rule_set(derive_rules_oracle(t.combos, out, t.ranking, 0.5)), rule_set(rules));
}

TEST(DeriveRules, AllPositive) {
  TwoFeatures t;
  const auto rules = derive_rules(t.combos, t.outputs(0.6, 0.7, 0.8, 0.9), t.ranking, 0.5);
  const std::vector<Rule> positive = {rule({{A, 1}}, Polarity::Positive), rule({{A, 0}}, Polarity::Positive)};
  EXPECT_EQ(rules.positive, positive);
  EXPECT_TRUE(rules.negative.empty());
}

TEST(DeriveRules, AllNegativeUsesAscendingOrder) {
  TwoFeatures t;
  const auto rules = derive_rules(t.combos, t.outputs(0.1, 0.2, 0.3, 0.4), t.ranking, 0.5);
  const std::vector<Rule> negative = {rule({{B, 1}}, Polarity::Negative), rule({{B, 0}}, Polarity::Negative)};
  EXPECT_TRUE(rules.positive.empty());
  EXPECT_EQ(rules.negative, negative);
}

TEST(DeriveRules, SingleFeature) {
  const auto space = binary_space(1, "A");
  const auto combos = expand_grid(space);
  const OutputVector out{OutputKind::Probability, {0.2, 0.9}};
  const auto ranking = make_ranking(space, {1.0});
  for (const auto& rules : {derive_rules(combos, out, ranking), derive_rules_oracle(combos, out, ranking)}) {
    ASSERT_EQ(rules.positive.size(), 1u);
    ASSERT_EQ(rules.negative.size(), 1u);
    EXPECT_EQ(rules.positive[0].assignments, (std::vector<Assignment>{{0, 1}}));
    EXPECT_EQ(rules.negative[0].assignments, (std::vector<Assignment>{{0, 0}}));
  }
}

TEST(DeriveRules, OutputEqualToThresholdIsPositive) {
  TwoFeatures t;
  const auto out = t.outputs(0.5, 0.5, 0.5, 0.5);
  const auto rules = derive_rules(t.combos, out, t.ranking, 0.5);
  EXPECT_EQ(rules.positive.size(), 2u);
  EXPECT_TRUE(rules.negative.empty());
  EXPECT_EQ(rule_set(derive_rules_oracle(t.combos, out, t.ranking, 0.5)), rule_set(rules));
}

TEST(DeriveRules, Preconditions) {
  TwoFeatures t;
  auto code = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::IoError;
  };
  const auto out = t.outputs(0.2, 0.7, 0.8, 0.9);
  EXPECT_EQ(code([&] { derive_rules(t.combos, {OutputKind::Estimate, out.values}, t.ranking); }),
            ErrorCode::KindMismatch);
  EXPECT_EQ(code([&] { derive_rules(t.combos, out, t.ranking, 1.0); }), ErrorCode::InvalidInput);

  auto features = t.space.features();
  features.push_back(FeatureSpec::numeric("n", 0, 1, 1));
  const auto mixed = expand_grid(FeatureSpace(features));
  EXPECT_EQ(code([&] {
              derive_rules(mixed, {OutputKind::Probability, std::vector<double>(mixed.size(), 0.5)},
                           make_ranking(mixed.space(), {1, 2, 3}));
            }),
            ErrorCode::UnsupportedKind);

  CombinationTable partial(t.space, {{"0", "0"}, {"0", "1"}, {"1", "0"}});
  EXPECT_EQ(code([&] { derive_rules(partial, {OutputKind::Probability, {0.1, 0.2, 0.3}}, t.ranking); }),
            ErrorCode::InvalidInput);
}

TEST(DeriveRules, MatchesOracleAndInvariantsOnRandomInstances) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const auto inst = random_instance(1 + trial % 6, rng);
    const auto rules = derive_rules(inst.combos, inst.outputs, inst.ranking);
    const auto oracle = derive_rules_oracle(inst.combos, inst.outputs, inst.ranking);
    ASSERT_EQ(rule_set(rules), rule_set(oracle)) << "trial " << trial;
    const auto violation = check_rule_invariants(inst.combos, inst.outputs, rules);
    ASSERT_FALSE(violation) << "trial " << trial << ": " << *violation;
  }
}

TEST(DeriveRules, RowOrderDoesNotMatter) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    const auto inst = random_instance(4, rng);
    std::vector<std::size_t> perm(inst.combos.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Row> rows;
    OutputVector out{OutputKind::Probability, {}};
    for (auto i : perm) {
      rows.push_back(inst.combos[i]);
      out.values.push_back(inst.outputs.values[i]);
    }
    const auto a = derive_rules(inst.combos, inst.outputs, inst.ranking);
    const auto b = derive_rules(CombinationTable(inst.combos.space(), rows), out, inst.ranking);
    EXPECT_EQ(a.positive, b.positive);
    EXPECT_EQ(a.negative, b.negative);
  }
}

TEST(MatchRule, Examples) {
  TwoFeatures t;
  const auto rules = derive_rules(t.combos, t.outputs(0.2, 0.7, 0.8, 0.9), t.ranking);
  const auto m1 = match_rule(rules, {"1", "0"});
  EXPECT_EQ(m1.polarity, Polarity::Positive);
  EXPECT_EQ(describe(*m1.rule, t.space), "[A=1]");
  const auto m2 = match_rule(rules, {"0", "0"});
  EXPECT_EQ(m2.polarity, Polarity::Negative);
  EXPECT_EQ(describe(*m2.rule, t.space), "[B=0, A=0]");

  const auto space = binary_space(1, "A");
  const auto single = derive_rules(expand_grid(space), {OutputKind::Probability, {0.2, 0.9}}, make_ranking(space, {1}));
  const auto m3 = match_rule(single, {"0"});
  EXPECT_EQ(m3.polarity, Polarity::Negative);
  EXPECT_EQ(m3.rule->assignments, (std::vector<Assignment>{{0, 0}}));
}

TEST(MatchRule, BrokenPartitionIsReported) {
  TwoFeatures t;
  auto rules = derive_rules(t.combos, t.outputs(0.2, 0.7, 0.8, 0.9), t.ranking);
  rules.negative.clear();
  try {
    match_rule(rules, {"0", "0"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PartitionViolation);
  }
}
