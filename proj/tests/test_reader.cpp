#include <gtest/gtest.h>

#include <random>

#include "nomoforge/errors.hpp"
#include "nomoforge/reader.hpp"
#include "support.hpp"

using namespace nomoforge;
using nomoforge::testing::FixtureSpec;
using nomoforge::testing::load_fixture;
using nomoforge::testing::make_ranking;
using nomoforge::testing::random_instance;

namespace {

RuleList handtrace_rules() {
  const auto loaded = load_fixture({"handtrace"});
  return derive_rules(*loaded.combos, loaded.outputs, max_explainability(*loaded.shap));
}

}  // namespace

TEST(ReadType1, HandTraceSamples) {
  const auto rules = handtrace_rules();
  const auto a = read_type1(rules, {"1", "0"});
  EXPECT_EQ(*a.polarity, Polarity::Positive);
  EXPECT_EQ(describe(*a.rule, rules.space), "[A=1]");
  EXPECT_EQ(a.rule->iteration, 1);
  EXPECT_EQ(a.steps.front().key, "1");
  EXPECT_EQ(a.steps.back().key, "2a");

  const auto b = read_type1(rules, {"0", "0"});
  EXPECT_EQ(*b.polarity, Polarity::Negative);
  EXPECT_EQ(describe(*b.rule, rules.space), "[B=0, A=0]");

  const auto c = read_type1(rules, {"0", "1"});
  EXPECT_EQ(*c.polarity, Polarity::Positive);
  EXPECT_EQ(describe(*c.rule, rules.space), "[A=0, B=1]");
}

TEST(ReadType1, NoPositivePredictorGoesStraightToTheNegativeScan) {
  const auto rules = handtrace_rules();
  const auto trace = read_type1(rules, {"0", "0"});
  ASSERT_GE(trace.steps.size(), 2u);
  EXPECT_EQ(trace.steps[0].key, "1");
  EXPECT_EQ(trace.steps[0].focus_kind, FocusKind::Iteration);
  for (const auto& step : trace.steps) EXPECT_NE(step.focus, "positive:0");
}

TEST(ReadType1, AgreesWithMatchRuleAndTheThresholdEverywhere) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const auto inst = random_instance(1 + trial % 6, rng);
    const auto rules = derive_rules(inst.combos, inst.outputs, inst.ranking);
    for (std::size_t r = 0; r < inst.combos.size(); ++r) {
      const auto trace = read_type1(rules, inst.combos[r]);
      const auto match = match_rule(rules, inst.combos[r]);
      ASSERT_EQ(*trace.rule, *match.rule);
      ASSERT_EQ(*trace.polarity == Polarity::Positive, inst.outputs.values[r] >= rules.threshold);
      ASSERT_FALSE(trace.steps.empty());
    }
  }
}

TEST(ReadTabular, ReturnsEachRowsOwnOutput) {
  for (const FixtureSpec& spec : {FixtureSpec{"categorical"}, FixtureSpec{"mixed"},
                                  FixtureSpec{"mixed", "outputs_estimate.csv", true, OutputKind::Estimate}}) {
    const auto loaded = load_fixture(spec);
    for (std::size_t r = 0; r < loaded.combos->size(); ++r) {
      const auto trace = read_tabular(*loaded.combos, loaded.outputs, (*loaded.combos)[r]);
      EXPECT_EQ(*trace.row, r);
      EXPECT_EQ(*trace.output, loaded.outputs.values[r]);
      EXPECT_EQ(trace.steps.back().key, "lookup");
    }
  }
}

TEST(ReadTabular, SnapsToTheNearestGridPoint) {
  const auto loaded = load_fixture({"mixed"});
  const auto trace = read_tabular(*loaded.combos, loaded.outputs, {16.4, "1", "0"});
  const auto exact = read_tabular(*loaded.combos, loaded.outputs, {16.0, "1", "0"});
  EXPECT_EQ(trace.row, exact.row);
  EXPECT_DOUBLE_EQ(*trace.snap_delta, 0.4);
  EXPECT_EQ(trace.steps.front().key, "snap");
  // halfway snaps toward min
  const auto half = read_tabular(*loaded.combos, loaded.outputs, {16.5, "1", "0"});
  EXPECT_EQ(half.row, exact.row);
}

TEST(ReadTabular, OutOfRangeAndBadLevels) {
  const auto loaded = load_fixture({"mixed"});
  auto code = [&](const Row& sample) {
    try {
      read_tabular(*loaded.combos, loaded.outputs, sample);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::IoError;
  };
  EXPECT_EQ(code({99.0, "1", "0"}), ErrorCode::OutOfRange);
  EXPECT_EQ(code({14.0, "1", "0"}), ErrorCode::OutOfRange);
  EXPECT_EQ(code({16.0, "2", "0"}), ErrorCode::InvalidInput);
}

TEST(ParseSample, BuildsTypedRows) {
  const auto loaded = load_fixture({"mixed"});
  const auto row = parse_sample(loaded.space(), {{"qsec", "16.4"}, {"cyl.6", "1"}, {"vs.1", "0"}});
  EXPECT_EQ(row, (Row{16.4, "1", "0"}));
  EXPECT_THROW(parse_sample(loaded.space(), {{"qsec", "16"}, {"cyl.6", "1"}}), Error);
  EXPECT_THROW(parse_sample(loaded.space(), {{"qsec", "16"}, {"cyl.6", "1"}, {"vs.1", "0"}, {"hp", "1"}}), Error);
  EXPECT_THROW(parse_sample(loaded.space(), {{"qsec", "fast"}, {"cyl.6", "1"}, {"vs.1", "0"}}), Error);
}
