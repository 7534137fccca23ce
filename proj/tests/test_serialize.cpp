#include <gtest/gtest.h>

#include <random>

#include "nomoforge/errors.hpp"
#include "nomoforge/reader.hpp"
#include "nomoforge/serialize.hpp"
#include "support.hpp"

using namespace nomoforge;
using nomoforge::testing::golden_cases;
using nomoforge::testing::load_fixture;
using nomoforge::testing::random_instance;
using nomoforge::testing::render_case;

TEST(Serialize, RulesRoundTrip) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const auto inst = random_instance(1 + trial % 5, rng);
    const auto rules = derive_rules(inst.combos, inst.outputs, inst.ranking);
    const auto back = rules_from_json(json::parse(to_json(rules).dump()));
    EXPECT_EQ(back.space, rules.space);
    EXPECT_EQ(back.positive, rules.positive);
    EXPECT_EQ(back.negative, rules.negative);
    EXPECT_EQ(back.threshold, rules.threshold);
    EXPECT_EQ(back.ranking, rules.ranking);
  }
}

TEST(Serialize, RulesDocumentShape) {
  const auto loaded = load_fixture({"handtrace"});
  const auto rules = derive_rules(*loaded.combos, loaded.outputs, max_explainability(*loaded.shap));
  const auto j = to_json(rules);
  EXPECT_EQ(j["threshold"], 0.5);
  EXPECT_EQ(j["features"][0]["levels"], json::array({"0", "1"}));
  EXPECT_EQ(j["positive"][0]["iteration"], 1);
  EXPECT_EQ(j["positive"][0]["assignments"][0], json({{"feature", "A"}, {"level", "1"}}));
  EXPECT_EQ(j["negative"][0]["assignments"].size(), 2u);
}

TEST(Serialize, MalformedRulesAreParseErrors) {
  for (const char* doc : {R"({})", R"({"threshold":0.5,"features":[],"ranking":[],"positive":[],"negative":[]})",
                          R"({"threshold":0.5,"features":[{"name":"A","type":"categorical","levels":["0","1"]}],
                             "ranking":[{"feature":"A","score":1}],
                             "positive":[{"iteration":1,"assignments":[{"feature":"Z","level":"1"}]}],
                             "negative":[]})"}) {
    try {
      rules_from_json(json::parse(doc));
      ADD_FAILURE() << doc;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ParseError);
    }
  }
}

TEST(Serialize, SpaceRoundTrip) {
  const auto loaded = load_fixture({"mixed"});
  EXPECT_EQ(space_from_json(to_json(loaded.space())), loaded.space());
}

TEST(Serialize, LayoutReferencesResolve) {
  for (const auto& c : golden_cases()) {
    const auto j = to_json(render_case(c).layout);
    EXPECT_EQ(j["type"], type_number(render_case(c).kind));
    const auto rows = j["rows"].size();
    for (const auto& panel : j["panels"]) {
      for (const auto& e : panel["elements"]) {
        if (e.contains("row") && e["row"].get<int>() >= 0) EXPECT_LT(e["row"].get<std::size_t>(), rows);
        if (e["type"] == "tile" && e["column"].get<int>() >= 0 && !j["columns"].empty()) {
          EXPECT_LT(e["column"].get<std::size_t>(), j["columns"].size());
        }
      }
    }
  }
}

TEST(Serialize, TraceDocument) {
  const auto loaded = load_fixture({"mixed"});
  const auto trace = read_tabular(*loaded.combos, loaded.outputs, {16.4, "1", "0"});
  const auto j = to_json(trace, loaded.space());
  EXPECT_EQ(j["matched"]["row"], *trace.row);
  EXPECT_EQ(j["result"], *trace.output);
  EXPECT_EQ(j["snap_delta"], 0.4);
  EXPECT_EQ(j["steps"][0]["key"], "snap");
}
