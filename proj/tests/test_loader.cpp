#include <gtest/gtest.h>

#include "nomoforge/csv.hpp"
#include "nomoforge/errors.hpp"
#include "nomoforge/loader.hpp"
#include "support.hpp"

using namespace nomoforge;
using nomoforge::testing::FixtureSpec;
using nomoforge::testing::load_fixture;

TEST(Loader, FixturesLoadCleanly) {
  for (const char* name : {"handtrace", "categorical", "mixed"}) {
    const auto loaded = load_fixture({name});
    EXPECT_TRUE(loaded.ok()) << name;
  }
  const auto est = load_fixture({"mixed", "outputs_estimate.csv", true, OutputKind::Estimate});
  EXPECT_TRUE(est.ok());
}

TEST(Loader, ManifestDefinesLevelsAndNumericFeatures) {
  const auto loaded = load_fixture({"mixed"});
  ASSERT_TRUE(loaded.ok());
  const auto& space = loaded.space();
  ASSERT_EQ(space.size(), 3u);
  EXPECT_FALSE(space[0].is_categorical());
  EXPECT_EQ(space[0].range(), (NumericRange{15, 22, 1}));
  EXPECT_EQ(space[1].levels(), (CategoricalLevels{"0", "1"}));
  EXPECT_EQ(loaded.combos->size(), 32u);
}

TEST(Loader, ManifestLevelOrderIsNegativeThenPositive) {
  const InputTexts texts{"smoker\nno\nyes\n", "output\n0.2\n0.7\n", "feature,category\nsmoker,yes\nsmoker,no\n",
                         std::nullopt};
  const auto loaded = load_inputs(texts, {});
  ASSERT_TRUE(loaded.ok());
  EXPECT_EQ(loaded.space()[0].levels().positive, "no");
}

TEST(Loader, DuplicateFixtureIsReported) {
  const auto loaded = load_fixture({"duplicate", "outputs.csv", false});
  EXPECT_FALSE(loaded.ok());
  EXPECT_TRUE(loaded.report.has(FindingCode::DuplicateRow));
  EXPECT_TRUE(loaded.report.has(FindingCode::MissingCombination));
}

TEST(Loader, RejectsMalformedHeaders) {
  const auto bad_manifest = load_inputs({"A\n0\n1\n", "output\n0.1\n0.9\n", "name,kind\nA,0\n", std::nullopt}, {});
  EXPECT_TRUE(bad_manifest.report.has(FindingCode::ParseError));
  const auto bad_outputs = load_inputs({"A\n0\n1\n", "y\n0.1\n0.9\n", "feature,category\nA,0\n", std::nullopt}, {});
  EXPECT_TRUE(bad_outputs.report.has(FindingCode::ParseError));
  const auto stray = load_inputs({"A\n0\n1\n", "output\n0.1\n0.9\n", "feature,category\nA,0\nB,1\n", std::nullopt}, {});
  EXPECT_TRUE(stray.report.has(FindingCode::ColumnOrderMismatch));
  const auto three = load_inputs({"A\n0\n1\n2\n", "output\n0.1\n0.9\n0.5\n", "feature,category\nA,0\n", std::nullopt}, {});
  EXPECT_TRUE(three.report.has(FindingCode::NonBinaryCategorical));
}

TEST(Loader, MissingFileIsAnIoError) {
  try {
    read_input_files({"/nonexistent/features.csv", "/nonexistent/outputs.csv", "/nonexistent/manifest.csv", {}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoError);
  }
}

TEST(Loader, WritersRoundTripThroughTheLoader) {
  auto features = nomoforge::testing::binary_space(2).features();
  features.push_back(FeatureSpec::numeric("age", 20, 30, 2.5));
  const FeatureSpace space(features);
  const auto table = expand_grid(space);
  OutputVector outputs{OutputKind::Estimate, {}};
  for (std::size_t i = 0; i < table.size(); ++i) outputs.values.push_back(0.25 * static_cast<double>(i));

  const InputTexts texts{write_csv(to_csv(table)), write_csv(to_csv(outputs)), write_csv(manifest_csv(space)),
                         std::nullopt};
  const auto loaded = load_inputs(texts, {OutputKind::Estimate, std::nullopt, kDefaultGridCap});
  ASSERT_TRUE(loaded.ok());
  EXPECT_EQ(loaded.space(), space);
  EXPECT_EQ(*loaded.combos, table);
  EXPECT_EQ(loaded.outputs.values, outputs.values);
}
