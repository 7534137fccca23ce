#include <gtest/gtest.h>

#include <cstdlib>

#include "nomoforge/limits.hpp"

using namespace nomoforge;

TEST(Limits, TypeOneIsBoundByPredictorCount) {
  const LimitPolicy policy;
  EXPECT_TRUE(check_limits(policy, NomogramKind::CatBinNoProb, 15, 32768).empty());
  const auto over = check_limits(policy, NomogramKind::CatBinNoProb, 16, 65536);
  ASSERT_EQ(over.size(), 1u);
  EXPECT_EQ(over[0].code, FindingCode::LimitExceeded);
  EXPECT_NE(over[0].message.find("maximum 15"), std::string::npos);
}

TEST(Limits, OtherKindsBoundPredictorsAndCombinations) {
  const LimitPolicy policy;
  for (auto kind : {NomogramKind::CatBinProb, NomogramKind::CatCont, NomogramKind::MixedBinProb,
                    NomogramKind::MixedCont}) {
    EXPECT_TRUE(check_limits(policy, kind, 5, 3200).empty());
    EXPECT_EQ(check_limits(policy, kind, 6, 64).size(), 1u);
    EXPECT_EQ(check_limits(policy, kind, 3, 3201).size(), 1u);
    EXPECT_EQ(check_limits(policy, kind, 6, 3300).size(), 2u);
  }
}

TEST(Limits, CanBeDisabled) {
  LimitPolicy policy;
  policy.enabled = false;
  EXPECT_TRUE(check_limits(policy, NomogramKind::CatBinNoProb, 40, 1).empty());

  ::setenv("NOMOFORGE_LIMITS", "off", 1);
  EXPECT_FALSE(LimitPolicy::from_environment().enabled);
  ::setenv("NOMOFORGE_LIMITS", "on", 1);
  EXPECT_TRUE(LimitPolicy::from_environment().enabled);
  ::unsetenv("NOMOFORGE_LIMITS");
}
