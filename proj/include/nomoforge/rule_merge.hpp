#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nomoforge/explainability.hpp"
#include "nomoforge/tabular_model.hpp"

namespace nomoforge {

enum class Polarity { Positive, Negative };

std::string_view to_string(Polarity polarity);

struct Assignment {
  std::size_t feature = 0;  // index into the feature space
  int level = 0;            // 1 positive level, 0 negative level

  bool operator==(const Assignment&) const = default;
  auto operator<=>(const Assignment&) const = default;
};

/// A prefix rule: assignments over the first `iteration` features of the
/// ranking order (descending for positive rules, ascending for negative ones).
struct Rule {
  std::vector<Assignment> assignments;
  Polarity polarity = Polarity::Positive;
  int iteration = 1;

  bool matches(const std::vector<int>& levels) const;
  bool operator==(const Rule&) const = default;
};

struct RuleList {
  FeatureSpace space;
  std::vector<Rule> positive;
  std::vector<Rule> negative;
  double threshold = 0.5;
  PredictorRanking ranking;

  std::size_t size() const { return positive.size() + negative.size(); }
};

inline constexpr double kDefaultThreshold = 0.5;

/// Merges the combination space into minimal positive and negative prefix
/// rules. Positive pass walks features by descending score and accepts a
/// prefix when every completion has output >= threshold; the negative pass
/// walks ascending scores and accepts when every completion is < threshold.
/// Prefixes extending an already accepted same-pass prefix are skipped.
RuleList derive_rules(const CombinationTable& combos, const OutputVector& outputs,
                      const PredictorRanking& ranking, double threshold = kDefaultThreshold);

/// Independent per-combination scan used to verify derive_rules. Intended for
/// small spaces (k <= 8).
RuleList derive_rules_oracle(const CombinationTable& combos, const OutputVector& outputs,
                             const PredictorRanking& ranking, double threshold = kDefaultThreshold);

struct RuleMatch {
  const Rule* rule = nullptr;
  Polarity polarity = Polarity::Positive;
  std::size_t index = 0;  // position within its polarity list
};

/// Level index (0/1) per feature for a fully categorical sample.
std::vector<int> sample_levels(const FeatureSpace& space, const Row& sample);

/// The unique rule satisfied by `sample`; Error(PartitionViolation) when zero
/// or several rules match.
RuleMatch match_rule(const RuleList& rules, const Row& sample);

std::string describe(const Rule& rule, const FeatureSpace& space);

}  // namespace nomoforge
