#pragma once

#include <string>
#include <vector>

#include "nomoforge/tabular_model.hpp"

namespace nomoforge {

enum class RankDirection { Descending, Ascending };

struct RankingEntry {
  std::string feature;
  double score = 0.0;

  bool operator==(const RankingEntry&) const = default;
};

/// One score per feature, stored in feature-space order. Orders derived from it
/// are total: score, then declaration position, then name.
struct PredictorRanking {
  std::vector<RankingEntry> entries;
  std::vector<Finding> warnings;

  double score(std::string_view feature) const;
  bool operator==(const PredictorRanking& other) const { return entries == other.entries; }
};

/// Signed column maximum. `absolute` ranks by max |value| instead, for
/// explainability tables whose columns are mostly negative.
PredictorRanking max_explainability(const ExplainabilityTable& shap, bool absolute = false);

/// Univariate upper 95% Wald bound per feature: the odds ratio of the
/// thresholded class for probability outputs, the OLS slope for estimates.
PredictorRanking fallback_explainability(const CombinationTable& combos, const OutputVector& outputs,
                                         double threshold);

std::vector<std::string> rank_predictors(const PredictorRanking& ranking, RankDirection direction);

/// Predictor coded for the univariate fits: 1 for the positive level, 0 for the
/// negative one, raw value for a numeric feature.
std::vector<double> predictor_column(const CombinationTable& combos, std::size_t feature);

}  // namespace nomoforge
