#pragma once

#include <optional>
#include <string>

#include "nomoforge/explainability.hpp"
#include "nomoforge/layout.hpp"
#include "nomoforge/rule_merge.hpp"
#include "nomoforge/tabular_model.hpp"

namespace nomoforge {

struct NomogramOptions {
  bool probability = false;
  bool estimate = false;
  double threshold = kDefaultThreshold;
  /// Rank by max |explainability| instead of the signed maximum.
  bool absolute_explainability = false;
};

inline OutputKind output_kind_for(const NomogramOptions& options) {
  return options.estimate ? OutputKind::Estimate : OutputKind::Probability;
}

struct NomogramResult {
  NomogramKind kind = NomogramKind::CatBinNoProb;
  PredictorRanking ranking;
  bool fallback_ranking = false;
  std::optional<RuleList> rules;  // type 1 only
  NomogramLayout layout;
  std::string svg;
};

/// Ranks predictors (explainability maximum, or the regression fallback when
/// `shap` is null), merges rules for type 1, lays out and renders.
/// Inputs are expected to have passed validate_inputs.
NomogramResult create_nomogram(const CombinationTable& combos, const OutputVector& outputs,
                               const ExplainabilityTable* shap, const NomogramOptions& options);

}  // namespace nomoforge
