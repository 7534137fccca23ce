#pragma once

#include <nlohmann/json.hpp>

#include "nomoforge/explainability.hpp"
#include "nomoforge/layout.hpp"
#include "nomoforge/reader.hpp"
#include "nomoforge/rule_merge.hpp"
#include "nomoforge/tabular_model.hpp"

namespace nomoforge {

using nlohmann::json;

json to_json(const FeatureSpace& space);
FeatureSpace space_from_json(const json& j);

json to_json(const PredictorRanking& ranking);
PredictorRanking ranking_from_json(const json& j);

/// {"threshold", "features": [...], "ranking": [...],
///  "positive": [{"iteration", "assignments": [{"feature", "level"}]}], "negative": [...]}
json to_json(const RuleList& rules);
/// Throws Error(ParseError) on a malformed document.
RuleList rules_from_json(const json& j);

json to_json(const NomogramLayout& layout);
json to_json(const ReadTrace& trace, const FeatureSpace& space);
json to_json(const ValidationReport& report);
json to_json(const Finding& finding);

}  // namespace nomoforge
