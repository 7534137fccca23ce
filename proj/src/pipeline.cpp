#include "nomoforge/pipeline.hpp"

#include "nomoforge/errors.hpp"

namespace nomoforge {

NomogramResult create_nomogram(const CombinationTable& combos, const OutputVector& outputs,
                               const ExplainabilityTable* shap, const NomogramOptions& options) {
  NomogramResult result;
  result.kind = classify_kind(combos.space(), options.probability, options.estimate);
  if (outputs.kind != output_kind_for(options)) {
    throw Error(ErrorCode::KindMismatch, "outputs were loaded as the wrong kind for the requested nomogram");
  }
  if (shap) {
    result.ranking = max_explainability(*shap, options.absolute_explainability);
  } else {
    result.ranking = fallback_explainability(combos, outputs, options.threshold);
    result.fallback_ranking = true;
  }

  if (result.kind == NomogramKind::CatBinNoProb) {
    result.rules = derive_rules(combos, outputs, result.ranking, options.threshold);
    result.layout = layout_type1(*result.rules, result.ranking);
  } else {
    const std::optional<double> threshold =
        is_binary(result.kind) ? std::optional<double>(options.threshold) : std::nullopt;
    result.layout = layout_tabular(result.kind, combos, outputs, shap, result.ranking, threshold);
  }
  result.svg = render_svg(result.layout);
  return result;
}

}  // namespace nomoforge
