#include "nomoforge/explainability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "nomoforge/errors.hpp"
#include "nomoforge/regression.hpp"

namespace nomoforge {

double PredictorRanking::score(std::string_view feature) const {
  for (const auto& e : entries) {
    if (e.feature == feature) return e.score;
  }
  throw Error(ErrorCode::InvalidInput, "no ranking entry for '" + std::string(feature) + "'");
}

PredictorRanking max_explainability(const ExplainabilityTable& shap, bool absolute) {
  if (shap.values.empty()) throw Error(ErrorCode::InvalidInput, "explainability table has no rows");
  PredictorRanking ranking;
  for (std::size_t c = 0; c < shap.columns.size(); ++c) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& row : shap.values) best = std::max(best, absolute ? std::fabs(row.at(c)) : row.at(c));
    ranking.entries.push_back({shap.columns[c], best});
  }
  return ranking;
}

std::vector<double> predictor_column(const CombinationTable& combos, std::size_t feature) {
  const auto& spec = combos.space()[feature];
  std::vector<double> x;
  x.reserve(combos.size());
  for (const auto& row : combos.rows()) {
    if (spec.is_categorical()) {
      x.push_back(spec.level_index(std::get<std::string>(row[feature])).value_or(0) == 1 ? 1.0 : 0.0);
    } else {
      x.push_back(std::get<double>(row[feature]));
    }
  }
  return x;
}

PredictorRanking fallback_explainability(const CombinationTable& combos, const OutputVector& outputs,
                                         double threshold) {
  if (outputs.values.size() != combos.size()) {
    throw Error(ErrorCode::InvalidInput, "outputs are not aligned with the combination table");
  }
  const auto& space = combos.space();
  PredictorRanking ranking;

  std::vector<double> y = outputs.values;
  if (outputs.kind == OutputKind::Probability) {
    for (auto& v : y) v = v >= threshold ? 1.0 : 0.0;
  }

  for (std::size_t f = 0; f < space.size(); ++f) {
    const auto x = predictor_column(combos, f);
    const std::string& name = space[f].name;
    double score = 0.0;
    if (outputs.kind == OutputKind::Probability) {
      const auto result = fit_logistic_corrected(x, y);
      if (result.fit.degenerate) {
        ranking.warnings.push_back({FindingCode::DegenerateFit,
                                    "feature '" + name + "' has zero variance; score set to 0", {}, {name}});
      } else {
        score = std::exp(result.fit.slope + kWaldZ95 * result.fit.slope_se);
        if (result.corrected) {
          ranking.warnings.push_back(
              {FindingCode::DegenerateFit,
               "feature '" + name + "' separates the classes; Haldane-Anscombe correction applied", {},
               {name}});
        }
      }
    } else {
      const auto fit = fit_ols(x, y);
      if (fit.degenerate) {
        ranking.warnings.push_back({FindingCode::DegenerateFit,
                                    "feature '" + name + "' has zero variance; score set to 0", {}, {name}});
      } else {
        score = fit.slope + kWaldZ95 * fit.slope_se;
      }
    }
    ranking.entries.push_back({name, score});
  }
  return ranking;
}

std::vector<std::string> rank_predictors(const PredictorRanking& ranking, RankDirection direction) {
  std::vector<std::size_t> idx(ranking.entries.size());
  std::iota(idx.begin(), idx.end(), 0);
  const auto& e = ranking.entries;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (e[a].score != e[b].score) {
      return direction == RankDirection::Descending ? e[a].score > e[b].score : e[a].score < e[b].score;
    }
    return a < b;
  });
  std::vector<std::string> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(e[i].feature);
  return out;
}

}  // namespace nomoforge
