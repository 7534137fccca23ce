#include "nomoforge/tabular_model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "nomoforge/errors.hpp"
#include "nomoforge/format.hpp"

namespace nomoforge {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::GridTooLarge: return "GridTooLarge";
    case ErrorCode::UnsupportedKind: return "UnsupportedKind";
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::MissingExplainability: return "MissingExplainability";
    case ErrorCode::PartitionViolation: return "PartitionViolation";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

bool nearly_equal(double a, double b) {
  const double diff = std::fabs(a - b);
  if (diff <= 1e-12) return true;
  return diff <= 1e-9 * std::max(std::fabs(a), std::fabs(b));
}

// ---------------------------------------------------------------------------
// Feature definitions

std::size_t NumericRange::grid_size() const {
  // Slack absorbs decimal noise such as (22 - 15) / 0.1 = 69.99999.
  const double span = (max - min) / step;
  return static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
}

std::optional<std::size_t> NumericRange::grid_index(double value) const {
  if (!std::isfinite(value)) return std::nullopt;
  const double position = std::round((value - min) / step);
  if (position < 0.0) return std::nullopt;
  const auto index = static_cast<std::size_t>(position);
  if (index >= grid_size()) return std::nullopt;
  if (!nearly_equal(at(index), value)) return std::nullopt;
  return index;
}

FeatureSpec FeatureSpec::categorical(std::string name, std::string negative, std::string positive) {
  return FeatureSpec{std::move(name), CategoricalLevels{std::move(negative), std::move(positive)}};
}

FeatureSpec FeatureSpec::numeric(std::string name, double min, double max, double step) {
  return FeatureSpec{std::move(name), NumericRange{min, max, step}};
}

std::optional<int> FeatureSpec::level_index(std::string_view label) const {
  const auto& lv = levels();
  if (label == lv.positive) return 1;
  if (label == lv.negative) return 0;
  return std::nullopt;
}

const std::string& FeatureSpec::level_label(int index) const {
  return index == 1 ? levels().positive : levels().negative;
}

FeatureSpace::FeatureSpace(std::vector<FeatureSpec> features) : features_(std::move(features)) {
  std::set<std::string> seen;
  std::size_t categorical = 0;
  std::size_t numeric = 0;
  for (const auto& f : features_) {
    if (f.name.empty()) throw Error(ErrorCode::InvalidInput, "feature name must not be empty");
    if (!seen.insert(f.name).second) {
      throw Error(ErrorCode::InvalidInput, "duplicate feature name '" + f.name + "'");
    }
    if (f.is_categorical()) {
      ++categorical;
      if (f.levels().negative == f.levels().positive) {
        throw Error(ErrorCode::InvalidInput,
                    "categorical feature '" + f.name + "' needs two distinct levels");
      }
    } else {
      ++numeric;
      const auto& r = f.range();
      if (!std::isfinite(r.min) || !std::isfinite(r.max) || !(r.min <= r.max)) {
        throw Error(ErrorCode::InvalidInput, "numeric feature '" + f.name + "' needs min <= max");
      }
      if (!(r.step > 0.0) || !std::isfinite(r.step)) {
        throw Error(ErrorCode::InvalidInput, "numeric feature '" + f.name + "' needs step > 0");
      }
    }
  }
  if (categorical == 0) {
    throw Error(ErrorCode::InvalidInput, "at least one categorical feature is required");
  }
  if (numeric > 1) {
    throw Error(ErrorCode::InvalidInput, "at most one numeric feature is supported");
  }
}

std::optional<std::size_t> FeatureSpace::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < features_.size(); ++i) {
    if (features_[i].name == name) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> FeatureSpace::numeric_index() const {
  for (std::size_t i = 0; i < features_.size(); ++i) {
    if (!features_[i].is_categorical()) return i;
  }
  return std::nullopt;
}

std::size_t FeatureSpace::categorical_count() const {
  return static_cast<std::size_t>(
      std::count_if(features_.begin(), features_.end(), [](const auto& f) { return f.is_categorical(); }));
}

std::vector<std::string> FeatureSpace::names() const {
  std::vector<std::string> out;
  out.reserve(features_.size());
  for (const auto& f : features_) out.push_back(f.name);
  return out;
}

CombinationTable::CombinationTable(FeatureSpace space, std::vector<Row> rows)
    : space_(std::move(space)), rows_(std::move(rows)) {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i].size() != space_.size()) {
      throw Error(ErrorCode::InvalidInput, "row " + std::to_string(i) + " has " +
                                               std::to_string(rows_[i].size()) + " cells, expected " +
                                               std::to_string(space_.size()));
    }
  }
}

std::vector<double> ExplainabilityTable::column(std::size_t index) const {
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& row : values) out.push_back(row.at(index));
  return out;
}

// ---------------------------------------------------------------------------
// Kinds

std::string_view to_string(NomogramKind kind) {
  switch (kind) {
    case NomogramKind::CatBinNoProb: return "CatBinNoProb";
    case NomogramKind::CatBinProb: return "CatBinProb";
    case NomogramKind::CatCont: return "CatCont";
    case NomogramKind::MixedBinProb: return "MixedBinProb";
    case NomogramKind::MixedCont: return "MixedCont";
  }
  return "Unknown";
}

std::optional<NomogramKind> kind_from_string(std::string_view name) {
  for (auto k : {NomogramKind::CatBinNoProb, NomogramKind::CatBinProb, NomogramKind::CatCont,
                 NomogramKind::MixedBinProb, NomogramKind::MixedCont}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

int type_number(NomogramKind kind) { return static_cast<int>(kind) + 1; }

bool is_binary(NomogramKind kind) {
  return kind == NomogramKind::CatBinProb || kind == NomogramKind::MixedBinProb;
}

bool is_mixed(NomogramKind kind) {
  return kind == NomogramKind::MixedBinProb || kind == NomogramKind::MixedCont;
}

NomogramKind classify_kind(const FeatureSpace& space, bool wants_probability, bool wants_estimate) {
  if (wants_probability && wants_estimate) {
    throw Error(ErrorCode::InvalidInput, "probability and estimate outputs are mutually exclusive");
  }
  if (!space.numeric_index()) {
    if (wants_probability) return NomogramKind::CatBinProb;
    if (wants_estimate) return NomogramKind::CatCont;
    return NomogramKind::CatBinNoProb;
  }
  if (wants_probability) return NomogramKind::MixedBinProb;
  if (wants_estimate) return NomogramKind::MixedCont;
  throw Error(ErrorCode::UnsupportedKind,
              "rule merging needs categorical predictors only; pass a probability or estimate "
              "flag for a table with a numeric predictor");
}

std::string_view to_string(FindingCode code) {
  switch (code) {
    case FindingCode::DuplicateRow: return "DuplicateRow";
    case FindingCode::MissingCombination: return "MissingCombination";
    case FindingCode::ExtraCombination: return "ExtraCombination";
    case FindingCode::LengthMismatch: return "LengthMismatch";
    case FindingCode::ColumnOrderMismatch: return "ColumnOrderMismatch";
    case FindingCode::NonBinaryCategorical: return "NonBinaryCategorical";
    case FindingCode::NonGridNumeric: return "NonGridNumeric";
    case FindingCode::ProbabilityOutOfRange: return "ProbabilityOutOfRange";
    case FindingCode::GridTooLarge: return "GridTooLarge";
    case FindingCode::ParseError: return "ParseError";
    case FindingCode::LimitExceeded: return "LimitExceeded";
    case FindingCode::DegenerateFit: return "DegenerateFit";
  }
  return "Unknown";
}

bool ValidationReport::has(FindingCode code) const {
  return std::any_of(findings.begin(), findings.end(), [code](const auto& f) { return f.code == code; });
}

// ---------------------------------------------------------------------------
// Grid expansion

namespace {

std::size_t checked_grid_size(const FeatureSpace& space, std::size_t grid_cap) {
  std::size_t total = 1;
  for (const auto& f : space.features()) {
    if (f.is_categorical()) {
      total *= 2;
      continue;
    }
    const std::size_t n = f.range().grid_size();
    if (n > grid_cap) {
      throw Error(ErrorCode::GridTooLarge, "numeric feature '" + f.name + "' expands to " +
                                               std::to_string(n) + " grid points (cap " +
                                               std::to_string(grid_cap) + ")");
    }
    total *= n;
  }
  return total;
}

std::vector<std::size_t> radices(const FeatureSpace& space) {
  std::vector<std::size_t> out;
  for (const auto& f : space.features()) out.push_back(f.is_categorical() ? 2 : f.range().grid_size());
  return out;
}

std::string describe_key(const FeatureSpace& space, const std::vector<std::size_t>& digits) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i) os << ", ";
    const auto& f = space[i];
    os << f.name << '=';
    if (f.is_categorical()) {
      os << f.level_label(static_cast<int>(digits[i]));
    } else {
      os << format_number(f.range().at(digits[i]));
    }
  }
  os << ')';
  return os.str();
}

}  // namespace

CombinationTable expand_grid(const FeatureSpace& space, std::size_t grid_cap) {
  const std::size_t total = checked_grid_size(space, grid_cap);
  const auto radix = radices(space);
  std::vector<Row> rows;
  rows.reserve(total);
  std::vector<std::size_t> digits(space.size(), 0);
  for (std::size_t n = 0; n < total; ++n) {
    Row row;
    row.reserve(space.size());
    for (std::size_t i = 0; i < space.size(); ++i) {
      const auto& f = space[i];
      if (f.is_categorical()) {
        row.emplace_back(f.level_label(static_cast<int>(digits[i])));
      } else {
        row.emplace_back(f.range().at(digits[i]));
      }
    }
    rows.push_back(std::move(row));
    for (std::size_t i = space.size(); i-- > 0;) {
      if (++digits[i] < radix[i]) break;
      digits[i] = 0;
    }
  }
  return CombinationTable(space, std::move(rows));
}

// ---------------------------------------------------------------------------
// Validation

ValidationReport validate_inputs(const FeatureSpace& space, const CombinationTable& combos,
                                 const OutputVector& outputs, const ExplainabilityTable* shap,
                                 std::size_t grid_cap) {
  ValidationReport report;
  const auto names = space.names();

  if (combos.space().names() != names) {
    report.add({FindingCode::ColumnOrderMismatch,
                "combination table columns do not match the feature space", {}, combos.space().names()});
    return report;
  }

  const auto radix = radices(space);
  std::vector<std::vector<std::size_t>> bad_label_rows(space.size());
  std::vector<std::vector<std::size_t>> off_grid_rows(space.size());
  std::vector<std::size_t> extra_rows;
  // key -> rows carrying it
  std::map<std::size_t, std::vector<std::size_t>> seen;

  bool grid_ok = true;
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (!space[i].is_categorical() && radix[i] > grid_cap) {
      grid_ok = false;
      report.add({FindingCode::GridTooLarge,
                  "numeric feature '" + space[i].name + "' expands to " + std::to_string(radix[i]) +
                      " grid points (cap " + std::to_string(grid_cap) + ")",
                  {}, {space[i].name}});
    }
  }

  for (std::size_t r = 0; r < combos.size(); ++r) {
    const Row& row = combos[r];
    std::size_t key = 0;
    bool valid = true;
    for (std::size_t i = 0; i < space.size(); ++i) {
      const auto& f = space[i];
      std::size_t digit = 0;
      if (f.is_categorical()) {
        const auto* label = std::get_if<std::string>(&row[i]);
        const auto idx = label ? f.level_index(*label) : std::nullopt;
        if (!idx) {
          bad_label_rows[i].push_back(r);
          valid = false;
        } else {
          digit = static_cast<std::size_t>(*idx);
        }
      } else {
        const auto* value = std::get_if<double>(&row[i]);
        const auto idx = value ? f.range().grid_index(*value) : std::nullopt;
        if (!idx) {
          off_grid_rows[i].push_back(r);
          valid = false;
        } else {
          digit = *idx;
        }
      }
      key = key * radix[i] + digit;
    }
    if (valid) {
      seen[key].push_back(r);
    } else {
      extra_rows.push_back(r);
    }
  }

  for (std::size_t i = 0; i < space.size(); ++i) {
    if (!bad_label_rows[i].empty()) {
      const auto& lv = space[i].levels();
      report.add({FindingCode::NonBinaryCategorical,
                  "feature '" + space[i].name + "' has labels outside {" + lv.negative + ", " +
                      lv.positive + "} in " + std::to_string(bad_label_rows[i].size()) + " row(s)",
                  bad_label_rows[i], {space[i].name}});
    }
    if (!off_grid_rows[i].empty()) {
      const auto& rg = space[i].range();
      report.add({FindingCode::NonGridNumeric,
                  "feature '" + space[i].name + "' has values off the grid " + format_number(rg.min) +
                      ".." + format_number(rg.max) + " step " + format_number(rg.step) + " in " +
                      std::to_string(off_grid_rows[i].size()) + " row(s)",
                  off_grid_rows[i], {space[i].name}});
    }
  }
  if (!extra_rows.empty()) {
    report.add({FindingCode::ExtraCombination,
                std::to_string(extra_rows.size()) + " row(s) are not combinations of the feature space",
                extra_rows, {}});
  }

  std::vector<std::size_t> duplicate_rows;
  for (const auto& [key, rows] : seen) {
    if (rows.size() > 1) duplicate_rows.insert(duplicate_rows.end(), rows.begin(), rows.end());
  }
  if (!duplicate_rows.empty()) {
    std::sort(duplicate_rows.begin(), duplicate_rows.end());
    report.add({FindingCode::DuplicateRow,
                std::to_string(duplicate_rows.size()) + " row(s) repeat another combination",
                duplicate_rows, {}});
  }

  if (grid_ok) {
    std::size_t total = 1;
    for (auto r : radix) total *= r;
    std::size_t missing = 0;
    std::ostringstream examples;
    std::vector<std::size_t> digits(space.size(), 0);
    for (std::size_t key = 0; key < total; ++key) {
      if (!seen.contains(key)) {
        if (missing < 5) {
          std::size_t rest = key;
          for (std::size_t i = space.size(); i-- > 0;) {
            digits[i] = rest % radix[i];
            rest /= radix[i];
          }
          examples << (missing ? "; " : "") << describe_key(space, digits);
        }
        ++missing;
      }
    }
    if (missing > 0) {
      report.add({FindingCode::MissingCombination,
                  std::to_string(missing) + " combination(s) missing, e.g. " + examples.str(), {}, names});
    }
  }

  if (outputs.values.size() != combos.size()) {
    report.add({FindingCode::LengthMismatch,
                "outputs have " + std::to_string(outputs.values.size()) + " value(s) for " +
                    std::to_string(combos.size()) + " combination(s)",
                {}, {"output"}});
  }
  if (outputs.kind == OutputKind::Probability) {
    std::vector<std::size_t> bad;
    for (std::size_t i = 0; i < outputs.values.size(); ++i) {
      const double v = outputs.values[i];
      if (!(v >= 0.0 && v <= 1.0)) bad.push_back(i);
    }
    if (!bad.empty()) {
      report.add({FindingCode::ProbabilityOutOfRange,
                  std::to_string(bad.size()) + " probability output(s) outside [0, 1]", bad, {"output"}});
    }
  } else {
    std::vector<std::size_t> bad;
    for (std::size_t i = 0; i < outputs.values.size(); ++i) {
      if (!std::isfinite(outputs.values[i])) bad.push_back(i);
    }
    if (!bad.empty()) {
      report.add({FindingCode::ParseError, std::to_string(bad.size()) + " output(s) are not finite", bad,
                  {"output"}});
    }
  }

  if (shap) {
    if (shap->columns != names) {
      report.add({FindingCode::ColumnOrderMismatch,
                  "explainability columns must equal the feature columns in the same order", {},
                  shap->columns});
    }
    if (shap->row_count() != combos.size()) {
      report.add({FindingCode::LengthMismatch,
                  "explainability table has " + std::to_string(shap->row_count()) + " row(s) for " +
                      std::to_string(combos.size()) + " combination(s)",
                  {}, {}});
    }
    std::vector<std::size_t> ragged;
    for (std::size_t i = 0; i < shap->values.size(); ++i) {
      if (shap->values[i].size() != shap->columns.size()) ragged.push_back(i);
    }
    if (!ragged.empty()) {
      report.add({FindingCode::LengthMismatch, "explainability rows with the wrong number of values",
                  ragged, {}});
    }
  }
  return report;
}

}  // namespace nomoforge
