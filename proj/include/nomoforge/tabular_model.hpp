#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace nomoforge {

/// Two level labels of a binarized predictor, interpreted as (negative, positive).
struct CategoricalLevels {
  std::string negative;
  std::string positive;

  bool operator==(const CategoricalLevels&) const = default;
};

/// Numeric predictor values {min, min+step, ...} truncated at max.
struct NumericRange {
  double min = 0.0;
  double max = 0.0;
  double step = 1.0;

  std::size_t grid_size() const;
  double at(std::size_t index) const { return min + static_cast<double>(index) * step; }
  /// Index of the grid point equal to `value` within tolerance, if any.
  std::optional<std::size_t> grid_index(double value) const;

  bool operator==(const NumericRange&) const = default;
};

struct FeatureSpec {
  std::string name;
  std::variant<CategoricalLevels, NumericRange> kind;

  static FeatureSpec categorical(std::string name, std::string negative, std::string positive);
  static FeatureSpec numeric(std::string name, double min, double max, double step);

  bool is_categorical() const { return std::holds_alternative<CategoricalLevels>(kind); }
  const CategoricalLevels& levels() const { return std::get<CategoricalLevels>(kind); }
  const NumericRange& range() const { return std::get<NumericRange>(kind); }

  /// 1 for the positive label, 0 for the negative label, nullopt otherwise.
  std::optional<int> level_index(std::string_view label) const;
  const std::string& level_label(int index) const;

  bool operator==(const FeatureSpec&) const = default;
};

/// Ordered predictor definitions. Construction enforces at least one
/// categorical feature, at most one numeric feature, unique names, two distinct
/// level labels per categorical feature, and min <= max, step > 0.
class FeatureSpace {
 public:
  explicit FeatureSpace(std::vector<FeatureSpec> features);

  const std::vector<FeatureSpec>& features() const { return features_; }
  std::size_t size() const { return features_.size(); }
  const FeatureSpec& operator[](std::size_t i) const { return features_[i]; }

  std::optional<std::size_t> index_of(std::string_view name) const;
  std::optional<std::size_t> numeric_index() const;
  std::size_t categorical_count() const;
  std::vector<std::string> names() const;

  bool operator==(const FeatureSpace&) const = default;

 private:
  std::vector<FeatureSpec> features_;
};

/// A cell is a level label for categorical features and a real for numeric ones.
using Cell = std::variant<std::string, double>;
using Row = std::vector<Cell>;

/// The combination set. Row width is checked on construction; completeness,
/// uniqueness and grid membership are checked by validate_inputs.
class CombinationTable {
 public:
  CombinationTable(FeatureSpace space, std::vector<Row> rows);

  const FeatureSpace& space() const { return space_; }
  const std::vector<Row>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  const Row& operator[](std::size_t i) const { return rows_[i]; }

  bool operator==(const CombinationTable&) const = default;

 private:
  FeatureSpace space_;
  std::vector<Row> rows_;
};

enum class OutputKind { Probability, Estimate };

struct OutputVector {
  OutputKind kind = OutputKind::Probability;
  std::vector<double> values;
};

struct ExplainabilityTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> values;  // one row per combination

  std::size_t row_count() const { return values.size(); }
  std::vector<double> column(std::size_t index) const;
};

enum class NomogramKind { CatBinNoProb, CatBinProb, CatCont, MixedBinProb, MixedCont };

std::string_view to_string(NomogramKind kind);
std::optional<NomogramKind> kind_from_string(std::string_view name);
/// Type number 1..5 in the order the kinds are enumerated above.
int type_number(NomogramKind kind);
bool is_binary(NomogramKind kind);
bool is_mixed(NomogramKind kind);

enum class FindingCode {
  DuplicateRow,
  MissingCombination,
  ExtraCombination,
  LengthMismatch,
  ColumnOrderMismatch,
  NonBinaryCategorical,
  NonGridNumeric,
  ProbabilityOutOfRange,
  GridTooLarge,
  ParseError,
  LimitExceeded,
  DegenerateFit,
};

std::string_view to_string(FindingCode code);

struct Finding {
  FindingCode code;
  std::string message;
  std::vector<std::size_t> rows;
  std::vector<std::string> columns;

  bool operator==(const Finding&) const = default;
};

struct ValidationReport {
  std::vector<Finding> findings;

  bool ok() const { return findings.empty(); }
  bool has(FindingCode code) const;
  void add(Finding f) { findings.push_back(std::move(f)); }
};

inline constexpr std::size_t kDefaultGridCap = 10000;

/// Full Cartesian product in declaration order, last feature varying fastest.
/// Categorical levels expand as (negative, positive).
CombinationTable expand_grid(const FeatureSpace& space, std::size_t grid_cap = kDefaultGridCap);

ValidationReport validate_inputs(const FeatureSpace& space, const CombinationTable& combos,
                                 const OutputVector& outputs,
                                 const ExplainabilityTable* shap = nullptr,
                                 std::size_t grid_cap = kDefaultGridCap);

NomogramKind classify_kind(const FeatureSpace& space, bool wants_probability, bool wants_estimate);

/// Relative 1e-9, absolute 1e-12 near zero.
bool nearly_equal(double a, double b);

}  // namespace nomoforge
