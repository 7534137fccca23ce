#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "nomoforge/csv.hpp"
#include "nomoforge/tabular_model.hpp"

namespace nomoforge {

/// Raw CSV documents as uploaded or read from disk.
struct InputTexts {
  std::string features;
  std::string outputs;
  std::string manifest;
  std::optional<std::string> shap;
};

struct LoadOptions {
  OutputKind output_kind = OutputKind::Probability;
  /// Numeric grid step; inferred as the smallest gap between distinct values when absent.
  std::optional<double> numeric_step;
  std::size_t grid_cap = kDefaultGridCap;
};

/// Typed inputs plus every finding raised while reading or validating them.
/// `combos` is empty only when the feature space itself could not be formed.
struct LoadedInputs {
  std::optional<CombinationTable> combos;
  OutputVector outputs;
  std::optional<ExplainabilityTable> shap;
  ValidationReport report;

  bool ok() const { return combos.has_value() && report.ok(); }
  const FeatureSpace& space() const { return combos->space(); }
};

struct InputPaths {
  std::filesystem::path features;
  std::filesystem::path outputs;
  std::filesystem::path manifest;
  std::optional<std::filesystem::path> shap;
};

/// Throws Error(IoError) when a file cannot be read.
InputTexts read_input_files(const InputPaths& paths);

LoadedInputs load_inputs(const InputTexts& texts, const LoadOptions& options);

/// Features CSV for a combination table (header = feature names).
CsvTable to_csv(const CombinationTable& table);
/// Manifest CSV listing (feature, level) pairs in (negative, positive) order.
CsvTable manifest_csv(const FeatureSpace& space);
CsvTable to_csv(const OutputVector& outputs);
CsvTable to_csv(const ExplainabilityTable& shap);

}  // namespace nomoforge
