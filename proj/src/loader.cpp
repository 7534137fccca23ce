#include "nomoforge/loader.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "nomoforge/errors.hpp"
#include "nomoforge/format.hpp"

namespace nomoforge {

namespace {

struct ManifestEntry {
  std::vector<std::string> levels;  // in manifest order, deduplicated
};

std::optional<std::map<std::string, ManifestEntry>> parse_manifest(const std::string& text,
                                                                   ValidationReport& report) {
  CsvTable csv;
  try {
    csv = parse_csv(text);
  } catch (const Error& e) {
    report.add({FindingCode::ParseError, std::string("manifest: ") + e.what(), {}, {}});
    return std::nullopt;
  }
  if (csv.header != std::vector<std::string>{"feature", "category"}) {
    report.add({FindingCode::ParseError, "manifest header must be exactly: feature,category", {},
                csv.header});
    return std::nullopt;
  }
  std::map<std::string, ManifestEntry> out;
  for (const auto& row : csv.rows) {
    auto& entry = out[row[0]];
    if (!row[1].empty() &&
        std::find(entry.levels.begin(), entry.levels.end(), row[1]) == entry.levels.end()) {
      entry.levels.push_back(row[1]);
    }
  }
  return out;
}

double infer_step(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end(), nearly_equal), values.end());
  double step = 0.0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double gap = values[i] - values[i - 1];
    if (gap > 0.0 && (step == 0.0 || gap < step)) step = gap;
  }
  return step > 0.0 ? step : 1.0;
}

std::optional<OutputVector> parse_outputs(const std::string& text, OutputKind kind, ValidationReport& report) {
  CsvTable csv;
  try {
    csv = parse_csv(text);
  } catch (const Error& e) {
    report.add({FindingCode::ParseError, std::string("outputs: ") + e.what(), {}, {}});
    return std::nullopt;
  }
  if (csv.header != std::vector<std::string>{"output"}) {
    report.add({FindingCode::ParseError, "outputs file must have exactly one column named 'output'", {},
                csv.header});
    return std::nullopt;
  }
  OutputVector out{kind, {}};
  std::vector<std::size_t> bad;
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    const auto v = parse_double(csv.rows[r][0]);
    if (!v) bad.push_back(r);
    out.values.push_back(v.value_or(std::nan("")));
  }
  if (!bad.empty()) {
    report.add({FindingCode::ParseError, std::to_string(bad.size()) + " output value(s) are not numbers", bad,
                {"output"}});
  }
  return out;
}

std::optional<ExplainabilityTable> parse_shap(const std::string& text, ValidationReport& report) {
  CsvTable csv;
  try {
    csv = parse_csv(text);
  } catch (const Error& e) {
    report.add({FindingCode::ParseError, std::string("explainability: ") + e.what(), {}, {}});
    return std::nullopt;
  }
  ExplainabilityTable out{csv.header, {}};
  std::vector<std::size_t> bad;
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    std::vector<double> row;
    for (const auto& cell : csv.rows[r]) {
      const auto v = parse_double(cell);
      if (!v || !std::isfinite(*v)) {
        bad.push_back(r);
        row.push_back(0.0);
      } else {
        row.push_back(*v);
      }
    }
    out.values.push_back(std::move(row));
  }
  if (!bad.empty()) {
    bad.erase(std::unique(bad.begin(), bad.end()), bad.end());
    report.add({FindingCode::ParseError,
                std::to_string(bad.size()) + " explainability row(s) contain non-numeric values", bad, {}});
  }
  return out;
}

}  // namespace

InputTexts read_input_files(const InputPaths& paths) {
  InputTexts texts;
  texts.features = read_text_file(paths.features);
  texts.outputs = read_text_file(paths.outputs);
  texts.manifest = read_text_file(paths.manifest);
  if (paths.shap) texts.shap = read_text_file(*paths.shap);
  return texts;
}

LoadedInputs load_inputs(const InputTexts& texts, const LoadOptions& options) {
  LoadedInputs loaded;
  auto& report = loaded.report;

  const auto manifest = parse_manifest(texts.manifest, report);
  if (auto outputs = parse_outputs(texts.outputs, options.output_kind, report)) {
    loaded.outputs = std::move(*outputs);
  } else {
    loaded.outputs.kind = options.output_kind;
  }
  if (texts.shap) loaded.shap = parse_shap(*texts.shap, report);

  CsvTable features;
  try {
    features = parse_csv(texts.features);
  } catch (const Error& e) {
    report.add({FindingCode::ParseError, std::string("features: ") + e.what(), {}, {}});
    return loaded;
  }
  if (!manifest) return loaded;

  for (const auto& [name, entry] : *manifest) {
    if (std::find(features.header.begin(), features.header.end(), name) == features.header.end()) {
      report.add({FindingCode::ColumnOrderMismatch,
                  "manifest names '" + name + "', which is not a features column", {}, {name}});
    }
  }

  std::vector<FeatureSpec> specs;
  std::vector<Row> rows(features.rows.size());
  bool space_ok = true;
  for (std::size_t c = 0; c < features.header.size(); ++c) {
    const std::string& name = features.header[c];
    const auto it = manifest->find(name);
    if (it != manifest->end()) {
      std::vector<std::string> levels = it->second.levels;
      if (levels.size() < 2) {
        std::set<std::string> seen;
        for (const auto& row : features.rows) seen.insert(row[c]);
        for (const auto& l : levels) seen.insert(l);
        levels.assign(seen.begin(), seen.end());
      }
      if (levels.size() != 2) {
        report.add({FindingCode::NonBinaryCategorical,
                    "categorical feature '" + name + "' must have exactly 2 levels, found " +
                        std::to_string(levels.size()),
                    {}, {name}});
        space_ok = false;
        continue;
      }
      specs.push_back(FeatureSpec::categorical(name, levels[0], levels[1]));
      for (std::size_t r = 0; r < features.rows.size(); ++r) rows[r].emplace_back(features.rows[r][c]);
    } else {
      std::vector<double> values;
      std::vector<std::size_t> bad;
      for (std::size_t r = 0; r < features.rows.size(); ++r) {
        const auto v = parse_double(features.rows[r][c]);
        if (!v || !std::isfinite(*v)) {
          bad.push_back(r);
          rows[r].emplace_back(std::nan(""));
        } else {
          values.push_back(*v);
          rows[r].emplace_back(*v);
        }
      }
      if (!bad.empty()) {
        report.add({FindingCode::ParseError,
                    "numeric feature '" + name + "' has non-numeric values; list categorical features "
                    "in the manifest",
                    bad, {name}});
        space_ok = false;
        continue;
      }
      if (values.empty()) values.push_back(0.0);
      const double lo = *std::min_element(values.begin(), values.end());
      const double hi = *std::max_element(values.begin(), values.end());
      specs.push_back(FeatureSpec::numeric(name, lo, hi, options.numeric_step.value_or(infer_step(values))));
    }
  }
  if (!space_ok) return loaded;

  try {
    FeatureSpace space(std::move(specs));
    loaded.combos.emplace(std::move(space), std::move(rows));
  } catch (const Error& e) {
    report.add({FindingCode::ParseError, e.what(), {}, features.header});
    return loaded;
  }

  auto validation = validate_inputs(loaded.space(), *loaded.combos, loaded.outputs,
                                    loaded.shap ? &*loaded.shap : nullptr, options.grid_cap);
  for (auto& f : validation.findings) report.add(std::move(f));
  return loaded;
}

CsvTable to_csv(const CombinationTable& table) {
  CsvTable csv;
  csv.header = table.space().names();
  for (const auto& row : table.rows()) {
    std::vector<std::string> rec;
    for (const auto& cell : row) rec.push_back(format_cell(cell));
    csv.rows.push_back(std::move(rec));
  }
  return csv;
}

CsvTable manifest_csv(const FeatureSpace& space) {
  CsvTable csv;
  csv.header = {"feature", "category"};
  for (const auto& f : space.features()) {
    if (!f.is_categorical()) continue;
    csv.rows.push_back({f.name, f.levels().negative});
    csv.rows.push_back({f.name, f.levels().positive});
  }
  return csv;
}

CsvTable to_csv(const OutputVector& outputs) {
  CsvTable csv;
  csv.header = {"output"};
  for (double v : outputs.values) csv.rows.push_back({format_number(v)});
  return csv;
}

CsvTable to_csv(const ExplainabilityTable& shap) {
  CsvTable csv;
  csv.header = shap.columns;
  for (const auto& row : shap.values) {
    std::vector<std::string> rec;
    for (double v : row) rec.push_back(format_number(v));
    csv.rows.push_back(std::move(rec));
  }
  return csv;
}

}  // namespace nomoforge
