#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nomoforge/rule_merge.hpp"
#include "nomoforge/tabular_model.hpp"

namespace nomoforge {

enum class FocusKind { Predictor, Iteration, Row, Panel };

std::string_view to_string(FocusKind kind);

/// One step of the reading procedure. `key` names the template ("1", "2",
/// "2a", "2b", "3", "lookup", "snap") so a UI can localise `description`.
struct TraceStep {
  std::string key;
  std::string description;
  FocusKind focus_kind = FocusKind::Predictor;
  std::string focus;
};

struct ReadTrace {
  std::vector<TraceStep> steps;
  // type 1
  std::optional<Polarity> polarity;
  std::optional<Rule> rule;
  std::optional<std::size_t> rule_index;  // within its polarity list
  // types 2-5
  std::optional<std::size_t> row;
  std::optional<double> output;
  std::optional<double> snap_delta;
};

/// Replays the human reading procedure over the rule columns; the matched rule
/// always equals match_rule(rules, sample).
ReadTrace read_type1(const RuleList& rules, const Row& sample);

/// Table lookup. Numeric values snap to the nearest grid point (ties toward
/// min); values outside [min, max] raise Error(OutOfRange).
ReadTrace read_tabular(const CombinationTable& combos, const OutputVector& outputs, const Row& sample);

/// Builds a sample row from name=value assignments. Unknown, missing or
/// ill-typed assignments raise Error(InvalidInput).
Row parse_sample(const FeatureSpace& space, const std::map<std::string, std::string>& assignments);

}  // namespace nomoforge
