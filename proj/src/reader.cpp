#include "nomoforge/reader.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "nomoforge/csv.hpp"
#include "nomoforge/errors.hpp"
#include "nomoforge/format.hpp"

namespace nomoforge {

std::string_view to_string(FocusKind kind) {
  switch (kind) {
    case FocusKind::Predictor: return "predictor";
    case FocusKind::Iteration: return "iteration";
    case FocusKind::Row: return "row";
    case FocusKind::Panel: return "panel";
  }
  return "unknown";
}

namespace {

struct Column {
  const Rule* rule;
  Polarity polarity;
  std::size_t index;
};

std::string column_focus(const Column& c) {
  return std::string(to_string(c.polarity)) + ":" + std::to_string(c.index);
}

std::string column_name(const Column& c) {
  return "iteration " + std::to_string(c.rule->iteration) + " (" + std::string(to_string(c.polarity)) +
         " panel, column " + std::to_string(c.index + 1) + ")";
}

bool mentions(const Rule& rule, std::size_t feature) {
  return std::any_of(rule.assignments.begin(), rule.assignments.end(),
                     [&](const Assignment& a) { return a.feature == feature; });
}

}  // namespace

ReadTrace read_type1(const RuleList& rules, const Row& sample) {
  const auto& space = rules.space;
  const auto levels = sample_levels(space, sample);

  std::vector<Column> columns;
  for (std::size_t i = 0; i < rules.positive.size(); ++i) columns.push_back({&rules.positive[i], Polarity::Positive, i});
  for (std::size_t i = 0; i < rules.negative.size(); ++i) columns.push_back({&rules.negative[i], Polarity::Negative, i});

  std::vector<std::size_t> positives;
  for (const auto& name : rank_predictors(rules.ranking, RankDirection::Descending)) {
    const auto f = *space.index_of(name);
    if (levels[f] == 1) positives.push_back(f);
  }

  ReadTrace trace;
  std::vector<bool> examined(columns.size(), false);
  std::optional<std::size_t> found;

  auto try_column = [&](std::size_t c) {
    examined[c] = true;
    const auto& col = columns[c];
    trace.steps.push_back({"2", "Match the rectangles at " + column_name(col) + " with the sample values.",
                           FocusKind::Iteration, column_focus(col)});
    if (col.rule->matches(levels)) {
      trace.steps.push_back({"2a", "All rectangles match; " + column_name(col) + " belongs to the " +
                                       std::string(to_string(col.polarity)) + " prediction panel.",
                             FocusKind::Panel, std::string(to_string(col.polarity))});
      found = c;
      return true;
    }
    return false;
  };

  for (std::size_t pi = 0; pi < positives.size() && !found; ++pi) {
    const auto f = positives[pi];
    trace.steps.push_back({"1", "Take " + space[f].name + ", the predictor with a positive value and the " +
                                    (pi == 0 ? std::string("highest") : std::string("next highest")) +
                                    " maximum impact.",
                           FocusKind::Predictor, space[f].name});
    bool scanned = false;
    for (std::size_t c = 0; c < columns.size() && !found; ++c) {
      if (examined[c] || !mentions(*columns[c].rule, f)) continue;
      if (scanned) {
        trace.steps.push_back({"2b", "Not matched; move right to the next rectangle of " + space[f].name + ".",
                               FocusKind::Predictor, space[f].name});
      }
      scanned = true;
      try_column(c);
    }
    if (!found) {
      trace.steps.push_back({"3", "No match with " + space[f].name + "; repeat with the next positive predictor.",
                             FocusKind::Predictor, space[f].name});
    }
  }

  if (!found) {
    trace.steps.push_back({"1",
                           positives.empty()
                               ? "No predictor has a positive value; find an iteration whose available "
                                 "rectangles are all negative."
                               : "Find an iteration whose available rectangles match without a positive predictor.",
                           FocusKind::Iteration, ""});
    for (std::size_t c = 0; c < columns.size() && !found; ++c) {
      if (examined[c]) continue;
      const auto& rule = *columns[c].rule;
      const bool only_negative_rects = std::all_of(rule.assignments.begin(), rule.assignments.end(),
                                                   [](const Assignment& a) { return a.level == 0; });
      if (only_negative_rects) try_column(c);
    }
  }

  if (!found) throw Error(ErrorCode::PartitionViolation, "no rule column matches the sample");
  const auto expected = match_rule(rules, sample);
  const auto& col = columns[*found];
  if (expected.rule != col.rule) {
    throw Error(ErrorCode::PartitionViolation, "reading procedure and rule matching disagree");
  }
  trace.polarity = col.polarity;
  trace.rule = *col.rule;
  trace.rule_index = col.index;
  return trace;
}

ReadTrace read_tabular(const CombinationTable& combos, const OutputVector& outputs, const Row& sample) {
  const auto& space = combos.space();
  if (sample.size() != space.size()) throw Error(ErrorCode::InvalidInput, "sample must assign every feature");
  if (outputs.values.size() != combos.size()) {
    throw Error(ErrorCode::InvalidInput, "outputs are not aligned with the combination table");
  }

  ReadTrace trace;
  Row key = sample;
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto& f = space[i];
    if (f.is_categorical()) {
      const auto* label = std::get_if<std::string>(&sample[i]);
      if (!label || !f.level_index(*label)) {
        throw Error(ErrorCode::InvalidInput, "invalid level for feature '" + f.name + "'");
      }
      continue;
    }
    const auto* value = std::get_if<double>(&sample[i]);
    if (!value || !std::isfinite(*value)) {
      throw Error(ErrorCode::InvalidInput, "feature '" + f.name + "' needs a number");
    }
    const auto& range = f.range();
    const double last = range.at(range.grid_size() - 1);
    if ((*value < range.min && !nearly_equal(*value, range.min)) ||
        (*value > last && !nearly_equal(*value, last))) {
      throw Error(ErrorCode::OutOfRange, f.name + "=" + format_number(*value) + " is outside [" +
                                             format_number(range.min) + ", " + format_number(last) + "]");
    }
    // nearest grid point, ties toward min
    const double pos = std::ceil((*value - range.min) / range.step - 0.5 - 1e-12);
    const auto index = std::min(static_cast<std::size_t>(std::max(pos, 0.0)), range.grid_size() - 1);
    const double snapped = range.at(index);
    // 12 significant digits drop the binary noise of e.g. 16.4 - 16.
    const double delta = tidy_number(*value - snapped);
    trace.snap_delta = delta;
    key[i] = snapped;
    if (!nearly_equal(*value, snapped)) {
      trace.steps.push_back({"snap", f.name + "=" + format_number(*value) + " snaps to the grid value " +
                                         format_number(snapped) + " (delta " + format_number(delta) + ").",
                             FocusKind::Predictor, f.name});
    }
  }

  for (std::size_t r = 0; r < combos.size(); ++r) {
    bool equal = true;
    for (std::size_t i = 0; i < space.size() && equal; ++i) {
      if (space[i].is_categorical()) {
        equal = combos[r][i] == key[i];
      } else {
        const auto* v = std::get_if<double>(&combos[r][i]);
        equal = v && nearly_equal(*v, std::get<double>(key[i]));
      }
    }
    if (!equal) continue;
    trace.row = r;
    trace.output = outputs.values[r];
    trace.steps.push_back({"lookup",
                           "Locate the combination row and read the " +
                               std::string(outputs.kind == OutputKind::Probability ? "predicted probability"
                                                                                   : "estimated value") +
                               " " + format_number(outputs.values[r]) + ".",
                           FocusKind::Row, std::to_string(r)});
    return trace;
  }
  throw Error(ErrorCode::InvalidInput, "the sample's combination is not in the table");
}

Row parse_sample(const FeatureSpace& space, const std::map<std::string, std::string>& assignments) {
  for (const auto& [name, value] : assignments) {
    if (!space.index_of(name)) throw Error(ErrorCode::InvalidInput, "unknown feature '" + name + "'");
  }
  Row row;
  for (const auto& f : space.features()) {
    const auto it = assignments.find(f.name);
    if (it == assignments.end()) throw Error(ErrorCode::InvalidInput, "missing value for feature '" + f.name + "'");
    if (f.is_categorical()) {
      if (!f.level_index(it->second)) {
        throw Error(ErrorCode::InvalidInput, "'" + it->second + "' is not a level of '" + f.name + "' (expected " +
                                                 f.levels().negative + " or " + f.levels().positive + ")");
      }
      row.emplace_back(it->second);
    } else {
      const auto v = parse_double(it->second);
      if (!v) throw Error(ErrorCode::InvalidInput, "feature '" + f.name + "' needs a number");
      row.emplace_back(*v);
    }
  }
  return row;
}

}  // namespace nomoforge
