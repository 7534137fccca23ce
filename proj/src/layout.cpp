#include "nomoforge/layout.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "nomoforge/errors.hpp"
#include "nomoforge/format.hpp"

namespace nomoforge {

namespace {

constexpr double kMarginLeft = 40;
constexpr double kMarginRight = 24;
constexpr double kMarginTop = 72;
constexpr double kMarginBottom = 84;
constexpr double kPanelGap = 28;
constexpr double kLabelColumn = 120;  // type-1 predictor names
constexpr double kTileColumn = 36;
constexpr double kMaxRuleColumn = 32;
constexpr double kEmptyPanelWidth = 120;

constexpr std::array<const char*, 8> kSeriesPalette = {"#E69F00", "#56B4E9", "#009E73", "#F0E442",
                                                       "#0072B2", "#D55E00", "#CC79A7", "#000000"};

double row_center(std::size_t row) { return static_cast<double>(row) * kRowHeight + kRowHeight / 2; }

/// Linear blend between the low and high ends of a dark-to-light blue ramp.
std::string gradient_color(double t) {
  t = std::clamp(t, 0.0, 1.0);
  constexpr int lo[3] = {0x13, 0x2B, 0x43};
  constexpr int hi[3] = {0x56, 0xB1, 0xF7};
  char buf[8];
  int c[3];
  for (int i = 0; i < 3; ++i) c[i] = static_cast<int>(std::lround(lo[i] + (hi[i] - lo[i]) * t));
  std::snprintf(buf, sizeof buf, "#%02X%02X%02X", c[0], c[1], c[2]);
  return buf;
}

struct Scale {
  double lo = 0, hi = 1, width = 1;
  double operator()(double v) const { return (v - lo) / (hi - lo) * width; }
};

Scale padded_scale(double lo, double hi, double width) {
  double span = hi - lo;
  if (span <= 0) {
    span = std::max(std::fabs(lo) * 0.1, 1.0);
    lo -= span / 2;
    hi += span / 2;
  }
  return {lo - 0.05 * (hi - lo), hi + 0.05 * (hi - lo), width};
}

std::vector<Tick> even_ticks(const Scale& scale, double lo, double hi, int count) {
  std::vector<Tick> ticks;
  for (int i = 0; i < count; ++i) {
    const double v = lo + (hi - lo) * i / (count - 1);
    ticks.push_back({scale(v), format_fixed2(v)});
  }
  return ticks;
}

Text label(double x, double y, std::string content, TextAnchor anchor, double size = 11, double rotate = 0) {
  return Text{x, y, std::move(content), anchor, size, rotate};
}

}  // namespace

std::string_view to_string(PanelRole role) {
  switch (role) {
    case PanelRole::Tile: return "tile";
    case PanelRole::Output: return "output";
    case PanelRole::Explainability: return "explainability";
    case PanelRole::PositiveTile: return "positive_tile";
    case PanelRole::NegativeTile: return "negative_tile";
  }
  return "unknown";
}

std::vector<std::size_t> tree_order(const CombinationTable& combos, const std::vector<std::string>& ranked_features) {
  const auto& space = combos.space();
  std::vector<std::size_t> keys;
  for (const auto& name : ranked_features) {
    const auto idx = space.index_of(name);
    if (!idx) throw Error(ErrorCode::InvalidInput, "unknown feature '" + name + "'");
    if (space[*idx].is_categorical()) keys.push_back(*idx);
  }
  std::vector<std::vector<int>> levels(combos.size());
  for (std::size_t r = 0; r < combos.size(); ++r) {
    for (auto f : keys) {
      const auto* s = std::get_if<std::string>(&combos[r][f]);
      levels[r].push_back(s ? space[f].level_index(*s).value_or(-1) : -1);
    }
  }
  std::vector<std::size_t> perm(combos.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(levels[a].begin(), levels[a].end(), levels[b].begin(), levels[b].end(),
                                        std::greater<>());
  });
  return perm;
}

// ---------------------------------------------------------------------------
// Type 1

NomogramLayout layout_type1(const RuleList& rules, const PredictorRanking& ranking) {
  const auto& space = rules.space;
  const auto ranked = rank_predictors(ranking, RankDirection::Descending);

  NomogramLayout layout;
  layout.kind = NomogramKind::CatBinNoProb;
  layout.title = "Prediction rules (threshold " + format_fixed2(rules.threshold) + ")";
  const double rows_height = static_cast<double>(ranked.size()) * kRowHeight;
  layout.height = kMarginTop + rows_height + kMarginBottom;

  std::vector<std::size_t> row_of(space.size());
  for (std::size_t r = 0; r < ranked.size(); ++r) {
    const auto f = *space.index_of(ranked[r]);
    row_of[f] = r;
    layout.rows.push_back({row_center(r), ranked[r], {}});
  }

  const std::array<const std::vector<Rule>*, 2> lists = {&rules.positive, &rules.negative};
  const double available = kCanvasWidth - kMarginLeft - kLabelColumn - kPanelGap - kMarginRight;
  double fixed = 0;
  std::size_t columns = 0;
  for (const auto* list : lists) {
    if (list->empty()) {
      fixed += kEmptyPanelWidth;
    } else {
      columns += list->size();
    }
  }
  const double column_width = columns ? std::min(kMaxRuleColumn, (available - fixed) / static_cast<double>(columns))
                                      : kMaxRuleColumn;

  double x = kMarginLeft + kLabelColumn;
  for (std::size_t p = 0; p < 2; ++p) {
    const auto& list = *lists[p];
    const bool positive = p == 0;
    Panel panel;
    panel.role = positive ? PanelRole::PositiveTile : PanelRole::NegativeTile;
    panel.title = positive ? "Positive prediction" : "Negative prediction";
    panel.x_label = "Iteration";
    panel.y_label = positive ? "Predictor" : "";
    panel.x = x;
    panel.y = kMarginTop;
    panel.width = list.empty() ? kEmptyPanelWidth : column_width * static_cast<double>(list.size());
    panel.height = rows_height;

    if (positive) {
      for (std::size_t r = 0; r < ranked.size(); ++r) {
        panel.elements.emplace_back(label(-8, row_center(r) + 4, ranked[r], TextAnchor::End));
      }
    }
    if (list.empty()) {
      panel.elements.emplace_back(label(panel.width / 2, rows_height / 2 + 4,
                                        positive ? "no positive rules" : "no negative rules", TextAnchor::Middle, 10));
    }

    int group_iteration = 0;
    double group_start = 0;
    auto close_group = [&](double end) {
      if (group_iteration == 0) return;
      panel.x_ticks.push_back({(group_start + end) / 2, std::to_string(group_iteration)});
    };
    for (std::size_t c = 0; c < list.size(); ++c) {
      const Rule& rule = list[c];
      const double cx = column_width * static_cast<double>(c);
      if (rule.iteration != group_iteration) {
        close_group(cx);
        group_iteration = rule.iteration;
        group_start = cx;
      }
      const int column = static_cast<int>(layout.columns.size());
      layout.columns.push_back({p, cx, column_width, rule.polarity, c, rule.iteration});
      for (const auto& a : rule.assignments) {
        const auto r = row_of[a.feature];
        panel.elements.emplace_back(Tile{cx + 1, static_cast<double>(r) * kRowHeight + 1, column_width - 2,
                                         kRowHeight - 2, level_color(a.level), static_cast<int>(r), column,
                                         space[a.feature].name, space[a.feature].level_label(a.level)});
      }
    }
    close_group(column_width * static_cast<double>(list.size()));

    layout.panels.push_back(std::move(panel));
    x += layout.panels.back().width + kPanelGap;
  }

  layout.legend = {{"negative value", kNegativeColor}, {"positive value", kPositiveColor}};
  return layout;
}

// ---------------------------------------------------------------------------
// Types 2-5

NomogramLayout layout_tabular(NomogramKind kind, const CombinationTable& combos, const OutputVector& outputs,
                              const ExplainabilityTable* shap, const PredictorRanking& ranking,
                              std::optional<double> threshold) {
  if (kind == NomogramKind::CatBinNoProb) {
    throw Error(ErrorCode::UnsupportedKind, "type 1 nomograms use layout_type1");
  }
  const auto& space = combos.space();
  const bool mixed = is_mixed(kind);
  if (mixed != space.numeric_index().has_value()) {
    throw Error(ErrorCode::UnsupportedKind, std::string(to_string(kind)) + " does not fit this feature space");
  }
  const bool binary = is_binary(kind);
  if ((outputs.kind == OutputKind::Probability) != binary) {
    throw Error(ErrorCode::KindMismatch, "output kind does not match " + std::string(to_string(kind)));
  }
  if (outputs.values.size() != combos.size() || combos.size() == 0) {
    throw Error(ErrorCode::InvalidInput, "outputs are not aligned with the combination table");
  }
  if (shap && shap->row_count() != combos.size()) {
    throw Error(ErrorCode::InvalidInput, "explainability rows are not aligned with the combination table");
  }
  const double tau = threshold.value_or(kDefaultThreshold);

  const auto ranked = rank_predictors(ranking, RankDirection::Descending);
  std::vector<std::size_t> tile_features;
  for (const auto& name : ranked) {
    const auto idx = space.index_of(name);
    if (!idx) throw Error(ErrorCode::InvalidInput, "ranking names unknown feature '" + name + "'");
    if (space[*idx].is_categorical()) tile_features.push_back(*idx);
  }
  const auto numeric = space.numeric_index();

  // Rows: one per combination, or one per categorical sub-combination for mixed kinds.
  const auto order = tree_order(combos, ranked);
  std::vector<std::vector<std::size_t>> groups;
  auto same_categorical = [&](std::size_t a, std::size_t b) {
    return std::all_of(tile_features.begin(), tile_features.end(),
                       [&](std::size_t f) { return combos[a][f] == combos[b][f]; });
  };
  for (auto r : order) {
    if (mixed && !groups.empty() && same_categorical(groups.back().front(), r)) {
      groups.back().push_back(r);
    } else {
      groups.push_back({r});
    }
  }
  if (mixed) {
    for (auto& g : groups) {
      std::stable_sort(g.begin(), g.end(), [&](std::size_t a, std::size_t b) {
        return std::get<double>(combos[a][*numeric]) < std::get<double>(combos[b][*numeric]);
      });
    }
  }

  NomogramLayout layout;
  layout.kind = kind;
  layout.title = binary ? "Predicted probability" : "Estimated value";
  const double rows_height = static_cast<double>(groups.size()) * kRowHeight;
  layout.height = kMarginTop + rows_height + kMarginBottom;
  for (std::size_t r = 0; r < groups.size(); ++r) {
    std::string row_label;
    for (auto f : tile_features) {
      if (!row_label.empty()) row_label += ", ";
      row_label += space[f].name + "=" + format_cell(combos[groups[r].front()][f]);
    }
    layout.rows.push_back({row_center(r), row_label, groups[r]});
  }

  // Panel 1: tiles.
  Panel tiles;
  tiles.role = PanelRole::Tile;
  tiles.title = "Predictor values";
  tiles.x_label = "Predictor";
  tiles.y_label = "Combination";
  tiles.x = kMarginLeft;
  tiles.y = kMarginTop;
  tiles.width = std::max(kTileColumn * static_cast<double>(tile_features.size()), 2 * kTileColumn);
  tiles.height = rows_height;
  for (std::size_t c = 0; c < tile_features.size(); ++c) {
    const auto f = tile_features[c];
    const double cx = kTileColumn * static_cast<double>(c);
    tiles.x_ticks.push_back({cx + kTileColumn / 2, space[f].name});
    for (std::size_t r = 0; r < groups.size(); ++r) {
      const auto& lbl = std::get<std::string>(combos[groups[r].front()][f]);
      const int level = space[f].level_index(lbl).value_or(0);
      tiles.elements.emplace_back(Tile{cx + 1, static_cast<double>(r) * kRowHeight + 1, kTileColumn - 2,
                                       kRowHeight - 2, level_color(level), static_cast<int>(r),
                                       static_cast<int>(c), space[f].name, lbl});
    }
  }

  const std::size_t remaining_panels = shap ? 2 : 1;
  const double remaining_width = kCanvasWidth - kMarginLeft - kMarginRight - tiles.width -
                                 kPanelGap * static_cast<double>(remaining_panels);
  const double plot_width = remaining_width / static_cast<double>(remaining_panels);
  double x = tiles.x + tiles.width + kPanelGap;
  layout.panels.push_back(std::move(tiles));

  // Panel 2: outputs.
  Panel out;
  out.role = PanelRole::Output;
  out.title = binary ? "Predicted probability" : "Estimated value";
  out.x_label = binary ? "Probability" : "Estimate";
  out.x = x;
  out.y = kMarginTop;
  out.width = plot_width;
  out.height = rows_height;
  Scale out_scale{0, 1, plot_width};
  if (binary) {
    out.x_ticks = even_ticks(out_scale, 0, 1, 5);
  } else {
    const auto [lo, hi] = std::minmax_element(outputs.values.begin(), outputs.values.end());
    out_scale = padded_scale(*lo, *hi, plot_width);
    out.x_ticks = *hi > *lo ? even_ticks(out_scale, *lo, *hi, 5)
                            : std::vector<Tick>{{out_scale(*lo), format_fixed2(*lo)}};
  }
  if (binary) {
    const double tx = out_scale(tau);
    out.elements.emplace_back(ReferenceLine{tx, 0, tx, rows_height, "#555555", true, tau});
  }
  if (mixed) {
    const auto& range = space[*numeric].range();
    const double span = range.max - range.min;
    for (std::size_t r = 0; r < groups.size(); ++r) {
      PolyLine line{{}, "#7F7F7F", static_cast<int>(r)};
      for (auto idx : groups[r]) line.points.push_back({out_scale(outputs.values[idx]), row_center(r)});
      out.elements.emplace_back(std::move(line));
      for (auto idx : groups[r]) {
        const double v = std::get<double>(combos[idx][*numeric]);
        out.elements.emplace_back(Marker{out_scale(outputs.values[idx]), row_center(r), 3.5,
                                         gradient_color(span > 0 ? (v - range.min) / span : 0.0),
                                         static_cast<int>(r), space[*numeric].name, outputs.values[idx]});
      }
    }
  } else {
    for (std::size_t r = 0; r < groups.size(); ++r) {
      const auto idx = groups[r].front();
      out.elements.emplace_back(
          Marker{out_scale(outputs.values[idx]), row_center(r), 3.5, "#333333", static_cast<int>(r), "output",
                 outputs.values[idx]});
    }
  }
  x += plot_width + kPanelGap;
  layout.panels.push_back(std::move(out));

  // Panel 3: explainability.
  if (shap) {
    Panel ex;
    ex.role = PanelRole::Explainability;
    ex.title = "Explainability";
    ex.x_label = "Explainability value";
    ex.x = x;
    ex.y = kMarginTop;
    ex.width = plot_width;
    ex.height = rows_height;
    double lo = 0, hi = 0;
    for (const auto& row : shap->values) {
      for (double v : row) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    const Scale scale = padded_scale(lo, hi, plot_width);
    ex.x_ticks = even_ticks(scale, lo, hi, 5);
    std::vector<std::size_t> series;  // all features, ranked
    for (const auto& name : ranked) series.push_back(*space.index_of(name));
    for (std::size_t r = 0; r < groups.size(); ++r) {
      for (std::size_t s = 0; s < series.size(); ++s) {
        const auto column = std::find(shap->columns.begin(), shap->columns.end(), space[series[s]].name);
        if (column == shap->columns.end()) {
          throw Error(ErrorCode::InvalidInput, "explainability table lacks '" + space[series[s]].name + "'");
        }
        const auto c = static_cast<std::size_t>(column - shap->columns.begin());
        for (auto idx : groups[r]) {
          const double v = shap->values[idx].at(c);
          ex.elements.emplace_back(Marker{scale(v), row_center(r), 3, kSeriesPalette[s % kSeriesPalette.size()],
                                          static_cast<int>(r), space[series[s]].name, v});
        }
      }
    }
    layout.panels.push_back(std::move(ex));
    for (std::size_t s = 0; s < series.size(); ++s) {
      layout.legend.push_back({space[series[s]].name, kSeriesPalette[s % kSeriesPalette.size()]});
    }
  }

  layout.legend.insert(layout.legend.begin(),
                       {{"negative value", kNegativeColor}, {"positive value", kPositiveColor}});
  if (mixed) {
    const auto& f = space[*numeric];
    layout.legend.push_back({f.name + "=" + format_number(f.range().min), gradient_color(0)});
    layout.legend.push_back({f.name + "=" + format_number(f.range().max), gradient_color(1)});
  }
  return layout;
}

}  // namespace nomoforge
