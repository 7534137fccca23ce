#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nomoforge/explainability.hpp"
#include "nomoforge/rule_merge.hpp"
#include "nomoforge/tabular_model.hpp"

namespace nomoforge {

inline constexpr const char* kNegativeColor = "#F8766D";
inline constexpr const char* kPositiveColor = "#00BFC4";
inline constexpr double kCanvasWidth = 960.0;
inline constexpr double kRowHeight = 24.0;

/// Tile fill for a categorical level: 1 (positive) is cyan, 0 is red.
inline const char* level_color(int level) { return level == 1 ? kPositiveColor : kNegativeColor; }

// Scene elements. Coordinates are panel-local pixels; `row` indexes
// NomogramLayout::rows and `column` the panel's x slots (-1 when unused).

struct Tile {
  double x = 0, y = 0, width = 0, height = 0;
  std::string fill;
  int row = -1;
  int column = -1;
  std::string feature;
  std::string level;
};

struct Marker {
  double x = 0, y = 0, radius = 3.5;
  std::string fill;
  int row = -1;
  std::string series;
  double value = 0;
};

struct Point {
  double x = 0, y = 0;
};

struct PolyLine {
  std::vector<Point> points;
  std::string stroke;
  int row = -1;
};

struct ReferenceLine {
  double x1 = 0, y1 = 0, x2 = 0, y2 = 0;
  std::string stroke;
  bool dotted = true;
  double value = 0;
};

enum class TextAnchor { Start, Middle, End };

struct Text {
  double x = 0, y = 0;
  std::string content;
  TextAnchor anchor = TextAnchor::Start;
  double size = 11;
  double rotate = 0;  // degrees about (x, y)
};

using Element = std::variant<Tile, Marker, PolyLine, ReferenceLine, Text>;

enum class PanelRole { Tile, Output, Explainability, PositiveTile, NegativeTile };

std::string_view to_string(PanelRole role);

struct Tick {
  double position = 0;  // panel-local x
  std::string label;
};

struct Panel {
  PanelRole role = PanelRole::Tile;
  std::string title;
  std::string x_label;
  std::string y_label;
  double x = 0, y = 0, width = 0, height = 0;  // placement on the canvas
  std::vector<Tick> x_ticks;
  std::vector<Element> elements;
};

struct LegendEntry {
  std::string label;
  std::string color;
};

/// y-row shared by every panel of a layout. Tabular kinds list the combination
/// indices drawn on the row; type 1 rows are predictors.
struct LayoutRow {
  double y = 0;  // panel-local centre
  std::string label;
  std::vector<std::size_t> combinations;
};

/// x slot of a type-1 tile panel: one rule.
struct LayoutColumn {
  std::size_t panel = 0;
  double x = 0, width = 0;
  Polarity polarity = Polarity::Positive;
  std::size_t rule = 0;
  int iteration = 1;
};

struct NomogramLayout {
  NomogramKind kind = NomogramKind::CatBinNoProb;
  double width = kCanvasWidth;
  double height = 0;
  std::string title;
  std::vector<Panel> panels;
  std::vector<LegendEntry> legend;
  std::vector<LayoutRow> rows;
  std::vector<LayoutColumn> columns;
};

/// Permutation of table rows sorted lexicographically by the ranked features,
/// positive level before negative. Numeric columns are ignored.
std::vector<std::size_t> tree_order(const CombinationTable& combos, const std::vector<std::string>& ranked_features);

/// Two tile panels (positive rules left, negative right); one column per rule
/// grouped by iteration, predictor rows by descending score.
NomogramLayout layout_type1(const RuleList& rules, const PredictorRanking& ranking);

/// Tile panel, output panel and, when `shap` is given, an explainability panel.
NomogramLayout layout_tabular(NomogramKind kind, const CombinationTable& combos, const OutputVector& outputs,
                              const ExplainabilityTable* shap, const PredictorRanking& ranking,
                              std::optional<double> threshold);

/// Standalone SVG 1.1 document; identical layouts give identical bytes.
std::string render_svg(const NomogramLayout& layout);

}  // namespace nomoforge
