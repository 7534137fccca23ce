#include "nomoforge/serialize.hpp"

#include "nomoforge/errors.hpp"

namespace nomoforge {

json to_json(const FeatureSpace& space) {
  json out = json::array();
  for (const auto& f : space.features()) {
    if (f.is_categorical()) {
      out.push_back({{"name", f.name}, {"type", "categorical"}, {"levels", {f.levels().negative, f.levels().positive}}});
    } else {
      const auto& r = f.range();
      out.push_back({{"name", f.name}, {"type", "numeric"}, {"min", r.min}, {"max", r.max}, {"step", r.step}});
    }
  }
  return out;
}

FeatureSpace space_from_json(const json& j) {
  std::vector<FeatureSpec> specs;
  for (const auto& f : j) {
    const auto name = f.at("name").get<std::string>();
    if (f.at("type") == "categorical") {
      const auto& lv = f.at("levels");
      if (lv.size() != 2) throw Error(ErrorCode::ParseError, "feature '" + name + "' needs two levels");
      specs.push_back(FeatureSpec::categorical(name, lv[0].get<std::string>(), lv[1].get<std::string>()));
    } else {
      specs.push_back(FeatureSpec::numeric(name, f.at("min").get<double>(), f.at("max").get<double>(),
                                           f.at("step").get<double>()));
    }
  }
  return FeatureSpace(std::move(specs));
}

json to_json(const PredictorRanking& ranking) {
  json out = json::array();
  for (const auto& e : ranking.entries) out.push_back({{"feature", e.feature}, {"score", e.score}});
  return out;
}

PredictorRanking ranking_from_json(const json& j) {
  PredictorRanking r;
  for (const auto& e : j) r.entries.push_back({e.at("feature").get<std::string>(), e.at("score").get<double>()});
  return r;
}

namespace {

json rules_json(const std::vector<Rule>& rules, const FeatureSpace& space) {
  json out = json::array();
  for (const auto& rule : rules) {
    json assignments = json::array();
    for (const auto& a : rule.assignments) {
      assignments.push_back({{"feature", space[a.feature].name}, {"level", space[a.feature].level_label(a.level)}});
    }
    out.push_back({{"iteration", rule.iteration}, {"assignments", std::move(assignments)}});
  }
  return out;
}

std::vector<Rule> rules_from(const json& j, const FeatureSpace& space, Polarity polarity) {
  std::vector<Rule> out;
  for (const auto& r : j) {
    Rule rule;
    rule.polarity = polarity;
    rule.iteration = r.at("iteration").get<int>();
    for (const auto& a : r.at("assignments")) {
      const auto name = a.at("feature").get<std::string>();
      const auto f = space.index_of(name);
      if (!f) throw Error(ErrorCode::ParseError, "rule names unknown feature '" + name + "'");
      const auto level = space[*f].level_index(a.at("level").get<std::string>());
      if (!level) throw Error(ErrorCode::ParseError, "rule uses an unknown level of '" + name + "'");
      rule.assignments.push_back({*f, *level});
    }
    if (static_cast<std::size_t>(rule.iteration) != rule.assignments.size()) {
      throw Error(ErrorCode::ParseError, "rule iteration must equal its assignment count");
    }
    out.push_back(std::move(rule));
  }
  return out;
}

const char* anchor_name(TextAnchor a) {
  switch (a) {
    case TextAnchor::Start: return "start";
    case TextAnchor::Middle: return "middle";
    case TextAnchor::End: return "end";
  }
  return "start";
}

struct ElementJson {
  json operator()(const Tile& t) const {
    return {{"type", "tile"}, {"x", t.x}, {"y", t.y}, {"width", t.width}, {"height", t.height}, {"fill", t.fill},
            {"row", t.row}, {"column", t.column}, {"feature", t.feature}, {"level", t.level}};
  }
  json operator()(const Marker& m) const {
    return {{"type", "marker"}, {"x", m.x}, {"y", m.y}, {"radius", m.radius}, {"fill", m.fill},
            {"row", m.row}, {"series", m.series}, {"value", m.value}};
  }
  json operator()(const PolyLine& p) const {
    json pts = json::array();
    for (const auto& pt : p.points) pts.push_back({pt.x, pt.y});
    return {{"type", "polyline"}, {"points", std::move(pts)}, {"stroke", p.stroke}, {"row", p.row}};
  }
  json operator()(const ReferenceLine& r) const {
    return {{"type", "reference_line"}, {"x1", r.x1}, {"y1", r.y1}, {"x2", r.x2}, {"y2", r.y2},
            {"stroke", r.stroke}, {"dotted", r.dotted}, {"value", r.value}};
  }
  json operator()(const Text& t) const {
    return {{"type", "text"}, {"x", t.x}, {"y", t.y}, {"content", t.content}, {"anchor", anchor_name(t.anchor)},
            {"size", t.size}, {"rotate", t.rotate}};
  }
};

}  // namespace

json to_json(const RuleList& rules) {
  return {{"threshold", rules.threshold},
          {"features", to_json(rules.space)},
          {"ranking", to_json(rules.ranking)},
          {"positive", rules_json(rules.positive, rules.space)},
          {"negative", rules_json(rules.negative, rules.space)}};
}

RuleList rules_from_json(const json& j) {
  try {
    FeatureSpace space = space_from_json(j.at("features"));
    RuleList rules{space, {}, {}, j.at("threshold").get<double>(), ranking_from_json(j.at("ranking"))};
    rules.positive = rules_from(j.at("positive"), space, Polarity::Positive);
    rules.negative = rules_from(j.at("negative"), space, Polarity::Negative);
    return rules;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed rules document: ") + e.what());
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InvalidInput) throw;
    throw Error(ErrorCode::ParseError, std::string("malformed rules document: ") + e.what());
  }
}

json to_json(const NomogramLayout& layout) {
  json panels = json::array();
  for (const auto& p : layout.panels) {
    json ticks = json::array();
    for (const auto& t : p.x_ticks) ticks.push_back({{"position", t.position}, {"label", t.label}});
    json elements = json::array();
    for (const auto& e : p.elements) elements.push_back(std::visit(ElementJson{}, e));
    panels.push_back({{"role", to_string(p.role)}, {"title", p.title}, {"x_label", p.x_label},
                      {"y_label", p.y_label}, {"x", p.x}, {"y", p.y}, {"width", p.width}, {"height", p.height},
                      {"x_ticks", std::move(ticks)}, {"elements", std::move(elements)}});
  }
  json legend = json::array();
  for (const auto& l : layout.legend) legend.push_back({{"label", l.label}, {"color", l.color}});
  json rows = json::array();
  for (const auto& r : layout.rows) rows.push_back({{"y", r.y}, {"label", r.label}, {"combinations", r.combinations}});
  json columns = json::array();
  for (const auto& c : layout.columns) {
    columns.push_back({{"panel", c.panel}, {"x", c.x}, {"width", c.width}, {"polarity", to_string(c.polarity)},
                       {"rule", c.rule}, {"iteration", c.iteration}});
  }
  return {{"kind", to_string(layout.kind)}, {"type", type_number(layout.kind)}, {"width", layout.width},
          {"height", layout.height}, {"title", layout.title}, {"panels", std::move(panels)},
          {"legend", std::move(legend)}, {"rows", std::move(rows)}, {"columns", std::move(columns)}};
}

json to_json(const ReadTrace& trace, const FeatureSpace& space) {
  json steps = json::array();
  for (const auto& s : trace.steps) {
    steps.push_back({{"key", s.key}, {"description", s.description}, {"focus_kind", to_string(s.focus_kind)},
                     {"focus", s.focus}});
  }
  json out = {{"steps", std::move(steps)}};
  if (trace.polarity) out["result"] = to_string(*trace.polarity);
  if (trace.rule) {
    json assignments = json::array();
    for (const auto& a : trace.rule->assignments) {
      assignments.push_back({{"feature", space[a.feature].name}, {"level", space[a.feature].level_label(a.level)}});
    }
    out["matched"] = {{"polarity", to_string(trace.rule->polarity)}, {"iteration", trace.rule->iteration},
                      {"index", *trace.rule_index}, {"assignments", std::move(assignments)}};
  }
  if (trace.row) {
    out["matched"] = {{"row", *trace.row}};
    out["result"] = *trace.output;
  }
  if (trace.snap_delta) out["snap_delta"] = *trace.snap_delta;
  return out;
}

json to_json(const Finding& f) {
  return {{"code", to_string(f.code)}, {"message", f.message}, {"rows", f.rows}, {"columns", f.columns}};
}

json to_json(const ValidationReport& report) {
  json findings = json::array();
  for (const auto& f : report.findings) findings.push_back(to_json(f));
  return {{"ok", report.ok()}, {"findings", std::move(findings)}};
}

}  // namespace nomoforge
