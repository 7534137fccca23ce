#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nomoforge/errors.hpp"
#include "nomoforge/format.hpp"
#include "nomoforge/limits.hpp"
#include "nomoforge/loader.hpp"
#include "nomoforge/pipeline.hpp"
#include "nomoforge/reader.hpp"
#include "nomoforge/regression.hpp"
#include "nomoforge/serialize.hpp"
#include "nomoforge/service.hpp"

namespace py = pybind11;
using namespace nomoforge;

namespace {

py::object to_py(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

json from_py(const py::handle& obj) {
  return json::parse(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

LoadedInputs load_checked(const std::string& features, const std::string& outputs, const std::string& manifest,
                          const std::optional<std::string>& shap, bool estimate) {
  auto loaded = load_inputs({features, outputs, manifest, shap},
                            {estimate ? OutputKind::Estimate : OutputKind::Probability, std::nullopt, kDefaultGridCap});
  if (!loaded.ok()) {
    const auto message = loaded.report.findings.empty() ? std::string("invalid inputs")
                                                        : loaded.report.findings.front().message;
    throw Error(ErrorCode::InvalidInput, "inputs failed validation: " + message);
  }
  return loaded;
}

std::map<std::string, std::string> assignments_of(const py::dict& sample) {
  std::map<std::string, std::string> out;
  for (const auto& [key, value] : sample) {
    const auto name = py::str(key).cast<std::string>();
    if (py::isinstance<py::float_>(value) || py::isinstance<py::int_>(value)) {
      out[name] = format_number(value.cast<double>());
    } else {
      out[name] = py::str(value).cast<std::string>();
    }
  }
  return out;
}

py::dict fit_dict(const SlopeFit& f) {
  py::dict d;
  d["intercept"] = f.intercept;
  d["slope"] = f.slope;
  d["slope_se"] = f.slope_se;
  d["converged"] = f.converged;
  d["degenerate"] = f.degenerate;
  return d;
}

py::tuple reply_tuple(const HttpReply& r) { return py::make_tuple(r.status, r.body, r.headers); }

}  // namespace

PYBIND11_MODULE(_nomoforge, m) {
  m.doc() = "Nomogram construction from a tabular model's combination space";

  static py::exception<Error> error_type(m, "NomoforgeError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::handle(error_type.ptr())(std::string(to_string(e.code())) + ": " + e.what());
      exc.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  m.def("content_hash", [](const py::bytes& data) { return content_hash(std::string(data)); }, py::arg("data"));

  m.def(
      "expand_grid",
      [](const py::object& features, std::size_t grid_cap) {
        const auto table = expand_grid(space_from_json(from_py(features)), grid_cap);
        py::list rows;
        for (const auto& row : table.rows()) {
          py::list cells;
          for (const auto& cell : row) {
            if (const auto* s = std::get_if<std::string>(&cell)) {
              cells.append(*s);
            } else {
              cells.append(std::get<double>(cell));
            }
          }
          rows.append(std::move(cells));
        }
        return rows;
      },
      py::arg("features"), py::arg("grid_cap") = kDefaultGridCap,
      "Full combination grid for a feature list, last feature varying fastest.");

  m.def(
      "validate",
      [](const std::string& features, const std::string& outputs, const std::string& manifest,
         const std::optional<std::string>& shap, bool estimate) {
        const auto loaded = load_inputs({features, outputs, manifest, shap},
                                        {estimate ? OutputKind::Estimate : OutputKind::Probability, std::nullopt,
                                         kDefaultGridCap});
        return to_py(to_json(loaded.report));
      },
      py::arg("features"), py::arg("outputs"), py::arg("manifest"), py::arg("shap") = py::none(),
      py::arg("estimate") = false);

  m.def(
      "classify_kind",
      [](const py::object& features, bool prob, bool estimate) {
        const auto kind = classify_kind(space_from_json(from_py(features)), prob, estimate);
        return py::make_tuple(std::string(to_string(kind)), type_number(kind));
      },
      py::arg("features"), py::arg("prob") = false, py::arg("estimate") = false);

  m.def(
      "rank_predictors",
      [](const std::string& features, const std::string& outputs, const std::string& manifest,
         const std::optional<std::string>& shap, bool estimate, double threshold, bool absolute) {
        const auto loaded = load_checked(features, outputs, manifest, shap, estimate);
        const auto ranking = loaded.shap ? max_explainability(*loaded.shap, absolute)
                                         : fallback_explainability(*loaded.combos, loaded.outputs, threshold);
        json warnings = json::array();
        for (const auto& w : ranking.warnings) warnings.push_back(to_json(w));
        return to_py({{"ranking", to_json(ranking)},
                      {"descending", rank_predictors(ranking, RankDirection::Descending)},
                      {"warnings", std::move(warnings)}});
      },
      py::arg("features"), py::arg("outputs"), py::arg("manifest"), py::arg("shap") = py::none(),
      py::arg("estimate") = false, py::arg("threshold") = kDefaultThreshold, py::arg("absolute") = false,
      "Explainability maximum per predictor, or the regression fallback when no table is given.");

  m.def(
      "derive_rules",
      [](const std::string& features, const std::string& outputs, const std::string& manifest,
         const py::object& ranking, double threshold, bool oracle) {
        const auto loaded = load_checked(features, outputs, manifest, std::nullopt, false);
        const auto r = ranking_from_json(from_py(ranking));
        const auto rules = oracle ? derive_rules_oracle(*loaded.combos, loaded.outputs, r, threshold)
                                  : derive_rules(*loaded.combos, loaded.outputs, r, threshold);
        return to_py(to_json(rules));
      },
      py::arg("features"), py::arg("outputs"), py::arg("manifest"), py::arg("ranking"),
      py::arg("threshold") = kDefaultThreshold, py::arg("oracle") = false);

  m.def(
      "match_rule",
      [](const py::object& rules, const py::dict& sample) {
        const auto list = rules_from_json(from_py(rules));
        const auto match = match_rule(list, parse_sample(list.space, assignments_of(sample)));
        return py::make_tuple(std::string(to_string(match.polarity)), match.index);
      },
      py::arg("rules"), py::arg("sample"));

  m.def(
      "create_nomogram",
      [](const std::string& features, const std::string& outputs, const std::string& manifest,
         const std::optional<std::string>& shap, bool prob, bool estimate, double threshold, bool absolute) {
        const auto loaded = load_checked(features, outputs, manifest, shap, estimate);
        NomogramOptions options{prob, estimate, threshold, absolute};
        const auto result =
            create_nomogram(*loaded.combos, loaded.outputs, loaded.shap ? &*loaded.shap : nullptr, options);
        json body = {{"kind", to_string(result.kind)},
                     {"type", type_number(result.kind)},
                     {"svg", result.svg},
                     {"layout", to_json(result.layout)},
                     {"ranking", to_json(result.ranking)},
                     {"fallback_ranking", result.fallback_ranking}};
        if (result.rules) body["rules"] = to_json(*result.rules);
        return to_py(body);
      },
      py::arg("features"), py::arg("outputs"), py::arg("manifest"), py::arg("shap") = py::none(),
      py::arg("prob") = false, py::arg("estimate") = false, py::arg("threshold") = kDefaultThreshold,
      py::arg("absolute") = false);

  m.def(
      "read_type1",
      [](const py::object& rules, const py::dict& sample) {
        const auto list = rules_from_json(from_py(rules));
        return to_py(to_json(read_type1(list, parse_sample(list.space, assignments_of(sample))), list.space));
      },
      py::arg("rules"), py::arg("sample"));

  m.def(
      "read_tabular",
      [](const std::string& features, const std::string& outputs, const std::string& manifest,
         const py::dict& sample, bool estimate) {
        const auto loaded = load_checked(features, outputs, manifest, std::nullopt, estimate);
        const auto row = parse_sample(loaded.space(), assignments_of(sample));
        return to_py(to_json(read_tabular(*loaded.combos, loaded.outputs, row), loaded.space()));
      },
      py::arg("features"), py::arg("outputs"), py::arg("manifest"), py::arg("sample"), py::arg("estimate") = false);

  m.def(
      "fit_logistic",
      [](const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& weights) {
        return fit_dict(fit_logistic(x, y, weights));
      },
      py::arg("x"), py::arg("y"), py::arg("weights") = std::vector<double>{});
  m.def(
      "fit_logistic_corrected",
      [](const std::vector<double>& x, const std::vector<double>& y) {
        const auto r = fit_logistic_corrected(x, y);
        auto d = fit_dict(r.fit);
        d["corrected"] = r.corrected;
        return d;
      },
      py::arg("x"), py::arg("y"));
  m.def("fit_ols", [](const std::vector<double>& x, const std::vector<double>& y) { return fit_dict(fit_ols(x, y)); },
        py::arg("x"), py::arg("y"));
  m.attr("WALD_Z") = kWaldZ95;

  m.def(
      "handle_nomogram",
      [](const std::map<std::string, std::string>& parts, bool limits) {
        ServiceConfig config;
        config.limits.enabled = limits;
        return reply_tuple(handle_nomogram(parts, config));
      },
      py::arg("parts"), py::arg("limits") = true,
      "Service handler for POST /api/v1/nomogram; returns (status, body, headers).");
  m.def(
      "handle_read",
      [](const std::string& body) { return reply_tuple(handle_read(body, ServiceConfig{})); }, py::arg("body"),
      "Service handler for POST /api/v1/read; returns (status, body, headers).");
}
