#include "nomoforge/cli.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <pthread.h>
#include <thread>

#include "nomoforge/errors.hpp"
#include "nomoforge/format.hpp"
#include "nomoforge/limits.hpp"
#include "nomoforge/loader.hpp"
#include "nomoforge/pipeline.hpp"
#include "nomoforge/reader.hpp"
#include "nomoforge/serialize.hpp"
#include "nomoforge/service.hpp"

namespace nomoforge {

namespace {

struct RunConfig {
  std::string features;
  std::string outputs;
  std::string manifest;
  std::string shap;
  bool probability = false;
  bool estimate = false;
  double threshold = kDefaultThreshold;
  std::optional<double> step;
  bool absolute = false;
  std::string out_path;
  std::string format = "svg";
  bool json = false;
  std::vector<std::string> assignments;
};

void add_input_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--features", cfg.features, "CSV of all predictor-value combinations")->required();
  cmd->add_option("--outputs", cfg.outputs, "single-column CSV named 'output'")->required();
  cmd->add_option("--manifest", cfg.manifest, "CSV with columns feature,category")->required();
  cmd->add_option("--shap", cfg.shap, "explainability CSV with the features header");
  auto* prob = cmd->add_flag("--prob", cfg.probability, "outputs are predicted probabilities (types 2 and 4)");
  auto* est = cmd->add_flag("--estimate", cfg.estimate, "outputs are estimated values (types 3 and 5)");
  prob->excludes(est);
  cmd->add_option("--threshold", cfg.threshold, "probability threshold")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--step", cfg.step, "numeric grid step (inferred when omitted)")->check(CLI::PositiveNumber);
  cmd->add_flag("--absolute", cfg.absolute, "rank by maximum absolute explainability");
}

LoadedInputs load(const RunConfig& cfg) {
  InputPaths paths{cfg.features, cfg.outputs, cfg.manifest, std::nullopt};
  if (!cfg.shap.empty()) paths.shap = cfg.shap;
  const auto texts = read_input_files(paths);
  return load_inputs(texts, {cfg.estimate ? OutputKind::Estimate : OutputKind::Probability, cfg.step,
                             kDefaultGridCap});
}

void print_findings(const ValidationReport& report, std::ostream& os) {
  for (const auto& f : report.findings) {
    os << to_string(f.code) << ": " << f.message;
    if (!f.rows.empty()) {
      os << " [rows";
      for (std::size_t i = 0; i < f.rows.size() && i < 10; ++i) os << ' ' << f.rows[i];
      if (f.rows.size() > 10) os << " ...";
      os << ']';
    }
    os << '\n';
  }
}

NomogramOptions options_of(const RunConfig& cfg) {
  return {cfg.probability, cfg.estimate, cfg.threshold, cfg.absolute};
}

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
  const auto loaded = load(cfg);
  if (cfg.json) {
    out << to_json(loaded.report).dump(2) << '\n';
  } else if (loaded.ok()) {
    out << "ok: " << loaded.combos->size() << " combinations, " << loaded.space().size() << " predictors\n";
  } else {
    print_findings(loaded.report, out);
  }
  return loaded.ok() ? kExitOk : kExitDomain;
}

int cmd_create(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto loaded = load(cfg);
  if (!loaded.ok()) {
    print_findings(loaded.report, err);
    return kExitDomain;
  }
  const auto kind = classify_kind(loaded.space(), cfg.probability, cfg.estimate);
  const auto violations =
      check_limits(LimitPolicy::from_environment(), kind, loaded.space().size(), loaded.combos->size());
  if (!violations.empty()) {
    for (const auto& v : violations) err << "LimitExceeded: " << v.message << '\n';
    err << "set NOMOFORGE_LIMITS=off to lift the limits\n";
    return kExitDomain;
  }
  const auto result =
      create_nomogram(*loaded.combos, loaded.outputs, loaded.shap ? &*loaded.shap : nullptr, options_of(cfg));
  for (const auto& w : result.ranking.warnings) err << "warning: " << w.message << '\n';

  std::string payload;
  if (cfg.format == "svg") {
    payload = result.svg;
  } else if (cfg.format == "layout-json") {
    payload = to_json(result.layout).dump(2) + "\n";
  } else {
    if (!result.rules) {
      err << "rules-json is only available for type 1 nomograms\n";
      return kExitDomain;
    }
    payload = to_json(*result.rules).dump(2) + "\n";
  }
  std::ofstream file(cfg.out_path, std::ios::binary);
  if (!file || !(file << payload)) {
    err << "cannot write '" << cfg.out_path << "'\n";
    return kExitUsage;
  }
  out << "wrote type " << type_number(result.kind) << " (" << to_string(result.kind) << ") nomogram to "
      << cfg.out_path << '\n';
  return kExitOk;
}

int cmd_read(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::map<std::string, std::string> assignments;
  for (const auto& a : cfg.assignments) {
    const auto eq = a.find('=');
    if (eq == std::string::npos || eq == 0) {
      err << "malformed assignment '" << a << "' (expected name=value)\n";
      return kExitUsage;
    }
    if (!assignments.emplace(a.substr(0, eq), a.substr(eq + 1)).second) {
      err << "feature '" << a.substr(0, eq) << "' assigned twice\n";
      return kExitUsage;
    }
  }
  const auto loaded = load(cfg);
  if (!loaded.ok()) {
    print_findings(loaded.report, err);
    return kExitDomain;
  }
  Row sample;
  try {
    sample = parse_sample(loaded.space(), assignments);
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kExitUsage;
  }

  ReadTrace trace;
  const auto kind = classify_kind(loaded.space(), cfg.probability, cfg.estimate);
  if (kind == NomogramKind::CatBinNoProb) {
    const auto ranking = loaded.shap ? max_explainability(*loaded.shap, cfg.absolute)
                                     : fallback_explainability(*loaded.combos, loaded.outputs, cfg.threshold);
    const auto rules = derive_rules(*loaded.combos, loaded.outputs, ranking, cfg.threshold);
    trace = read_type1(rules, sample);
  } else {
    trace = read_tabular(*loaded.combos, loaded.outputs, sample);
  }

  if (cfg.json) {
    out << to_json(trace, loaded.space()).dump(2) << '\n';
    return kExitOk;
  }
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    out << "step " << trace.steps[i].key << ": " << trace.steps[i].description << '\n';
  }
  if (trace.rule) {
    out << "result: " << to_string(*trace.polarity) << '\n';
    out << "rule: " << describe(*trace.rule, loaded.space()) << " (iteration " << trace.rule->iteration << ")\n";
  } else {
    out << "result: " << format_number(*trace.output) << '\n';
    out << "row: " << *trace.row << '\n';
  }
  return kExitOk;
}

int cmd_serve(const std::string& host, int port, const std::string& assets, std::size_t max_upload,
              std::ostream& out, std::ostream& err) {
  ServiceConfig config;
  config.max_upload_bytes = max_upload;
  if (!assets.empty()) config.assets_dir = assets;

  // Route SIGTERM/SIGINT to a watcher thread that stops the listener.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGTERM);
  sigaddset(&signals, SIGINT);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  Server server(config);
  if (!server.bind(host, port)) {
    err << "cannot bind " << host << ":" << port << " (port in use?)\n";
    return kExitUsage;
  }
  std::thread watcher([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  out << "listening on http://" << host << ":" << port << std::endl;
  server.run();
  // Wake the watcher if the listener ended for another reason.
  if (server.running()) server.stop();
  pthread_kill(watcher.native_handle(), SIGTERM);
  watcher.join();
  out << "stopped" << std::endl;
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Build explainable nomograms from a model's exhaustive input-output table", "nomoforge"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* validate = app.add_subcommand("validate", "check the input tables");
  add_input_options(validate, cfg);
  validate->add_flag("--json", cfg.json, "print the report as JSON");

  auto* create = app.add_subcommand("create", "render a nomogram");
  add_input_options(create, cfg);
  create->add_option("--out,-o", cfg.out_path, "output file")->required();
  create->add_option("--format", cfg.format, "svg, layout-json or rules-json")
      ->check(CLI::IsMember({"svg", "layout-json", "rules-json"}));

  auto* read = app.add_subcommand("read", "read a nomogram for one sample given as name=value pairs");
  add_input_options(read, cfg);
  read->add_flag("--json", cfg.json, "print the trace as JSON");
  read->add_option("assignments", cfg.assignments, "name=value for every predictor")->required();

  std::string host = "127.0.0.1";
  int port = 8080;
  std::string assets;
  std::size_t max_upload = kDefaultUploadCap;
  auto* serve = app.add_subcommand("serve", "start the HTTP service");
  serve->add_option("--host", host, "bind address");
  serve->add_option("--port", port, "TCP port")->check(CLI::Range(0, 65535));
  serve->add_option("--assets", assets, "directory of web UI assets served under /")->check(CLI::ExistingDirectory);
  serve->add_option("--max-upload-bytes", max_upload, "request body cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*validate) return cmd_validate(cfg, out);
    if (*create) return cmd_create(cfg, out, err);
    if (*read) return cmd_read(cfg, out, err);
    if (*serve) return cmd_serve(host, port, assets, max_upload, out, err);
  } catch (const Error& e) {
    err << to_string(e.code()) << ": " << e.what() << '\n';
    return e.code() == ErrorCode::IoError ? kExitUsage : kExitDomain;
  }
  return kExitUsage;
}

}  // namespace nomoforge
