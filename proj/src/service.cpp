#include "nomoforge/service.hpp"

#include <httplib.h>

#include <cstdio>
#include <unistd.h>

#include "nomoforge/csv.hpp"
#include "nomoforge/errors.hpp"
#include "nomoforge/format.hpp"
#include "nomoforge/loader.hpp"
#include "nomoforge/pipeline.hpp"
#include "nomoforge/reader.hpp"
#include "nomoforge/serialize.hpp"

namespace nomoforge {

namespace {

constexpr const char* kIndexPage =
    "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>nomoforge</title></head>\n"
    "<body><h1>nomoforge</h1><p>The web interface is not installed. Start the server with "
    "<code>--assets DIR</code> to serve it. The API lives under <code>/api/v1/</code>.</p></body></html>\n";

HttpReply json_reply(int status, const json& body) {
  return {status, "application/json", body.dump(), {}};
}

HttpReply error_reply(int status, std::string_view code, const std::string& message,
                      const std::vector<Finding>& findings = {}) {
  json list = json::array();
  for (const auto& f : findings) list.push_back(to_json(f));
  return json_reply(status, {{"error", code}, {"message", message}, {"findings", std::move(list)}});
}

bool truthy(const std::map<std::string, std::string>& parts, const std::string& key) {
  const auto it = parts.find(key);
  if (it == parts.end()) return false;
  const auto& v = it->second;
  return v == "1" || v == "true" || v == "TRUE" || v == "on" || v == "yes";
}

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return 400;
    case ErrorCode::PartitionViolation:
    case ErrorCode::IoError: return 500;
    default: return 422;
  }
}

}  // namespace

std::string content_hash(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

HttpReply handle_nomogram(const std::map<std::string, std::string>& parts, const ServiceConfig& config) {
  for (const char* required : {"features", "outputs", "manifest"}) {
    if (!parts.contains(required)) {
      return error_reply(400, "MalformedUpload", std::string("missing multipart file '") + required + "'");
    }
  }
  NomogramOptions options;
  options.probability = truthy(parts, "prob");
  options.estimate = truthy(parts, "estimate");
  if (options.probability && options.estimate) {
    return error_reply(400, "MalformedUpload", "prob and estimate are mutually exclusive");
  }
  if (const auto it = parts.find("threshold"); it != parts.end() && !it->second.empty()) {
    const auto t = parse_double(it->second);
    if (!t || !(*t > 0.0 && *t < 1.0)) {
      return error_reply(400, "MalformedUpload", "threshold must be a number strictly between 0 and 1");
    }
    options.threshold = *t;
  }

  // Limits first: only the headers and row counts are needed.
  CsvTable features, manifest;
  try {
    features = parse_csv(parts.at("features"));
    manifest = parse_csv(parts.at("manifest"));
  } catch (const Error& e) {
    return error_reply(400, "MalformedUpload", e.what());
  }
  std::size_t categorical = 0;
  for (const auto& name : features.header) {
    const bool listed = std::any_of(manifest.rows.begin(), manifest.rows.end(),
                                    [&](const auto& row) { return !row.empty() && row[0] == name; });
    if (listed) ++categorical;
  }
  const bool has_numeric = categorical < features.header.size();
  NomogramKind kind = NomogramKind::CatBinNoProb;
  if (options.probability) kind = has_numeric ? NomogramKind::MixedBinProb : NomogramKind::CatBinProb;
  if (options.estimate) kind = has_numeric ? NomogramKind::MixedCont : NomogramKind::CatCont;
  if (auto violations = check_limits(config.limits, kind, features.header.size(), features.rows.size());
      !violations.empty()) {
    return error_reply(422, "LimitExceeded", violations.front().message, violations);
  }

  InputTexts texts{parts.at("features"), parts.at("outputs"), parts.at("manifest"), std::nullopt};
  if (const auto it = parts.find("shap"); it != parts.end() && !it->second.empty()) texts.shap = it->second;

  try {
    auto loaded = load_inputs(texts, {output_kind_for(options), std::nullopt, kDefaultGridCap});
    if (!loaded.ok()) {
      return error_reply(422, "ValidationFailed",
                         loaded.report.findings.empty() ? "invalid inputs" : loaded.report.findings.front().message,
                         loaded.report.findings);
    }
    const auto result =
        create_nomogram(*loaded.combos, loaded.outputs, loaded.shap ? &*loaded.shap : nullptr, options);
    json body = {{"kind", to_string(result.kind)},
                 {"type", type_number(result.kind)},
                 {"svg", result.svg},
                 {"layout", to_json(result.layout)},
                 {"ranking", to_json(result.ranking)},
                 {"fallback_ranking", result.fallback_ranking},
                 {"features", to_json(loaded.space())}};
    json warnings = json::array();
    for (const auto& w : result.ranking.warnings) warnings.push_back(to_json(w));
    body["warnings"] = std::move(warnings);
    if (result.rules) body["rules"] = to_json(*result.rules);
    auto reply = json_reply(200, body);
    const auto hash = content_hash(result.svg);
    reply.headers["X-Content-Hash"] = "fnv1a64:" + hash;
    reply.headers["ETag"] = "\"" + hash + "\"";
    return reply;
  } catch (const Error& e) {
    return error_reply(status_for(e.code()), to_string(e.code()), e.what());
  }
}

HttpReply handle_read(std::string_view body, const ServiceConfig&) {
  json request;
  try {
    request = json::parse(body);
  } catch (const json::exception& e) {
    return error_reply(400, "MalformedRequest", e.what());
  }
  if (!request.is_object() || !request.contains("sample") || !request["sample"].is_object()) {
    return error_reply(400, "MalformedRequest", "body needs a 'sample' object");
  }
  std::map<std::string, std::string> assignments;
  for (const auto& [key, value] : request["sample"].items()) {
    if (value.is_string()) {
      assignments[key] = value.get<std::string>();
    } else if (value.is_number()) {
      assignments[key] = format_number(value.get<double>());
    } else {
      return error_reply(400, "MalformedRequest", "sample values must be strings or numbers");
    }
  }

  try {
    if (request.contains("rules")) {
      const auto rules = rules_from_json(request["rules"]);
      const auto sample = parse_sample(rules.space, assignments);
      return json_reply(200, to_json(read_type1(rules, sample), rules.space));
    }
    if (request.contains("table")) {
      const auto& table = request["table"];
      InputTexts texts{table.value("features", ""), table.value("outputs", ""), table.value("manifest", ""),
                       std::nullopt};
      const bool estimate = table.value("estimate", false);
      auto loaded = load_inputs(texts, {estimate ? OutputKind::Estimate : OutputKind::Probability, std::nullopt,
                                        kDefaultGridCap});
      if (!loaded.ok()) {
        return error_reply(422, "ValidationFailed", "table failed validation", loaded.report.findings);
      }
      const auto sample = parse_sample(loaded.space(), assignments);
      return json_reply(200, to_json(read_tabular(*loaded.combos, loaded.outputs, sample), loaded.space()));
    }
  } catch (const Error& e) {
    return error_reply(status_for(e.code()), to_string(e.code()), e.what());
  } catch (const json::exception& e) {
    return error_reply(400, "MalformedRequest", e.what());
  }
  return error_reply(400, "MalformedRequest", "body needs 'rules' or 'table'");
}

// ---------------------------------------------------------------------------

namespace {

// httplib only closes its listening socket from a running server; a socket that
// was bound but never served would otherwise hold the port until exit.
class Listener : public httplib::Server {
 public:
  void release_unused() {
    if (is_running()) return;
    const socket_t sock = svr_sock_.exchange(INVALID_SOCKET);
    if (sock != INVALID_SOCKET) ::close(sock);
  }
};

}  // namespace

struct Server::Impl {
  ServiceConfig config;
  Listener http;
};

namespace {

void send(httplib::Response& res, const HttpReply& reply) {
  res.status = reply.status;
  for (const auto& [k, v] : reply.headers) res.set_header(k, v);
  res.set_content(reply.body, reply.content_type);
}

}  // namespace

Server::Server(ServiceConfig config) : impl_(std::make_unique<Impl>()) {
  impl_->config = std::move(config);
  auto& http = impl_->http;
  const auto* cfg = &impl_->config;
  http.set_payload_max_length(cfg->max_upload_bytes);
  // SO_REUSEADDR only: a second listener on a busy port must fail to bind.
  http.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
  });

  http.Get("/healthz", [](const httplib::Request&, httplib::Response& res) { res.set_content("ok", "text/plain"); });

  http.Post("/api/v1/nomogram", [cfg](const httplib::Request& req, httplib::Response& res) {
    if (!req.is_multipart_form_data()) {
      send(res, error_reply(400, "MalformedUpload", "expected multipart/form-data"));
      return;
    }
    std::map<std::string, std::string> parts;
    for (const auto& [name, item] : req.files) parts.emplace(name, item.content);
    send(res, handle_nomogram(parts, *cfg));
  });

  http.Post("/api/v1/read", [cfg](const httplib::Request& req, httplib::Response& res) {
    send(res, handle_read(req.body, *cfg));
  });

  if (cfg->assets_dir) {
    http.set_mount_point("/", cfg->assets_dir->string());
  } else {
    http.Get("/", [](const httplib::Request&, httplib::Response& res) { res.set_content(kIndexPage, "text/html"); });
  }
}

Server::~Server() { stop(); }

bool Server::bind(const std::string& host, int port) { return impl_->http.bind_to_port(host, port); }

int Server::bind_any(const std::string& host) { return impl_->http.bind_to_any_port(host); }

bool Server::run() { return impl_->http.listen_after_bind(); }

void Server::stop() {
  if (!impl_) return;
  impl_->http.stop();
  impl_->http.release_unused();
}

bool Server::running() const { return impl_->http.is_running(); }

void Server::wait_until_ready() const { impl_->http.wait_until_ready(); }

}  // namespace nomoforge
