#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "nomoforge/limits.hpp"

namespace nomoforge {

inline constexpr std::size_t kDefaultUploadCap = 10u * 1024u * 1024u;

struct ServiceConfig {
  LimitPolicy limits = LimitPolicy::from_environment();
  std::size_t max_upload_bytes = kDefaultUploadCap;
  std::optional<std::filesystem::path> assets_dir;
};

struct HttpReply {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
  std::map<std::string, std::string> headers;
};

/// FNV-1a 64-bit digest as 16 lowercase hex digits.
std::string content_hash(std::string_view bytes);

/// POST /api/v1/nomogram. `parts` maps multipart names to contents: files
/// features, outputs, manifest, shap (optional); fields prob, estimate, threshold.
HttpReply handle_nomogram(const std::map<std::string, std::string>& parts, const ServiceConfig& config);

/// POST /api/v1/read with a JSON body holding "sample" plus either "rules"
/// (type 1) or "table" {features, outputs, manifest, estimate}.
HttpReply handle_read(std::string_view body, const ServiceConfig& config);

/// HTTP listener around the handlers. Requests are served concurrently; stop()
/// closes the listener and drains in-flight requests.
class Server {
 public:
  explicit Server(ServiceConfig config);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// False when the address cannot be bound (e.g. port in use).
  bool bind(const std::string& host, int port);
  /// Binds an ephemeral port and returns it, or -1.
  int bind_any(const std::string& host);
  /// Blocks until stop().
  bool run();
  void stop();
  bool running() const;
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace nomoforge
