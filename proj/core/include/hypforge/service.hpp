#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "hypforge/cost.hpp"
#include "hypforge/search.hpp"

namespace hypforge {

struct Request {
  std::string method;  // GET, POST, PUT
  std::string path;
  std::string body;
  std::string content_type;
  std::map<std::string, std::string> query;
};

struct Response {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

struct ServiceOptions {
  std::size_t max_body_bytes = 1 << 20;
  std::size_t page_size = 10;
  Seconds session_ttl{600.0};
  Seconds page_budget{60.0};
  CostParams params;
  std::optional<std::string> store_path;  // memory only when absent
  std::function<Clock::time_point()> now = [] { return Clock::now(); };
};

/// The JSON API behind the IDE, independent of any transport:
///
///   POST /parse                      tokens, diagnostics, graph when error-free
///   POST /models                     store a model
///   GET  /models/{id}                stored record with its source
///   PUT  /models/{id}                replace the source
///   POST /models/{id}/parse          parse the stored source
///   GET  /models/{id}/graph          transition graph
///   GET  /models/{id}/vocabulary     sorted observation symbols
///   POST /models/{id}/hypotheses     a page of ranked hypotheses
///
/// Generation sessions keep their search paused between pages and expire
/// after `session_ttl` without use.
class Service {
 public:
  explicit Service(ServiceOptions options = {});
  ~Service();

  Response handle(const Request& request);
  std::size_t session_count() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// HTTP transport for a Service.
class HttpServer {
 public:
  HttpServer(Service& service, std::size_t max_body_bytes);
  ~HttpServer();

  /// Binds to `port`, or to a free port when it is 0. Returns the port.
  /// Throws std::runtime_error on failure.
  int bind(const std::string& host, int port);
  /// Serves until stop() is called from another thread.
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace hypforge
