#include "hypforge/service.hpp"

#include <mutex>
#include <random>
#include <sstream>

#include "hypforge/graph.hpp"
#include "hypforge/lint.hpp"
#include "hypforge/model_store.hpp"
#include "hypforge/parser.hpp"
#include "hypforge/problem.hpp"
#include "httplib.h"
#include "json_io.hpp"

namespace hypforge {

namespace {

using json_io::json;

Response reply(int status, const json& body) {
  Response r;
  r.status = status;
  r.body = body.dump(-1, ' ', false, json::error_handler_t::replace);
  return r;
}

Response error(int status, const std::string& message, json extra = json::object()) {
  extra["error"] = message;
  return reply(status, extra);
}

bool valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xe ? 3 : (c >> 3) == 0x1e ? 4 : 0;
    if (len == 0 || i + len > s.size()) return false;
    for (std::size_t k = 1; k < len; ++k) {
      if ((static_cast<unsigned char>(s[i + k]) >> 6) != 0x2) return false;
    }
    i += len;
  }
  return true;
}

bool is_json(const Request& r) { return r.content_type.find("application/json") != std::string::npos; }

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> out;
  std::stringstream ss(path);
  std::string seg;
  while (std::getline(ss, seg, '/')) {
    if (!seg.empty()) out.push_back(seg);
  }
  return out;
}

struct Analysis {
  ParseResult parsed;
  std::vector<Diagnostic> diagnostics;  // errors, or lint warnings of a clean parse
  std::size_t errors = 0;
  std::size_t warnings = 0;
};

Analysis analyze(const std::string& source) {
  Analysis a;
  a.parsed = parse(source);
  a.diagnostics = a.parsed.diagnostics;
  if (a.parsed.ok()) {
    auto w = lint(*a.parsed.model);
    a.diagnostics.insert(a.diagnostics.end(), w.begin(), w.end());
  }
  sort_by_span(a.diagnostics);
  for (const auto& d : a.diagnostics) (d.severity == Severity::error ? a.errors : a.warnings)++;
  return a;
}

json parse_payload(const std::string& source, const Analysis& a) {
  json tokens = json::array();
  for (const auto& t : tokenize(source)) tokens.push_back(json_io::to_json(t));
  json out = {{"tokens", tokens},
              {"diagnostics", json_io::diagnostics_json(a.diagnostics)},
              {"errors", a.errors},
              {"warnings", a.warnings}};
  if (a.parsed.ok()) out["graph"] = json_io::to_json(render_graph(*a.parsed.model));
  return out;
}

struct Session {
  std::mutex mu;
  std::string model_id;
  Trace trace;
  TopKSearch search;
  Clock::time_point last_used;

  Session(std::string id, Trace t, std::shared_ptr<const PlanningProblem> p, Clock::time_point now)
      : model_id(std::move(id)), trace(std::move(t)), search(std::move(p)), last_used(now) {}
};

}  // namespace

struct Service::Impl {
  ServiceOptions options;
  ModelStore store;
  mutable std::mutex sessions_mu;
  std::map<std::string, std::shared_ptr<Session>> sessions;
  std::mt19937_64 token_rng{std::random_device{}()};

  explicit Impl(ServiceOptions o) : options(std::move(o)), store(options.store_path) {}

  // Source from a JSON envelope {"source": ...} or a raw text body.
  std::variant<std::string, Response> read_source(const Request& r) {
    std::string source = r.body;
    if (is_json(r) && !r.body.empty()) {
      json j = json::parse(r.body, nullptr, false);
      if (j.is_discarded() || !j.is_object() || !j.contains("source") || !j["source"].is_string()) {
        return error(400, "expected a JSON object with a string field 'source'");
      }
      source = j["source"].get<std::string>();
    }
    if (!valid_utf8(source)) return error(400, "source is not valid UTF-8");
    return source;
  }

  std::string new_token() {
    std::lock_guard lock(sessions_mu);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(token_rng()),
                  static_cast<unsigned long long>(token_rng()));
    return buf;
  }

  void expire(Clock::time_point now) {
    std::lock_guard lock(sessions_mu);
    for (auto it = sessions.begin(); it != sessions.end();) {
      std::unique_lock s(it->second->mu, std::try_to_lock);
      if (s.owns_lock() && now - it->second->last_used > options.session_ttl) {
        s.unlock();
        it = sessions.erase(it);
      } else {
        ++it;
      }
    }
  }

  Response handle(const Request& r) {
    if (r.body.size() > options.max_body_bytes) return error(413, "request body too large");
    expire(options.now());
    const auto seg = split_path(r.path);
    if (seg.size() == 1 && seg[0] == "parse") {
      if (r.method != "POST") return error(405, "method not allowed");
      auto src = read_source(r);
      if (auto* resp = std::get_if<Response>(&src)) return *resp;
      const auto& source = std::get<std::string>(src);
      return reply(200, parse_payload(source, analyze(source)));
    }
    if (seg.empty() || seg[0] != "models") return error(404, "no such endpoint");
    if (seg.size() == 1) {
      if (r.method != "POST") return error(405, "method not allowed");
      auto src = read_source(r);
      if (auto* resp = std::get_if<Response>(&src)) return *resp;
      const auto& source = std::get<std::string>(src);
      const Analysis a = analyze(source);
      return reply(201, json_io::to_json(store.create(source, a.errors, a.warnings), true));
    }
    const std::string& id = seg[1];
    if (seg.size() == 2) {
      if (r.method == "GET") {
        auto rec = store.get(id);
        if (!rec) return error(404, "unknown model '" + id + "'");
        return reply(200, json_io::to_json(*rec, true));
      }
      if (r.method == "PUT") {
        auto src = read_source(r);
        if (auto* resp = std::get_if<Response>(&src)) return *resp;
        const auto& source = std::get<std::string>(src);
        const Analysis a = analyze(source);
        auto rec = store.update(id, source, a.errors, a.warnings);
        if (!rec) return error(404, "unknown model '" + id + "'");
        return reply(200, json_io::to_json(*rec, true));
      }
      return error(405, "method not allowed");
    }
    if (seg.size() != 3) return error(404, "no such endpoint");
    const std::string& what = seg[2];
    auto rec = store.get(id);
    if (what == "parse") {
      if (r.method != "POST") return error(405, "method not allowed");
      if (!rec) return error(404, "unknown model '" + id + "'");
      const Analysis a = analyze(rec->source);
      store.set_parse_summary(id, a.errors, a.warnings);
      return reply(200, parse_payload(rec->source, a));
    }
    if (what == "graph" || what == "vocabulary") {
      if (r.method != "GET") return error(405, "method not allowed");
      if (!rec) return error(404, "unknown model '" + id + "'");
      const ParseResult pr = parse(rec->source);
      if (!pr.ok()) return error(409, "model has parse errors", {{"diagnostics", json_io::diagnostics_json(pr.diagnostics)}});
      if (what == "graph") return reply(200, json_io::to_json(render_graph(*pr.model)));
      return reply(200, {{"observations", pr.model->observation_vocab()}});
    }
    if (what == "hypotheses") {
      if (r.method != "POST") return error(405, "method not allowed");
      return hypotheses(r, id, rec);
    }
    return error(404, "no such endpoint");
  }

  Response hypotheses(const Request& r, const std::string& id, const std::optional<ModelRecord>& rec) {
    Trace trace;
    std::size_t page = 1;
    std::optional<std::string> token;
    auto parse_page = [&](const json& v) -> bool {
      if (!v.is_number_integer() || v.get<long long>() < 1) return false;
      page = v.get<std::size_t>();
      return true;
    };
    if (is_json(r)) {
      json j = r.body.empty() ? json::object() : json::parse(r.body, nullptr, false);
      if (j.is_discarded() || !j.is_object()) return error(400, "expected a JSON object");
      if (j.contains("page") && !parse_page(j["page"])) return error(400, "page must be a positive integer");
      if (j.contains("token") && !j["token"].is_null()) {
        if (!j["token"].is_string()) return error(400, "token must be a string");
        token = j["token"].get<std::string>();
      }
      if (j.contains("trace")) {
        if (!j["trace"].is_array()) return error(400, "trace must be an array");
        for (const auto& e : j["trace"]) {
          if (e.is_string()) {
            trace.events.push_back({e.get<std::string>(), std::nullopt});
          } else if (e.is_object() && e.contains("symbol") && e["symbol"].is_string()) {
            TraceEvent ev{e["symbol"].get<std::string>(), std::nullopt};
            if (e.contains("timestamp") && e["timestamp"].is_string()) ev.timestamp = e["timestamp"].get<std::string>();
            trace.events.push_back(std::move(ev));
          } else {
            return error(400, "trace entries must be symbols or {symbol, timestamp} objects");
          }
        }
      }
    } else {
      try {
        trace = parse_trace_text(r.body);
      } catch (const std::invalid_argument& e) {
        return error(400, e.what());
      }
      if (auto it = r.query.find("page"); it != r.query.end()) {
        json v = json::parse(it->second, nullptr, false);
        if (!parse_page(v)) return error(400, "page must be a positive integer");
      }
      if (auto it = r.query.find("token"); it != r.query.end() && !it->second.empty()) token = it->second;
    }

    std::shared_ptr<Session> session;
    std::string session_token;
    if (token) {
      std::lock_guard lock(sessions_mu);
      auto it = sessions.find(*token);
      if (it == sessions.end()) return error(410, "generation token expired or unknown; generate again");
      if (it->second->model_id != id) return error(400, "token belongs to another model");
      session = it->second;
      session_token = *token;
    } else {
      if (!rec) return error(404, "unknown model '" + id + "'");
      const ParseResult pr = parse(rec->source);
      if (!pr.ok()) return error(409, "model has parse errors", {{"diagnostics", json_io::diagnostics_json(pr.diagnostics)}});
      std::shared_ptr<const PlanningProblem> problem;
      try {
        problem = std::make_shared<const PlanningProblem>(compile(*pr.model, trace, options.params));
      } catch (const CompileError& e) {
        return error(422, e.what(), {{"symbol", e.symbol()}, {"position", e.position()}});
      }
      session = std::make_shared<Session>(id, trace, std::move(problem), options.now());
      session_token = new_token();
      std::lock_guard lock(sessions_mu);
      sessions[session_token] = session;
    }

    std::lock_guard lock(session->mu);
    session->last_used = options.now();
    const std::size_t size = options.page_size;
    const std::size_t first = (page - 1) * size;
    const auto deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(options.page_budget);
    session->search.extend(page * size + 1, deadline);
    const ResultSet rs = session->search.results(first, first + size);
    json items = json::array();
    for (const auto& h : rs.hypotheses) items.push_back(json_io::to_json(h, session->trace));
    const bool has_next = session->search.available() > page * size || !session->search.exhausted();
    return reply(200, {{"token", session_token},
                       {"page", page},
                       {"page_size", size},
                       {"items", items},
                       {"has_next", has_next},
                       {"exhausted", session->search.exhausted() && !has_next},
                       {"trace", session->trace.symbols()}});
  }
};

Service::Service(ServiceOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {}
Service::~Service() = default;

Response Service::handle(const Request& request) {
  try {
    return impl_->handle(request);
  } catch (const std::exception& e) {
    return error(500, e.what());
  }
}

std::size_t Service::session_count() const {
  std::lock_guard lock(impl_->sessions_mu);
  return impl_->sessions.size();
}

struct HttpServer::Impl {
  httplib::Server server;
};

HttpServer::HttpServer(Service& service, std::size_t max_body_bytes) : impl_(std::make_unique<Impl>()) {
  impl_->server.set_payload_max_length(max_body_bytes);
  auto bridge = [&service](const httplib::Request& hr, httplib::Response& res) {
    Request r;
    r.method = hr.method;
    r.path = hr.path;
    r.body = hr.body;
    r.content_type = hr.get_header_value("Content-Type");
    for (const auto& [k, v] : hr.params) r.query.emplace(k, v);
    Response out = service.handle(r);
    res.status = out.status;
    res.set_content(out.body, out.content_type);
  };
  impl_->server.Get(R"(/.*)", bridge);
  impl_->server.Post(R"(/.*)", bridge);
  impl_->server.Put(R"(/.*)", bridge);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int p = impl_->server.bind_to_any_port(host);
    if (p < 0) throw std::runtime_error("cannot bind " + host);
    return p;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

}  // namespace hypforge
