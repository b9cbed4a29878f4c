#include "json_io.hpp"

#include <variant>

namespace hypforge::json_io {

json span_json(const SourceSpan& s) {
  return {{"offset", s.offset}, {"line", s.line}, {"column", s.column}, {"length", s.length}};
}

json to_json(const Diagnostic& d) {
  return {{"severity", to_string(d.severity)}, {"code", d.code}, {"message", d.message}, {"span", span_json(d.span)}};
}

json to_json(const Token& t) {
  return {{"kind", to_string(t.kind)}, {"text", t.text}, {"span", span_json(t.span)}};
}

json to_json(const GraphDoc& g) {
  json nodes = json::array();
  for (const auto& n : g.nodes) {
    nodes.push_back({{"id", n.id},
                     {"class", to_string(n.node_class)},
                     {"observations", n.observations},
                     {"parent", n.parent ? json(*n.parent) : json(nullptr)},
                     {"start", n.start}});
  }
  json edges = json::array();
  for (const auto& e : g.edges) edges.push_back({{"from", e.from}, {"to", e.to}});
  return {{"nodes", nodes}, {"edges", edges}};
}

json to_json(const ModelRecord& r, bool with_source) {
  json j = {{"id", r.id},
            {"created", r.created},
            {"updated", r.updated},
            {"last_parse", {{"errors", r.errors}, {"warnings", r.warnings}}}};
  if (with_source) j["source"] = r.source;
  return j;
}

json to_json(const Hypothesis& h, const Trace& trace) {
  json steps = json::array();
  std::vector<json> obs(trace.size());
  for (std::size_t k = 0; k < h.steps.size(); ++k) {
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, EnterState>) {
            steps.push_back({{"kind", "state"}, {"id", s.state}, {"type", to_string(s.type)}, {"explained", s.explained}});
            for (auto i : s.explained) {
              if (i < obs.size()) obs[i] = {{"disposition", "explained"}, {"step", k}};
            }
          } else if constexpr (std::is_same_v<T, EnterHyperstate>) {
            steps.push_back({{"kind", "hyperstate"}, {"id", s.hyper}});
          } else {
            steps.push_back({{"kind", "discard"}, {"index", s.index}});
            if (s.index < obs.size()) obs[s.index] = {{"disposition", "discarded"}, {"step", k}};
          }
        },
        h.steps[k]);
  }
  json observations = json::array();
  for (std::size_t i = 0; i < trace.size(); ++i) {
    json o = obs[i].is_null() ? json{{"disposition", "unprocessed"}} : obs[i];
    o["index"] = i;
    o["symbol"] = trace.symbol(i);
    observations.push_back(std::move(o));
  }
  return {{"rank", h.rank},
          {"cost", h.total_cost},
          {"discards", h.discard_count()},
          {"states", h.state_sequence()},
          {"steps", steps},
          {"observations", observations}};
}

json diagnostics_json(const std::vector<Diagnostic>& ds) {
  json out = json::array();
  for (const auto& d : ds) out.push_back(to_json(d));
  return out;
}

}  // namespace hypforge::json_io
