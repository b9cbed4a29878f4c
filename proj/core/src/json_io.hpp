#pragma once

#include <string>
#include <vector>

#include "hypforge/diagnostic.hpp"
#include "hypforge/graph.hpp"
#include "hypforge/hypothesis.hpp"
#include "hypforge/lexer.hpp"
#include "hypforge/model_store.hpp"
#include "json.hpp"

namespace hypforge::json_io {

using nlohmann::json;

json span_json(const SourceSpan& span);
json to_json(const Diagnostic& d);
json to_json(const Token& t);
json to_json(const GraphDoc& g);
json to_json(const ModelRecord& r, bool with_source);
/// Steps, visited states, per-observation disposition and cost.
json to_json(const Hypothesis& h, const Trace& trace);

json diagnostics_json(const std::vector<Diagnostic>& ds);

}  // namespace hypforge::json_io
