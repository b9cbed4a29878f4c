#include <algorithm>
#include <set>

#include "hypforge/diagnostic.hpp"

namespace hypforge {

std::string_view to_string(Severity severity) {
  return severity == Severity::error ? "error" : "warning";
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::error; });
}

void sort_by_span(std::vector<Diagnostic>& diagnostics) {
  std::stable_sort(diagnostics.begin(), diagnostics.end(), [](const Diagnostic& a, const Diagnostic& b) {
    if (a.span.offset != b.span.offset) return a.span.offset < b.span.offset;
    return a.span.length < b.span.length;
  });
}

std::string format_diagnostic(const Diagnostic& d, std::string_view file) {
  std::string out;
  if (!file.empty()) {
    out += file;
    out += ':';
  }
  out += std::to_string(d.span.line) + ":" + std::to_string(d.span.column) + ": ";
  out += to_string(d.severity);
  out += " [" + d.code + "] " + d.message;
  return out;
}

std::vector<Diagnostic> validate_model(const ModelSpec& model) {
  std::vector<Diagnostic> out;
  auto error = [&](std::string code, std::string message, SourceSpan span) {
    out.push_back({Severity::error, std::move(code), std::move(message), span});
  };

  std::set<std::string> state_ids;
  std::set<std::string> hyper_ids;
  for (const auto& hyper : model.hyperstates) {
    if (!hyper.singleton) {
      if (!hyper_ids.insert(hyper.id).second || state_ids.contains(hyper.id)) {
        error("duplicate-declaration", "duplicate declaration of '" + hyper.id + "'", hyper.span);
      }
      if (hyper.members.empty()) {
        error("empty-hyperstate", "hyperstate '" + hyper.id + "' has no member states", hyper.span);
      }
    } else if (hyper.members.size() != 1 || hyper.members.front().id != hyper.id) {
      error("malformed-singleton", "plain state '" + hyper.id + "' must be its own only member",
            hyper.span);
    }
    for (const auto& state : hyper.members) {
      if (!state_ids.insert(state.id).second || hyper_ids.contains(state.id)) {
        error("duplicate-declaration", "duplicate declaration of '" + state.id + "'", state.span);
      }
    }
  }

  for (const auto& hyper : model.hyperstates) {
    for (const auto& state : hyper.members) {
      for (const auto& t : state.outgoing) {
        if (!state_ids.contains(t.target)) {
          error("unknown-state", "transition to undeclared state '" + t.target + "'",
                t.span.empty() ? state.span : t.span);
        }
      }
    }
  }

  if (model.start_state.empty()) {
    error("missing-start", "missing start declaration", model.start_span);
  } else if (!state_ids.contains(model.start_state) && !hyper_ids.contains(model.start_state)) {
    error("unknown-start", "unknown start state '" + model.start_state + "'", model.start_span);
  }
  sort_by_span(out);
  return out;
}

}  // namespace hypforge
