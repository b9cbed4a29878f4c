#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hypforge/model.hpp"

namespace hypforge {

enum class Severity { error, warning };

std::string_view to_string(Severity severity);

/// A parser, validator or linter finding. Errors block compilation; warnings
/// do not.
struct Diagnostic {
  Severity severity = Severity::error;
  std::string code;
  std::string message;
  SourceSpan span;

  bool operator==(const Diagnostic&) const = default;
};

bool has_errors(const std::vector<Diagnostic>& diagnostics);
void sort_by_span(std::vector<Diagnostic>& diagnostics);
std::string format_diagnostic(const Diagnostic& d, std::string_view file = {});

/// Checks the structural invariants of a model: unique identifiers, non-empty
/// hyperstates, declared transition endpoints, a declared start.
std::vector<Diagnostic> validate_model(const ModelSpec& model);

}  // namespace hypforge
