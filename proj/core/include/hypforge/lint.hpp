#pragma once

#include <string>
#include <vector>

#include "hypforge/diagnostic.hpp"
#include "hypforge/model.hpp"
#include "hypforge/trace.hpp"

namespace hypforge {

/// Modelling warnings, ordered by span:
///  - states unreachable from the start
///  - declared observation symbols no state carries
///  - states written with an empty observation set `{}`
///  - states with neither observations nor outgoing transitions
///  - hyperstate names that are not all caps
std::vector<Diagnostic> lint(const ModelSpec& model);

/// Warnings for trace symbols outside the model vocabulary. The span line is
/// the 1-based trace position.
std::vector<Diagnostic> lint_trace(const ModelSpec& model, const Trace& trace);

/// Renders a model back to LTS++ text that parses to a structurally equal
/// model.
std::string pretty_print(const ModelSpec& model);

}  // namespace hypforge
