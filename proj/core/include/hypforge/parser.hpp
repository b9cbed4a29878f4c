#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hypforge/diagnostic.hpp"
#include "hypforge/lexer.hpp"
#include "hypforge/model.hpp"

namespace hypforge {

/// Either a model or at least one error diagnostic, never both.
struct ParseResult {
  std::optional<ModelSpec> model;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return model.has_value(); }
};

/// Parses LTS++ text.
///
///   default <good|bad>                       first line
///   observations {sym sym ...}               optional vocabulary declaration
///   State <type>? {obs, ...}? (-> T (| T)*)?  plain state
///   HYPER <type>? {                          hyperstate block, one state per line
///     State ...
///   } (-> T (| T)*)?                         transitions applied to every member
///   start: State                             last line
///
/// A transition target naming a hyperstate expands to all of its members.
/// `#` starts a comment.
ParseResult parse(std::string_view source, std::string name = "model");

/// Reads a file and parses it; the model is named after the file stem.
/// Throws std::runtime_error if the file cannot be read.
ParseResult parse_file(const std::string& path);

std::string read_text_file(const std::string& path);

}  // namespace hypforge
