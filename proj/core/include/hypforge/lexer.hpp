#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hypforge/model.hpp"

namespace hypforge {

enum class TokenKind {
  identifier,
  hyper_identifier,
  obs_symbol,
  arrow,
  pipe,
  lbrace,
  rbrace,
  langle_type,
  comma,
  keyword_default,
  keyword_start,
  keyword_observations,
  colon,
  comment,
  error,
};

std::string_view to_string(TokenKind kind);

struct Token {
  TokenKind kind = TokenKind::error;
  SourceSpan span;
  std::string text;

  bool operator==(const Token&) const = default;
};

/// Splits LTS++ source into tokens. Total: characters outside the language
/// become `error` tokens, never exceptions. Token spans are ordered,
/// non-overlapping, and cover every non-whitespace byte.
///
/// A `{` that ends its line (ignoring a trailing comment) opens a hyperstate
/// block; any other `{` opens an inline observation set whose identifiers are
/// `obs_symbol` tokens.
std::vector<Token> tokenize(std::string_view source);

bool is_identifier_start(char c);
bool is_identifier_char(char c);

}  // namespace hypforge
