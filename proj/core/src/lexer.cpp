#include "hypforge/lexer.hpp"

namespace hypforge {

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::identifier: return "identifier";
    case TokenKind::hyper_identifier: return "hyper_identifier";
    case TokenKind::obs_symbol: return "obs_symbol";
    case TokenKind::arrow: return "arrow";
    case TokenKind::pipe: return "pipe";
    case TokenKind::lbrace: return "lbrace";
    case TokenKind::rbrace: return "rbrace";
    case TokenKind::langle_type: return "langle_type";
    case TokenKind::comma: return "comma";
    case TokenKind::keyword_default: return "keyword_default";
    case TokenKind::keyword_start: return "keyword_start";
    case TokenKind::keyword_observations: return "keyword_observations";
    case TokenKind::colon: return "colon";
    case TokenKind::comment: return "comment";
    case TokenKind::error: return "error";
  }
  return "error";
}

bool is_identifier_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

bool is_identifier_char(char c) { return is_identifier_start(c) || c == '-'; }

namespace {

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; }

std::size_t utf8_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xE) return 3;
  if ((lead >> 3) == 0x1E) return 4;
  return 1;
}

class LineLexer {
 public:
  LineLexer(std::string_view source, std::size_t begin, std::size_t end, std::size_t line,
            std::vector<Token>& out)
      : src_(source), pos_(begin), end_(end), line_begin_(begin), line_(line), out_(out) {}

  void run() {
    const std::size_t first = out_.size();
    bool obs_mode = false;
    while (true) {
      while (pos_ < end_ && is_blank(src_[pos_])) ++pos_;
      if (pos_ >= end_) break;
      const char c = src_[pos_];
      if (c == '#') {
        emit(TokenKind::comment, end_ - pos_);
        break;
      }
      if (obs_mode) {
        if (is_identifier_start(c)) {
          emit(TokenKind::obs_symbol, identifier_length());
        } else if (c == ',') {
          emit(TokenKind::comma, 1);
        } else if (c == '}') {
          emit(TokenKind::rbrace, 1);
          obs_mode = false;
        } else {
          emit_error();
        }
        continue;
      }
      if (c == '-' && pos_ + 1 < end_ && src_[pos_ + 1] == '>') {
        emit(TokenKind::arrow, 2);
      } else if (c == '|') {
        emit(TokenKind::pipe, 1);
      } else if (c == ':') {
        emit(TokenKind::colon, 1);
      } else if (c == ',') {
        emit(TokenKind::comma, 1);
      } else if (c == '}') {
        emit(TokenKind::rbrace, 1);
      } else if (c == '{') {
        obs_mode = !ends_line(pos_ + 1);
        emit(TokenKind::lbrace, 1);
      } else if (c == '<') {
        lex_type();
      } else if (is_identifier_start(c)) {
        emit(TokenKind::identifier, identifier_length());
      } else {
        emit_error();
      }
    }
    classify(first);
  }

 private:
  std::size_t identifier_length() const {
    std::size_t p = pos_;
    while (p < end_ && is_identifier_char(src_[p])) {
      if (src_[p] == '-' && p + 1 < end_ && src_[p + 1] == '>') break;
      ++p;
    }
    return p - pos_;
  }

  bool ends_line(std::size_t p) const {
    while (p < end_ && is_blank(src_[p])) ++p;
    return p >= end_ || src_[p] == '#';
  }

  void lex_type() {
    std::size_t close = pos_ + 1;
    while (close < end_ && src_[close] != '>' && src_[close] != '<') ++close;
    if (close >= end_ || src_[close] != '>') {
      emit(TokenKind::error, 1);
      return;
    }
    std::size_t a = pos_ + 1;
    std::size_t b = close;
    while (a < b && is_blank(src_[a])) ++a;
    while (b > a && is_blank(src_[b - 1])) --b;
    bool ok = a < b && is_identifier_start(src_[a]);
    for (std::size_t p = a; ok && p < b; ++p) ok = is_identifier_char(src_[p]);
    emit(ok ? TokenKind::langle_type : TokenKind::error, close + 1 - pos_);
  }

  void emit_error() {
    std::size_t len = utf8_length(static_cast<unsigned char>(src_[pos_]));
    if (pos_ + len > end_) len = end_ - pos_;
    emit(TokenKind::error, len);
  }

  void emit(TokenKind kind, std::size_t len) {
    Token t;
    t.kind = kind;
    t.span = SourceSpan{pos_, line_, pos_ - line_begin_ + 1, len};
    t.text = std::string(src_.substr(pos_, len));
    out_.push_back(std::move(t));
    pos_ += len;
  }

  // Contextual keywords and hyperstate headers are recognised once the whole
  // line is known.
  void classify(std::size_t first) {
    std::vector<std::size_t> idx;
    for (std::size_t i = first; i < out_.size(); ++i) {
      if (out_[i].kind != TokenKind::comment) idx.push_back(i);
    }
    auto kind_at = [&](std::size_t k) {
      return k < idx.size() ? out_[idx[k]].kind : TokenKind::comment;
    };
    for (std::size_t k = 0; k < idx.size(); ++k) {
      Token& t = out_[idx[k]];
      if (t.kind != TokenKind::identifier) continue;
      const TokenKind next = kind_at(k + 1);
      if (t.text == "default" && next == TokenKind::langle_type) {
        t.kind = TokenKind::keyword_default;
      } else if (t.text == "start" && next == TokenKind::colon) {
        t.kind = TokenKind::keyword_start;
      } else if (t.text == "observations" && next == TokenKind::lbrace && k + 2 < idx.size()) {
        t.kind = TokenKind::keyword_observations;
      } else {
        std::size_t brace = k + 1;
        if (kind_at(brace) == TokenKind::langle_type) ++brace;
        if (kind_at(brace) == TokenKind::lbrace && brace + 1 == idx.size()) {
          t.kind = TokenKind::hyper_identifier;
        }
      }
    }
  }

  std::string_view src_;
  std::size_t pos_;
  std::size_t end_;
  std::size_t line_begin_;
  std::size_t line_;
  std::vector<Token>& out_;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source) {
  std::vector<Token> tokens;
  std::size_t begin = 0;
  std::size_t line = 1;
  while (begin <= source.size()) {
    std::size_t end = source.find('\n', begin);
    if (end == std::string_view::npos) end = source.size();
    LineLexer(source, begin, end, line, tokens).run();
    if (end == source.size()) break;
    begin = end + 1;
    ++line;
  }
  return tokens;
}

}  // namespace hypforge
