#include "hypforge/parser.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace hypforge {

namespace {

struct RawTarget {
  std::string id;
  SourceSpan span;
};

struct RawState {
  std::string id;
  SourceSpan span;
  const Token* type = nullptr;
  bool has_obs = false;
  std::vector<ObsId> obs;
  std::vector<RawTarget> targets;
};

struct RawBlock {
  std::string id;
  SourceSpan span;
  const Token* type = nullptr;
  std::vector<RawState> members;
  std::vector<RawTarget> exits;
};

struct RawItem {
  bool is_block = false;
  RawState state;
  RawBlock block;
};

using Line = std::vector<const Token*>;

class Parser {
 public:
  Parser(std::string_view source, std::string name) : source_(source), name_(std::move(name)) {}

  ParseResult run() {
    tokens_ = tokenize(source_);
    std::map<std::size_t, Line> by_line;
    for (const auto& t : tokens_) {
      if (t.kind == TokenKind::error) {
        error(t.text.starts_with("<") ? "malformed-type" : "invalid-character",
              t.text.starts_with("<") ? "malformed type annotation" : "invalid character '" + t.text + "'",
              t.span);
      }
      if (t.kind != TokenKind::comment) by_line[t.span.line].push_back(&t);
    }
    std::vector<Line> lines;
    for (auto& [_, line] : by_line) lines.push_back(std::move(line));

    if (lines.empty()) {
      error("empty-model", "empty model", SourceSpan{0, 1, 1, 0});
      return finish();
    }

    std::size_t body_begin = 0;
    if (lines.front().front()->kind == TokenKind::keyword_default) {
      parse_default(lines.front());
      body_begin = 1;
    } else {
      error("missing-default", "missing default declaration: the first line must be `default <good|bad>`",
            lines.front().front()->span);
    }

    std::size_t body_end = lines.size();
    if (lines.back().front()->kind == TokenKind::keyword_start && lines.size() > body_begin) {
      body_end = lines.size() - 1;
    } else {
      const Token* last = lines.back().back();
      error("missing-start", "missing start declaration: the last line must be `start: <state>`",
            SourceSpan{last->span.end(), last->span.line, last->span.column + last->span.length, 0});
    }

    for (std::size_t i = body_begin; i < body_end; ++i) parse_body_line(lines[i]);
    if (open_block_) {
      error("unclosed-block", "hyperstate block '" + open_block_->id + "' is never closed with '}'",
            open_block_->span);
      items_.push_back(RawItem{true, {}, std::move(*open_block_)});
      open_block_.reset();
    }
    if (body_end < lines.size()) parse_start(lines.back());

    build();
    return finish();
  }

 private:
  void error(std::string code, std::string message, SourceSpan span) {
    diagnostics_.push_back({Severity::error, std::move(code), std::move(message), span});
  }

  // Error tokens were already reported in the pre-pass.
  void unexpected(const Token* t, std::string_view expected) {
    if (t->kind == TokenKind::error) return;
    error("syntax", "unexpected '" + t->text + "', expected " + std::string(expected), t->span);
  }

  void unexpected_end(const Line& line, std::string_view expected) {
    const Token* last = line.back();
    error("syntax", "unexpected end of line, expected " + std::string(expected),
          SourceSpan{last->span.end(), last->span.line, last->span.column + last->span.length, 0});
  }

  std::optional<StateType> read_type(const Token* t) {
    std::string inner = t->text.substr(1, t->text.size() - 2);
    auto a = inner.find_first_not_of(" \t");
    auto b = inner.find_last_not_of(" \t");
    inner = a == std::string::npos ? "" : inner.substr(a, b - a + 1);
    auto type = state_type_from_string(inner);
    if (!type) error("unknown-type", "unknown state type '" + inner + "' (expected good or bad)", t->span);
    return type;
  }

  void parse_default(const Line& line) {
    if (line.size() < 2 || line[1]->kind != TokenKind::langle_type) {
      line.size() < 2 ? unexpected_end(line, "<good> or <bad>") : unexpected(line[1], "<good> or <bad>");
      return;
    }
    if (auto type = read_type(line[1])) default_type_ = *type;
    if (line.size() > 2) unexpected(line[2], "end of line");
  }

  void parse_start(const Line& line) {
    if (line.size() < 2 || line[1]->kind != TokenKind::colon) {
      line.size() < 2 ? unexpected_end(line, "':'") : unexpected(line[1], "':'");
      return;
    }
    if (line.size() < 3 || line[2]->kind != TokenKind::identifier) {
      line.size() < 3 ? unexpected_end(line, "a state name") : unexpected(line[2], "a state name");
      return;
    }
    start_ = line[2]->text;
    start_span_ = line[2]->span;
    if (line.size() > 3) unexpected(line[3], "end of line");
  }

  // Parses `-> T (| T)*` starting at line[i]; returns false on error.
  bool parse_targets(const Line& line, std::size_t i, std::vector<RawTarget>& out) {
    if (i >= line.size()) return true;
    if (line[i]->kind != TokenKind::arrow) {
      unexpected(line[i], "'->' or end of line");
      return false;
    }
    ++i;
    while (true) {
      if (i >= line.size()) {
        unexpected_end(line, "a target state");
        return false;
      }
      if (line[i]->kind != TokenKind::identifier) {
        unexpected(line[i], "a target state");
        return false;
      }
      out.push_back({line[i]->text, line[i]->span});
      ++i;
      if (i >= line.size()) return true;
      if (line[i]->kind != TokenKind::pipe) {
        unexpected(line[i], "'|' or end of line");
        return false;
      }
      ++i;
    }
  }

  // Parses `{ sym (,? sym)* }` starting at the lbrace line[i]; returns the index
  // after the closing brace, or nullopt on error.
  std::optional<std::size_t> parse_obs_set(const Line& line, std::size_t i, std::vector<ObsId>& out) {
    const Token* open = line[i];
    ++i;
    bool need_symbol = false;  // after a comma
    while (true) {
      if (i >= line.size()) {
        error("unclosed-observations", "observation set is missing its closing '}'", open->span);
        return std::nullopt;
      }
      const Token* t = line[i];
      if (t->kind == TokenKind::rbrace) {
        if (need_symbol) {
          unexpected(t, "an observation symbol after ','");
          return std::nullopt;
        }
        return i + 1;
      }
      if (t->kind == TokenKind::obs_symbol) {
        if (std::find(out.begin(), out.end(), t->text) == out.end()) out.push_back(t->text);
        need_symbol = false;
      } else if (t->kind == TokenKind::comma) {
        if (need_symbol || out.empty()) {
          unexpected(t, "an observation symbol");
          return std::nullopt;
        }
        need_symbol = true;
      } else {
        unexpected(t, "an observation symbol or '}'");
        return std::nullopt;
      }
      ++i;
    }
  }

  std::optional<RawState> parse_state(const Line& line) {
    RawState s;
    s.id = line[0]->text;
    s.span = line[0]->span;
    std::size_t i = 1;
    if (i < line.size() && line[i]->kind == TokenKind::langle_type) s.type = line[i++];
    if (i < line.size() && line[i]->kind == TokenKind::lbrace) {
      s.has_obs = true;
      auto next = parse_obs_set(line, i, s.obs);
      if (!next) return std::nullopt;
      i = *next;
    }
    if (!parse_targets(line, i, s.targets)) return std::nullopt;
    return s;
  }

  void parse_body_line(const Line& line) {
    const Token* head = line.front();
    switch (head->kind) {
      case TokenKind::hyper_identifier: {
        if (open_block_) {
          error("nested-block", "hyperstate blocks cannot be nested", head->span);
          return;
        }
        RawBlock b;
        b.id = head->text;
        b.span = head->span;
        if (line[1]->kind == TokenKind::langle_type) b.type = line[1];
        open_block_ = std::move(b);
        return;
      }
      case TokenKind::rbrace: {
        if (!open_block_) {
          error("unbalanced-brace", "'}' without an open hyperstate block", head->span);
          return;
        }
        parse_targets(line, 1, open_block_->exits);
        items_.push_back(RawItem{true, {}, std::move(*open_block_)});
        open_block_.reset();
        return;
      }
      case TokenKind::identifier: {
        auto s = parse_state(line);
        if (!s) return;
        if (open_block_) {
          open_block_->members.push_back(std::move(*s));
        } else {
          items_.push_back(RawItem{false, std::move(*s), {}});
        }
        return;
      }
      case TokenKind::keyword_observations: {
        if (open_block_) {
          error("misplaced-observations", "observation declarations belong outside hyperstate blocks",
                head->span);
          return;
        }
        std::vector<ObsId> syms;
        auto next = parse_obs_set(line, 1, syms);
        if (!next) return;
        if (*next < line.size()) {
          unexpected(line[*next], "end of line");
          return;
        }
        for (auto& s : syms) {
          if (std::find(declared_obs_.begin(), declared_obs_.end(), s) == declared_obs_.end()) {
            declared_obs_.push_back(s);
          }
        }
        return;
      }
      case TokenKind::keyword_default:
        error("misplaced-default", "the default declaration must be the first line", head->span);
        return;
      case TokenKind::keyword_start:
        error("misplaced-start", "the start declaration must be the last line", head->span);
        return;
      default:
        unexpected(head, "a state declaration");
        return;
    }
  }

  void build() {
    ModelSpec m;
    m.name = name_;
    m.default_type = default_type_;
    m.declared_observations = declared_obs_;

    // Declarations first, so targets may refer forward.
    std::map<std::string, SourceSpan> declared;
    std::map<std::string, std::vector<std::string>> hyper_members;
    auto declare = [&](const std::string& id, SourceSpan span) {
      if (declared.contains(id)) {
        error("duplicate-declaration", "duplicate declaration of '" + id + "'", span);
        return false;
      }
      declared[id] = span;
      return true;
    };

    struct Pending {
      std::size_t hyper;
      std::size_t member;
      const RawState* raw;
      const RawBlock* block;
    };
    std::vector<Pending> pending;

    for (const auto& item : items_) {
      if (!item.is_block) {
        if (!declare(item.state.id, item.state.span)) continue;
        Hyperstate h;
        h.id = item.state.id;
        h.singleton = true;
        h.span = item.state.span;
        h.members.push_back(make_state(item.state, std::nullopt));
        pending.push_back({m.hyperstates.size(), 0, &item.state, nullptr});
        m.hyperstates.push_back(std::move(h));
        continue;
      }
      const RawBlock& b = item.block;
      if (!declare(b.id, b.span)) continue;
      Hyperstate h;
      h.id = b.id;
      h.singleton = false;
      h.span = b.span;
      if (b.type) h.declared_type = read_type(b.type);
      if (b.members.empty()) {
        error("empty-hyperstate", "hyperstate '" + b.id + "' has no member states", b.span);
      }
      for (const auto& raw : b.members) {
        if (!declare(raw.id, raw.span)) continue;
        pending.push_back({m.hyperstates.size(), h.members.size(), &raw, &b});
        h.members.push_back(make_state(raw, h.declared_type));
        hyper_members[b.id].push_back(raw.id);
      }
      m.hyperstates.push_back(std::move(h));
    }

    auto expand = [&](const RawTarget& t, std::vector<Transition>& out) {
      auto add = [&](const std::string& id) {
        for (const auto& existing : out) {
          if (existing.target == id) return;
        }
        out.push_back({id, t.span});
      };
      if (auto it = hyper_members.find(t.id); it != hyper_members.end()) {
        for (const auto& id : it->second) add(id);
      } else if (declared.contains(t.id)) {
        add(t.id);
      } else {
        error("unknown-state", "transition to undeclared state '" + t.id + "'", t.span);
      }
    };

    for (const auto& p : pending) {
      State& s = m.hyperstates[p.hyper].members[p.member];
      for (const auto& t : p.raw->targets) expand(t, s.outgoing);
      if (p.block) {
        for (const auto& t : p.block->exits) expand(t, s.outgoing);
      }
    }

    if (!start_.empty()) {
      if (!declared.contains(start_)) {
        error("unknown-start", "unknown start state '" + start_ + "'", start_span_);
      }
      m.start_state = start_;
      m.start_span = start_span_;
    }
    model_ = std::move(m);
  }

  State make_state(const RawState& raw, std::optional<StateType> block_type) {
    State s;
    s.id = raw.id;
    s.span = raw.span;
    if (raw.type) s.declared_type = read_type(raw.type);
    s.type = s.declared_type.value_or(block_type.value_or(default_type_));
    s.observations = raw.obs;
    s.has_observation_set = raw.has_obs;
    return s;
  }

  ParseResult finish() {
    sort_by_span(diagnostics_);
    ParseResult result;
    if (has_errors(diagnostics_) || !model_) {
      result.diagnostics = std::move(diagnostics_);
      return result;
    }
    auto problems = validate_model(*model_);
    if (!problems.empty()) {
      result.diagnostics = std::move(problems);
      return result;
    }
    result.model = std::move(model_);
    return result;
  }

  std::string_view source_;
  std::string name_;
  std::vector<Token> tokens_;
  std::vector<Diagnostic> diagnostics_;
  StateType default_type_ = StateType::good;
  std::vector<ObsId> declared_obs_;
  std::vector<RawItem> items_;
  std::optional<RawBlock> open_block_;
  std::string start_;
  SourceSpan start_span_;
  std::optional<ModelSpec> model_;
};

}  // namespace

ParseResult parse(std::string_view source, std::string name) {
  return Parser(source, std::move(name)).run();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ParseResult parse_file(const std::string& path) {
  return parse(read_text_file(path), std::filesystem::path(path).stem().string());
}

}  // namespace hypforge
