#include "hypforge/pddl.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <memory>
#include <set>
#include <sstream>

namespace hypforge {

PddlError::PddlError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

constexpr std::string_view kCostsTag = "; hypforge-costs";

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string pddl_name(std::string_view s) {
  std::string out;
  for (char c : s) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
    out += ok ? c : '_';
  }
  if (out.empty() || !std::isalpha(static_cast<unsigned char>(out[0]))) out = "m" + out;
  return out;
}

std::string action_name(const PlanningProblem& p, const GroundAction& a, std::size_t ordinal) {
  std::string name(to_string(a.kind));
  if (a.to) name += "-" + p.locations[*a.to].id;
  if (a.index) name += "-o" + std::to_string(*a.index);
  if (a.level) name += "-c" + std::to_string(*a.level);
  return name + "-a" + std::to_string(ordinal);
}

void write_atoms(std::ostringstream& out, const PlanningProblem& p, const std::vector<FluentId>& ids,
                 bool negated) {
  for (FluentId f : ids) {
    if (negated) {
      out << " (not (" << p.fluent_name(f) << "))";
    } else {
      out << " (" << p.fluent_name(f) << ")";
    }
  }
}

// --- reading -------------------------------------------------------------

struct Sexp {
  std::string atom;  // empty for a list
  std::vector<Sexp> items;
  std::size_t line = 0;

  bool is_list() const { return atom.empty(); }
  bool is(std::string_view a) const { return !is_list() && lower(atom) == lower(a); }
};

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  Sexp read_one() {
    skip();
    if (pos_ >= text_.size()) throw PddlError(line_, "unexpected end of input");
    Sexp e = read();
    skip();
    if (pos_ < text_.size()) throw PddlError(line_, "trailing text after the definition");
    return e;
  }

 private:
  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        if (c == '\n') ++line_;
        ++pos_;
      } else {
        break;
      }
    }
  }

  Sexp read() {
    skip();
    if (pos_ >= text_.size()) throw PddlError(line_, "unexpected end of input");
    Sexp e;
    e.line = line_;
    char c = text_[pos_];
    if (c == ')') throw PddlError(line_, "unexpected ')'");
    if (c == '(') {
      ++pos_;
      for (;;) {
        skip();
        if (pos_ >= text_.size()) throw PddlError(line_, "unclosed '('");
        if (text_[pos_] == ')') {
          ++pos_;
          return e;
        }
        e.items.push_back(read());
      }
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '(' &&
           text_[pos_] != ')' && text_[pos_] != ';') {
      ++pos_;
    }
    e.atom = std::string(text_.substr(start, pos_ - start));
    return e;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

const Sexp& expect_list(const Sexp& e, std::string_view what) {
  if (!e.is_list()) throw PddlError(e.line, "expected " + std::string(what));
  return e;
}

std::size_t parse_size(const std::string& s, std::size_t line) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw PddlError(line, "expected a number, got '" + s + "'");
  return v;
}

Cost parse_cost(const std::string& s, std::size_t line) {
  Cost v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || v < 0) {
    throw PddlError(line, "expected a non-negative integer cost, got '" + s + "'");
  }
  return v;
}

bool starts_with(std::string_view s, std::string_view prefix) { return s.substr(0, prefix.size()) == prefix; }

// Header comment of the problem file carrying the cost parameters.
void read_costs(std::string_view text, PlanningProblem& p) {
  std::size_t line = 1;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view l = text.substr(pos, end - pos);
    if (starts_with(l, kCostsTag)) {
      std::istringstream in(std::string(l.substr(kCostsTag.size())));
      std::map<std::string, std::string> kv;
      std::string field;
      while (in >> field) {
        auto eq = field.find('=');
        if (eq == std::string::npos) throw PddlError(line, "malformed cost field '" + field + "'");
        kv[field.substr(0, eq)] = field.substr(eq + 1);
      }
      auto get = [&](const std::string& key) {
        auto it = kv.find(key);
        if (it == kv.end()) throw PddlError(line, "missing cost field '" + key + "'");
        return it->second;
      };
      p.params.discard_cost = parse_cost(get("discard"), line);
      p.params.good_entry_cost = parse_cost(get("good"), line);
      p.params.bad_entry_cost = parse_cost(get("bad"), line);
      p.params.unobserved_step_cost = parse_cost(get("unobserved"), line);
      p.max_chain = parse_size(get("max-chain"), line);
      return;
    }
    if (end == text.size()) break;
    pos = end + 1;
    ++line;
  }
  throw PddlError(1, "problem file lacks the cost header comment");
}

const Sexp* section(const Sexp& def, std::string_view key) {
  for (const auto& item : def.items) {
    if (item.is_list() && !item.items.empty() && item.items[0].is(key)) return &item;
  }
  return nullptr;
}

const Sexp& require_section(const Sexp& def, std::string_view key) {
  const Sexp* s = section(def, key);
  if (!s) throw PddlError(def.line, "missing (" + std::string(key) + " ...)");
  return *s;
}

void check_define(const Sexp& def, std::string_view kind) {
  expect_list(def, "(define ...)");
  if (def.items.size() < 2 || !def.items[0].is("define")) throw PddlError(def.line, "expected (define ...)");
  const Sexp& head = expect_list(def.items[1], "(" + std::string(kind) + " name)");
  if (head.items.size() != 2 || !head.items[0].is(kind)) {
    throw PddlError(head.line, "expected (" + std::string(kind) + " name)");
  }
}

struct DomainLayout {
  std::map<std::string, FluentId> by_name;
};

// Atom list from a (and ...) or a single atom; negative literals go to `neg`.
void collect(const Sexp& e, const DomainLayout& layout, std::vector<FluentId>& pos, std::vector<FluentId>* neg,
             std::optional<Cost>* cost) {
  expect_list(e, "a formula");
  if (e.items.empty()) return;
  if (e.items[0].is("and")) {
    for (std::size_t i = 1; i < e.items.size(); ++i) collect(e.items[i], layout, pos, neg, cost);
    return;
  }
  if (e.items[0].is("not")) {
    if (!neg || e.items.size() != 2) throw PddlError(e.line, "unexpected negation");
    collect(e.items[1], layout, *neg, nullptr, nullptr);
    return;
  }
  if (e.items[0].is("increase")) {
    if (!cost || e.items.size() != 3 || !e.items[1].is_list() || e.items[1].items.size() != 1 ||
        !e.items[1].items[0].is("total-cost") || e.items[2].is_list()) {
      throw PddlError(e.line, "malformed cost effect");
    }
    if (cost->has_value()) throw PddlError(e.line, "duplicate cost effect");
    *cost = parse_cost(e.items[2].atom, e.items[2].line);
    return;
  }
  if (e.items.size() != 1 || e.items[0].is_list()) throw PddlError(e.line, "expected a propositional atom");
  auto it = layout.by_name.find(lower(e.items[0].atom));
  if (it == layout.by_name.end()) throw PddlError(e.line, "undeclared predicate '" + e.items[0].atom + "'");
  pos.push_back(it->second);
}

std::optional<ActionKind> kind_from_name(std::string_view name) {
  const std::string head = lower(name.substr(0, name.find('-')));
  for (ActionKind k : {ActionKind::enter_start, ActionKind::explain, ActionKind::stay, ActionKind::unobserved_step,
                       ActionKind::enter_hyper, ActionKind::discard}) {
    if (head == to_string(k)) return k;
  }
  return std::nullopt;
}

// Recovers the action's arguments from its preconditions and effects.
void reconstruct(const PlanningProblem& p, GroundAction& a, std::size_t line) {
  auto find = [&](const std::vector<FluentId>& v, FluentKind kind) -> std::optional<std::size_t> {
    for (FluentId f : v) {
      if (p.fluents[f].kind == kind) return p.fluents[f].arg;
    }
    return std::nullopt;
  };
  auto need = [&](std::optional<std::size_t> v, const char* what) {
    if (!v) throw PddlError(line, std::string(to_string(a.kind)) + " action lacks its " + what);
    return v;
  };
  switch (a.kind) {
    case ActionKind::enter_start:
      a.to = need(find(a.add, FluentKind::at), "location");
      break;
    case ActionKind::explain:
    case ActionKind::unobserved_step:
    case ActionKind::enter_hyper:
      a.from = need(find(a.pre, FluentKind::at), "source location");
      a.to = find(a.add, FluentKind::at);
      if (!a.to) a.to = a.from;
      a.level = need(find(a.pre, FluentKind::chain), "chain level");
      if (a.kind == ActionKind::explain) a.index = need(find(a.pre, FluentKind::next), "trace index");
      break;
    case ActionKind::stay:
      a.from = need(find(a.pre, FluentKind::at), "location");
      a.to = a.from;
      a.index = need(find(a.pre, FluentKind::next), "trace index");
      a.level = need(find(a.pre, FluentKind::chain), "chain level");
      break;
    case ActionKind::discard:
      a.index = need(find(a.pre, FluentKind::next), "trace index");
      break;
  }
}

void sort_unique(std::vector<FluentId>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

PddlFiles export_pddl(const PlanningProblem& p, std::string_view trace_id) {
  std::set<std::string> seen;
  for (std::size_t f = 0; f < p.fluents.size(); ++f) {
    if (!seen.insert(lower(p.fluent_name(static_cast<FluentId>(f)))).second) {
      throw std::invalid_argument("PDDL names are case-insensitive; '" + p.fluent_name(static_cast<FluentId>(f)) +
                                  "' collides with another predicate");
    }
  }
  const std::string model_name = pddl_name(p.model ? p.model->name : std::string("hypforge"));

  std::ostringstream d;
  d << "(define (domain " << model_name << ")\n";
  d << "  (:requirements :strips :typing :action-costs)\n";
  d << "  (:types observation)\n";
  d << "  (:predicates";
  for (std::size_t f = 0; f < p.fluents.size(); ++f) {
    d << "\n    (" << p.fluent_name(static_cast<FluentId>(f)) << ")";
  }
  d << ")\n";
  d << "  (:functions (total-cost) - number)\n";
  for (std::size_t i = 0; i < p.actions.size(); ++i) {
    const GroundAction& a = p.actions[i];
    d << "\n  (:action " << action_name(p, a, i) << "\n";
    d << "    :parameters ()\n";
    d << "    :precondition (and";
    write_atoms(d, p, a.pre, false);
    d << ")\n";
    d << "    :effect (and";
    write_atoms(d, p, a.del, true);
    write_atoms(d, p, a.add, false);
    d << " (increase (total-cost) " << a.cost << ")))\n";
  }
  d << ")\n";

  std::ostringstream q;
  q << kCostsTag << " discard=" << p.params.discard_cost << " good=" << p.params.good_entry_cost
    << " bad=" << p.params.bad_entry_cost << " unobserved=" << p.params.unobserved_step_cost
    << " max-chain=" << p.max_chain << "\n";
  q << "(define (problem " << model_name << "-" << pddl_name(trace_id) << ")\n";
  q << "  (:domain " << model_name << ")\n";
  q << "  (:objects";
  for (std::size_t i = 0; i < p.trace_symbols.size(); ++i) q << "\n    o" << i << "-" << p.trace_symbols[i];
  if (!p.trace_symbols.empty()) q << " - observation";
  q << ")\n";
  q << "  (:init";
  write_atoms(q, p, p.initial, false);
  q << " (= (total-cost) 0))\n";
  q << "  (:goal (and";
  write_atoms(q, p, p.goal, false);
  q << "))\n";
  q << "  (:metric minimize (total-cost)))\n";
  return {d.str(), q.str()};
}

PlanningProblem read_pddl(std::string_view domain_text, std::string_view problem_text) {
  PlanningProblem p;
  read_costs(problem_text, p);

  const Sexp dom = Reader(domain_text).read_one();
  check_define(dom, "domain");
  const Sexp prob = Reader(problem_text).read_one();
  check_define(prob, "problem");

  // Problem objects give the trace.
  if (const Sexp* objs = section(prob, ":objects")) {
    std::size_t expect = 0;
    for (std::size_t i = 1; i < objs->items.size(); ++i) {
      const Sexp& o = objs->items[i];
      if (o.is_list()) throw PddlError(o.line, "unexpected list among objects");
      if (o.atom == "-") {
        if (i + 1 >= objs->items.size() || !objs->items[i + 1].is("observation")) {
          throw PddlError(o.line, "objects must have type observation");
        }
        ++i;
        continue;
      }
      const std::string prefix = "o" + std::to_string(expect) + "-";
      if (!starts_with(o.atom, prefix) || o.atom.size() == prefix.size()) {
        throw PddlError(o.line, "expected observation object " + prefix + "<symbol>");
      }
      p.trace_symbols.push_back(o.atom.substr(prefix.size()));
      ++expect;
    }
  }
  const std::size_t n = p.trace_symbols.size();

  // Predicates give locations and the fluent layout.
  const Sexp& preds = require_section(dom, ":predicates");
  std::vector<std::pair<std::string, std::size_t>> names;
  for (std::size_t i = 1; i < preds.items.size(); ++i) {
    const Sexp& pr = preds.items[i];
    if (!pr.is_list() || pr.items.size() != 1 || pr.items[0].is_list()) {
      throw PddlError(pr.line, "expected a parameterless predicate");
    }
    names.emplace_back(pr.items[0].atom, pr.line);
  }
  std::size_t k = 0;
  auto expect_name = [&](const std::string& want) {
    if (k >= names.size() || lower(names[k].first) != lower(want)) {
      throw PddlError(k < names.size() ? names[k].second : preds.line, "expected predicate (" + want + ")");
    }
    ++k;
  };
  expect_name("idle");
  expect_name("open");
  while (k < names.size() && (starts_with(names[k].first, "at-") || starts_with(names[k].first, "within-"))) {
    const bool hyper = starts_with(names[k].first, "within-");
    p.locations.push_back({names[k].first.substr(hyper ? 7 : 3), hyper});
    ++k;
  }
  if (p.locations.empty()) throw PddlError(preds.line, "no location predicates");
  for (std::size_t i = 0; i <= n; ++i) expect_name("next-" + std::to_string(i));
  for (std::size_t c = 0; c <= p.max_chain; ++c) expect_name("chain-" + std::to_string(c));
  if (k != names.size()) throw PddlError(names[k].second, "unexpected predicate (" + names[k].first + ")");

  p.fluents.push_back({FluentKind::idle, 0});
  p.fluents.push_back({FluentKind::open, 0});
  for (std::size_t l = 0; l < p.locations.size(); ++l) p.fluents.push_back({FluentKind::at, l});
  for (std::size_t i = 0; i <= n; ++i) p.fluents.push_back({FluentKind::next, i});
  for (std::size_t c = 0; c <= p.max_chain; ++c) p.fluents.push_back({FluentKind::chain, c});
  DomainLayout layout;
  for (std::size_t f = 0; f < p.fluents.size(); ++f) {
    layout.by_name[lower(p.fluent_name(static_cast<FluentId>(f)))] = static_cast<FluentId>(f);
  }

  for (const auto& item : dom.items) {
    if (!item.is_list() || item.items.empty() || !item.items[0].is(":action")) continue;
    if (item.items.size() < 2 || item.items[1].is_list()) throw PddlError(item.line, "action without a name");
    GroundAction a;
    auto kind = kind_from_name(item.items[1].atom);
    if (!kind) throw PddlError(item.line, "unknown action kind in '" + item.items[1].atom + "'");
    a.kind = *kind;
    std::optional<Cost> cost;
    bool have_pre = false;
    bool have_eff = false;
    for (std::size_t i = 2; i + 1 < item.items.size(); i += 2) {
      const Sexp& key = item.items[i];
      const Sexp& val = item.items[i + 1];
      if (key.is(":parameters")) {
        if (!val.is_list() || !val.items.empty()) throw PddlError(val.line, "actions take no parameters");
      } else if (key.is(":precondition")) {
        collect(val, layout, a.pre, nullptr, nullptr);
        have_pre = true;
      } else if (key.is(":effect")) {
        collect(val, layout, a.add, &a.del, &cost);
        have_eff = true;
      } else {
        throw PddlError(key.line, "unexpected action field");
      }
    }
    if (!have_pre || !have_eff) throw PddlError(item.line, "action needs a precondition and an effect");
    if (!cost) throw PddlError(item.line, "action has no cost effect");
    a.cost = *cost;
    sort_unique(a.pre);
    sort_unique(a.add);
    sort_unique(a.del);
    reconstruct(p, a, item.line);
    p.actions.push_back(std::move(a));
  }

  const Sexp& init = require_section(prob, ":init");
  for (std::size_t i = 1; i < init.items.size(); ++i) {
    const Sexp& e = init.items[i];
    if (e.is_list() && !e.items.empty() && e.items[0].is("=")) continue;
    collect(e, layout, p.initial, nullptr, nullptr);
  }
  sort_unique(p.initial);
  const Sexp& goal = require_section(prob, ":goal");
  if (goal.items.size() != 2) throw PddlError(goal.line, "expected one goal formula");
  collect(goal.items[1], layout, p.goal, nullptr, nullptr);
  sort_unique(p.goal);
  return p;
}

}  // namespace hypforge
