#include "support.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "hypforge/parser.hpp"

using namespace hypforge;

namespace hftest {

std::string models_dir() { return HFTEST_MODELS_DIR; }

std::string bundled_source(const std::string& name) { return read_text_file(models_dir() + "/" + name + ".lts"); }

ModelSpec bundled(const std::string& name) {
  ParseResult pr = parse(bundled_source(name), name);
  if (!pr.ok()) throw std::runtime_error("bundled model " + name + " does not parse");
  return *pr.model;
}

ModelSpec must_parse(const std::string& source) {
  ParseResult pr = parse(source);
  if (!pr.ok()) {
    std::string msg = "fixture does not parse:";
    for (const auto& d : pr.diagnostics) msg += " " + format_diagnostic(d);
    throw std::runtime_error(msg);
  }
  return *pr.model;
}

namespace {

struct Enumerator {
  const ModelSpec& model;
  const Trace& trace;
  std::size_t max_chain;
  const CostParams& params;
  std::optional<Cost> bound;
  std::vector<Hypothesis> out;
  std::vector<Step> steps;
  std::set<std::string> seen;

  std::vector<StateId> successors(const std::string& loc) const {
    if (const Hyperstate* h = model.find_hyperstate(loc)) return hyperstate_exits(model, *h);
    std::vector<StateId> s;
    for (const auto& t : model.find_state(loc)->outgoing) s.push_back(t.target);
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
  }

  bool carries(const StateId& s, std::size_t i) const {
    const auto& obs = model.find_state(s)->observations;
    return std::find(obs.begin(), obs.end(), trace.symbol(i)) != obs.end();
  }

  Cost entry(const StateId& s) const { return params.entry_cost(model.find_state(s)->type); }

  void emit() {
    Hypothesis h;
    h.steps = steps;
    if (!seen.insert(steps_key(h)).second) return;
    if (!validate_hypothesis(model, trace, h, max_chain).empty()) return;
    h.total_cost = cost_of(h, params);
    out.push_back(std::move(h));
  }

  void rec(const std::string& loc, std::size_t next, std::size_t chain, Cost cost) {
    if (bound && cost > *bound) return;
    if (next == trace.size()) {
      emit();
      return;
    }
    // Another observation on the current state occurrence, possibly after discards.
    std::size_t j = steps.size() - 1;
    while (j > 0 && std::holds_alternative<Discard>(steps[j])) --j;
    if (auto* last = std::get_if<EnterState>(&steps[j]); last && carries(last->state, next)) {
      last->explained.push_back(next);
      rec(loc, next + 1, 0, cost);
      std::get<EnterState>(steps[j]).explained.pop_back();
    }
    steps.push_back(Discard{next});
    rec(loc, next + 1, chain, cost + params.discard_cost);
    steps.pop_back();

    const auto succ = successors(loc);
    for (const auto& t : succ) {
      if (carries(t, next)) {
        steps.push_back(EnterState{t, model.find_state(t)->type, {next}});
        rec(t, next + 1, 0, cost + entry(t));
        steps.pop_back();
      }
      if (chain <= max_chain) {
        steps.push_back(EnterState{t, model.find_state(t)->type, {}});
        rec(t, next, chain + 1, cost + entry(t) + params.unobserved_step_cost);
        steps.pop_back();
      }
    }
    if (chain <= max_chain) {
      for (const auto& h : model.hyperstates) {
        if (h.singleton || h.id == loc) continue;
        bool inside = false, reachable = false;
        for (const auto& m : h.members) {
          inside = inside || m.id == loc;
          reachable = reachable || std::find(succ.begin(), succ.end(), m.id) != succ.end();
        }
        if (inside || !reachable) continue;
        steps.push_back(EnterHyperstate{h.id});
        rec(h.id, next, chain + 1, cost + params.unobserved_step_cost);
        steps.pop_back();
      }
    }
  }
};

}  // namespace

std::vector<Hypothesis> brute_force(const ModelSpec& model, const Trace& trace, std::size_t max_chain,
                                    const CostParams& params, std::optional<Cost> bound) {
  Enumerator e{model, trace, max_chain, params, bound, {}, {}, {}};
  const State* start = model.find_state(model.start_state);
  e.steps.push_back(EnterState{start->id, start->type, {}});
  e.rec(start->id, 0, 0, params.entry_cost(start->type));
  return e.out;
}

std::vector<std::size_t> random_plan(const PlanningProblem& p, std::mt19937_64& rng, int attempts) {
  std::vector<FluentId> goal = p.goal;
  std::sort(goal.begin(), goal.end());
  for (int a = 0; a < attempts; ++a) {
    std::set<FluentId> state(p.initial.begin(), p.initial.end());
    std::vector<std::size_t> plan;
    for (int depth = 0; depth < 10'000; ++depth) {
      if (std::includes(state.begin(), state.end(), goal.begin(), goal.end())) return plan;
      std::vector<std::size_t> app;
      for (std::size_t i = 0; i < p.actions.size(); ++i) {
        const auto& pre = p.actions[i].pre;
        if (std::all_of(pre.begin(), pre.end(), [&](FluentId f) { return state.count(f) > 0; })) app.push_back(i);
      }
      if (app.empty()) break;
      const std::size_t pick = app[std::uniform_int_distribution<std::size_t>(0, app.size() - 1)(rng)];
      for (FluentId f : p.actions[pick].del) state.erase(f);
      for (FluentId f : p.actions[pick].add) state.insert(f);
      plan.push_back(pick);
    }
  }
  return {};
}

Trace random_trace(const ModelSpec& model, std::size_t length, std::mt19937_64& rng) {
  const auto vocab = model.observation_vocab();
  std::vector<ObsId> syms;
  for (std::size_t i = 0; i < length; ++i) {
    syms.push_back(vocab[std::uniform_int_distribution<std::size_t>(0, vocab.size() - 1)(rng)]);
  }
  return Trace::from_symbols(syms);
}

std::string steps_key(const Hypothesis& h) {
  std::ostringstream os;
  for (const auto& s : h.steps) {
    if (auto* e = std::get_if<EnterState>(&s)) {
      os << "S:" << e->state << "[";
      for (auto i : e->explained) os << i << ",";
      os << "] ";
    } else if (auto* hy = std::get_if<EnterHyperstate>(&s)) {
      os << "H:" << hy->hyper << " ";
    } else {
      os << "D:" << std::get<Discard>(s).index << " ";
    }
  }
  return os.str();
}

}  // namespace hftest
