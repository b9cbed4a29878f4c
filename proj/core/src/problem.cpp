#include "hypforge/problem.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "hypforge/diagnostic.hpp"

namespace hypforge {

std::string_view to_string(ActionKind kind) {
  switch (kind) {
    case ActionKind::enter_start: return "start";
    case ActionKind::explain: return "explain";
    case ActionKind::stay: return "stay";
    case ActionKind::unobserved_step: return "step";
    case ActionKind::enter_hyper: return "hyper";
    case ActionKind::discard: return "discard";
  }
  return "discard";
}

std::string PlanningProblem::fluent_name(FluentId id) const {
  const Fluent& f = fluents.at(id);
  switch (f.kind) {
    case FluentKind::idle: return "idle";
    case FluentKind::open: return "open";
    case FluentKind::at: {
      const auto& loc = locations.at(f.arg);
      return (loc.hyper ? "within-" : "at-") + loc.id;
    }
    case FluentKind::next: return "next-" + std::to_string(f.arg);
    case FluentKind::chain: return "chain-" + std::to_string(f.arg);
  }
  return {};
}

std::size_t PlanningProblem::count(ActionKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(actions.begin(), actions.end(), [&](const GroundAction& a) { return a.kind == kind; }));
}

bool structurally_equal(const PlanningProblem& a, const PlanningProblem& b) {
  return a.params == b.params && a.max_chain == b.max_chain && a.locations == b.locations &&
         a.trace_symbols == b.trace_symbols && a.fluents == b.fluents && a.actions == b.actions &&
         a.initial == b.initial && a.goal == b.goal;
}

CompileError::CompileError(std::string symbol, std::size_t position)
    : std::invalid_argument("trace position " + std::to_string(position + 1) + ": observation '" + symbol +
                            "' is not in the model vocabulary"),
      symbol_(std::move(symbol)),
      position_(position) {}

DecodeError::DecodeError(std::size_t action_index, const std::string& what)
    : std::invalid_argument("plan action " + std::to_string(action_index) + ": " + what),
      action_index_(action_index) {}

namespace {

void normalize(std::vector<FluentId>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

class Grounder {
 public:
  Grounder(const ModelSpec& model, const Trace& trace, const CostParams& params, std::size_t max_chain)
      : model_(model), trace_(trace) {
    p_.params = params;
    p_.max_chain = max_chain;
    p_.trace_symbols = trace.symbols();
  }

  PlanningProblem run() {
    index_locations();
    make_fluents();
    const std::size_t n = trace_.size();

    {
      GroundAction a;
      a.kind = ActionKind::enter_start;
      a.to = start_;
      a.cost = p_.locations[start_].hyper ? p_.params.unobserved_step_cost : entry_cost(start_);
      a.pre = {p_.idle_fluent()};
      a.del = {p_.idle_fluent()};
      a.add = {p_.at_fluent(start_), p_.next_fluent(0), p_.chain_fluent(0)};
      if (n > 0) a.add.push_back(p_.open_fluent());
      push(std::move(a));
    }

    // Entering a state by explaining the next observation there.
    for (std::size_t from = 0; from < p_.locations.size(); ++from) {
      for (std::size_t to : successors_[from]) {
        for (std::size_t i = 0; i < n; ++i) {
          if (!explains(to, i)) continue;
          for (std::size_t c = 0; c <= p_.max_chain; ++c) {
            GroundAction a;
            a.kind = ActionKind::explain;
            a.from = from;
            a.to = to;
            a.index = i;
            a.level = c;
            a.cost = entry_cost(to);
            a.pre = {p_.at_fluent(from), p_.next_fluent(i), p_.chain_fluent(c)};
            a.del = {p_.next_fluent(i)};
            a.add = {p_.next_fluent(i + 1)};
            move(a, from, to);
            if (c != 0) {
              a.del.push_back(p_.chain_fluent(c));
              a.add.push_back(p_.chain_fluent(0));
            }
            if (i + 1 == n) a.del.push_back(p_.open_fluent());
            push(std::move(a));
          }
        }
      }
    }

    // Explaining further observations without leaving the current state.
    for (std::size_t s = 0; s < state_count_; ++s) {
      for (std::size_t i = 0; i < n; ++i) {
        if (!explains(s, i)) continue;
        GroundAction a;
        a.kind = ActionKind::stay;
        a.from = s;
        a.to = s;
        a.index = i;
        a.level = 0;
        a.cost = 0;
        a.pre = {p_.at_fluent(s), p_.next_fluent(i), p_.chain_fluent(0)};
        a.del = {p_.next_fluent(i)};
        a.add = {p_.next_fluent(i + 1)};
        if (i + 1 == n) a.del.push_back(p_.open_fluent());
        push(std::move(a));
      }
    }

    for (std::size_t from = 0; from < p_.locations.size(); ++from) {
      for (std::size_t to : successors_[from]) {
        for (std::size_t c = 0; c < p_.max_chain; ++c) {
          GroundAction a;
          a.kind = ActionKind::unobserved_step;
          a.from = from;
          a.to = to;
          a.level = c;
          a.cost = entry_cost(to) + p_.params.unobserved_step_cost;
          a.pre = {p_.at_fluent(from), p_.chain_fluent(c), p_.open_fluent()};
          a.del = {p_.chain_fluent(c)};
          a.add = {p_.chain_fluent(c + 1)};
          move(a, from, to);
          push(std::move(a));
        }
      }
    }

    for (std::size_t from = 0; from < p_.locations.size(); ++from) {
      for (std::size_t h : hyper_targets(from)) {
        for (std::size_t c = 0; c < p_.max_chain; ++c) {
          GroundAction a;
          a.kind = ActionKind::enter_hyper;
          a.from = from;
          a.to = h;
          a.level = c;
          a.cost = p_.params.unobserved_step_cost;
          a.pre = {p_.at_fluent(from), p_.chain_fluent(c), p_.open_fluent()};
          a.del = {p_.at_fluent(from), p_.chain_fluent(c)};
          a.add = {p_.at_fluent(h), p_.chain_fluent(c + 1)};
          push(std::move(a));
        }
      }
    }

    for (std::size_t i = 0; i < n; ++i) {
      GroundAction a;
      a.kind = ActionKind::discard;
      a.index = i;
      a.cost = p_.params.discard_cost;
      // Discards attach to the last explanation so that moving and
      // discarding cannot be reordered into duplicate hypotheses.
      a.pre = {p_.next_fluent(i), p_.chain_fluent(0)};
      a.del = {p_.next_fluent(i)};
      a.add = {p_.next_fluent(i + 1)};
      if (i + 1 == n) a.del.push_back(p_.open_fluent());
      push(std::move(a));
    }

    p_.initial = {p_.idle_fluent()};
    p_.goal = {p_.next_fluent(n)};
    return std::move(p_);
  }

 private:
  void index_locations() {
    for (const State* s : model_.states()) {
      loc_index_[s->id] = p_.locations.size();
      p_.locations.push_back({s->id, false});
      obs_.push_back(std::set<ObsId>(s->observations.begin(), s->observations.end()));
      types_.push_back(s->type);
    }
    state_count_ = p_.locations.size();
    for (const auto& h : model_.hyperstates) {
      if (h.singleton) continue;
      hyper_index_[h.id] = p_.locations.size();
      p_.locations.push_back({h.id, true});
    }
    successors_.resize(p_.locations.size());
    for (const State* s : model_.states()) {
      for (const auto& t : s->outgoing) successors_[loc_index_.at(s->id)].push_back(loc_index_.at(t.target));
    }
    for (const auto& h : model_.hyperstates) {
      if (h.singleton) continue;
      for (const auto& id : hyperstate_exits(model_, h)) {
        successors_[hyper_index_.at(h.id)].push_back(loc_index_.at(id));
      }
    }
    if (auto it = hyper_index_.find(model_.start_state); it != hyper_index_.end()) {
      start_ = it->second;
    } else {
      start_ = loc_index_.at(model_.start_state);
    }
  }

  void make_fluents() {
    p_.fluents.push_back({FluentKind::idle, 0});
    p_.fluents.push_back({FluentKind::open, 0});
    for (std::size_t l = 0; l < p_.locations.size(); ++l) p_.fluents.push_back({FluentKind::at, l});
    for (std::size_t i = 0; i <= trace_.size(); ++i) p_.fluents.push_back({FluentKind::next, i});
    for (std::size_t c = 0; c <= p_.max_chain; ++c) p_.fluents.push_back({FluentKind::chain, c});
  }

  // Multi-member hyperstates enterable from `from`: not containing it, and
  // with a member among its successors.
  std::vector<std::size_t> hyper_targets(std::size_t from) const {
    std::vector<std::size_t> out;
    for (const auto& h : model_.hyperstates) {
      if (h.singleton) continue;
      const std::size_t hi = hyper_index_.at(h.id);
      if (hi == from) continue;
      bool contains_from = false;
      bool reachable = false;
      for (const auto& m : h.members) {
        const std::size_t mi = loc_index_.at(m.id);
        if (mi == from) contains_from = true;
        if (std::find(successors_[from].begin(), successors_[from].end(), mi) != successors_[from].end()) {
          reachable = true;
        }
      }
      if (!contains_from && reachable) out.push_back(hi);
    }
    return out;
  }

  void move(GroundAction& a, std::size_t from, std::size_t to) const {
    if (from == to) return;
    a.del.push_back(p_.at_fluent(from));
    a.add.push_back(p_.at_fluent(to));
  }

  bool explains(std::size_t state, std::size_t i) const {
    return state < state_count_ && obs_[state].contains(trace_.symbol(i));
  }

  Cost entry_cost(std::size_t state) const { return p_.params.entry_cost(types_[state]); }

  void push(GroundAction a) {
    normalize(a.pre);
    normalize(a.add);
    normalize(a.del);
    p_.actions.push_back(std::move(a));
  }

  const ModelSpec& model_;
  const Trace& trace_;
  PlanningProblem p_;
  std::map<std::string, std::size_t> loc_index_;
  std::map<std::string, std::size_t> hyper_index_;
  std::vector<std::set<ObsId>> obs_;
  std::vector<StateType> types_;
  std::vector<std::vector<std::size_t>> successors_;
  std::size_t state_count_ = 0;
  std::size_t start_ = 0;
};

}  // namespace

PlanningProblem compile(const ModelSpec& model, const Trace& trace, const CostParams& params,
                        const CompileOptions& options) {
  params.check();
  if (auto problems = validate_model(model); !problems.empty()) {
    throw std::invalid_argument("cannot compile an invalid model: " + problems.front().message);
  }
  const auto vocab = model.observation_vocab();
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (!std::binary_search(vocab.begin(), vocab.end(), trace.symbol(i))) {
      throw CompileError(trace.symbol(i), i);
    }
  }
  PlanningProblem p = Grounder(model, trace, params, options.max_chain.value_or(model.state_count())).run();
  p.model = std::make_shared<const ModelSpec>(model);
  return p;
}

Hypothesis decode(const PlanningProblem& problem, std::span<const GroundAction> plan) {
  if (!problem.model) throw std::invalid_argument("decode needs a problem compiled from a model");
  const ModelSpec& model = *problem.model;
  std::set<FluentId> state(problem.initial.begin(), problem.initial.end());
  Hypothesis h;
  auto type_of = [&](std::size_t loc) {
    const State* s = model.find_state(problem.locations.at(loc).id);
    return s ? s->type : StateType::good;
  };
  auto bad_ref = [&](const std::optional<std::size_t>& v, std::size_t limit) { return !v || *v >= limit; };
  for (std::size_t k = 0; k < plan.size(); ++k) {
    const GroundAction& a = plan[k];
    for (FluentId f : a.pre) {
      if (!state.contains(f)) {
        throw DecodeError(k, std::string(to_string(a.kind)) + " action is not applicable here");
      }
    }
    for (FluentId f : a.del) state.erase(f);
    for (FluentId f : a.add) state.insert(f);
    h.total_cost += a.cost;
    const std::size_t nloc = problem.locations.size();
    switch (a.kind) {
      case ActionKind::enter_start:
        if (bad_ref(a.to, nloc)) throw DecodeError(k, "malformed start action");
        if (problem.locations[*a.to].hyper) {
          h.steps.emplace_back(EnterHyperstate{problem.locations[*a.to].id});
        } else {
          h.steps.emplace_back(EnterState{problem.locations[*a.to].id, type_of(*a.to), {}});
        }
        break;
      case ActionKind::explain:
        if (bad_ref(a.to, nloc) || !a.index) throw DecodeError(k, "malformed explain action");
        h.steps.emplace_back(EnterState{problem.locations[*a.to].id, type_of(*a.to), {*a.index}});
        break;
      case ActionKind::stay: {
        auto* last = h.steps.empty() ? nullptr : [&]() -> EnterState* {
          for (auto it = h.steps.rbegin(); it != h.steps.rend(); ++it) {
            if (std::holds_alternative<Discard>(*it)) continue;
            return std::get_if<EnterState>(&*it);
          }
          return nullptr;
        }();
        if (!last || !a.index) throw DecodeError(k, "stay action without a current state");
        last->explained.push_back(*a.index);
        break;
      }
      case ActionKind::unobserved_step:
        if (bad_ref(a.to, nloc)) throw DecodeError(k, "malformed step action");
        h.steps.emplace_back(EnterState{problem.locations[*a.to].id, type_of(*a.to), {}});
        break;
      case ActionKind::enter_hyper:
        if (bad_ref(a.to, nloc)) throw DecodeError(k, "malformed hyperstate action");
        h.steps.emplace_back(EnterHyperstate{problem.locations[*a.to].id});
        break;
      case ActionKind::discard:
        if (!a.index) throw DecodeError(k, "malformed discard action");
        h.steps.emplace_back(Discard{*a.index});
        break;
    }
  }
  for (FluentId f : problem.goal) {
    if (!state.contains(f)) throw DecodeError(plan.size(), "plan does not reach the goal");
  }
  return h;
}

Hypothesis decode(const PlanningProblem& problem, std::span<const std::size_t> plan) {
  std::vector<GroundAction> actions;
  actions.reserve(plan.size());
  for (std::size_t k = 0; k < plan.size(); ++k) {
    if (plan[k] >= problem.actions.size()) throw DecodeError(k, "unknown action");
    actions.push_back(problem.actions[plan[k]]);
  }
  return decode(problem, std::span<const GroundAction>(actions));
}

}  // namespace hypforge
