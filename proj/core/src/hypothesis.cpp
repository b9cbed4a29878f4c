#include "hypforge/hypothesis.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace hypforge {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

bool is_location(const Step& step) { return !std::holds_alternative<Discard>(step); }

// Number of trace indices the hypothesis claims to cover; checks they form
// 0..m-1 with no repeats.
std::size_t covered_indices(const Hypothesis& h) {
  std::vector<std::size_t> seen;
  for (const auto& step : h.steps) {
    if (const auto* s = std::get_if<EnterState>(&step)) {
      seen.insert(seen.end(), s->explained.begin(), s->explained.end());
    } else if (const auto* d = std::get_if<Discard>(&step)) {
      seen.push_back(d->index);
    }
  }
  std::sort(seen.begin(), seen.end());
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (seen[i] != i) {
      throw std::invalid_argument("hypothesis does not cover trace indices exactly once");
    }
  }
  return seen.size();
}

}  // namespace

std::size_t Hypothesis::discard_count() const {
  return static_cast<std::size_t>(std::count_if(steps.begin(), steps.end(), [](const Step& s) {
    return std::holds_alternative<Discard>(s);
  }));
}

std::vector<std::string> Hypothesis::state_sequence() const {
  std::vector<std::string> out;
  for (const auto& step : steps) {
    if (const auto* s = std::get_if<EnterState>(&step)) out.push_back(s->state);
    if (const auto* h = std::get_if<EnterHyperstate>(&step)) out.push_back(h->hyper);
  }
  return out;
}

bool same_steps(const Hypothesis& a, const Hypothesis& b) { return a.steps == b.steps; }

Cost cost_of(const Hypothesis& hypothesis, const CostParams& params) {
  if (hypothesis.steps.empty() || !is_location(hypothesis.steps.front())) {
    throw std::invalid_argument("hypothesis must begin with the start location");
  }
  covered_indices(hypothesis);
  Cost total = 0;
  bool first = true;
  for (const auto& step : hypothesis.steps) {
    std::visit(overloaded{
                   [&](const EnterState& s) {
                     total += params.entry_cost(s.type);
                     if (s.explained.empty() && !first) total += params.unobserved_step_cost;
                   },
                   [&](const EnterHyperstate&) { total += params.unobserved_step_cost; },
                   [&](const Discard&) { total += params.discard_cost; },
               },
               step);
    first = false;
  }
  return total;
}

std::weak_ordering compare_plausibility(const Hypothesis& a, const Hypothesis& b,
                                        const CostParams& params) {
  if (covered_indices(a) != covered_indices(b)) {
    throw std::invalid_argument("hypotheses explain traces of different length");
  }
  return cost_of(a, params) <=> cost_of(b, params);
}

std::vector<std::string> validate_hypothesis(const ModelSpec& model, const Trace& trace,
                                             const Hypothesis& hypothesis,
                                             std::size_t max_chain) {
  std::vector<std::string> errors;
  auto fail = [&](std::string msg) { errors.push_back(std::move(msg)); };
  const auto& steps = hypothesis.steps;
  if (steps.empty()) {
    fail("hypothesis has no steps");
    return errors;
  }

  // Location after each step: either a state or a multi-member hyperstate.
  const State* at_state = nullptr;
  const Hyperstate* at_hyper = nullptr;
  std::size_t next_index = 0;
  std::size_t chain = 0;
  std::size_t last_discard = 0;
  bool any_discard = false;

  auto successor_states = [&]() -> std::vector<StateId> {
    if (at_state) {
      std::vector<StateId> out;
      for (const auto& t : at_state->outgoing) out.push_back(t.target);
      return out;
    }
    return hyperstate_exits(model, *at_hyper);
  };

  for (std::size_t k = 0; k < steps.size(); ++k) {
    const auto& step = steps[k];
    const std::string where = "step " + std::to_string(k + 1) + ": ";
    if (const auto* d = std::get_if<Discard>(&step)) {
      if (k == 0) {
        fail(where + "hypothesis must begin at the start location");
        return errors;
      }
      if (any_discard && d->index <= last_discard) fail(where + "discards out of order");
      if (chain != 0) fail(where + "a discard must follow the start or an explanation");
      any_discard = true;
      last_discard = d->index;
      continue;
    }

    // Gather the indices processed while at this location: explained ones
    // plus the discards that follow before the next location step.
    std::vector<std::size_t> explained;
    if (const auto* s = std::get_if<EnterState>(&step)) explained = s->explained;
    std::vector<std::size_t> processed = explained;
    for (std::size_t j = k + 1; j < steps.size() && !is_location(steps[j]); ++j) {
      processed.push_back(std::get<Discard>(steps[j]).index);
    }
    std::sort(processed.begin(), processed.end());
    if (!std::is_sorted(explained.begin(), explained.end())) {
      fail(where + "explained indices must be increasing");
    }

    if (k == 0) {
      if (const auto* s = std::get_if<EnterState>(&step)) {
        if (s->state != model.start_state || model.find_hyperstate(model.start_state)) {
          fail(where + "hypothesis must begin at start state '" + model.start_state + "'");
          return errors;
        }
      } else {
        const auto& h = std::get<EnterHyperstate>(step);
        if (h.hyper != model.start_state || !model.find_hyperstate(h.hyper)) {
          fail(where + "hypothesis must begin at start '" + model.start_state + "'");
          return errors;
        }
      }
    } else {
      if (next_index >= trace.size()) {
        fail(where + "movement after every observation was processed");
      }
      auto succ = successor_states();
      if (const auto* s = std::get_if<EnterState>(&step)) {
        if (std::find(succ.begin(), succ.end(), s->state) == succ.end()) {
          fail(where + "no transition into '" + s->state + "'");
        }
      } else {
        const auto& h = std::get<EnterHyperstate>(step);
        const auto* target = model.find_hyperstate(h.hyper);
        if (!target) {
          fail(where + "unknown hyperstate '" + h.hyper + "'");
          return errors;
        }
        if (target == at_hyper) fail(where + "re-entering the current hyperstate");
        if (at_state && model.owner_of(at_state->id) == target) {
          fail(where + "entering a hyperstate from one of its own members");
        }
        bool reaches = false;
        for (const auto& m : target->members) {
          if (std::find(succ.begin(), succ.end(), m.id) != succ.end()) reaches = true;
        }
        if (!reaches) fail(where + "no transition into hyperstate '" + h.hyper + "'");
      }
      if (!explained.empty() && (processed.empty() || processed.front() != explained.front())) {
        fail(where + "an observed state must explain its first observation on entry");
      }
    }

    for (std::size_t i = 0; i < processed.size(); ++i) {
      if (processed[i] != next_index + i) {
        fail(where + "trace indices processed out of order");
        break;
      }
    }
    next_index += processed.size();

    if (const auto* s = std::get_if<EnterState>(&step)) {
      const auto* state = model.find_state(s->state);
      if (!state) {
        fail(where + "unknown state '" + s->state + "'");
        return errors;
      }
      if (state->type != s->type) fail(where + "state type does not match the model");
      for (auto idx : explained) {
        if (idx >= trace.size()) continue;
        const auto& sym = trace.symbol(idx);
        if (std::find(state->observations.begin(), state->observations.end(), sym) ==
            state->observations.end()) {
          fail(where + "'" + s->state + "' cannot explain '" + sym + "'");
        }
      }
      at_state = state;
      at_hyper = nullptr;
      if (k == 0 || !explained.empty()) {
        chain = 0;
      } else {
        ++chain;
      }
    } else {
      at_hyper = model.find_hyperstate(std::get<EnterHyperstate>(step).hyper);
      at_state = nullptr;
      if (k != 0) ++chain;
    }
    if (chain > max_chain) fail(where + "unobserved chain exceeds the cap");
  }
  if (next_index != trace.size()) fail("hypothesis does not process every trace index");
  return errors;
}

std::string to_string(const Hypothesis& hypothesis, const Trace& trace) {
  std::string out;
  for (const auto& step : hypothesis.steps) {
    if (!out.empty()) out += " -> ";
    std::visit(overloaded{
                   [&](const EnterState& s) {
                     out += s.state;
                     if (s.type == StateType::bad) out += "<bad>";
                     if (!s.explained.empty()) {
                       out += " {";
                       for (std::size_t i = 0; i < s.explained.size(); ++i) {
                         if (i) out += ' ';
                         auto idx = s.explained[i];
                         out += idx < trace.size() ? trace.symbol(idx) : std::to_string(idx);
                       }
                       out += '}';
                     }
                   },
                   [&](const EnterHyperstate& h) { out += "[" + h.hyper + "]"; },
                   [&](const Discard& d) {
                     out += "discard(";
                     out += d.index < trace.size() ? trace.symbol(d.index) : std::to_string(d.index);
                     out += ')';
                   },
               },
               step);
  }
  return out;
}

}  // namespace hypforge
