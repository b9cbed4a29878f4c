#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "hypforge/cost.hpp"
#include "hypforge/model.hpp"
#include "hypforge/trace.hpp"

namespace hypforge {

/// Entering a state. `explained` lists the trace indices this occurrence
/// accounts for; an empty list marks an unobserved step.
struct EnterState {
  StateId state;
  StateType type = StateType::good;
  std::vector<std::size_t> explained;

  bool operator==(const EnterState&) const = default;
};

/// A pass through a hyperstate with no observed member.
struct EnterHyperstate {
  HyperId hyper;

  bool operator==(const EnterHyperstate&) const = default;
};

/// Leaving trace index `index` unexplained.
struct Discard {
  std::size_t index = 0;

  bool operator==(const Discard&) const = default;
};

using Step = std::variant<EnterState, EnterHyperstate, Discard>;

struct Hypothesis {
  std::vector<Step> steps;
  Cost total_cost = 0;
  std::size_t rank = 0;

  std::size_t discard_count() const;
  /// Ids of visited states and hyperstates, discards omitted.
  std::vector<std::string> state_sequence() const;
};

bool same_steps(const Hypothesis& a, const Hypothesis& b);

/// discard_cost per Discard, the entry cost of every EnterState, and
/// unobserved_step_cost per unobserved EnterState and per EnterHyperstate.
/// The initial step is the entity's given starting point and is charged its
/// entry cost only. Throws std::invalid_argument if the steps do not cover
/// trace indices 0..m-1 exactly once or do not begin with a location.
Cost cost_of(const Hypothesis& hypothesis, const CostParams& params);

/// Cost preorder: less means strictly more plausible. Throws
/// std::invalid_argument when the two cover different traces.
std::weak_ordering compare_plausibility(const Hypothesis& a, const Hypothesis& b,
                                        const CostParams& params);

/// Full check against the hypothesis semantics of `model` and `trace`.
/// Returns human-readable violations; empty means valid.
std::vector<std::string> validate_hypothesis(const ModelSpec& model, const Trace& trace,
                                             const Hypothesis& hypothesis,
                                             std::size_t max_chain);

std::string to_string(const Hypothesis& hypothesis, const Trace& trace);

}  // namespace hypforge
