#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypforge/cost.hpp"
#include "hypforge/hypothesis.hpp"
#include "hypforge/model.hpp"
#include "hypforge/trace.hpp"

namespace hypforge {

using FluentId = std::uint32_t;

enum class FluentKind {
  idle,   // the entity has not been placed at its start yet
  open,   // some trace index is still unprocessed
  at,     // location (state or hyperstate); arg = location index
  next,   // next unprocessed trace index; arg in [0, n]
  chain,  // unobserved steps since the last explanation; arg in [0, max_chain]
};

struct Fluent {
  FluentKind kind = FluentKind::idle;
  std::size_t arg = 0;

  bool operator==(const Fluent&) const = default;
};

struct Location {
  std::string id;
  bool hyper = false;

  bool operator==(const Location&) const = default;
};

enum class ActionKind { enter_start, explain, stay, unobserved_step, enter_hyper, discard };

std::string_view to_string(ActionKind kind);

/// A grounded STRIPS action with cost. `from`/`to` are location indices,
/// `index` a trace index, `level` the unobserved-chain length the action
/// requires. Unused fields are empty.
struct GroundAction {
  ActionKind kind = ActionKind::discard;
  std::optional<std::size_t> from;
  std::optional<std::size_t> to;
  std::optional<std::size_t> index;
  std::optional<std::size_t> level;
  Cost cost = 0;
  std::vector<FluentId> pre;
  std::vector<FluentId> add;
  std::vector<FluentId> del;

  bool changes_location() const {
    return kind == ActionKind::enter_start || kind == ActionKind::explain ||
           kind == ActionKind::unobserved_step || kind == ActionKind::enter_hyper;
  }
  std::size_t added_steps() const { return kind == ActionKind::stay ? 0 : 1; }
  std::size_t added_discards() const { return kind == ActionKind::discard ? 1 : 0; }

  bool operator==(const GroundAction&) const = default;
};

/// Hypothesis generation as a cost-optimal planning problem. Search nodes are
/// (location, next trace index, chain length); every plan from `initial` to
/// `goal` decodes to a hypothesis whose cost equals the plan cost.
struct PlanningProblem {
  CostParams params;
  std::size_t max_chain = 0;
  std::vector<Location> locations;  // states in declaration order, then hyperstates
  std::vector<ObsId> trace_symbols;
  std::vector<Fluent> fluents;
  std::vector<GroundAction> actions;
  std::vector<FluentId> initial;
  std::vector<FluentId> goal;

  // Context for decoding; absent on problems read back from PDDL.
  std::shared_ptr<const ModelSpec> model;

  FluentId idle_fluent() const { return 0; }
  FluentId open_fluent() const { return 1; }
  FluentId at_fluent(std::size_t location) const { return static_cast<FluentId>(2 + location); }
  FluentId next_fluent(std::size_t index) const {
    return static_cast<FluentId>(2 + locations.size() + index);
  }
  FluentId chain_fluent(std::size_t level) const {
    return static_cast<FluentId>(2 + locations.size() + trace_symbols.size() + 1 + level);
  }
  std::string fluent_name(FluentId id) const;
  std::size_t trace_length() const { return trace_symbols.size(); }
  std::size_t count(ActionKind kind) const;
};

/// Everything except the decoding context.
bool structurally_equal(const PlanningProblem& a, const PlanningProblem& b);

class CompileError : public std::invalid_argument {
 public:
  CompileError(std::string symbol, std::size_t position);
  const std::string& symbol() const { return symbol_; }
  std::size_t position() const { return position_; }

 private:
  std::string symbol_;
  std::size_t position_;
};

struct CompileOptions {
  /// Longest run of unobserved steps between explanations; defaults to the
  /// number of model states.
  std::optional<std::size_t> max_chain;
};

/// Grounds (model, trace, costs) into a planning problem. Action order is
/// deterministic. Throws CompileError for a trace symbol outside the model
/// vocabulary and std::invalid_argument for an invalid model or costs.
PlanningProblem compile(const ModelSpec& model, const Trace& trace, const CostParams& params,
                        const CompileOptions& options = {});

class DecodeError : public std::invalid_argument {
 public:
  DecodeError(std::size_t action_index, const std::string& what);
  std::size_t action_index() const { return action_index_; }

 private:
  std::size_t action_index_;
};

/// Replays a plan and turns it into a hypothesis. Throws DecodeError naming
/// the first inapplicable action, or the plan length if the goal is not
/// reached; std::invalid_argument if the problem carries no model.
Hypothesis decode(const PlanningProblem& problem, std::span<const GroundAction> plan);
Hypothesis decode(const PlanningProblem& problem, std::span<const std::size_t> plan);

}  // namespace hypforge
