#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hypforge {

using StateId = std::string;
using HyperId = std::string;
using ObsId = std::string;
using Cost = std::int64_t;

enum class StateType { good, bad };

std::string_view to_string(StateType type);
std::optional<StateType> state_type_from_string(std::string_view text);

/// Location of a construct in LTS++ source text. Lines and columns are
/// 1-based; columns count bytes. A default-constructed span means "no source".
struct SourceSpan {
  std::size_t offset = 0;
  std::size_t line = 0;
  std::size_t column = 0;
  std::size_t length = 0;

  bool empty() const { return line == 0; }
  std::size_t end() const { return offset + length; }
  bool operator==(const SourceSpan&) const = default;
};

struct Transition {
  StateId target;
  SourceSpan span;  // span of the target as written (may name a hyperstate)
};

struct State {
  StateId id;
  std::optional<StateType> declared_type;
  StateType type = StateType::good;  // declared, else enclosing hyperstate, else model default
  std::vector<ObsId> observations;
  bool has_observation_set = false;  // true when written with braces, even "{}"
  std::vector<Transition> outgoing;  // already expanded to state targets
  SourceSpan span;
};

/// A named group of states. Plain states live in singleton hyperstates that
/// share the state's identifier.
struct Hyperstate {
  HyperId id;
  bool singleton = true;
  std::optional<StateType> declared_type;
  std::vector<State> members;
  SourceSpan span;
};

struct ModelSpec {
  std::string name = "model";
  StateType default_type = StateType::good;
  std::vector<ObsId> declared_observations;  // optional `observations {...}` line
  std::vector<Hyperstate> hyperstates;
  StateId start_state;
  SourceSpan start_span;

  /// Every state in declaration order.
  std::vector<const State*> states() const;
  const State* find_state(std::string_view id) const;
  /// Only multi-member hyperstates are returned.
  const Hyperstate* find_hyperstate(std::string_view id) const;
  /// The hyperstate (possibly singleton) that owns `state`.
  const Hyperstate* owner_of(std::string_view state) const;
  std::size_t state_count() const;

  /// Sorted, deduplicated observation symbols attached to states.
  std::vector<ObsId> observation_vocab() const;

  /// All internal transitions of a hyperstate, as (from, to) pairs.
  static std::vector<std::pair<StateId, StateId>> transitions_of(const Hyperstate& hyper);
};

/// Compares everything but source spans.
bool structurally_equal(const ModelSpec& a, const ModelSpec& b);

/// Successor locations in the hypothesis semantics. For a state these are its
/// transition targets; for a multi-member hyperstate they are the targets of
/// member transitions that leave the hyperstate.
std::vector<StateId> hyperstate_exits(const ModelSpec& model, const Hyperstate& hyper);

bool is_all_caps(std::string_view id);

}  // namespace hypforge
