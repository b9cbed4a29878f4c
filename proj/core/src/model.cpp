#include "hypforge/model.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace hypforge {

std::string_view to_string(StateType type) {
  return type == StateType::good ? "good" : "bad";
}

std::optional<StateType> state_type_from_string(std::string_view text) {
  if (text == "good") return StateType::good;
  if (text == "bad") return StateType::bad;
  return std::nullopt;
}

std::vector<const State*> ModelSpec::states() const {
  std::vector<const State*> out;
  for (const auto& hyper : hyperstates) {
    for (const auto& state : hyper.members) out.push_back(&state);
  }
  return out;
}

const State* ModelSpec::find_state(std::string_view id) const {
  for (const auto& hyper : hyperstates) {
    for (const auto& state : hyper.members) {
      if (state.id == id) return &state;
    }
  }
  return nullptr;
}

const Hyperstate* ModelSpec::find_hyperstate(std::string_view id) const {
  for (const auto& hyper : hyperstates) {
    if (!hyper.singleton && hyper.id == id) return &hyper;
  }
  return nullptr;
}

const Hyperstate* ModelSpec::owner_of(std::string_view state) const {
  for (const auto& hyper : hyperstates) {
    for (const auto& member : hyper.members) {
      if (member.id == state) return &hyper;
    }
  }
  return nullptr;
}

std::size_t ModelSpec::state_count() const {
  std::size_t n = 0;
  for (const auto& hyper : hyperstates) n += hyper.members.size();
  return n;
}

std::vector<ObsId> ModelSpec::observation_vocab() const {
  std::set<ObsId> vocab;
  for (const auto& hyper : hyperstates) {
    for (const auto& state : hyper.members) {
      vocab.insert(state.observations.begin(), state.observations.end());
    }
  }
  return {vocab.begin(), vocab.end()};
}

std::vector<std::pair<StateId, StateId>> ModelSpec::transitions_of(const Hyperstate& hyper) {
  std::vector<std::pair<StateId, StateId>> out;
  for (const auto& state : hyper.members) {
    for (const auto& t : state.outgoing) out.emplace_back(state.id, t.target);
  }
  return out;
}

namespace {

bool same_state(const State& a, const State& b) {
  if (a.id != b.id || a.declared_type != b.declared_type || a.type != b.type ||
      a.observations != b.observations || a.has_observation_set != b.has_observation_set ||
      a.outgoing.size() != b.outgoing.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.outgoing.size(); ++i) {
    if (a.outgoing[i].target != b.outgoing[i].target) return false;
  }
  return true;
}

}  // namespace

bool structurally_equal(const ModelSpec& a, const ModelSpec& b) {
  if (a.default_type != b.default_type || a.start_state != b.start_state ||
      a.declared_observations != b.declared_observations ||
      a.hyperstates.size() != b.hyperstates.size()) {
    return false;
  }
  for (std::size_t h = 0; h < a.hyperstates.size(); ++h) {
    const auto& x = a.hyperstates[h];
    const auto& y = b.hyperstates[h];
    if (x.id != y.id || x.singleton != y.singleton || x.declared_type != y.declared_type ||
        x.members.size() != y.members.size()) {
      return false;
    }
    for (std::size_t i = 0; i < x.members.size(); ++i) {
      if (!same_state(x.members[i], y.members[i])) return false;
    }
  }
  return true;
}

std::vector<StateId> hyperstate_exits(const ModelSpec& model, const Hyperstate& hyper) {
  (void)model;
  std::set<StateId> inside;
  for (const auto& m : hyper.members) inside.insert(m.id);
  std::vector<StateId> out;
  std::set<StateId> seen;
  for (const auto& m : hyper.members) {
    for (const auto& t : m.outgoing) {
      if (!inside.contains(t.target) && seen.insert(t.target).second) out.push_back(t.target);
    }
  }
  return out;
}

bool is_all_caps(std::string_view id) {
  bool has_letter = false;
  for (char c : id) {
    if (std::islower(static_cast<unsigned char>(c))) return false;
    if (std::isupper(static_cast<unsigned char>(c))) has_letter = true;
  }
  return has_letter;
}

}  // namespace hypforge
