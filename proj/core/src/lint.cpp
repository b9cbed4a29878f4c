#include "hypforge/lint.hpp"

#include <deque>
#include <set>

namespace hypforge {

std::vector<Diagnostic> lint(const ModelSpec& model) {
  std::vector<Diagnostic> out;
  auto warn = [&](std::string code, std::string message, SourceSpan span) {
    out.push_back({Severity::warning, std::move(code), std::move(message), span});
  };

  std::set<StateId> reached;
  std::deque<StateId> queue;
  auto visit = [&](const StateId& id) {
    if (reached.insert(id).second) queue.push_back(id);
  };
  if (const auto* start_hyper = model.find_hyperstate(model.start_state)) {
    for (const auto& m : start_hyper->members) visit(m.id);
  } else {
    visit(model.start_state);
  }
  while (!queue.empty()) {
    const State* s = model.find_state(queue.front());
    queue.pop_front();
    if (!s) continue;
    for (const auto& t : s->outgoing) visit(t.target);
  }

  std::set<ObsId> used;
  for (const auto& hyper : model.hyperstates) {
    if (!hyper.singleton && !is_all_caps(hyper.id)) {
      warn("hyperstate-case", "hyperstate '" + hyper.id + "' should be written in all caps", hyper.span);
    }
    for (const auto& s : hyper.members) {
      used.insert(s.observations.begin(), s.observations.end());
      if (!reached.contains(s.id)) {
        warn("unreachable-state", "unreachable state '" + s.id + "'", s.span);
      }
      if (s.has_observation_set && s.observations.empty()) {
        warn("empty-observations", "state '" + s.id + "' explains no observation", s.span);
      } else if (s.observations.empty() && s.outgoing.empty()) {
        warn("dead-end", "state '" + s.id + "' has no observations and no outgoing transitions", s.span);
      }
    }
  }
  for (const auto& sym : model.declared_observations) {
    if (!used.contains(sym)) {
      warn("unused-observation", "observation '" + sym + "' is not associated with any state",
           SourceSpan{});
    }
  }
  sort_by_span(out);
  return out;
}

std::vector<Diagnostic> lint_trace(const ModelSpec& model, const Trace& trace) {
  const auto vocab = model.observation_vocab();
  const std::set<ObsId> known(vocab.begin(), vocab.end());
  std::vector<Diagnostic> out;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (!known.contains(trace.symbol(i))) {
      out.push_back({Severity::warning, "unknown-observation",
                     "trace observation '" + trace.symbol(i) + "' is not in the model vocabulary",
                     SourceSpan{0, i + 1, 1, trace.symbol(i).size()}});
    }
  }
  return out;
}

namespace {

void print_state(std::string& out, const State& s, std::string_view indent) {
  out += indent;
  out += s.id;
  if (s.declared_type) {
    out += " <";
    out += to_string(*s.declared_type);
    out += '>';
  }
  if (s.has_observation_set) {
    out += " {";
    for (std::size_t i = 0; i < s.observations.size(); ++i) {
      if (i) out += ", ";
      out += s.observations[i];
    }
    out += '}';
  }
  for (std::size_t i = 0; i < s.outgoing.size(); ++i) {
    out += i ? " | " : " -> ";
    out += s.outgoing[i].target;
  }
  out += '\n';
}

}  // namespace

std::string pretty_print(const ModelSpec& model) {
  std::string out = "default <" + std::string(to_string(model.default_type)) + ">\n";
  if (!model.declared_observations.empty()) {
    out += "observations {";
    for (std::size_t i = 0; i < model.declared_observations.size(); ++i) {
      if (i) out += ", ";
      out += model.declared_observations[i];
    }
    out += "}\n";
  }
  for (const auto& hyper : model.hyperstates) {
    if (hyper.singleton) {
      for (const auto& s : hyper.members) print_state(out, s, "");
      continue;
    }
    out += hyper.id;
    if (hyper.declared_type) {
      out += " <";
      out += to_string(*hyper.declared_type);
      out += '>';
    }
    out += " {\n";
    for (const auto& s : hyper.members) print_state(out, s, "  ");
    out += "}\n";
  }
  out += "start: " + model.start_state + "\n";
  return out;
}

}  // namespace hypforge
