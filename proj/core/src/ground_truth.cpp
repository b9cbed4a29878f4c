#include "hypforge/ground_truth.hpp"

#include <algorithm>
#include <stdexcept>

#include "hypforge/random_model.hpp"

namespace hypforge {

GroundTruth generate_ground_truth(const ModelSpec& model, std::size_t walk_length, const NoiseParams& noise,
                                  std::uint64_t seed) {
  if (walk_length < 1) throw std::invalid_argument("walk length must be at least 1");
  auto prob_ok = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!prob_ok(noise.p_missing) || !prob_ok(noise.p_inconsistent)) {
    throw std::invalid_argument("noise probabilities must be in [0, 1]");
  }
  const State* at = model.find_state(model.start_state);
  if (!at) throw std::invalid_argument("random walks need a plain start state");
  const auto vocab = model.observation_vocab();
  if (vocab.empty()) throw std::invalid_argument("model has no observations");

  Rng walk_rng(seed);
  Rng noise_rng(seed + 1);
  GroundTruth gt;
  struct Visit {
    const State* state;
    std::optional<std::size_t> explained;
    std::optional<std::size_t> discarded;
  };
  std::vector<Visit> visits;
  for (std::size_t step = 0; step < walk_length; ++step) {
    if (step > 0) {
      if (at->outgoing.empty()) {
        gt.truncated = true;
        break;
      }
      at = model.find_state(at->outgoing[uniform_below(walk_rng, at->outgoing.size())].target);
    }
    gt.walk.push_back(at->id);
    Visit v{at, std::nullopt, std::nullopt};
    if (!at->observations.empty()) {
      const ObsId& clean = at->observations[uniform_below(walk_rng, at->observations.size())];
      gt.emitted.push_back(clean);
      if (uniform_unit(noise_rng) >= noise.p_missing) {
        ObsId sym = clean;
        if (uniform_unit(noise_rng) < noise.p_inconsistent) sym = vocab[uniform_below(noise_rng, vocab.size())];
        const std::size_t idx = gt.trace.size();
        gt.trace.events.push_back({sym, std::nullopt});
        if (std::find(at->observations.begin(), at->observations.end(), sym) != at->observations.end()) {
          v.explained = idx;
        } else {
          v.discarded = idx;
        }
      }
    }
    visits.push_back(v);
  }

  // Discards hang off the latest explanation (or the start), and the walk
  // is cut after its last explaining visit: nothing later is recoverable.
  std::size_t last_anchor = 0;
  for (std::size_t v = 0; v < visits.size(); ++v) {
    if (visits[v].explained) last_anchor = v;
  }
  std::size_t insert_at = 0;
  for (std::size_t v = 0; v < visits.size(); ++v) {
    if (v <= last_anchor) {
      EnterState e{visits[v].state->id, visits[v].state->type, {}};
      if (visits[v].explained) e.explained.push_back(*visits[v].explained);
      gt.truth.steps.emplace_back(std::move(e));
      if (v == 0 || visits[v].explained) insert_at = gt.truth.steps.size();
    }
    if (visits[v].discarded) {
      gt.truth.steps.insert(gt.truth.steps.begin() + static_cast<std::ptrdiff_t>(insert_at),
                            Discard{*visits[v].discarded});
      ++insert_at;
    }
  }
  return gt;
}

}  // namespace hypforge
