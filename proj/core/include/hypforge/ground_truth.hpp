#pragma once

#include <cstdint>
#include <vector>

#include "hypforge/hypothesis.hpp"
#include "hypforge/model.hpp"
#include "hypforge/trace.hpp"

namespace hypforge {

struct NoiseParams {
  double p_missing = 0.1;
  double p_inconsistent = 0.05;
};

struct GroundTruth {
  Trace trace;                  // noisy observations
  Hypothesis truth;             // the walk up to its last explained observation
  std::vector<StateId> walk;    // visited states, start first
  std::vector<ObsId> emitted;   // one clean observation per visited state
  bool truncated = false;       // walk hit a state without successors
};

/// Random walk of `walk_length` states from the start. Each visited state
/// emits one of its observations; each emission is then dropped with
/// p_missing, otherwise replaced by a uniformly drawn vocabulary symbol with
/// p_inconsistent. The walk uses a generator seeded with `seed` and the noise
/// a second generator seeded with `seed + 1`, so the noise can be replayed
/// independently. In `truth`, an unexplainable observation is discarded right
/// after the preceding explanation. Throws std::invalid_argument for walk_length < 1 or
/// probabilities outside [0, 1].
GroundTruth generate_ground_truth(const ModelSpec& model, std::size_t walk_length, const NoiseParams& noise,
                                  std::uint64_t seed);

}  // namespace hypforge
