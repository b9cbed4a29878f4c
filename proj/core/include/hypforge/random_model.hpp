#pragma once

#include <cstdint>
#include <random>

#include "hypforge/model.hpp"

namespace hypforge {

using Rng = std::mt19937_64;

/// Uniform integer in [0, bound) by rejection sampling; identical on every
/// platform, unlike std::uniform_int_distribution.
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound);
/// Uniform double in [0, 1) from the top 53 bits.
double uniform_unit(Rng& rng);

struct RandomModelOptions {
  std::size_t n_states = 10;
  double bad_fraction = 0.6;
  std::uint64_t seed = 0;
  std::size_t min_out_degree = 1;
  std::size_t max_out_degree = 3;
  std::size_t vocab_size = 0;  // 0: one symbol per state
};

/// States s0..s{n-1} with s0 the start. Every state is reachable from s0,
/// has at least one successor, no self-loop, and 1-3 observations from
/// o0..o{vocab-1}. Exactly floor(bad_fraction * n) states are bad. Throws
/// std::invalid_argument for n < 2 or a fraction outside [0, 1].
ModelSpec generate_random_model(const RandomModelOptions& options);
ModelSpec generate_random_model(std::size_t n_states, double bad_fraction, std::uint64_t seed);

}  // namespace hypforge
