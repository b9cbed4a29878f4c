#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hypforge/hypothesis.hpp"
#include "hypforge/model.hpp"
#include "hypforge/problem.hpp"
#include "hypforge/trace.hpp"

namespace hftest {

std::string models_dir();
std::string bundled_source(const std::string& name);  // "malware" or "icu"
hypforge::ModelSpec bundled(const std::string& name);
hypforge::ModelSpec must_parse(const std::string& source);

// Walks the model's transition relation directly and keeps every step
// sequence that validate_hypothesis accepts. Generation is a superset of
// the valid set (chains are allowed one step past the cap) so the
// validator, not the generator, decides. With a bound, only hypotheses of
// cost <= bound are kept.
std::vector<hypforge::Hypothesis> brute_force(const hypforge::ModelSpec& model, const hypforge::Trace& trace,
                                              std::size_t max_chain, const hypforge::CostParams& params,
                                              std::optional<hypforge::Cost> bound = std::nullopt);

// Random valid plan by replaying STRIPS semantics from the initial state;
// retries on dead ends. Empty when none was found in `attempts` tries.
std::vector<std::size_t> random_plan(const hypforge::PlanningProblem& problem, std::mt19937_64& rng,
                                     int attempts = 200);

// Random trace over the model vocabulary, possibly with repeats.
hypforge::Trace random_trace(const hypforge::ModelSpec& model, std::size_t length, std::mt19937_64& rng);

std::string steps_key(const hypforge::Hypothesis& h);

}  // namespace hftest
