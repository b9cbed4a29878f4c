#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hypforge/ground_truth.hpp"
#include "hypforge/search.hpp"

namespace hypforge {

std::string_view version();

struct BenchConfig {
  std::vector<std::size_t> state_counts{10, 50, 100};
  std::vector<std::size_t> obs_counts{5, 10, 20, 40, 60, 80, 100, 120};
  std::size_t instances_per_cell = 10;
  double bad_fraction = 0.6;
  NoiseParams noise;
  std::uint64_t seed = 1;
  Seconds time_budget{60.0};
  std::size_t k = 1000;
  std::size_t workers = 1;
  std::size_t max_nodes = 20'000'000;

  /// Throws std::invalid_argument on out-of-range fields.
  void check() const;
};

struct InstanceResult {
  std::size_t states = 0;
  std::size_t observations = 0;  // walk length before noise
  std::size_t instance = 0;
  std::uint64_t seed = 0;
  std::size_t trace_length = 0;
  bool solved = false;
  std::optional<double> time_to_truth;  // seconds
  double elapsed = 0.0;
  std::size_t found = 0;
  bool exhausted = false;
  std::string error;
};

struct CellResult {
  std::size_t states = 0;
  std::size_t observations = 0;
  std::size_t instances = 0;
  std::size_t solved = 0;
  double percent_solved = 0.0;
  std::optional<double> mean_time;  // over solved instances only
};

struct BenchReport {
  BenchConfig config;
  std::string engine_version;
  std::vector<CellResult> cells;
  std::vector<InstanceResult> instances;

  const CellResult* cell(std::size_t states, std::size_t observations) const;
};

/// Seed of one instance, derived from the run seed and its cell position.
std::uint64_t instance_seed(std::uint64_t seed, std::size_t states, std::size_t observations, std::size_t instance);

/// Generates and solves one instance. Engine failures are reported in
/// `error` and count as unsolved.
InstanceResult run_instance(const BenchConfig& config, std::size_t states, std::size_t observations,
                            std::size_t instance);

/// Every (states, observations) cell with instances_per_cell instances.
/// Instances run on `workers` threads; `progress` is called under a lock.
BenchReport run_benchmark(const BenchConfig& config,
                          const std::function<void(const InstanceResult&)>& progress = {});

std::string report_to_json(const BenchReport& report);
/// Observations down, state counts across, % solved and mean time per cell.
std::string format_table(const BenchReport& report);

}  // namespace hypforge
