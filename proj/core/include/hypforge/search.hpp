#pragma once

#include <chrono>
#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <stop_token>
#include <vector>

#include "hypforge/hypothesis.hpp"
#include "hypforge/problem.hpp"

namespace hypforge {

using Clock = std::chrono::steady_clock;
using Seconds = std::chrono::duration<double>;

/// Total order used to rank plans: cost, then fewer discards, fewer steps,
/// then the sequence of entered locations (declaration order) and finally
/// the action indices.
struct RankKey {
  Cost cost = 0;
  std::size_t discards = 0;
  std::size_t steps = 0;
  std::vector<std::size_t> locations;
  std::vector<std::size_t> actions;

  auto operator<=>(const RankKey&) const = default;
  bool operator==(const RankKey&) const = default;
};

RankKey rank_key(const PlanningProblem& problem, std::span<const std::size_t> plan);

struct SearchConfig {
  std::size_t k = 10;
  Seconds time_budget{300.0};
  /// Frontier size cap; reaching it ends the search like an expired budget.
  std::size_t max_nodes = 20'000'000;
  std::stop_token stop;
};

struct ResultSet {
  std::vector<Hypothesis> hypotheses;
  std::vector<std::vector<std::size_t>> plans;  // action indices, parallel to hypotheses
  std::vector<Seconds> found_at;                // time from search start to each plan
  bool exhausted = false;
  Seconds elapsed{0.0};
};

/// Anytime top-k plan enumeration. Plans come out in RankKey order; plans of
/// equal cost are released together, so a run cut short by its budget
/// returns a prefix of the full order. A search can be resumed to extend its
/// results, which is how result pages are produced.
class TopKSearch {
 public:
  /// Throws std::invalid_argument for a malformed problem.
  explicit TopKSearch(std::shared_ptr<const PlanningProblem> problem);
  ~TopKSearch();
  TopKSearch(TopKSearch&&) noexcept;
  TopKSearch& operator=(TopKSearch&&) noexcept;

  /// Searches until `count` plans are available, the space is exhausted, the
  /// deadline passes or a stop is requested. Returns the number available.
  std::size_t extend(std::size_t count, Clock::time_point deadline, std::stop_token stop = {},
                     std::size_t max_nodes = 20'000'000);

  std::size_t available() const;
  bool exhausted() const;
  std::size_t expansions() const;

  /// Decoded results [first, last) in rank order.
  ResultSet results(std::size_t first, std::size_t last) const;
  const PlanningProblem& problem() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One-shot search. A budget that expires with nothing found yields an empty
/// result, not an error.
ResultSet find_top_k(const PlanningProblem& problem, const SearchConfig& config);

/// True iff some result visits the same state sequence as `truth`.
bool check_ground_truth(const ResultSet& results, const Hypothesis& truth);

}  // namespace hypforge
