#pragma once

#include <cstdint>
#include <stdexcept>

#include "hypforge/search.hpp"

namespace hypforge {

class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleOptions {
  std::size_t node_bound = 1'000'000;
};

/// Exact top-k by dynamic programming over the explicit reachable state
/// graph, which is acyclic. Same order and distinctness contract as
/// find_top_k. Throws ResourceError when the graph exceeds the node bound.
ResultSet exact_oracle(const PlanningProblem& problem, std::size_t k, const OracleOptions& options = {});

/// Number of distinct plans, saturating at UINT64_MAX.
std::uint64_t count_plans(const PlanningProblem& problem, const OracleOptions& options = {});

}  // namespace hypforge
