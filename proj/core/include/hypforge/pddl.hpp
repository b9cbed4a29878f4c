#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "hypforge/problem.hpp"

namespace hypforge {

struct PddlFiles {
  std::string domain;
  std::string problem;
};

/// Grounded STRIPS with action costs. Every action is parameterless; trace
/// observations become ordered objects of the problem file. Throws
/// std::invalid_argument if two location names collide case-insensitively.
PddlFiles export_pddl(const PlanningProblem& problem, std::string_view trace_id = "trace");

class PddlError : public std::runtime_error {
 public:
  PddlError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Reads files written by export_pddl back into a problem without a model.
/// Throws PddlError with the offending line on malformed input.
PlanningProblem read_pddl(std::string_view domain_text, std::string_view problem_text);

}  // namespace hypforge
