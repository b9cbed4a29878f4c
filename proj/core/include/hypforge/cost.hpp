#pragma once

#include "hypforge/model.hpp"

namespace hypforge {

/// Action costs realizing the plausibility preorder. Construct through
/// `make` to have the ordering constraints checked.
struct CostParams {
  Cost discard_cost = 100;
  Cost good_entry_cost = 1;
  Cost bad_entry_cost = 10;
  Cost unobserved_step_cost = 5;

  /// Throws std::invalid_argument unless
  /// 0 <= good < bad < discard and unobserved_step > 0.
  static CostParams make(Cost discard, Cost good_entry, Cost bad_entry, Cost unobserved_step);
  void check() const;

  Cost entry_cost(StateType type) const {
    return type == StateType::good ? good_entry_cost : bad_entry_cost;
  }

  bool operator==(const CostParams&) const = default;
};

}  // namespace hypforge
