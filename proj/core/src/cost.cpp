#include "hypforge/cost.hpp"

#include <stdexcept>

namespace hypforge {

CostParams CostParams::make(Cost discard, Cost good_entry, Cost bad_entry, Cost unobserved_step) {
  CostParams p{discard, good_entry, bad_entry, unobserved_step};
  p.check();
  return p;
}

void CostParams::check() const {
  if (good_entry_cost < 0 || bad_entry_cost < 0 || discard_cost < 0 || unobserved_step_cost < 0) {
    throw std::invalid_argument("cost parameters must be non-negative");
  }
  if (!(bad_entry_cost > good_entry_cost)) {
    throw std::invalid_argument("bad_entry_cost must exceed good_entry_cost");
  }
  if (!(discard_cost > bad_entry_cost)) {
    throw std::invalid_argument("discard_cost must exceed bad_entry_cost");
  }
  if (!(unobserved_step_cost > 0)) {
    throw std::invalid_argument("unobserved_step_cost must be positive");
  }
}

}  // namespace hypforge
