#pragma once

#include <cstddef>
#include <vector>

#include "nomoforge/tabular_model.hpp"

namespace nomoforge {

/// Size limits of the hosted service. The combination cap applies to the
/// tabular kinds (types 2-5); type 1 is bounded by its predictor count.
struct LimitPolicy {
  std::size_t max_predictors_type1 = 15;
  std::size_t max_predictors_other = 5;
  std::size_t max_combinations = 3200;
  bool enabled = true;

  /// Defaults, disabled when NOMOFORGE_LIMITS=off.
  static LimitPolicy from_environment();
};

/// LimitExceeded findings; empty when the request fits.
std::vector<Finding> check_limits(const LimitPolicy& policy, NomogramKind kind, std::size_t predictors,
                                  std::size_t combinations);

}  // namespace nomoforge
