#include "nomoforge/limits.hpp"

#include <cstdlib>
#include <string>

namespace nomoforge {

LimitPolicy LimitPolicy::from_environment() {
  LimitPolicy policy;
  if (const char* v = std::getenv("NOMOFORGE_LIMITS"); v && std::string(v) == "off") policy.enabled = false;
  return policy;
}

std::vector<Finding> check_limits(const LimitPolicy& policy, NomogramKind kind, std::size_t predictors,
                                  std::size_t combinations) {
  std::vector<Finding> out;
  if (!policy.enabled) return out;
  if (kind == NomogramKind::CatBinNoProb) {
    if (predictors > policy.max_predictors_type1) {
      out.push_back({FindingCode::LimitExceeded,
                     "maximum " + std::to_string(policy.max_predictors_type1) +
                         " categorical predictors for binary outcome without probability; got " +
                         std::to_string(predictors),
                     {}, {}});
    }
    return out;
  }
  if (predictors > policy.max_predictors_other) {
    out.push_back({FindingCode::LimitExceeded,
                   "maximum " + std::to_string(policy.max_predictors_other) + " predictors for " +
                       std::string(to_string(kind)) + " nomograms; got " + std::to_string(predictors),
                   {}, {}});
  }
  if (combinations > policy.max_combinations) {
    out.push_back({FindingCode::LimitExceeded,
                   "maximum " + std::to_string(policy.max_combinations) + " combinations for " +
                       std::string(to_string(kind)) + " nomograms; got " + std::to_string(combinations),
                   {}, {}});
  }
  return out;
}

}  // namespace nomoforge
