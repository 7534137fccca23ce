#include "nomoforge/rule_merge.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "nomoforge/errors.hpp"

namespace nomoforge {

std::string_view to_string(Polarity polarity) {
  return polarity == Polarity::Positive ? "positive" : "negative";
}

bool Rule::matches(const std::vector<int>& levels) const {
  return std::all_of(assignments.begin(), assignments.end(),
                     [&](const Assignment& a) { return levels.at(a.feature) == a.level; });
}

namespace {

constexpr std::size_t kMaxRuleFeatures = 24;

void check_preconditions(const CombinationTable& combos, const OutputVector& outputs,
                         const PredictorRanking& ranking, double threshold) {
  const auto& space = combos.space();
  if (space.numeric_index()) {
    throw Error(ErrorCode::UnsupportedKind, "rule merging is defined for categorical predictors only");
  }
  if (outputs.kind != OutputKind::Probability) {
    throw Error(ErrorCode::KindMismatch, "rule merging needs probability outputs");
  }
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw Error(ErrorCode::InvalidInput, "threshold must lie strictly between 0 and 1");
  }
  if (outputs.values.size() != combos.size()) {
    throw Error(ErrorCode::InvalidInput, "outputs are not aligned with the combination table");
  }
  if (space.size() > kMaxRuleFeatures) {
    throw Error(ErrorCode::InvalidInput, "too many predictors for rule merging");
  }
  if (ranking.entries.size() != space.size()) {
    throw Error(ErrorCode::InvalidInput, "ranking must score every feature");
  }
  for (const auto& e : ranking.entries) {
    if (!space.index_of(e.feature)) {
      throw Error(ErrorCode::InvalidInput, "ranking names unknown feature '" + e.feature + "'");
    }
  }
}

std::vector<std::size_t> feature_order(const FeatureSpace& space, const PredictorRanking& ranking,
                                       RankDirection direction) {
  std::vector<std::size_t> order;
  for (const auto& name : rank_predictors(ranking, direction)) order.push_back(*space.index_of(name));
  return order;
}

/// Outputs laid out as a complete binary tree over `order`: leaf index bits
/// are feature levels with order[0] as the most significant bit.
std::vector<double> leaf_values(const CombinationTable& combos, const OutputVector& outputs,
                                const std::vector<std::size_t>& order) {
  const std::size_t k = order.size();
  std::vector<double> leaves(std::size_t{1} << k, 0.0);
  std::vector<bool> filled(leaves.size(), false);
  for (std::size_t r = 0; r < combos.size(); ++r) {
    const auto levels = sample_levels(combos.space(), combos[r]);
    std::size_t index = 0;
    for (auto f : order) index = (index << 1) | static_cast<std::size_t>(levels[f]);
    if (filled[index]) throw Error(ErrorCode::InvalidInput, "duplicate combination in table");
    leaves[index] = outputs.values[r];
    filled[index] = true;
  }
  if (std::find(filled.begin(), filled.end(), false) != filled.end()) {
    throw Error(ErrorCode::InvalidInput, "combination table is incomplete");
  }
  return leaves;
}

Rule make_rule(const std::vector<std::size_t>& order, std::size_t prefix, int length, Polarity polarity) {
  Rule rule;
  rule.polarity = polarity;
  rule.iteration = length;
  for (int i = 0; i < length; ++i) {
    const int bit = static_cast<int>((prefix >> (length - 1 - i)) & 1U);
    rule.assignments.push_back({order[static_cast<std::size_t>(i)], bit});
  }
  return rule;
}

std::vector<Rule> merge_pass(const std::vector<double>& leaves, const std::vector<std::size_t>& order,
                             double threshold, Polarity polarity) {
  const std::size_t k = order.size();
  // extreme[s][p]: min (positive pass) or max (negative pass) output over
  // every completion of the length-s prefix p.
  std::vector<std::vector<double>> extreme(k + 1);
  extreme[k] = leaves;
  for (std::size_t s = k; s-- > 0;) {
    extreme[s].resize(std::size_t{1} << s);
    for (std::size_t p = 0; p < extreme[s].size(); ++p) {
      const double a = extreme[s + 1][2 * p];
      const double b = extreme[s + 1][2 * p + 1];
      extreme[s][p] = polarity == Polarity::Positive ? std::min(a, b) : std::max(a, b);
    }
  }

  std::vector<Rule> rules;
  // covered[p] at the current length: p extends an accepted prefix.
  std::vector<bool> covered(2, false);
  for (std::size_t s = 1; s <= k; ++s) {
    if (s > 1) {
      std::vector<bool> next(std::size_t{1} << s);
      for (std::size_t p = 0; p < next.size(); ++p) next[p] = covered[p >> 1];
      covered = std::move(next);
    }
    // Positive level first within an iteration.
    for (std::size_t p = covered.size(); p-- > 0;) {
      if (covered[p]) continue;
      const double v = extreme[s][p];
      const bool accept = polarity == Polarity::Positive ? v >= threshold : v < threshold;
      if (accept) {
        rules.push_back(make_rule(order, p, static_cast<int>(s), polarity));
        covered[p] = true;
      }
    }
  }
  return rules;
}

void sort_canonical(std::vector<Rule>& rules) {
  // Same iteration: lexicographic by assigned levels, positive level first.
  std::stable_sort(rules.begin(), rules.end(), [](const Rule& a, const Rule& b) {
    if (a.iteration != b.iteration) return a.iteration < b.iteration;
    for (std::size_t i = 0; i < a.assignments.size(); ++i) {
      if (a.assignments[i].level != b.assignments[i].level) {
        return a.assignments[i].level > b.assignments[i].level;
      }
    }
    return false;
  });
}

}  // namespace

std::vector<int> sample_levels(const FeatureSpace& space, const Row& sample) {
  if (sample.size() != space.size()) {
    throw Error(ErrorCode::InvalidInput, "sample must assign every feature");
  }
  std::vector<int> levels(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto* label = std::get_if<std::string>(&sample[i]);
    if (!space[i].is_categorical() || !label) {
      throw Error(ErrorCode::UnsupportedKind, "feature '" + space[i].name + "' is not categorical");
    }
    const auto idx = space[i].level_index(*label);
    if (!idx) {
      throw Error(ErrorCode::InvalidInput,
                  "'" + *label + "' is not a level of feature '" + space[i].name + "'");
    }
    levels[i] = *idx;
  }
  return levels;
}

RuleList derive_rules(const CombinationTable& combos, const OutputVector& outputs,
                      const PredictorRanking& ranking, double threshold) {
  check_preconditions(combos, outputs, ranking, threshold);
  const auto& space = combos.space();
  RuleList out{space, {}, {}, threshold, ranking};

  const auto desc = feature_order(space, ranking, RankDirection::Descending);
  const auto asc = feature_order(space, ranking, RankDirection::Ascending);
  out.positive = merge_pass(leaf_values(combos, outputs, desc), desc, threshold, Polarity::Positive);
  out.negative = merge_pass(leaf_values(combos, outputs, asc), asc, threshold, Polarity::Negative);
  return out;
}

RuleList derive_rules_oracle(const CombinationTable& combos, const OutputVector& outputs,
                             const PredictorRanking& ranking, double threshold) {
  check_preconditions(combos, outputs, ranking, threshold);
  const auto& space = combos.space();
  RuleList out{space, {}, {}, threshold, ranking};

  std::vector<std::vector<int>> levels;
  for (const auto& row : combos.rows()) levels.push_back(sample_levels(space, row));

  const auto desc = feature_order(space, ranking, RankDirection::Descending);
  const auto asc = feature_order(space, ranking, RankDirection::Ascending);

  std::set<std::vector<Assignment>> seen_pos, seen_neg;
  for (std::size_t w = 0; w < combos.size(); ++w) {
    const bool positive = outputs.values[w] >= threshold;
    const auto& order = positive ? desc : asc;
    for (std::size_t s = 1; s <= order.size(); ++s) {
      std::vector<Assignment> prefix;
      for (std::size_t i = 0; i < s; ++i) prefix.push_back({order[i], levels[w][order[i]]});
      bool agree = true;
      for (std::size_t v = 0; v < combos.size() && agree; ++v) {
        const bool completes = std::all_of(prefix.begin(), prefix.end(), [&](const Assignment& a) {
          return levels[v][a.feature] == a.level;
        });
        if (completes && (outputs.values[v] >= threshold) != positive) agree = false;
      }
      if (!agree) continue;
      auto& seen = positive ? seen_pos : seen_neg;
      if (seen.insert(prefix).second) {
        Rule rule{prefix, positive ? Polarity::Positive : Polarity::Negative, static_cast<int>(s)};
        (positive ? out.positive : out.negative).push_back(std::move(rule));
      }
      break;
    }
  }
  sort_canonical(out.positive);
  sort_canonical(out.negative);
  return out;
}

RuleMatch match_rule(const RuleList& rules, const Row& sample) {
  const auto levels = sample_levels(rules.space, sample);
  RuleMatch found;
  int hits = 0;
  auto scan = [&](const std::vector<Rule>& list, Polarity polarity) {
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (list[i].matches(levels)) {
        if (hits++ == 0) found = {&list[i], polarity, i};
      }
    }
  };
  scan(rules.positive, Polarity::Positive);
  scan(rules.negative, Polarity::Negative);
  if (hits != 1) {
    throw Error(ErrorCode::PartitionViolation,
                "sample matched " + std::to_string(hits) + " rules; expected exactly one");
  }
  return found;
}

std::string describe(const Rule& rule, const FeatureSpace& space) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < rule.assignments.size(); ++i) {
    const auto& a = rule.assignments[i];
    if (i) os << ", ";
    os << space[a.feature].name << '=' << space[a.feature].level_label(a.level);
  }
  os << ']';
  return os.str();
}

}  // namespace nomoforge
