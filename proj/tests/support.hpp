#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <fcntl.h>
#include <spawn.h>
#include <sys/wait.h>

#include "nomoforge/explainability.hpp"
#include "nomoforge/loader.hpp"
#include "nomoforge/pipeline.hpp"
#include "nomoforge/rule_merge.hpp"
#include "nomoforge/tabular_model.hpp"

extern char** environ;

namespace nomoforge::testing {

inline std::filesystem::path fixture_dir() { return NOMOFORGE_FIXTURE_DIR; }
inline std::filesystem::path golden_dir() { return NOMOFORGE_GOLDEN_DIR; }

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct FixtureSpec {
  std::string name;
  std::string outputs = "outputs.csv";
  bool shap = true;
  OutputKind kind = OutputKind::Probability;
};

inline LoadedInputs load_fixture(const FixtureSpec& spec) {
  const auto dir = fixture_dir() / spec.name;
  InputTexts texts{slurp(dir / "features.csv"), slurp(dir / spec.outputs), slurp(dir / "manifest.csv"),
                   std::nullopt};
  if (spec.shap) texts.shap = slurp(dir / "shap.csv");
  return load_inputs(texts, {spec.kind, std::nullopt, kDefaultGridCap});
}

/// One fixture per nomogram kind; the rendered SVG is stored as golden/<file>.
struct GoldenCase {
  const char* file;
  FixtureSpec fixture;
  NomogramOptions options;
};

inline std::vector<GoldenCase> golden_cases() {
  return {
      {"type1_categorical.svg", {"categorical"}, {}},
      {"type2_categorical_prob.svg", {"categorical"}, {true, false}},
      {"type3_categorical_estimate.svg", {"categorical", "outputs_estimate.csv", true, OutputKind::Estimate}, {false, true}},
      {"type4_mixed_prob.svg", {"mixed"}, {true, false}},
      {"type5_mixed_estimate.svg", {"mixed", "outputs_estimate.csv", true, OutputKind::Estimate}, {false, true}},
  };
}

inline NomogramResult render_case(const GoldenCase& c) {
  const auto loaded = load_fixture(c.fixture);
  if (!loaded.ok()) throw std::runtime_error(std::string("fixture failed validation: ") + c.file);
  return create_nomogram(*loaded.combos, loaded.outputs, loaded.shap ? &*loaded.shap : nullptr, c.options);
}

/// Runs a program to completion with stdout discarded and returns its exit
/// status (-1 if it could not start).
inline int run_process(const std::vector<std::string>& args) {
  std::vector<char*> argv;
  for (const auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
  argv.push_back(nullptr);
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, 1, "/dev/null", O_WRONLY, 0);
  pid_t pid = -1;
  const int rc = posix_spawn(&pid, argv[0], &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) return -1;
  int status = 0;
  if (::waitpid(pid, &status, 0) != pid || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

/// k binary features named F0.. with levels "0"/"1".
inline FeatureSpace binary_space(std::size_t k, const std::string& prefix = "F") {
  std::vector<FeatureSpec> features;
  for (std::size_t i = 0; i < k; ++i) features.push_back(FeatureSpec::categorical(prefix + std::to_string(i), "0", "1"));
  return FeatureSpace(std::move(features));
}

inline PredictorRanking make_ranking(const FeatureSpace& space, const std::vector<double>& scores) {
  PredictorRanking r;
  for (std::size_t i = 0; i < space.size(); ++i) r.entries.push_back({space[i].name, scores[i]});
  return r;
}

struct Instance {
  CombinationTable combos;
  OutputVector outputs;
  PredictorRanking ranking;
};

inline Instance random_instance(std::size_t k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto space = binary_space(k);
  auto combos = expand_grid(space);
  OutputVector outputs{OutputKind::Probability, {}};
  for (std::size_t i = 0; i < combos.size(); ++i) outputs.values.push_back(unit(rng));
  std::vector<double> scores;
  for (std::size_t i = 0; i < k; ++i) scores.push_back(normal(rng));
  auto ranking = make_ranking(space, scores);
  return {std::move(combos), std::move(outputs), std::move(ranking)};
}

/// Rules as a set of (polarity, assignments), ignoring list order.
inline std::set<std::pair<int, std::vector<Assignment>>> rule_set(const RuleList& rules) {
  std::set<std::pair<int, std::vector<Assignment>>> out;
  for (const auto& r : rules.positive) out.insert({0, r.assignments});
  for (const auto& r : rules.negative) out.insert({1, r.assignments});
  return out;
}

/// Partition, minimality and exclusion. Returns a description of the first
/// violation, or nullopt.
inline std::optional<std::string> check_rule_invariants(const CombinationTable& combos, const OutputVector& outputs,
                                                        const RuleList& rules) {
  const auto& space = combos.space();
  std::vector<std::vector<int>> levels;
  for (const auto& row : combos.rows()) levels.push_back(sample_levels(space, row));

  for (std::size_t r = 0; r < combos.size(); ++r) {
    int hits = 0;
    Polarity polarity = Polarity::Positive;
    for (const auto* list : {&rules.positive, &rules.negative}) {
      for (const auto& rule : *list) {
        if (rule.matches(levels[r])) {
          ++hits;
          polarity = rule.polarity;
        }
      }
    }
    if (hits != 1) return "row " + std::to_string(r) + " matched by " + std::to_string(hits) + " rules";
    const bool positive = outputs.values[r] >= rules.threshold;
    if ((polarity == Polarity::Positive) != positive) return "row " + std::to_string(r) + " has the wrong polarity";
  }

  for (const auto* list : {&rules.positive, &rules.negative}) {
    for (const auto& rule : *list) {
      if (rule.iteration != static_cast<int>(rule.assignments.size())) return "iteration differs from length";
      if (rule.iteration > 1) {
        Rule shorter = rule;
        shorter.assignments.pop_back();
        double lo = 1e300, hi = -1e300;
        for (std::size_t r = 0; r < combos.size(); ++r) {
          if (!shorter.matches(levels[r])) continue;
          lo = std::min(lo, outputs.values[r]);
          hi = std::max(hi, outputs.values[r]);
        }
        const bool accepted = rule.polarity == Polarity::Positive ? lo >= rules.threshold : hi < rules.threshold;
        if (accepted) return "rule could be shortened";
      }
      for (const auto& other : *list) {
        if (&other == &rule || other.assignments.size() >= rule.assignments.size()) continue;
        if (std::equal(other.assignments.begin(), other.assignments.end(), rule.assignments.begin())) {
          return "rule extends another rule of the same polarity";
        }
      }
    }
  }
  const auto total = rules.size();
  if (total < 1 || total > combos.size()) return "rule count out of bounds";
  return std::nullopt;
}

}  // namespace nomoforge::testing
