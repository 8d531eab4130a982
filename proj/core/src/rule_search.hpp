#pragma once

// Internal rule-search machinery shared by the cue-analysis and tree
// engines. Not installed.

#include <optional>
#include <vector>

#include "frugaljudge/cues.hpp"

namespace frugal::detail {

struct RuleEval {
  CueRule rule;
  long tp = 0, fp = 0, tn = 0, fn = 0;
  long correct = 0;
  double goal_value = 0.0;
};

/// Evaluates the rule as a standalone classifier over the given record
/// indices (Outstanding positive).
RuleEval evaluate_rule(const Dataset& dataset, std::size_t cue_index, const CueRule& rule,
                       const std::vector<std::size_t>& indices, Goal goal);

/// Exact comparison key for the goal; denominators are shared by all rules
/// evaluated on the same index set, so integer keys make ties exact.
long long goal_key(const RuleEval& e, Goal goal);

/// Frozen tie-break chain: higher goal, then higher sensitivity (tp), then
/// lower threshold, then >= before <= before =, then Outstanding-when-true.
bool better_rule(const RuleEval& a, const RuleEval& b, Goal goal);

/// Best rule over candidates x orientations. When forced_class is set only
/// that orientation is searched (tree levels); otherwise both are.
RuleEval best_rule(const Dataset& dataset, std::size_t cue_index,
                   const std::vector<ThresholdCandidate>& candidates,
                   std::optional<JudgmentClass> forced_class,
                   const std::vector<std::size_t>& indices, Goal goal);

std::vector<std::size_t> all_indices(std::size_t n);

}  // namespace frugal::detail
