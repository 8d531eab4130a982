#pragma once

#include <string>
#include <vector>

#include "frugaljudge/dataset.hpp"

namespace frugal {

enum class Direction { GreaterOrEqual, LessOrEqual, Equal };

const char* direction_symbol(Direction d);  // ">=", "<=", "="

/// Metric used to pick thresholds, rank cues, and select trees from a fan.
enum class Goal { Accuracy, BalancedAccuracy };

const char* goal_name(Goal g);

/// A single-cue threshold test. When the test fires the rule predicts
/// positive_class_when_true, otherwise the complementary class.
struct CueRule {
  std::string cue_id;
  Direction direction = Direction::GreaterOrEqual;
  int threshold = 0;
  JudgmentClass positive_class_when_true = JudgmentClass::Outstanding;
};

bool rule_fires(const CueRule& rule, int score);

struct ThresholdCandidate {
  Direction direction;
  int threshold;
};

/// All cut points for a cue: {>= t, <= t} over the scale range for ordinal
/// scales (10 for Ordinal5, 12 for Ordinal6), {= 1, = 0} for Binary.
std::vector<ThresholdCandidate> candidate_thresholds(const CueSpec& cue);

/// Best single-cue rule for one criterion plus its quality on the data.
struct CueStats {
  std::string cue_id;
  CueRule rule;
  double validity = 0.0;  // goal value of the rule on the data
  double sens = 0.0;
  double spec = 0.0;
  bool uninformative = false;  // validity == best constant rule's value
};

/// Searches candidate_thresholds x predicted-class orientations (plus the
/// always-true guard test, so a constant rule is always reachable) and
/// returns the maximizer of the goal. Ties are broken by higher
/// sensitivity, then lower threshold, then >= before <= before =, then
/// Outstanding-when-true first.
CueStats best_rule_for_cue(const Dataset& dataset, std::size_t cue_index,
                           Goal goal = Goal::Accuracy);

/// All cues ordered by descending validity; ties keep schema order.
std::vector<CueStats> rank_cues(const Dataset& dataset, Goal goal = Goal::Accuracy);

struct RocPoint {
  double x = 0.0;  // 1 - specificity
  double y = 0.0;  // sensitivity
  std::string label;
};

std::vector<RocPoint> roc_points(const std::vector<CueStats>& stats);

}  // namespace frugal
