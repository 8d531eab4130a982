#pragma once

#include <string>
#include <vector>

#include "frugaljudge/cues.hpp"

namespace frugal {

/// One level of a fast-and-frugal tree. If the rule fires, the record exits
/// with rule.positive_class_when_true; otherwise it falls through to the
/// next level. The final level exits either way.
struct TreeLevel {
  CueRule rule;
  std::string cue_name;  // display name, kept for rendering
};

struct FFTree {
  std::vector<TreeLevel> levels;
  Goal goal = Goal::Accuracy;
  double training_goal_value = 0.0;

  int depth() const { return static_cast<int>(levels.size()); }

  /// Exit classes of the non-final levels (empty for depth 1).
  std::vector<JudgmentClass> exit_structure() const;
};

struct ClassificationTrace {
  JudgmentClass predicted = JudgmentClass::NotOutstanding;
  int cues_used = 0;  // 1..depth
};

/// The paper's tree software fits at most six cues; deeper fans are allowed
/// but warn on stderr.
inline constexpr int kDefaultMaxDepth = 6;

/// All 2^(depth-1) trees of one depth, in exit-structure enumeration order,
/// plus the selected one.
struct Fan {
  FFTree selected;
  std::vector<FFTree> all;
};

/// Fits every exit structure over the top-`depth` cues of `ranking` (order
/// fixed by validity). Within a structure, each level's threshold is
/// re-optimized on the records reaching that level, ignoring conditional
/// dependencies between cues; a level nobody reaches keeps the rule fitted
/// on the full dataset. Selection maximizes the goal of the whole tree on
/// the training data; ties prefer fewer exits to Outstanding, then
/// enumeration order.
Fan build_fan_at_depth(const Dataset& dataset, const std::vector<CueStats>& ranking,
                       int depth, Goal goal);

/// One best tree per depth 1..depth_max. Throws std::invalid_argument when
/// depth_max exceeds the cue count or is < 1.
std::vector<FFTree> build_fan(const Dataset& dataset, int depth_max,
                              Goal goal = Goal::Accuracy);

/// Lexicographic classification: walk levels in order, first firing exit
/// decides; cues_used counts the levels inspected.
ClassificationTrace classify_record(const FFTree& tree, const std::vector<CueSpec>& schema,
                                    const RatingForm& record);

/// Nested if-then-else prose, two lines per level.
std::string describe_tree(const FFTree& tree);

std::string tree_to_json(const FFTree& tree);
FFTree tree_from_json(const std::string& text);

}  // namespace frugal
