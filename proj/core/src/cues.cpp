#include "frugaljudge/cues.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "frugaljudge/parallel.hpp"
#include "rule_search.hpp"

namespace frugal {

const char* direction_symbol(Direction d) {
  switch (d) {
    case Direction::GreaterOrEqual: return ">=";
    case Direction::LessOrEqual: return "<=";
    case Direction::Equal: return "=";
  }
  return "?";
}

const char* goal_name(Goal g) {
  return g == Goal::Accuracy ? "accuracy" : "balanced-accuracy";
}

bool rule_fires(const CueRule& rule, int score) {
  switch (rule.direction) {
    case Direction::GreaterOrEqual: return score >= rule.threshold;
    case Direction::LessOrEqual: return score <= rule.threshold;
    case Direction::Equal: return score == rule.threshold;
  }
  return false;
}

std::vector<ThresholdCandidate> candidate_thresholds(const CueSpec& cue) {
  std::vector<ThresholdCandidate> out;
  if (cue.scale == ScaleKind::Binary) {
    out.push_back({Direction::Equal, 1});
    out.push_back({Direction::Equal, 0});
    return out;
  }
  for (int t = scale_min(cue.scale); t <= scale_max(cue.scale); ++t) {
    out.push_back({Direction::GreaterOrEqual, t});
  }
  for (int t = scale_min(cue.scale); t <= scale_max(cue.scale); ++t) {
    out.push_back({Direction::LessOrEqual, t});
  }
  return out;
}

namespace detail {

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  return idx;
}

RuleEval evaluate_rule(const Dataset& dataset, std::size_t cue_index, const CueRule& rule,
                       const std::vector<std::size_t>& indices, Goal goal) {
  RuleEval e;
  e.rule = rule;
  const auto& records = dataset.records();
  const auto& labels = dataset.labels();
  for (std::size_t i : indices) {
    const bool fires = rule_fires(rule, records[i].scores[cue_index]);
    const JudgmentClass predicted =
        fires ? rule.positive_class_when_true : other_class(rule.positive_class_when_true);
    const bool actual_pos = labels[i] == JudgmentClass::Outstanding;
    const bool pred_pos = predicted == JudgmentClass::Outstanding;
    if (pred_pos && actual_pos) ++e.tp;
    else if (pred_pos && !actual_pos) ++e.fp;
    else if (!pred_pos && actual_pos) ++e.fn;
    else ++e.tn;
  }
  e.correct = e.tp + e.tn;
  const long np = e.tp + e.fn;
  const long nn = e.tn + e.fp;
  if (goal == Goal::Accuracy) {
    e.goal_value = indices.empty() ? 0.0 : static_cast<double>(e.correct) / indices.size();
  } else {
    const double sens_part = np > 0 ? static_cast<double>(e.tp) / np : 0.0;
    const double spec_part = nn > 0 ? static_cast<double>(e.tn) / nn : 0.0;
    e.goal_value = 0.5 * (sens_part + spec_part);
  }
  return e;
}

long long goal_key(const RuleEval& e, Goal goal) {
  if (goal == Goal::Accuracy) return e.correct;
  const long np = e.tp + e.fn;
  const long nn = e.tn + e.fp;
  if (np == 0) return e.tn;
  if (nn == 0) return e.tp;
  return static_cast<long long>(e.tp) * nn + static_cast<long long>(e.tn) * np;
}

namespace {
int direction_rank(Direction d) {
  switch (d) {
    case Direction::GreaterOrEqual: return 0;
    case Direction::LessOrEqual: return 1;
    case Direction::Equal: return 2;
  }
  return 3;
}
}  // namespace

bool better_rule(const RuleEval& a, const RuleEval& b, Goal goal) {
  const long long ga = goal_key(a, goal), gb = goal_key(b, goal);
  if (ga != gb) return ga > gb;
  if (a.tp != b.tp) return a.tp > b.tp;
  if (a.rule.threshold != b.rule.threshold) return a.rule.threshold < b.rule.threshold;
  const int da = direction_rank(a.rule.direction), db = direction_rank(b.rule.direction);
  if (da != db) return da < db;
  return a.rule.positive_class_when_true == JudgmentClass::Outstanding &&
         b.rule.positive_class_when_true != JudgmentClass::Outstanding;
}

RuleEval best_rule(const Dataset& dataset, std::size_t cue_index,
                   const std::vector<ThresholdCandidate>& candidates,
                   std::optional<JudgmentClass> forced_class,
                   const std::vector<std::size_t>& indices, Goal goal) {
  const std::string& cue_id = dataset.schema()[cue_index].id;
  std::vector<JudgmentClass> orientations;
  if (forced_class) {
    orientations = {*forced_class};
  } else {
    orientations = {JudgmentClass::Outstanding, JudgmentClass::NotOutstanding};
  }
  bool have_best = false;
  RuleEval best;
  for (const ThresholdCandidate& c : candidates) {
    for (JudgmentClass orient : orientations) {
      CueRule rule{cue_id, c.direction, c.threshold, orient};
      RuleEval e = evaluate_rule(dataset, cue_index, rule, indices, goal);
      if (!have_best || better_rule(e, best, goal)) {
        best = e;
        have_best = true;
      }
    }
  }
  return best;
}

}  // namespace detail

CueStats best_rule_for_cue(const Dataset& dataset, std::size_t cue_index, Goal goal) {
  if (dataset.size() == 0) throw std::invalid_argument("best_rule_for_cue on empty dataset");
  const CueSpec& cue = dataset.schema().at(cue_index);
  const auto indices = detail::all_indices(dataset.size());

  std::vector<ThresholdCandidate> candidates = candidate_thresholds(cue);
  if (cue.scale == ScaleKind::Binary) {
    // Always-true guard so the constant rule stays reachable; ordinal scales
    // already contain it as ">= min".
    candidates.push_back({Direction::GreaterOrEqual, 0});
  }
  detail::RuleEval best =
      detail::best_rule(dataset, cue_index, candidates, std::nullopt, indices, goal);

  // Constant-rule baseline, for the uninformative flag.
  CueRule const_rule{cue.id, Direction::GreaterOrEqual, scale_min(cue.scale) == 0 ? 0 : 1,
                     JudgmentClass::Outstanding};
  detail::RuleEval always_pos =
      detail::evaluate_rule(dataset, cue_index, const_rule, indices, goal);
  const_rule.positive_class_when_true = JudgmentClass::NotOutstanding;
  detail::RuleEval always_neg =
      detail::evaluate_rule(dataset, cue_index, const_rule, indices, goal);
  const long long const_key =
      std::max(detail::goal_key(always_pos, goal), detail::goal_key(always_neg, goal));

  CueStats stats;
  stats.cue_id = cue.id;
  stats.rule = best.rule;
  stats.validity = best.goal_value;
  const long np = best.tp + best.fn;
  const long nn = best.tn + best.fp;
  stats.sens = np > 0 ? static_cast<double>(best.tp) / np
                      : std::numeric_limits<double>::quiet_NaN();
  stats.spec = nn > 0 ? static_cast<double>(best.tn) / nn
                      : std::numeric_limits<double>::quiet_NaN();
  stats.uninformative = detail::goal_key(best, goal) == const_key;
  return stats;
}

std::vector<CueStats> rank_cues(const Dataset& dataset, Goal goal) {
  if (dataset.cue_count() == 0) throw std::invalid_argument("rank_cues without cues");
  std::vector<CueStats> stats(dataset.cue_count());
  parallel_for(dataset.cue_count(),
               [&](std::size_t j) { stats[j] = best_rule_for_cue(dataset, j, goal); });
  // Descending validity; stable_sort keeps schema order on ties. Validities
  // share the denominator N, so double comparison is exact here.
  std::stable_sort(stats.begin(), stats.end(),
                   [](const CueStats& a, const CueStats& b) { return a.validity > b.validity; });
  return stats;
}

std::vector<RocPoint> roc_points(const std::vector<CueStats>& stats) {
  std::vector<RocPoint> points;
  points.reserve(stats.size());
  for (const CueStats& s : stats) {
    points.push_back({1.0 - s.spec, s.sens, s.cue_id});
  }
  return points;
}

}  // namespace frugal
