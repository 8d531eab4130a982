#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "frugaljudge/cues.hpp"
#include "test_util.hpp"

using namespace frugal;
using namespace testutil;

namespace {

// Independent brute-force oracle over the documented search space: every
// (direction, threshold) candidate x both orientations, plus the always-true
// guard; ties by higher sensitivity, lower threshold, >= before <= before =,
// Outstanding-when-true first.
struct BruteEval {
  CueRule rule;
  long correct = 0;
  long tp = 0, fp = 0, tn = 0, fn = 0;
};

BruteEval brute_eval(const Dataset& ds, std::size_t cue, const CueRule& rule) {
  BruteEval e;
  e.rule = rule;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const int score = ds.records()[i].scores[cue];
    bool fires = false;
    if (rule.direction == Direction::GreaterOrEqual) fires = score >= rule.threshold;
    if (rule.direction == Direction::LessOrEqual) fires = score <= rule.threshold;
    if (rule.direction == Direction::Equal) fires = score == rule.threshold;
    const JudgmentClass pred =
        fires ? rule.positive_class_when_true : other_class(rule.positive_class_when_true);
    const bool pp = pred == JudgmentClass::Outstanding;
    const bool ap = ds.labels()[i] == JudgmentClass::Outstanding;
    if (pp && ap) ++e.tp;
    if (pp && !ap) ++e.fp;
    if (!pp && ap) ++e.fn;
    if (!pp && !ap) ++e.tn;
  }
  e.correct = e.tp + e.tn;
  return e;
}

int dir_rank(Direction d) {
  if (d == Direction::GreaterOrEqual) return 0;
  if (d == Direction::LessOrEqual) return 1;
  return 2;
}

bool brute_better(const BruteEval& a, const BruteEval& b) {
  if (a.correct != b.correct) return a.correct > b.correct;
  if (a.tp != b.tp) return a.tp > b.tp;
  if (a.rule.threshold != b.rule.threshold) return a.rule.threshold < b.rule.threshold;
  if (dir_rank(a.rule.direction) != dir_rank(b.rule.direction)) {
    return dir_rank(a.rule.direction) < dir_rank(b.rule.direction);
  }
  return a.rule.positive_class_when_true == JudgmentClass::Outstanding &&
         b.rule.positive_class_when_true != JudgmentClass::Outstanding;
}

BruteEval brute_best(const Dataset& ds, std::size_t cue) {
  const CueSpec& spec = ds.schema()[cue];
  std::vector<std::pair<Direction, int>> tests;
  if (spec.scale == ScaleKind::Binary) {
    tests = {{Direction::Equal, 1}, {Direction::Equal, 0}, {Direction::GreaterOrEqual, 0}};
  } else {
    for (int t = 1; t <= scale_max(spec.scale); ++t) tests.push_back({Direction::GreaterOrEqual, t});
    for (int t = 1; t <= scale_max(spec.scale); ++t) tests.push_back({Direction::LessOrEqual, t});
  }
  bool have = false;
  BruteEval best;
  for (auto [dir, t] : tests) {
    for (JudgmentClass pos : {JudgmentClass::Outstanding, JudgmentClass::NotOutstanding}) {
      BruteEval e = brute_eval(ds, cue, {spec.id, dir, t, pos});
      if (!have || brute_better(e, best)) {
        best = e;
        have = true;
      }
    }
  }
  return best;
}

}  // namespace

TEST_CASE("candidate counts per scale") {
  CHECK(candidate_thresholds({"x", "X", CueGroup::Project, ScaleKind::Ordinal5}).size() == 10);
  CHECK(candidate_thresholds({"x", "X", CueGroup::Project, ScaleKind::Ordinal6}).size() == 12);
  CHECK(candidate_thresholds({"x", "X", CueGroup::Project, ScaleKind::Binary}).size() == 2);
}

TEST_CASE("candidate order is deterministic") {
  const auto a = candidate_thresholds({"x", "X", CueGroup::Project, ScaleKind::Ordinal5});
  const auto b = candidate_thresholds({"x", "X", CueGroup::Project, ScaleKind::Ordinal5});
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].direction == b[i].direction);
    CHECK(a[i].threshold == b[i].threshold);
  }
  CHECK(a[0].direction == Direction::GreaterOrEqual);
  CHECK(a[0].threshold == 1);
}

TEST_CASE("a cue identical to the label indicator has validity 1") {
  auto schema = simple_schema(1);
  std::vector<std::vector<int>> scores;
  std::vector<int> overall;
  for (int i = 0; i < 12; ++i) {
    const bool out = i % 3 == 0;
    scores.push_back({out ? 5 : 2});
    overall.push_back(out ? 6 : 2);
  }
  const Dataset ds = dataset_from(schema, scores, overall);
  const CueStats s = best_rule_for_cue(ds, 0);
  CHECK(s.validity == 1.0);
  CHECK(s.sens == 1.0);
  CHECK(s.spec == 1.0);
  CHECK_FALSE(s.uninformative);
}

TEST_CASE("a constant cue yields the majority rule, flagged uninformative") {
  auto schema = simple_schema(1);
  std::vector<std::vector<int>> scores(10, std::vector<int>{3});
  std::vector<int> overall;
  for (int i = 0; i < 10; ++i) overall.push_back(i < 6 ? 2 : 6);  // 60% NotOutstanding
  const Dataset ds = dataset_from(schema, scores, overall);
  const CueStats s = best_rule_for_cue(ds, 0);
  CHECK(s.validity == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(s.uninformative);
}

TEST_CASE("best rule matches the exhaustive oracle") {
  for (uint64_t seed = 0; seed < 12; ++seed) {
    const Dataset ds = random_dataset(mixed_schema5(), 8 + seed % 9, 100 + seed);
    for (std::size_t cue = 0; cue < ds.cue_count(); ++cue) {
      const CueStats got = best_rule_for_cue(ds, cue);
      const BruteEval want = brute_best(ds, cue);
      CAPTURE(seed);
      CAPTURE(cue);
      CHECK(got.validity ==
            doctest::Approx(static_cast<double>(want.correct) / ds.size()).epsilon(1e-12));
      CHECK(got.rule.direction == want.rule.direction);
      CHECK(got.rule.threshold == want.rule.threshold);
      CHECK(got.rule.positive_class_when_true == want.rule.positive_class_when_true);
    }
  }
}

TEST_CASE("validity never drops below the majority share (constant rule available)") {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const Dataset ds = random_dataset(canonical_schema(), 20 + seed * 3, 500 + seed);
    const double p = prevalence(ds);
    const double majority = std::max(p, 1.0 - p);
    for (std::size_t cue = 0; cue < ds.cue_count(); ++cue) {
      CHECK(best_rule_for_cue(ds, cue).validity >= majority - 1e-12);
    }
  }
}

TEST_CASE("validity is invariant under simultaneous direction/class swap") {
  const Dataset ds = random_dataset(simple_schema(2), 25, 7);
  for (std::size_t cue = 0; cue < 2; ++cue) {
    for (int t = 2; t <= 5; ++t) {
      const CueRule rule{ds.schema()[cue].id, Direction::GreaterOrEqual, t,
                         JudgmentClass::Outstanding};
      // complement: fires exactly when the original does not
      const CueRule swapped{ds.schema()[cue].id, Direction::LessOrEqual, t - 1,
                            JudgmentClass::NotOutstanding};
      const BruteEval a = brute_eval(ds, cue, rule);
      const BruteEval b = brute_eval(ds, cue, swapped);
      CHECK(a.correct == b.correct);
      CHECK(a.tp == b.tp);
    }
  }
}

TEST_CASE("validity equals accuracy recomputed from the confusion matrix") {
  const Dataset ds = random_dataset(mixed_schema5(), 30, 21);
  for (std::size_t cue = 0; cue < ds.cue_count(); ++cue) {
    const CueStats s = best_rule_for_cue(ds, cue);
    const BruteEval e = brute_eval(ds, cue, s.rule);
    CHECK(s.validity ==
          doctest::Approx(static_cast<double>(e.tp + e.tn) / ds.size()).epsilon(1e-12));
    if (e.tp + e.fn > 0) {
      CHECK(s.sens == doctest::Approx(static_cast<double>(e.tp) / (e.tp + e.fn)));
    }
    if (e.tn + e.fp > 0) {
      CHECK(s.spec == doctest::Approx(static_cast<double>(e.tn) / (e.tn + e.fp)));
    }
  }
}

TEST_CASE("rank_cues sorts descending with stable ties") {
  // Cue A matches the label in 18/20 records, C in 15/20, B in 12/20.
  auto schema = simple_schema(3);
  std::vector<std::vector<int>> scores;
  std::vector<int> overall;
  for (int i = 0; i < 20; ++i) {
    const bool out = i < 10;
    const bool a = out != (i == 0 || i == 10);                    // 2 flips -> 0.9
    const bool b = out != (i % 10 < 4);                           // 8 flips -> 0.6
    const bool c = out != (i == 0 || i == 1 || (i >= 10 && i <= 12));  // 5 flips -> 0.75
    scores.push_back({a ? 5 : 1, b ? 5 : 1, c ? 5 : 1});
    overall.push_back(out ? 5 : 2);
  }
  const Dataset ds = dataset_from(schema, scores, overall);
  const auto ranked = rank_cues(ds);
  REQUIRE(ranked.size() == 3);
  CHECK(ranked[0].cue_id == "c1");
  CHECK(ranked[0].validity == doctest::Approx(0.9));
  CHECK(ranked[1].cue_id == "c3");
  CHECK(ranked[1].validity == doctest::Approx(0.75));
  CHECK(ranked[2].cue_id == "c2");
  CHECK(ranked[2].validity == doctest::Approx(0.6));
}

TEST_CASE("tied cues keep schema order") {
  auto schema = simple_schema(2);
  std::vector<std::vector<int>> scores;
  std::vector<int> overall;
  for (int i = 0; i < 10; ++i) {
    const bool out = i < 5;
    const int v = (i % 5 < 4) == out ? 5 : 1;  // identical columns
    scores.push_back({v, v});
    overall.push_back(out ? 5 : 2);
  }
  const Dataset ds = dataset_from(schema, scores, overall);
  const auto ranked = rank_cues(ds);
  CHECK(ranked[0].validity == ranked[1].validity);
  CHECK(ranked[0].cue_id == "c1");
  CHECK(ranked[1].cue_id == "c2");
}

TEST_CASE("rank_cues output is a permutation of the schema") {
  const Dataset ds = random_dataset(canonical_schema(), 40, 3);
  const auto ranked = rank_cues(ds);
  REQUIRE(ranked.size() == 13);
  std::vector<std::string> ids;
  for (const auto& s : ranked) ids.push_back(s.cue_id);
  std::sort(ids.begin(), ids.end());
  std::vector<std::string> expected;
  for (const auto& c : canonical_schema()) expected.push_back(c.id);
  std::sort(expected.begin(), expected.end());
  CHECK(ids == expected);
}

TEST_CASE("roc points map sens/spec to ROC coordinates") {
  CueStats perfect{"p", {}, 1.0, 1.0, 1.0, false};
  CueStats chance{"q", {}, 0.5, 0.5, 0.5, false};
  const auto points = roc_points({perfect, chance});
  REQUIRE(points.size() == 2);
  CHECK(points[0].x == doctest::Approx(0.0));
  CHECK(points[0].y == doctest::Approx(1.0));
  CHECK(points[1].x == doctest::Approx(0.5));
  CHECK(points[1].y == doctest::Approx(0.5));
}

TEST_CASE("thirteen cues give thirteen roc points in unit square") {
  const Dataset ds = random_dataset(canonical_schema(), 50, 9);
  const auto points = roc_points(rank_cues(ds));
  REQUIRE(points.size() == 13);
  for (const auto& p : points) {
    CHECK(p.x >= 0.0);
    CHECK(p.x <= 1.0);
    CHECK(p.y >= 0.0);
    CHECK(p.y <= 1.0);
  }
}
