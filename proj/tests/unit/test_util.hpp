#pragma once

// Shared helpers for the unit suites.

#include <string>
#include <vector>

#include "frugaljudge/dataset.hpp"
#include "frugaljudge/rng.hpp"

namespace testutil {

using namespace frugal;

/// k Ordinal5 cues named c1..ck.
inline std::vector<CueSpec> simple_schema(int k) {
  std::vector<CueSpec> schema;
  for (int i = 1; i <= k; ++i) {
    schema.push_back({"c" + std::to_string(i), "Cue " + std::to_string(i),
                      CueGroup::Project, ScaleKind::Ordinal5});
  }
  return schema;
}

/// Mixed 5-cue schema: three Ordinal5, one Ordinal6, one Binary.
inline std::vector<CueSpec> mixed_schema5() {
  return {
      {"a1", "Alpha", CueGroup::Applicant, ScaleKind::Ordinal5},
      {"a2", "Beta", CueGroup::Applicant, ScaleKind::Ordinal5},
      {"a3", "Gamma", CueGroup::Project, ScaleKind::Ordinal5},
      {"a4", "Delta", CueGroup::Project, ScaleKind::Ordinal6},
      {"a5", "Epsilon", CueGroup::Environment, ScaleKind::Binary},
  };
}

inline RatingForm form(const std::string& proposal, const std::string& referee, Role role,
                       std::vector<int> scores, int overall) {
  RatingForm r;
  r.proposal_id = proposal;
  r.referee_id = referee;
  r.referee_role = role;
  r.scores = std::move(scores);
  r.overall = overall;
  return r;
}

/// Builds a dataset where row i gets proposal id P<i>; roles alternate
/// First/Second per row unless two_roles is false.
inline Dataset dataset_from(const std::vector<CueSpec>& schema,
                            const std::vector<std::vector<int>>& scores,
                            const std::vector<int>& overall, bool two_roles = false) {
  std::vector<RatingForm> records;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const Role role = two_roles && i % 2 == 1 ? Role::Second : Role::First;
    const std::string pid = "P" + std::to_string(two_roles ? i / 2 + 1 : i + 1);
    records.push_back(form(pid, "R" + std::to_string(i % 7 + 1), role, scores[i],
                           overall[i]));
  }
  return Dataset::validate(schema, std::move(records));
}

/// Random dataset for property tests; both judgment classes guaranteed.
inline Dataset random_dataset(const std::vector<CueSpec>& schema, std::size_t n,
                              uint64_t seed, bool two_roles = true) {
  Rng rng(seed);
  std::vector<std::vector<int>> scores(n);
  std::vector<int> overall(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const CueSpec& cue : schema) {
      const int lo = scale_min(cue.scale), hi = scale_max(cue.scale);
      scores[i].push_back(lo + static_cast<int>(rng.bounded(hi - lo + 1)));
    }
    overall[i] = 1 + static_cast<int>(rng.bounded(6));
  }
  overall[0] = 6;
  if (n > 1) overall[1] = 1;
  return dataset_from(schema, scores, overall, two_roles);
}

}  // namespace testutil
