#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "frugaljudge/fft.hpp"
#include "frugaljudge/logistic.hpp"

namespace frugal {

/// Outstanding is the positive class throughout.
struct ConfusionMatrix {
  long tp = 0, fp = 0, tn = 0, fn = 0;

  long total() const { return tp + fp + tn + fn; }
  double accuracy() const;
  double sensitivity() const;  // NaN when tp+fn == 0
  double specificity() const;  // NaN when tn+fp == 0
};

/// Throws std::invalid_argument on length mismatch or empty input.
ConfusionMatrix confusion(const std::vector<JudgmentClass>& predictions,
                          const std::vector<JudgmentClass>& labels);

enum class Split { Training, Testing };

const char* split_name(Split s);

/// One Table-3 style row cell: a decision rule evaluated on one split.
struct PerformanceRecord {
  std::string rule_label;
  Split split = Split::Training;
  double frug_abs = 0.0;
  double frug_rel = 0.0;
  double acc = 0.0;
  double sens = 0.0;
  double spec = 0.0;
  ConfusionMatrix cm;
  double prevalence = 0.0;  // of the evaluated split
};

/// (mean cues used, share of available cues ignored).
std::pair<double, double> frugality(const std::vector<ClassificationTrace>& traces,
                                    int available_cues);

/// Applies a tree to a dataset: per-record traces plus aggregate metrics.
std::pair<std::vector<ClassificationTrace>, PerformanceRecord> classify_dataset(
    const FFTree& tree, const Dataset& dataset, const std::string& rule_label,
    Split split);

enum class SplitDesign { RoleBased, StratifiedRandom };

struct SplitPlan {
  SplitDesign design = SplitDesign::RoleBased;
  uint64_t seed = 0;  // meaningful for StratifiedRandom only
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> test_indices;
};

/// First referees to training, second referees to testing. Throws
/// ValidationError when a role is absent.
SplitPlan role_split(const Dataset& dataset);

/// Per role stratum, ceil(half) of the records go to training (seeded
/// shuffle within the stratum); same seed, same plan.
SplitPlan stratified_split(const Dataset& dataset, uint64_t seed);

struct ReducedSpec {
  std::string label;
  std::vector<std::string> cue_ids;
};

struct CompareOptions {
  int depth_max = kDefaultMaxDepth;
  Goal goal = Goal::Accuracy;
};

struct ComparisonResult {
  // Two records (Training, Testing) per rule, in Table 3 row order:
  // trees by depth, then the reduced regressions, then the full regression.
  std::vector<PerformanceRecord> records;
  std::vector<CueStats> ranking;  // on the training split
  std::vector<FFTree> trees;      // depth 1..depth_max
  LogisticModel full_model;
  std::vector<LogisticModel> reduced_models;  // parallel to reduced_specs
  std::vector<ReducedSpec> reduced_specs;
  std::vector<std::string> warnings;
};

/// Fits everything on the training part of the plan and evaluates both
/// splits. The default reduced specs follow the paper's two choices:
/// "log-odds" = predictors significant at p < 0.05 in the full fit,
/// "cue validity" = the cues of the two-cue tree.
ComparisonResult compare(const Dataset& dataset, const SplitPlan& plan,
                         const CompareOptions& options = {});

ComparisonResult compare(const Dataset& dataset, const SplitPlan& plan,
                         const CompareOptions& options,
                         const std::vector<ReducedSpec>& reduced_specs);

struct RefereeAgreement {
  std::string referee_id;
  int n_judgments = 0;
  double proportion_correct_tree = 0.0;
  double proportion_correct_regression = 0.0;
};

struct AgreementProfile {
  std::vector<RefereeAgreement> training;  // ordered by descending load
  std::vector<RefereeAgreement> testing;
};

/// Per referee within each split, the share of judgments the tree and the
/// regression each reproduce.
AgreementProfile per_referee_agreement(const Dataset& dataset, const FFTree& tree,
                                       const LogisticModel& regression,
                                       const SplitPlan& plan);

}  // namespace frugal
