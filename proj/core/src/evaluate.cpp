#include "frugaljudge/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "frugaljudge/rng.hpp"

namespace frugal {

namespace {

double nan_value() { return std::numeric_limits<double>::quiet_NaN(); }

std::vector<double> row_predictors(const DesignMatrix& d, std::size_t row) {
  std::vector<double> x(d.p);
  for (std::size_t j = 0; j < d.p; ++j) x[j] = d.at(row, j);
  return x;
}

PerformanceRecord make_record(const std::string& label, Split split,
                              const ConfusionMatrix& cm, double frug_abs, double frug_rel,
                              double prev) {
  PerformanceRecord rec;
  rec.rule_label = label;
  rec.split = split;
  rec.cm = cm;
  rec.acc = cm.accuracy();
  rec.sens = cm.sensitivity();
  rec.spec = cm.specificity();
  rec.frug_abs = frug_abs;
  rec.frug_rel = frug_rel;
  rec.prevalence = prev;
  return rec;
}

void collect_nan_warnings(const PerformanceRecord& rec, std::vector<std::string>& warnings) {
  if (std::isnan(rec.sens)) {
    warnings.push_back(rec.rule_label + " (" + split_name(rec.split) +
                       "): sensitivity undefined, no positive cases");
  }
  if (std::isnan(rec.spec)) {
    warnings.push_back(rec.rule_label + " (" + split_name(rec.split) +
                       "): specificity undefined, no negative cases");
  }
}

}  // namespace

double ConfusionMatrix::accuracy() const {
  const long n = total();
  return n > 0 ? static_cast<double>(tp + tn) / n : nan_value();
}

double ConfusionMatrix::sensitivity() const {
  return tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : nan_value();
}

double ConfusionMatrix::specificity() const {
  return tn + fp > 0 ? static_cast<double>(tn) / (tn + fp) : nan_value();
}

ConfusionMatrix confusion(const std::vector<JudgmentClass>& predictions,
                          const std::vector<JudgmentClass>& labels) {
  if (predictions.size() != labels.size()) {
    throw std::invalid_argument("confusion: predictions and labels differ in length");
  }
  if (predictions.empty()) throw std::invalid_argument("confusion: empty input");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const bool pred_pos = predictions[i] == JudgmentClass::Outstanding;
    const bool actual_pos = labels[i] == JudgmentClass::Outstanding;
    if (pred_pos && actual_pos) ++cm.tp;
    else if (pred_pos && !actual_pos) ++cm.fp;
    else if (!pred_pos && actual_pos) ++cm.fn;
    else ++cm.tn;
  }
  return cm;
}

const char* split_name(Split s) { return s == Split::Training ? "training" : "testing"; }

std::pair<double, double> frugality(const std::vector<ClassificationTrace>& traces,
                                    int available_cues) {
  if (traces.empty()) throw std::invalid_argument("frugality of no traces");
  if (available_cues < 1) throw std::invalid_argument("available_cues must be >= 1");
  long total = 0;
  for (const ClassificationTrace& t : traces) total += t.cues_used;
  const double frug_abs = static_cast<double>(total) / static_cast<double>(traces.size());
  const double frug_rel = 1.0 - frug_abs / static_cast<double>(available_cues);
  return {frug_abs, frug_rel};
}

std::pair<std::vector<ClassificationTrace>, PerformanceRecord> classify_dataset(
    const FFTree& tree, const Dataset& dataset, const std::string& rule_label,
    Split split) {
  if (dataset.size() == 0) throw std::invalid_argument("classify_dataset on empty dataset");
  std::vector<ClassificationTrace> traces;
  traces.reserve(dataset.size());
  std::vector<JudgmentClass> predictions;
  predictions.reserve(dataset.size());
  for (const RatingForm& r : dataset.records()) {
    ClassificationTrace t = classify_record(tree, dataset.schema(), r);
    predictions.push_back(t.predicted);
    traces.push_back(t);
  }
  const ConfusionMatrix cm = confusion(predictions, dataset.labels());
  const auto [frug_abs, frug_rel] =
      frugality(traces, static_cast<int>(dataset.cue_count()));
  PerformanceRecord rec =
      make_record(rule_label, split, cm, frug_abs, frug_rel, prevalence(dataset));
  return {std::move(traces), std::move(rec)};
}

SplitPlan role_split(const Dataset& dataset) {
  SplitPlan plan;
  plan.design = SplitDesign::RoleBased;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (dataset.records()[i].referee_role == Role::First) {
      plan.train_indices.push_back(i);
    } else {
      plan.test_indices.push_back(i);
    }
  }
  if (plan.train_indices.empty() || plan.test_indices.empty()) {
    throw ValidationError("role-based split needs both referee roles",
                          {"first-role records: " + std::to_string(plan.train_indices.size()),
                           "second-role records: " + std::to_string(plan.test_indices.size())});
  }
  return plan;
}

SplitPlan stratified_split(const Dataset& dataset, uint64_t seed) {
  std::vector<std::size_t> first, second;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    (dataset.records()[i].referee_role == Role::First ? first : second).push_back(i);
  }
  if (first.empty() || second.empty()) {
    throw ValidationError("stratified split needs both referee roles",
                          {"first-role records: " + std::to_string(first.size()),
                           "second-role records: " + std::to_string(second.size())});
  }
  SplitPlan plan;
  plan.design = SplitDesign::StratifiedRandom;
  plan.seed = seed;
  Rng rng(substream_seed(seed, "stratified-split"));
  for (std::vector<std::size_t>* stratum : {&first, &second}) {
    rng.shuffle(*stratum);
    const std::size_t to_train = (stratum->size() + 1) / 2;  // round half up
    for (std::size_t i = 0; i < stratum->size(); ++i) {
      (i < to_train ? plan.train_indices : plan.test_indices).push_back((*stratum)[i]);
    }
  }
  std::sort(plan.train_indices.begin(), plan.train_indices.end());
  std::sort(plan.test_indices.begin(), plan.test_indices.end());
  return plan;
}

namespace {

PerformanceRecord evaluate_regression(const LogisticModel& model, const DesignMatrix& design,
                                      const Dataset& data, const std::string& label,
                                      Split split, std::size_t available_cues) {
  std::vector<JudgmentClass> predictions;
  predictions.reserve(design.n);
  for (std::size_t i = 0; i < design.n; ++i) {
    predictions.push_back(classify(model, row_predictors(design, i)));
  }
  const ConfusionMatrix cm = confusion(predictions, data.labels());
  const double frug_abs = static_cast<double>(model.column_names.size());
  const double frug_rel = 1.0 - frug_abs / static_cast<double>(available_cues);
  return make_record(label, split, cm, frug_abs, frug_rel, prevalence(data));
}

std::string cue_count_label(std::size_t k, const std::string& suffix) {
  return std::to_string(k) + (k == 1 ? " cue" : " cues") + suffix;
}

}  // namespace

ComparisonResult compare(const Dataset& dataset, const SplitPlan& plan,
                         const CompareOptions& options) {
  return compare(dataset, plan, options, {});
}

ComparisonResult compare(const Dataset& dataset, const SplitPlan& plan,
                         const CompareOptions& options,
                         const std::vector<ReducedSpec>& reduced_specs) {
  if (plan.train_indices.empty() || plan.test_indices.empty()) {
    throw ValidationError("split plan has an empty side",
                          {"training: " + std::to_string(plan.train_indices.size()),
                           "testing: " + std::to_string(plan.test_indices.size())});
  }
  const Dataset train = dataset.subset(plan.train_indices);
  const Dataset test = dataset.subset(plan.test_indices);
  const std::size_t available = dataset.cue_count();

  ComparisonResult result;
  result.ranking = rank_cues(train, options.goal);
  result.trees = build_fan(train, options.depth_max, options.goal);

  const DesignMatrix design_train = build_design(train);
  const DesignMatrix design_test = build_design(test);
  result.full_model = fit_logistic(design_train);
  for (const std::string& w : result.full_model.warnings) {
    result.warnings.push_back("full regression: " + w);
  }

  // Reduced specs: explicit ones win; otherwise the paper's two choices.
  std::vector<ReducedSpec> specs = reduced_specs;
  if (specs.empty()) {
    ReducedSpec log_odds;
    const auto& pv = result.full_model.diagnostics.p_values;
    if (!pv.empty()) {
      for (std::size_t j = 0; j < design_train.p; ++j) {
        if (pv[j] < 0.05) log_odds.cue_ids.push_back(design_train.column_names[j]);
      }
      if (log_odds.cue_ids.empty()) {
        // No predictor clears p < 0.05: fall back to the smallest p-value.
        std::size_t best = 0;
        for (std::size_t j = 1; j < design_train.p; ++j) {
          if (pv[j] < pv[best]) best = j;
        }
        log_odds.cue_ids.push_back(design_train.column_names[best]);
        result.warnings.push_back(
            "log-odds model: no predictor significant at p < 0.05; using the smallest p-value");
      }
    } else {
      // Inference suppressed (separation): no p-values to select on.
      for (std::size_t j = 0; j < std::min<std::size_t>(2, result.ranking.size()); ++j) {
        log_odds.cue_ids.push_back(result.ranking[j].cue_id);
      }
      result.warnings.push_back(
          "log-odds model: inference suppressed; falling back to the top validity cues");
    }
    log_odds.label = cue_count_label(log_odds.cue_ids.size(), " (log-odds)");
    specs.push_back(std::move(log_odds));

    ReducedSpec cue_validity;
    for (std::size_t j = 0; j < std::min<std::size_t>(2, result.ranking.size()); ++j) {
      cue_validity.cue_ids.push_back(result.ranking[j].cue_id);
    }
    cue_validity.label = cue_count_label(cue_validity.cue_ids.size(), " (cue validity)");
    specs.push_back(std::move(cue_validity));
  }
  result.reduced_specs = specs;

  for (const ReducedSpec& spec : specs) {
    LogisticModel m = reduced_model(design_train, spec.cue_ids);
    for (const std::string& w : m.warnings) {
      result.warnings.push_back(spec.label + ": " + w);
    }
    result.reduced_models.push_back(std::move(m));
  }

  for (std::size_t d = 0; d < result.trees.size(); ++d) {
    const std::string label = cue_count_label(d + 1, "");
    auto [tr_traces, tr_rec] =
        classify_dataset(result.trees[d], train, label, Split::Training);
    auto [te_traces, te_rec] = classify_dataset(result.trees[d], test, label, Split::Testing);
    result.records.push_back(std::move(tr_rec));
    result.records.push_back(std::move(te_rec));
  }
  for (std::size_t s = 0; s < specs.size(); ++s) {
    const DesignMatrix sub_train = design_subset(design_train, specs[s].cue_ids);
    const DesignMatrix sub_test = design_subset(design_test, specs[s].cue_ids);
    result.records.push_back(evaluate_regression(result.reduced_models[s], sub_train, train,
                                                 specs[s].label, Split::Training, available));
    result.records.push_back(evaluate_regression(result.reduced_models[s], sub_test, test,
                                                 specs[s].label, Split::Testing, available));
  }
  result.records.push_back(evaluate_regression(result.full_model, design_train, train,
                                               "All cues", Split::Training, available));
  result.records.push_back(evaluate_regression(result.full_model, design_test, test,
                                               "All cues", Split::Testing, available));

  for (const PerformanceRecord& rec : result.records) {
    collect_nan_warnings(rec, result.warnings);
  }
  return result;
}

namespace {

std::vector<RefereeAgreement> agreement_for_part(const Dataset& part, const FFTree& tree,
                                                 const LogisticModel& regression) {
  const DesignMatrix design = build_design(part);
  const DesignMatrix sub = design_subset(design, regression.column_names);
  struct Tally {
    int n = 0;
    int tree_ok = 0;
    int reg_ok = 0;
  };
  std::map<std::string, Tally> by_referee;
  for (std::size_t i = 0; i < part.size(); ++i) {
    const RatingForm& r = part.records()[i];
    Tally& t = by_referee[r.referee_id];
    ++t.n;
    const JudgmentClass label = part.labels()[i];
    if (classify_record(tree, part.schema(), r).predicted == label) ++t.tree_ok;
    if (classify(regression, row_predictors(sub, i)) == label) ++t.reg_ok;
  }
  std::vector<RefereeAgreement> out;
  out.reserve(by_referee.size());
  for (const auto& [id, t] : by_referee) {
    out.push_back({id, t.n, static_cast<double>(t.tree_ok) / t.n,
                   static_cast<double>(t.reg_ok) / t.n});
  }
  // Figures 3-4 order referees by review load.
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.n_judgments != b.n_judgments) return a.n_judgments > b.n_judgments;
    return a.referee_id < b.referee_id;
  });
  return out;
}

}  // namespace

AgreementProfile per_referee_agreement(const Dataset& dataset, const FFTree& tree,
                                       const LogisticModel& regression,
                                       const SplitPlan& plan) {
  AgreementProfile profile;
  profile.training = agreement_for_part(dataset.subset(plan.train_indices), tree, regression);
  profile.testing = agreement_for_part(dataset.subset(plan.test_indices), tree, regression);
  return profile;
}

}  // namespace frugal
