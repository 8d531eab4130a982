#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "frugaljudge/dataset.hpp"

namespace frugal {

/// Predictor matrix for the regression engines. Rows follow the dataset's
/// record order; columns are raw integer criterion scores. The intercept is
/// implicit and always fitted last.
struct DesignMatrix {
  std::vector<std::string> column_names;  // one per predictor
  std::size_t n = 0;                      // rows
  std::size_t p = 0;                      // predictors, excluding intercept
  std::vector<double> values;             // row-major, n x p
  std::vector<int> labels;                // 1 = Outstanding

  double at(std::size_t row, std::size_t col) const { return values[row * p + col]; }
};

DesignMatrix build_design(const Dataset& dataset);

/// Column subset in the original column order. Unknown names throw.
DesignMatrix design_subset(const DesignMatrix& design,
                           const std::vector<std::string>& cue_ids);

struct FitDiagnostics {
  double log_likelihood = 0.0;
  double null_log_likelihood = 0.0;
  double aic = 0.0;
  double lr_chi_square = 0.0;
  int lr_df = 0;
  // Per coefficient, ordered [predictors..., intercept]. Empty when the fit
  // is separated (inference suppressed).
  std::vector<double> se, ci_lower, ci_upper, p_values;
  std::vector<double> vif;  // per predictor
  double mcfadden = 0.0;
  double mckelvey_zavoina = 0.0;
  double veall_zimmermann = 0.0;
};

struct LogisticModel {
  std::vector<std::string> column_names;
  std::vector<double> coefficients;  // [predictors..., intercept]
  double cutoff = 0.5;
  bool separated = false;
  int iterations = 0;
  std::vector<double> fitted_probs;   // training-set fitted probabilities
  std::vector<double> linear_pred;    // training-set X*beta
  std::vector<double> loglik_path;    // per accepted IRLS iteration
  FitDiagnostics diagnostics;
  std::vector<std::string> warnings;
};

double log_likelihood(const DesignMatrix& design, const std::vector<double>& beta);

/// Analytic score vector X^T (y - mu), ordered like the coefficients.
std::vector<double> log_likelihood_gradient(const DesignMatrix& design,
                                            const std::vector<double>& beta);

/// Maximum-likelihood fit via iteratively reweighted least squares with
/// step-halving, so the log-likelihood never decreases. Converges when the
/// log-likelihood change drops below 1e-10 and the gradient max-norm below
/// 1e-8 (at most 100 iterations). Perfect separation is flagged and leaves
/// se/ci/p empty; a singular information matrix throws ValidationError
/// naming the dependent columns. Diagnostics, VIFs, pseudo-R2 and the
/// misclassification-minimizing cutoff are all populated.
LogisticModel fit_logistic(const DesignMatrix& design);

/// Wald inference at the optimum: SE from the inverse observed information,
/// 95% CI = estimate +/- 1.96 SE, two-sided normal p-values.
void inference(LogisticModel& model, const DesignMatrix& design);

/// VIF_j = 1/(1 - R2_j), R2_j from the OLS regression of predictor j on all
/// other predictors plus an intercept. Perfect collinearity reports +inf.
std::vector<double> vif(const DesignMatrix& design);

struct PseudoR2 {
  double mcfadden = 0.0;
  double mckelvey_zavoina = 0.0;
  double veall_zimmermann = 0.0;
};

/// McFadden = 1 - lnL/lnL0; McKelvey-Zavoina = Var(eta)/(Var(eta) + pi^2/3)
/// with the n-1 sample variance; Veall-Zimmermann = R_AN / R_AN_max.
PseudoR2 pseudo_r2(const LogisticModel& model);

/// Scans the sorted unique predicted probabilities (plus one candidate
/// above the maximum, so the all-negative rule stays reachable) and returns
/// the cutoff minimizing misclassifications; ties take the lowest cutoff.
double optimal_cutoff(const std::vector<double>& predicted_probs,
                      const std::vector<JudgmentClass>& labels);

double predict_prob(const LogisticModel& model, const std::vector<double>& predictors);

/// Outstanding iff predicted probability >= cutoff.
JudgmentClass classify(const LogisticModel& model, const std::vector<double>& predictors);

/// Same fitting contract on a column subset.
LogisticModel reduced_model(const DesignMatrix& design,
                            const std::vector<std::string>& selected_cues);

std::string model_to_json(const LogisticModel& model);
LogisticModel model_from_json(const std::string& text);

}  // namespace frugal
