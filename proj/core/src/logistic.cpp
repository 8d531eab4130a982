#include "frugaljudge/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <Eigen/Dense>

#include "json_io.hpp"

namespace frugal {

namespace {

constexpr double kLogLikTol = 1e-10;
constexpr double kGradTol = 1e-8;
constexpr int kMaxIter = 100;
constexpr double kCoefBlowup = 1e4;
constexpr double kPi = 3.14159265358979323846;

Eigen::MatrixXd with_intercept(const DesignMatrix& d) {
  Eigen::MatrixXd X(d.n, d.p + 1);
  for (std::size_t i = 0; i < d.n; ++i) {
    for (std::size_t j = 0; j < d.p; ++j) X(i, j) = d.at(i, j);
    X(i, d.p) = 1.0;
  }
  return X;
}

Eigen::VectorXd label_vector(const DesignMatrix& d) {
  Eigen::VectorXd y(d.n);
  for (std::size_t i = 0; i < d.n; ++i) y(i) = d.labels[i];
  return y;
}

double sigmoid(double eta) {
  if (eta >= 0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

// log(1 + exp(eta)) without overflow.
double log1pexp(double eta) {
  if (eta > 0) return eta + std::log1p(std::exp(-eta));
  return std::log1p(std::exp(eta));
}

double loglik(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
              const Eigen::VectorXd& beta) {
  const Eigen::VectorXd eta = X * beta;
  double ll = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    ll += y(i) * eta(i) - log1pexp(eta(i));
  }
  return ll;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

std::string column_label(const DesignMatrix& d, std::size_t j) {
  return j < d.p ? d.column_names[j] : std::string("Constant");
}

}  // namespace

DesignMatrix build_design(const Dataset& dataset) {
  DesignMatrix d;
  d.n = dataset.size();
  d.p = dataset.cue_count();
  d.column_names.reserve(d.p);
  for (const CueSpec& cue : dataset.schema()) d.column_names.push_back(cue.id);
  d.values.resize(d.n * d.p);
  d.labels.resize(d.n);
  for (std::size_t i = 0; i < d.n; ++i) {
    const RatingForm& r = dataset.records()[i];
    for (std::size_t j = 0; j < d.p; ++j) d.values[i * d.p + j] = r.scores[j];
    d.labels[i] = dataset.labels()[i] == JudgmentClass::Outstanding ? 1 : 0;
  }
  return d;
}

DesignMatrix design_subset(const DesignMatrix& design,
                           const std::vector<std::string>& cue_ids) {
  if (cue_ids.empty()) throw std::invalid_argument("design_subset with no columns");
  std::vector<std::size_t> cols;
  cols.reserve(cue_ids.size());
  for (const std::string& id : cue_ids) {
    auto it = std::find(design.column_names.begin(), design.column_names.end(), id);
    if (it == design.column_names.end()) {
      throw std::invalid_argument("unknown design column: " + id);
    }
    cols.push_back(static_cast<std::size_t>(it - design.column_names.begin()));
  }
  DesignMatrix out;
  out.n = design.n;
  out.p = cols.size();
  out.column_names = cue_ids;
  out.labels = design.labels;
  out.values.resize(out.n * out.p);
  for (std::size_t i = 0; i < out.n; ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      out.values[i * out.p + j] = design.at(i, cols[j]);
    }
  }
  return out;
}

double log_likelihood(const DesignMatrix& design, const std::vector<double>& beta) {
  if (beta.size() != design.p + 1) throw std::invalid_argument("beta size mismatch");
  Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(beta.data(), beta.size());
  return loglik(with_intercept(design), label_vector(design), b);
}

std::vector<double> log_likelihood_gradient(const DesignMatrix& design,
                                            const std::vector<double>& beta) {
  if (beta.size() != design.p + 1) throw std::invalid_argument("beta size mismatch");
  const Eigen::MatrixXd X = with_intercept(design);
  const Eigen::VectorXd y = label_vector(design);
  Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(beta.data(), beta.size());
  const Eigen::VectorXd eta = X * b;
  Eigen::VectorXd mu(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) mu(i) = sigmoid(eta(i));
  const Eigen::VectorXd g = X.transpose() * (y - mu);
  return std::vector<double>(g.data(), g.data() + g.size());
}

LogisticModel fit_logistic(const DesignMatrix& design) {
  if (design.n == 0) throw std::invalid_argument("fit_logistic on empty design");
  const long positives = std::count(design.labels.begin(), design.labels.end(), 1);
  if (positives == 0 || positives == static_cast<long>(design.n)) {
    throw ValidationError("logistic fit requires both judgment classes",
                          {"labels contain a single class"});
  }

  const Eigen::MatrixXd X = with_intercept(design);
  const Eigen::VectorXd y = label_vector(design);
  const std::size_t k = design.p + 1;

  // Structural collinearity is an input defect: report which columns depend
  // on the others instead of fitting garbage.
  {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    if (static_cast<std::size_t>(qr.rank()) < k) {
      const auto perm = qr.colsPermutation().indices();
      std::vector<std::string> dependent;
      for (std::size_t j = static_cast<std::size_t>(qr.rank()); j < k; ++j) {
        dependent.push_back(column_label(design, static_cast<std::size_t>(perm(j))));
      }
      std::string cols;
      for (const auto& c : dependent) cols += (cols.empty() ? "" : ", ") + c;
      throw ValidationError("singular information matrix", {"dependent columns: " + cols});
    }
  }

  LogisticModel model;
  model.column_names = design.column_names;

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(k);
  double ll = loglik(X, y, beta);
  model.loglik_path.push_back(ll);

  for (int iter = 1; iter <= kMaxIter; ++iter) {
    const Eigen::VectorXd eta = X * beta;
    Eigen::VectorXd mu(eta.size()), w(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
      mu(i) = sigmoid(eta(i));
      w(i) = mu(i) * (1.0 - mu(i));
    }
    const Eigen::VectorXd g = X.transpose() * (y - mu);
    const Eigen::MatrixXd H = X.transpose() * w.asDiagonal() * X;
    const Eigen::VectorXd delta = H.ldlt().solve(g);
    if (!delta.allFinite()) {
      model.separated = true;
      break;
    }

    // Step-halving keeps the log-likelihood non-decreasing.
    double step = 1.0;
    double ll_new = ll;
    Eigen::VectorXd beta_new = beta;
    bool accepted = false;
    while (step >= 1e-10) {
      beta_new = beta + step * delta;
      ll_new = loglik(X, y, beta_new);
      if (ll_new >= ll - 1e-12) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    model.iterations = iter;
    if (!accepted) break;

    const double dll = ll_new - ll;
    beta = beta_new;
    ll = ll_new;
    model.loglik_path.push_back(ll);

    if (beta.cwiseAbs().maxCoeff() > kCoefBlowup) {
      model.separated = true;
      break;
    }
    const Eigen::VectorXd eta2 = X * beta;
    Eigen::VectorXd mu2(eta2.size());
    for (Eigen::Index i = 0; i < eta2.size(); ++i) mu2(i) = sigmoid(eta2(i));
    const double grad_max = (X.transpose() * (y - mu2)).cwiseAbs().maxCoeff();
    if (std::abs(dll) < kLogLikTol && grad_max < kGradTol) break;
  }

  model.coefficients.assign(beta.data(), beta.data() + beta.size());
  const Eigen::VectorXd eta = X * beta;
  model.linear_pred.assign(eta.data(), eta.data() + eta.size());
  model.fitted_probs.resize(design.n);
  for (std::size_t i = 0; i < design.n; ++i) model.fitted_probs[i] = sigmoid(eta(i));

  if (!model.separated) {
    // A finite optimum still counts as separated when the fit reproduces
    // every label with saturated probabilities: the likelihood has no
    // interior maximum and Wald inference is meaningless.
    bool perfect = true;
    double min_abs_eta = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < design.n; ++i) {
      if ((eta(i) >= 0.0) != (design.labels[i] == 1)) perfect = false;
      min_abs_eta = std::min(min_abs_eta, std::abs(eta(i)));
    }
    if (perfect && min_abs_eta > 12.0) model.separated = true;
  }
  if (model.separated) {
    model.warnings.push_back(
        "perfect separation detected; coefficient inference suppressed");
  }

  // Diagnostics.
  FitDiagnostics& diag = model.diagnostics;
  diag.log_likelihood = loglik(X, y, beta);
  const double phat = static_cast<double>(positives) / static_cast<double>(design.n);
  diag.null_log_likelihood =
      positives * std::log(phat) + (design.n - positives) * std::log(1.0 - phat);
  diag.aic = 2.0 * static_cast<double>(k) - 2.0 * diag.log_likelihood;
  diag.lr_chi_square = std::max(0.0, 2.0 * (diag.log_likelihood - diag.null_log_likelihood));
  diag.lr_df = static_cast<int>(design.p);

  if (!model.separated) inference(model, design);
  if (design.p >= 2) {
    diag.vif = vif(design);
    for (std::size_t j = 0; j < diag.vif.size(); ++j) {
      if (std::isinf(diag.vif[j])) {
        model.warnings.push_back("perfect collinearity: VIF infinite for " +
                                 design.column_names[j]);
      }
    }
  }
  const PseudoR2 r2 = pseudo_r2(model);
  diag.mcfadden = r2.mcfadden;
  diag.mckelvey_zavoina = r2.mckelvey_zavoina;
  diag.veall_zimmermann = r2.veall_zimmermann;

  std::vector<JudgmentClass> classes(design.n);
  for (std::size_t i = 0; i < design.n; ++i) {
    classes[i] = design.labels[i] == 1 ? JudgmentClass::Outstanding
                                       : JudgmentClass::NotOutstanding;
  }
  model.cutoff = optimal_cutoff(model.fitted_probs, classes);
  return model;
}

void inference(LogisticModel& model, const DesignMatrix& design) {
  if (model.separated) return;
  const Eigen::MatrixXd X = with_intercept(design);
  const std::size_t k = design.p + 1;
  Eigen::VectorXd beta =
      Eigen::Map<const Eigen::VectorXd>(model.coefficients.data(), model.coefficients.size());
  const Eigen::VectorXd eta = X * beta;
  Eigen::VectorXd w(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    const double mu = sigmoid(eta(i));
    w(i) = mu * (1.0 - mu);
  }
  const Eigen::MatrixXd H = X.transpose() * w.asDiagonal() * X;
  const Eigen::MatrixXd cov = H.ldlt().solve(Eigen::MatrixXd::Identity(k, k));

  FitDiagnostics& diag = model.diagnostics;
  diag.se.resize(k);
  diag.ci_lower.resize(k);
  diag.ci_upper.resize(k);
  diag.p_values.resize(k);
  for (std::size_t j = 0; j < k; ++j) {
    const double var = cov(j, j);
    const double se = var > 0 ? std::sqrt(var) : std::numeric_limits<double>::quiet_NaN();
    diag.se[j] = se;
    diag.ci_lower[j] = model.coefficients[j] - 1.96 * se;
    diag.ci_upper[j] = model.coefficients[j] + 1.96 * se;
    const double z = model.coefficients[j] / se;
    diag.p_values[j] = 2.0 * (1.0 - normal_cdf(std::abs(z)));
  }
}

std::vector<double> vif(const DesignMatrix& design) {
  if (design.p < 2) throw std::invalid_argument("vif needs at least 2 predictors");
  std::vector<double> out(design.p);
  Eigen::MatrixXd X(design.n, design.p);
  for (std::size_t i = 0; i < design.n; ++i) {
    for (std::size_t j = 0; j < design.p; ++j) X(i, j) = design.at(i, j);
  }
  for (std::size_t j = 0; j < design.p; ++j) {
    Eigen::VectorXd target = X.col(j);
    Eigen::MatrixXd others(design.n, design.p);  // other predictors + intercept
    std::size_t c = 0;
    for (std::size_t m = 0; m < design.p; ++m) {
      if (m != j) others.col(c++) = X.col(m);
    }
    others.col(c) = Eigen::VectorXd::Ones(design.n);

    const double mean = target.mean();
    const double sst = (target.array() - mean).square().sum();
    if (sst <= 0.0) {
      out[j] = std::numeric_limits<double>::infinity();
      continue;
    }
    const Eigen::VectorXd coef = others.colPivHouseholderQr().solve(target);
    const double sse = (target - others * coef).squaredNorm();
    const double r2 = 1.0 - sse / sst;
    if (r2 >= 1.0 - 1e-12) {
      out[j] = std::numeric_limits<double>::infinity();
    } else {
      out[j] = 1.0 / (1.0 - std::max(0.0, r2));
    }
  }
  return out;
}

PseudoR2 pseudo_r2(const LogisticModel& model) {
  PseudoR2 r2;
  const double lnl = model.diagnostics.log_likelihood;
  const double lnl0 = model.diagnostics.null_log_likelihood;
  const std::size_t n = model.linear_pred.size();
  if (n == 0 || lnl0 == 0.0) throw std::invalid_argument("pseudo_r2 without a fitted model");

  r2.mcfadden = std::clamp(1.0 - lnl / lnl0, 0.0, 1.0);

  double mean = 0.0;
  for (double e : model.linear_pred) mean += e;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double e : model.linear_pred) ss += (e - mean) * (e - mean);
  const double var = n > 1 ? ss / static_cast<double>(n - 1) : 0.0;
  r2.mckelvey_zavoina = var / (var + kPi * kPi / 3.0);

  const double lr = std::max(0.0, 2.0 * (lnl - lnl0));
  const double r_an = lr / (lr + static_cast<double>(n));
  const double r_an_max = -2.0 * lnl0 / (static_cast<double>(n) - 2.0 * lnl0);
  r2.veall_zimmermann = r_an_max > 0 ? std::clamp(r_an / r_an_max, 0.0, 1.0) : 0.0;
  return r2;
}

double optimal_cutoff(const std::vector<double>& predicted_probs,
                      const std::vector<JudgmentClass>& labels) {
  if (predicted_probs.empty() || predicted_probs.size() != labels.size()) {
    throw std::invalid_argument("optimal_cutoff needs equal-length non-empty inputs");
  }
  const long positives =
      std::count(labels.begin(), labels.end(), JudgmentClass::Outstanding);
  if (positives == 0 || positives == static_cast<long>(labels.size())) {
    throw std::invalid_argument("optimal_cutoff needs both classes present");
  }

  std::set<double> unique(predicted_probs.begin(), predicted_probs.end());
  std::vector<double> candidates(unique.begin(), unique.end());
  // One candidate above the maximum keeps the all-NotOutstanding rule
  // reachable (every prob < cutoff).
  const double top = candidates.back();
  if (top < 1.0) candidates.push_back((top + 1.0) / 2.0);

  double best_cutoff = candidates.front();
  long best_errors = std::numeric_limits<long>::max();
  for (double c : candidates) {
    long errors = 0;
    for (std::size_t i = 0; i < predicted_probs.size(); ++i) {
      const bool pred_pos = predicted_probs[i] >= c;
      const bool actual_pos = labels[i] == JudgmentClass::Outstanding;
      if (pred_pos != actual_pos) ++errors;
    }
    if (errors < best_errors) {  // ties keep the lowest cutoff
      best_errors = errors;
      best_cutoff = c;
    }
  }
  return best_cutoff;
}

double predict_prob(const LogisticModel& model, const std::vector<double>& predictors) {
  if (predictors.size() + 1 != model.coefficients.size()) {
    throw std::invalid_argument("predictor count mismatch");
  }
  double eta = model.coefficients.back();  // intercept
  for (std::size_t j = 0; j < predictors.size(); ++j) {
    eta += model.coefficients[j] * predictors[j];
  }
  return sigmoid(eta);
}

JudgmentClass classify(const LogisticModel& model, const std::vector<double>& predictors) {
  return predict_prob(model, predictors) >= model.cutoff ? JudgmentClass::Outstanding
                                                         : JudgmentClass::NotOutstanding;
}

LogisticModel reduced_model(const DesignMatrix& design,
                            const std::vector<std::string>& selected_cues) {
  return fit_logistic(design_subset(design, selected_cues));
}

nlohmann::json model_to_json_object(const LogisticModel& model) {
  const FitDiagnostics& d = model.diagnostics;
  nlohmann::json j{
      {"columns", model.column_names},
      {"coefficients", model.coefficients},
      {"cutoff", model.cutoff},
      {"separated", model.separated},
      {"iterations", model.iterations},
      {"diagnostics",
       {{"log_likelihood", d.log_likelihood},
        {"null_log_likelihood", d.null_log_likelihood},
        {"aic", d.aic},
        {"lr_chi_square", d.lr_chi_square},
        {"lr_df", d.lr_df},
        {"se", d.se},
        {"ci_lower", d.ci_lower},
        {"ci_upper", d.ci_upper},
        {"p_values", d.p_values},
        {"vif", d.vif},
        {"pseudo_r2",
         {{"mcfadden", d.mcfadden},
          {"mckelvey_zavoina", d.mckelvey_zavoina},
          {"veall_zimmermann", d.veall_zimmermann}}}}},
      {"warnings", model.warnings}};
  return j;
}

LogisticModel model_from_json_object(const nlohmann::json& j) {
  LogisticModel model;
  try {
    model.column_names = j.at("columns").get<std::vector<std::string>>();
    model.coefficients = j.at("coefficients").get<std::vector<double>>();
    model.cutoff = j.at("cutoff").get<double>();
    model.separated = j.value("separated", false);
    model.iterations = j.value("iterations", 0);
    if (j.contains("diagnostics")) {
      const auto& jd = j.at("diagnostics");
      FitDiagnostics& d = model.diagnostics;
      d.log_likelihood = jd.value("log_likelihood", 0.0);
      d.null_log_likelihood = jd.value("null_log_likelihood", 0.0);
      d.aic = jd.value("aic", 0.0);
      d.lr_chi_square = jd.value("lr_chi_square", 0.0);
      d.lr_df = jd.value("lr_df", 0);
      d.se = jd.value("se", std::vector<double>{});
      d.ci_lower = jd.value("ci_lower", std::vector<double>{});
      d.ci_upper = jd.value("ci_upper", std::vector<double>{});
      d.p_values = jd.value("p_values", std::vector<double>{});
      d.vif = jd.value("vif", std::vector<double>{});
      if (jd.contains("pseudo_r2")) {
        d.mcfadden = jd.at("pseudo_r2").value("mcfadden", 0.0);
        d.mckelvey_zavoina = jd.at("pseudo_r2").value("mckelvey_zavoina", 0.0);
        d.veall_zimmermann = jd.at("pseudo_r2").value("veall_zimmermann", 0.0);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("bad model JSON", {e.what()});
  }
  if (model.coefficients.size() != model.column_names.size() + 1) {
    throw ValidationError("bad model JSON",
                          {"coefficient count must be column count + 1 (intercept)"});
  }
  return model;
}

std::string model_to_json(const LogisticModel& model) {
  return model_to_json_object(model).dump(2);
}

LogisticModel model_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ValidationError("bad model JSON", {"not valid JSON"});
  return model_from_json_object(j);
}

}  // namespace frugal
