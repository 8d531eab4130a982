#include "frugaljudge/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include <nlohmann/json.hpp>

#include "frugaljudge/rng.hpp"

namespace frugal {

const char* style_name(StyleKind s) {
  return s == StyleKind::Uniform ? "uniform" : "casebycase";
}

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Phi^-1 by bisection; deterministic and precise enough for thresholds.
double normal_quantile(double prob) {
  if (prob <= 0.0) return -40.0;
  if (prob >= 1.0) return 40.0;
  double lo = -12.0, hi = 12.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (normal_cdf(mid) < prob ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Mean and sd of round(mu + sigma Z) clamped to [a, b], Z ~ N(0,1).
void discretized_moments(double mu, double sigma, int a, int b, double& mean, double& sd) {
  mean = 0.0;
  double m2 = 0.0;
  for (int k = a; k <= b; ++k) {
    double pk;
    if (k == a) {
      pk = normal_cdf((a + 0.5 - mu) / sigma);
    } else if (k == b) {
      pk = 1.0 - normal_cdf((b - 0.5 - mu) / sigma);
    } else {
      pk = normal_cdf((k + 0.5 - mu) / sigma) - normal_cdf((k - 0.5 - mu) / sigma);
    }
    mean += k * pk;
    m2 += static_cast<double>(k) * k * pk;
  }
  const double var = std::max(0.0, m2 - mean * mean);
  sd = std::sqrt(var);
}

/// Latent-normal parameters whose clamped-rounded discretization hits the
/// target mean and sd. 2-D Newton with a numeric Jacobian.
void calibrate_ordinal(double target_mean, double target_sd, int a, int b, double& mu,
                       double& sigma) {
  mu = target_mean;
  sigma = std::max(target_sd, 0.05);
  const double h = 1e-6;
  for (int iter = 0; iter < 200; ++iter) {
    double m, s;
    discretized_moments(mu, sigma, a, b, m, s);
    const double f1 = m - target_mean;
    const double f2 = s - target_sd;
    if (std::abs(f1) < 1e-10 && std::abs(f2) < 1e-10) break;
    double m_mu, s_mu, m_sg, s_sg;
    discretized_moments(mu + h, sigma, a, b, m_mu, s_mu);
    discretized_moments(mu, sigma + h, a, b, m_sg, s_sg);
    const double j11 = (m_mu - m) / h, j12 = (m_sg - m) / h;
    const double j21 = (s_mu - s) / h, j22 = (s_sg - s) / h;
    const double det = j11 * j22 - j12 * j21;
    if (std::abs(det) < 1e-14) break;
    double dmu = (f1 * j22 - f2 * j12) / det;
    double dsg = (f2 * j11 - f1 * j21) / det;
    // Damped update; sigma stays positive.
    const double max_step = 1.0;
    dmu = std::clamp(dmu, -max_step, max_step);
    dsg = std::clamp(dsg, -max_step, max_step);
    mu -= dmu;
    sigma = std::max(0.02, sigma - dsg);
  }
}

int discretize_ordinal(double mu, double sigma, int a, int b, double z) {
  const long v = std::lround(mu + sigma * z);
  return static_cast<int>(std::clamp<long>(v, a, b));
}

std::string format_id(const char* prefix, int number, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%0*d", prefix, width, number);
  return buf;
}

struct CueSampler {
  bool binary = false;
  double mu = 0.0, sigma = 1.0;  // ordinal
  double yes_threshold = 0.0;    // binary: z > threshold -> 1
  int lo = 1, hi = 5;
};

void validate_config(const SynthConfig& cfg, const std::vector<CueSpec>& schema) {
  std::vector<std::string> problems;
  if (cfg.n_proposals < 1) problems.push_back("n_proposals must be >= 1");
  if (cfg.referees.size < 2) problems.push_back("referee pool must hold at least 2 referees");
  if (cfg.latent_correlation < 0.0 || cfg.latent_correlation >= 1.0) {
    problems.push_back("latent_correlation must lie in [0,1)");
  }
  if (cfg.cue_marginals.size() != schema.size()) {
    problems.push_back("cue_marginals must have one entry per schema cue");
  }
  if (cfg.style.weights.size() != schema.size()) {
    problems.push_back("style.weights must have one entry per schema cue");
  }
  for (double w : cfg.style.weights) {
    if (w < 0.0 || !std::isfinite(w)) {
      problems.push_back("style weights must be non-negative and finite");
      break;
    }
  }
  if (cfg.style.noise_sd < 0.0) problems.push_back("noise_sd must be >= 0");
  if (cfg.style.weight_jitter_sd < 0.0) problems.push_back("weight_jitter_sd must be >= 0");

  auto check_ordinal = [&](const std::string& name, const MarginalTarget& t, int a, int b) {
    if (t.mean < a || t.mean > b) {
      problems.push_back(name + ": target mean " + std::to_string(t.mean) +
                         " outside scale " + std::to_string(a) + ".." + std::to_string(b));
      return;
    }
    if (t.sd < 0.0) {
      problems.push_back(name + ": negative target sd");
      return;
    }
    const double max_var = (t.mean - a) * (b - t.mean);
    if (t.sd * t.sd > max_var + 1e-9) {
      problems.push_back(name + ": sd " + std::to_string(t.sd) +
                         " infeasible for a variable bounded by the scale");
    }
  };
  if (cfg.cue_marginals.size() == schema.size()) {
    for (std::size_t j = 0; j < schema.size(); ++j) {
      const CueSpec& cue = schema[j];
      const MarginalTarget& t = cfg.cue_marginals[j];
      if (cue.scale == ScaleKind::Binary) {
        if (t.pct_yes < 0.0 || t.pct_yes > 1.0) {
          problems.push_back(cue.id + ": pct_yes outside [0,1]");
        }
      } else {
        check_ordinal(cue.id, t, scale_min(cue.scale), scale_max(cue.scale));
      }
    }
  }
  check_ordinal("overall", cfg.overall_marginal, 1, 6);

  if (!problems.empty()) {
    throw ValidationError("infeasible synthetic-data configuration", std::move(problems));
  }
}

std::vector<double> referee_cumulative_weights(const RefereePool& pool) {
  std::vector<double> w(pool.size);
  double total = 0.0;
  for (int i = 0; i < pool.size; ++i) {
    w[i] = std::pow(static_cast<double>(i + 1), -pool.load_skew);
    total += w[i];
  }
  double acc = 0.0;
  for (double& x : w) {
    acc += x / total;
    x = acc;
  }
  w.back() = 1.0;
  return w;
}

int draw_referee(const std::vector<double>& cumulative, Rng& rng) {
  const double u = rng.unit();
  return static_cast<int>(std::lower_bound(cumulative.begin(), cumulative.end(), u) -
                          cumulative.begin());
}

}  // namespace

SynthConfig default_synth_config(StyleKind style, uint64_t seed) {
  SynthConfig cfg;
  cfg.seed = seed;
  cfg.n_proposals = 237;
  cfg.referees = RefereePool{};
  cfg.latent_correlation = 0.5;
  // Published descriptive statistics of the training set.
  cfg.cue_marginals = {
      {4.4, 0.7, 0.0},   // education
      {4.1, 0.9, 0.0},   // track_record
      {4.1, 0.9, 0.0},   // career_plan
      {4.5, 1.1, 0.0},   // career_potential
      {0.0, 0.0, 0.14},  // top5
      {4.5, 0.7, 0.0},   // clarity_goal
      {4.4, 0.8, 0.0},   // clarity_plan
      {4.4, 0.8, 0.0},   // own_question
      {4.4, 0.8, 0.0},   // method
      {4.2, 0.9, 0.0},   // feasibility
      {0.0, 0.0, 0.19},  // innovative
      {4.4, 0.8, 0.0},   // cooperation
      {4.4, 0.7, 0.0},   // recommendation
  };
  cfg.overall_marginal = {4.4, 1.0, 0.0};
  cfg.style.kind = style;
  // Weights proportional to the published log-odds estimates.
  cfg.style.weights = {0.26, 1.42, 0.53, 0.87, 0.73, 1.51, 0.69,
                       0.49, 1.01, 0.09, 0.50, 0.34, 0.82};
  cfg.style.noise_sd = 0.35;
  cfg.style.weight_jitter_sd = style == StyleKind::CaseByCase ? 1.5 : 0.0;
  return cfg;
}

Dataset generate(const SynthConfig& cfg) {
  const std::vector<CueSpec>& schema = canonical_schema();
  validate_config(cfg, schema);

  std::vector<CueSampler> samplers(schema.size());
  for (std::size_t j = 0; j < schema.size(); ++j) {
    CueSampler& s = samplers[j];
    if (schema[j].scale == ScaleKind::Binary) {
      s.binary = true;
      s.yes_threshold = normal_quantile(1.0 - cfg.cue_marginals[j].pct_yes);
    } else {
      s.lo = scale_min(schema[j].scale);
      s.hi = scale_max(schema[j].scale);
      calibrate_ordinal(cfg.cue_marginals[j].mean, cfg.cue_marginals[j].sd, s.lo, s.hi,
                        s.mu, s.sigma);
    }
  }
  double overall_mu, overall_sigma;
  calibrate_ordinal(cfg.overall_marginal.mean, cfg.overall_marginal.sd, 1, 6, overall_mu,
                    overall_sigma);

  Rng latent_rng(substream_seed(cfg.seed, "latent"));
  Rng noise_rng(substream_seed(cfg.seed, "noise"));
  Rng jitter_rng(substream_seed(cfg.seed, "jitter"));
  Rng assign_rng(substream_seed(cfg.seed, "assign"));

  const std::vector<double> cumulative = referee_cumulative_weights(cfg.referees);
  const double corr_shared = std::sqrt(cfg.latent_correlation);
  const double corr_own = std::sqrt(1.0 - cfg.latent_correlation);

  std::vector<RatingForm> records;
  records.reserve(static_cast<std::size_t>(cfg.n_proposals) * 2);
  for (int p = 0; p < cfg.n_proposals; ++p) {
    const std::string proposal = format_id("P", p + 1, 4);
    const int first = draw_referee(cumulative, assign_rng);
    int second = first;
    while (second == first) second = draw_referee(cumulative, assign_rng);
    for (int role = 0; role < 2; ++role) {
      RatingForm r;
      r.proposal_id = proposal;
      r.referee_id = format_id("R", (role == 0 ? first : second) + 1, 2);
      r.referee_role = role == 0 ? Role::First : Role::Second;
      r.scores.resize(schema.size());
      const double shared = latent_rng.normal();
      for (std::size_t j = 0; j < schema.size(); ++j) {
        const double z = corr_shared * shared + corr_own * latent_rng.normal();
        const CueSampler& s = samplers[j];
        r.scores[j] = s.binary ? (z > s.yes_threshold ? 1 : 0)
                               : discretize_ordinal(s.mu, s.sigma, s.lo, s.hi, z);
      }
      records.push_back(std::move(r));
    }
  }

  // Latent overall judgment: weighted cue sum, standardized over the batch,
  // plus judgment noise. Case-by-case style re-draws the weights per record.
  const std::size_t n = records.size();
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < schema.size(); ++j) {
      double w = cfg.style.weights[j];
      if (cfg.style.kind == StyleKind::CaseByCase) {
        w = std::max(0.0, w + cfg.style.weight_jitter_sd * jitter_rng.normal());
      }
      sum += w * records[i].scores[j];
    }
    u[i] = sum;
  }
  double mean_u = 0.0;
  for (double x : u) mean_u += x;
  mean_u /= static_cast<double>(n);
  double var_u = 0.0;
  for (double x : u) var_u += (x - mean_u) * (x - mean_u);
  var_u /= static_cast<double>(n);
  const double sd_u = var_u > 0 ? std::sqrt(var_u) : 1.0;

  const double noise_scale = std::sqrt(1.0 + cfg.style.noise_sd * cfg.style.noise_sd);
  for (std::size_t i = 0; i < n; ++i) {
    const double v =
        ((u[i] - mean_u) / sd_u + cfg.style.noise_sd * noise_rng.normal()) / noise_scale;
    records[i].overall = discretize_ordinal(overall_mu, overall_sigma, 1, 6, v);
  }

  return Dataset::validate(schema, std::move(records));
}

std::string sidecar_json(const SynthConfig& cfg, const Dataset& dataset) {
  const std::vector<CueSpec>& schema = dataset.schema();
  nlohmann::json marginals = nlohmann::json::object();
  for (std::size_t j = 0; j < schema.size(); ++j) {
    double sum = 0.0;
    for (const RatingForm& r : dataset.records()) sum += r.scores[j];
    const double mean = sum / dataset.size();
    if (schema[j].scale == ScaleKind::Binary) {
      marginals[schema[j].id] = {{"pct_yes", mean}};
    } else {
      double ss = 0.0;
      for (const RatingForm& r : dataset.records()) {
        ss += (r.scores[j] - mean) * (r.scores[j] - mean);
      }
      const double sd = dataset.size() > 1 ? std::sqrt(ss / (dataset.size() - 1)) : 0.0;
      marginals[schema[j].id] = {{"mean", mean}, {"sd", sd}};
    }
  }
  double overall_sum = 0.0;
  for (const RatingForm& r : dataset.records()) overall_sum += r.overall;
  const double overall_mean = overall_sum / dataset.size();
  double overall_ss = 0.0;
  for (const RatingForm& r : dataset.records()) {
    overall_ss += (r.overall - overall_mean) * (r.overall - overall_mean);
  }

  // Review-load concentration of the six busiest referees.
  std::map<std::string, int> load;
  for (const RatingForm& r : dataset.records()) ++load[r.referee_id];
  std::vector<int> counts;
  for (const auto& [id, c] : load) counts.push_back(c);
  std::sort(counts.rbegin(), counts.rend());
  double top6 = 0.0;
  for (std::size_t i = 0; i < counts.size() && i < 6; ++i) top6 += counts[i];
  top6 /= static_cast<double>(dataset.size());

  nlohmann::json weights = cfg.style.weights;
  nlohmann::json cue_targets = nlohmann::json::object();
  for (std::size_t j = 0; j < schema.size(); ++j) {
    const MarginalTarget& t = cfg.cue_marginals[j];
    if (schema[j].scale == ScaleKind::Binary) {
      cue_targets[schema[j].id] = {{"pct_yes", t.pct_yes}};
    } else {
      cue_targets[schema[j].id] = {{"mean", t.mean}, {"sd", t.sd}};
    }
  }

  nlohmann::json j{
      {"schema_version", 1},
      {"rng_algorithm", kRngAlgorithm},
      {"seed", cfg.seed},
      {"config",
       {{"n_proposals", cfg.n_proposals},
        {"referee_pool", {{"size", cfg.referees.size}, {"load_skew", cfg.referees.load_skew}}},
        {"latent_correlation", cfg.latent_correlation},
        {"style",
         {{"kind", style_name(cfg.style.kind)},
          {"weights", weights},
          {"noise_sd", cfg.style.noise_sd},
          {"weight_jitter_sd", cfg.style.weight_jitter_sd}}},
        {"cue_marginals", cue_targets},
        {"overall_marginal",
         {{"mean", cfg.overall_marginal.mean}, {"sd", cfg.overall_marginal.sd}}}}},
      {"achieved",
       {{"records", dataset.size()},
        {"cue_marginals", marginals},
        {"overall",
         {{"mean", overall_mean},
          {"sd", dataset.size() > 1 ? std::sqrt(overall_ss / (dataset.size() - 1)) : 0.0}}},
        {"prevalence", prevalence(dataset)},
        {"referees", static_cast<int>(load.size())},
        {"top6_review_share", top6}}}};
  return j.dump(2);
}

StyleExperimentReport style_experiment(const SynthConfig& uniform_config,
                                       const SynthConfig& casebycase_config) {
  if (uniform_config.style.kind != StyleKind::Uniform ||
      casebycase_config.style.kind != StyleKind::CaseByCase) {
    throw std::invalid_argument("style_experiment expects one config per style");
  }
  StyleExperimentReport report;
  const Dataset uniform_data = generate(uniform_config);
  const Dataset cbc_data = generate(casebycase_config);
  report.uniform = compare(uniform_data, role_split(uniform_data), {});
  report.casebycase = compare(cbc_data, role_split(cbc_data), {});

  auto full_test_acc = [](const ComparisonResult& r) {
    for (const PerformanceRecord& rec : r.records) {
      if (rec.rule_label == "All cues" && rec.split == Split::Testing) return rec.acc;
    }
    throw std::logic_error("comparison lacks the full-regression testing record");
  };
  report.uniform_test_accuracy = full_test_acc(report.uniform);
  report.casebycase_test_accuracy = full_test_acc(report.casebycase);
  report.accuracy_gap = report.uniform_test_accuracy - report.casebycase_test_accuracy;
  return report;
}

}  // namespace frugal
