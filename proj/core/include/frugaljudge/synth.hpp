#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "frugaljudge/dataset.hpp"
#include "frugaljudge/evaluate.hpp"

namespace frugal {

/// Target marginal for one cue: mean/sd for ordinal scales, pct_yes for
/// binary ones.
struct MarginalTarget {
  double mean = 0.0;
  double sd = 0.0;
  double pct_yes = 0.0;
};

struct RefereePool {
  int size = 31;
  // Zipf exponent of the review-load distribution; the default puts roughly
  // 45% of all reviews on the six busiest referees.
  double load_skew = 1.05;
};

enum class StyleKind { Uniform, CaseByCase };

const char* style_name(StyleKind s);

/// How the latent overall judgment integrates the cue scores.
struct Style {
  StyleKind kind = StyleKind::Uniform;
  std::vector<double> weights;      // per cue, non-negative
  double noise_sd = 0.35;           // sd of the judgment noise
  double weight_jitter_sd = 0.0;    // per-record weight jitter (CaseByCase)
};

struct SynthConfig {
  int n_proposals = 237;
  RefereePool referees;
  std::vector<MarginalTarget> cue_marginals;  // parallel to the schema
  MarginalTarget overall_marginal;            // Ordinal6
  double latent_correlation = 0.5;            // pairwise, in [0,1)
  Style style;
  uint64_t seed = 42;
};

/// Calibrated defaults matching the published descriptive statistics.
SynthConfig default_synth_config(StyleKind style, uint64_t seed);

/// Draws a correlated latent vector per rating form, discretizes each cue to
/// its scale under the configured marginals, and derives the overall score
/// from the (possibly per-record) weighted cue sum plus noise. Fully
/// deterministic per seed; infeasible marginals throw before sampling.
Dataset generate(const SynthConfig& config);

/// Config, seed, RNG identity and achieved marginals, for the JSON sidecar.
std::string sidecar_json(const SynthConfig& config, const Dataset& dataset);

struct StyleExperimentReport {
  ComparisonResult uniform;
  ComparisonResult casebycase;
  double uniform_test_accuracy = 0.0;     // full regression, testing split
  double casebycase_test_accuracy = 0.0;  // full regression, testing split
  double accuracy_gap = 0.0;
};

/// Runs the full comparison pipeline on both datasets (role split) and
/// reports the full-regression testing-accuracy gap between the styles.
StyleExperimentReport style_experiment(const SynthConfig& uniform_config,
                                       const SynthConfig& casebycase_config);

}  // namespace frugal
