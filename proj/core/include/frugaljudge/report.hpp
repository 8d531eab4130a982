#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "frugaljudge/evaluate.hpp"
#include "frugaljudge/synth.hpp"

namespace frugal {

inline constexpr int kReportSchemaVersion = 1;

/// Everything the analyze pipeline produces for one input + split.
struct AnalyzeResult {
  std::string input_name;
  SplitPlan plan;
  CompareOptions options;
  double train_prevalence = 0.0;
  double test_prevalence = 0.0;
  ComparisonResult comparison;
  AgreementProfile agreement;  // two-cue tree vs full regression
};

AnalyzeResult run_analyze(const Dataset& dataset, const SplitPlan& plan,
                          const CompareOptions& options, const std::string& input_name);

// Text renderers. Metrics are rounded to two decimals, frugality shares to
// whole percents; undefined values print "NA".
std::string performance_table_text(const std::vector<PerformanceRecord>& records);
std::string regression_table_text(const LogisticModel& model,
                                  const std::vector<CueSpec>& schema);
std::string cue_table_text(const std::vector<CueStats>& stats,
                           const std::vector<CueSpec>& schema);
std::string agreement_text(const AgreementProfile& profile);
std::string analyze_text(const AnalyzeResult& result);

// JSON emitters: full precision, keys sorted for diffability.
std::string analyze_report_json(const AnalyzeResult& result);
std::string cue_stats_json(const std::vector<CueStats>& stats);

// Figure renderers: static, script-free SVG markup.
std::string roc_svg(const std::vector<RocPoint>& points);
std::string tree_svg(const FFTree& tree);
std::string agreement_svg(const std::vector<RefereeAgreement>& agreement,
                          const std::string& title);

/// Re-renders a saved analyze JSON report as text.
std::string report_json_to_text(const std::string& report_json);

/// Re-renders a saved analyze JSON report's figures; returns
/// (filename, svg) pairs.
std::vector<std::pair<std::string, std::string>> report_json_to_svgs(
    const std::string& report_json);

/// write-temp-then-rename; creates parent directories.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace frugal
