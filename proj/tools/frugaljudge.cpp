// Batch front end: ingest rating CSVs, run the analyses, emit reports and
// figures. Exit codes: 0 success, 1 validation error, 2 usage error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "frugaljudge/csv.hpp"
#include "frugaljudge/fft.hpp"
#include "frugaljudge/report.hpp"
#include "frugaljudge/synth.hpp"

namespace {

using namespace frugal;

struct CommonOpts {
  std::string input;
  std::string output = "out";
  std::string format = "text";
  std::string split = "role";
  std::uint64_t seed = 0;
  bool seed_set = false;
  int depth_max = kDefaultMaxDepth;
  std::string goal = "accuracy";
};

void add_io_flags(CLI::App* cmd, CommonOpts& o, bool needs_input) {
  auto* in = cmd->add_option("--input", o.input, "Input file");
  if (needs_input) in->required();
  cmd->add_option("--output", o.output, "Output directory")->capture_default_str();
  cmd->add_option("--format", o.format, "Report format")
      ->check(CLI::IsMember({"text", "json", "svg"}))
      ->capture_default_str();
}

void add_analysis_flags(CLI::App* cmd, CommonOpts& o, bool with_depth = true) {
  cmd->add_option("--split", o.split, "Cross-validation design")
      ->check(CLI::IsMember({"role", "stratified"}))
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "Seed for stratified splits / simulation")
      ->each([&o](const std::string&) { o.seed_set = true; });
  if (with_depth) {
    cmd->add_option("--depth-max", o.depth_max, "Deepest tree in the fan")
        ->check(CLI::Range(1, kDefaultMaxDepth))
        ->capture_default_str();
  }
  cmd->add_option("--goal", o.goal, "Optimization goal")
      ->check(CLI::IsMember({"accuracy", "balanced"}))
      ->capture_default_str();
}

Goal parse_goal(const CommonOpts& o) {
  return o.goal == "balanced" ? Goal::BalancedAccuracy : Goal::Accuracy;
}

SplitPlan make_plan(const CommonOpts& o, const Dataset& data) {
  if (o.split == "stratified") {
    if (!o.seed_set) {
      throw CLI::ValidationError("--split stratified requires --seed");
    }
    return stratified_split(data, o.seed);
  }
  return role_split(data);
}

std::string out_path(const CommonOpts& o, const std::string& name) {
  return (std::filesystem::path(o.output) / name).string();
}

int run_analyze_cmd(const CommonOpts& o) {
  const Dataset data = load_csv_file(o.input);
  const SplitPlan plan = make_plan(o, data);
  const CompareOptions options{o.depth_max, parse_goal(o)};
  const AnalyzeResult result = run_analyze(data, plan, options, o.input);

  if (o.format == "text") {
    const std::string text = analyze_text(result);
    write_file_atomic(out_path(o, "report.txt"), text);
    std::cout << text;
  } else if (o.format == "json") {
    const std::string json = analyze_report_json(result);
    write_file_atomic(out_path(o, "report.json"), json);
    std::cout << out_path(o, "report.json") << '\n';
  } else {
    const std::string json = analyze_report_json(result);
    for (const auto& [name, svg] : report_json_to_svgs(json)) {
      write_file_atomic(out_path(o, name), svg);
      std::cout << out_path(o, name) << '\n';
    }
  }
  for (const std::string& w : result.comparison.warnings) {
    std::cerr << "warning: " << w << '\n';
  }
  return 0;
}

int run_cues_cmd(const CommonOpts& o) {
  const Dataset data = load_csv_file(o.input);
  const SplitPlan plan = make_plan(o, data);
  const Dataset train = data.subset(plan.train_indices);
  const std::vector<CueStats> ranking = rank_cues(train, parse_goal(o));

  if (o.format == "text") {
    const std::string text = cue_table_text(ranking, train.schema());
    write_file_atomic(out_path(o, "cues.txt"), text);
    std::cout << text;
  } else if (o.format == "json") {
    write_file_atomic(out_path(o, "cues.json"), cue_stats_json(ranking));
    std::cout << out_path(o, "cues.json") << '\n';
  } else {
    write_file_atomic(out_path(o, "roc.svg"), roc_svg(roc_points(ranking)));
    std::cout << out_path(o, "roc.svg") << '\n';
  }
  return 0;
}

int run_fft_cmd(const CommonOpts& o) {
  const Dataset data = load_csv_file(o.input);
  const SplitPlan plan = make_plan(o, data);
  const Dataset train = data.subset(plan.train_indices);
  const std::vector<FFTree> trees = build_fan(train, o.depth_max, parse_goal(o));

  if (o.format == "text") {
    std::string text;
    char value[32];
    for (const FFTree& t : trees) {
      std::snprintf(value, sizeof(value), "%.3f", t.training_goal_value);
      text += "Tree with " + std::to_string(t.depth()) +
              (t.depth() == 1 ? " cue" : " cues") + " (training " +
              std::string(goal_name(t.goal)) + " " + value + "):\n";
      text += describe_tree(t);
      text += "\n";
    }
    write_file_atomic(out_path(o, "trees.txt"), text);
    std::cout << text;
  } else if (o.format == "json") {
    std::string json = "[\n";
    for (std::size_t i = 0; i < trees.size(); ++i) {
      json += tree_to_json(trees[i]);
      if (i + 1 < trees.size()) json += ",";
      json += "\n";
    }
    json += "]\n";
    write_file_atomic(out_path(o, "trees.json"), json);
    std::cout << out_path(o, "trees.json") << '\n';
  } else {
    for (const FFTree& t : trees) {
      const std::string name = "tree_" + std::to_string(t.depth()) + ".svg";
      write_file_atomic(out_path(o, name), tree_svg(t));
      std::cout << out_path(o, name) << '\n';
    }
  }
  return 0;
}

int run_regress_cmd(const CommonOpts& o) {
  if (o.format == "svg") {
    throw CLI::ValidationError("regress supports --format text or json");
  }
  const Dataset data = load_csv_file(o.input);
  const SplitPlan plan = make_plan(o, data);
  const Dataset train = data.subset(plan.train_indices);
  const LogisticModel model = fit_logistic(build_design(train));

  if (o.format == "text") {
    const std::string text = regression_table_text(model, train.schema());
    write_file_atomic(out_path(o, "regression.txt"), text);
    std::cout << text;
  } else {
    write_file_atomic(out_path(o, "regression.json"), model_to_json(model));
    std::cout << out_path(o, "regression.json") << '\n';
  }
  for (const std::string& w : model.warnings) std::cerr << "warning: " << w << '\n';
  return 0;
}

struct SimulateOpts {
  CommonOpts common;
  std::string style = "uniform";
  int n_proposals = 237;
  double noise_sd = -1.0;
  double jitter_sd = -1.0;
  double correlation = -1.0;
};

int run_simulate_cmd(const SimulateOpts& s) {
  const StyleKind kind =
      s.style == "casebycase" ? StyleKind::CaseByCase : StyleKind::Uniform;
  SynthConfig cfg = default_synth_config(kind, s.common.seed);
  cfg.n_proposals = s.n_proposals;
  if (s.noise_sd >= 0.0) cfg.style.noise_sd = s.noise_sd;
  if (s.jitter_sd >= 0.0) cfg.style.weight_jitter_sd = s.jitter_sd;
  if (s.correlation >= 0.0) cfg.latent_correlation = s.correlation;

  const Dataset data = generate(cfg);
  const std::string base = std::string("synth_") + style_name(kind);
  const std::string csv_path = out_path(s.common, base + ".csv");
  const std::string meta_path = out_path(s.common, base + ".meta.json");
  write_file_atomic(csv_path, serialize_csv(data));
  write_file_atomic(meta_path, sidecar_json(cfg, data));
  std::cout << csv_path << '\n' << meta_path << '\n';
  return 0;
}

int run_report_cmd(const CommonOpts& o) {
  const std::string json = read_file(o.input);
  if (o.format == "json") {
    std::cout << json << '\n';
    return 0;
  }
  if (o.format == "text") {
    const std::string text = report_json_to_text(json);
    write_file_atomic(out_path(o, "report.txt"), text);
    std::cout << text;
  } else {
    for (const auto& [name, svg] : report_json_to_svgs(json)) {
      write_file_atomic(out_path(o, name), svg);
      std::cout << out_path(o, name) << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fast-and-frugal trees vs logistic regression on rating-form data"};
  app.require_subcommand(1);

  CommonOpts analyze_opts, cues_opts, fft_opts, regress_opts, report_opts;
  SimulateOpts simulate_opts;

  CLI::App* analyze = app.add_subcommand(
      "analyze", "Full pipeline: cues, tree fan, regressions, comparison report");
  add_io_flags(analyze, analyze_opts, true);
  add_analysis_flags(analyze, analyze_opts);

  CLI::App* cues = app.add_subcommand("cues", "Cue validities and ROC export");
  add_io_flags(cues, cues_opts, true);
  add_analysis_flags(cues, cues_opts, false);

  CLI::App* fft = app.add_subcommand("fft", "Fit fast-and-frugal trees");
  add_io_flags(fft, fft_opts, true);
  add_analysis_flags(fft, fft_opts);

  CLI::App* regress = app.add_subcommand("regress", "Full logistic regression table");
  add_io_flags(regress, regress_opts, true);
  add_analysis_flags(regress, regress_opts, false);

  CLI::App* simulate = app.add_subcommand("simulate", "Generate a synthetic dataset");
  add_io_flags(simulate, simulate_opts.common, false);
  simulate->add_option("--seed", simulate_opts.common.seed, "Generator seed")->required();
  simulate->add_option("--style", simulate_opts.style, "Judgment style")
      ->check(CLI::IsMember({"uniform", "casebycase"}))
      ->capture_default_str();
  simulate->add_option("--n-proposals", simulate_opts.n_proposals, "Proposals to draw")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--noise-sd", simulate_opts.noise_sd, "Judgment noise sd override");
  simulate->add_option("--jitter-sd", simulate_opts.jitter_sd,
                       "Per-record weight jitter sd override");
  simulate->add_option("--latent-correlation", simulate_opts.correlation,
                       "Pairwise latent correlation override");

  CLI::App* report = app.add_subcommand("report", "Re-render a saved analyze JSON report");
  add_io_flags(report, report_opts, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (analyze->parsed()) return run_analyze_cmd(analyze_opts);
    if (cues->parsed()) return run_cues_cmd(cues_opts);
    if (fft->parsed()) return run_fft_cmd(fft_opts);
    if (regress->parsed()) return run_regress_cmd(regress_opts);
    if (simulate->parsed()) return run_simulate_cmd(simulate_opts);
    if (report->parsed()) return run_report_cmd(report_opts);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
