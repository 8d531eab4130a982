#include "frugaljudge/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "json_io.hpp"

namespace frugal {

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

std::string fmt2(double v) { return std::isnan(v) ? "NA" : fmt("%.2f", v); }
std::string fmt1(double v) { return std::isnan(v) ? "NA" : fmt("%.1f", v); }
std::string fmt3(double v) { return std::isnan(v) ? "NA" : fmt("%.3f", v); }
std::string pct(double v) { return std::isnan(v) ? "NA" : fmt("%.0f", v * 100.0) + "%"; }

std::string pad_left(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

bool is_regression_label(const std::string& label) {
  return label == "All cues" || label.find('(') != std::string::npos;
}

std::string display_name(const std::vector<CueSpec>& schema, const std::string& cue_id) {
  for (const CueSpec& c : schema) {
    if (c.id == cue_id) return c.name;
  }
  return cue_id;
}

std::string rule_text(const CueRule& rule) {
  return rule.cue_id + " " + direction_symbol(rule.direction) + " " +
         std::to_string(rule.threshold) + " -> " + class_name(rule.positive_class_when_true);
}

std::string metrics_cell(const PerformanceRecord& r) {
  return pad_left(fmt1(r.frug_abs), 6) + pad_left(pct(r.frug_rel), 7) +
         pad_left(fmt2(r.acc), 6) + pad_left(fmt2(r.sens), 6) + pad_left(fmt2(r.spec), 6);
}

std::string empty_cell() {
  return pad_left("-", 6) + pad_left("-", 7) + pad_left("-", 6) + pad_left("-", 6) +
         pad_left("-", 6);
}

}  // namespace

std::string performance_table_text(const std::vector<PerformanceRecord>& records) {
  // Pair the two splits per rule, preserving first-appearance order.
  std::vector<std::string> order;
  for (const PerformanceRecord& r : records) {
    if (std::find(order.begin(), order.end(), r.rule_label) == order.end()) {
      order.push_back(r.rule_label);
    }
  }
  auto find_record = [&](const std::string& label, Split split) -> const PerformanceRecord* {
    for (const PerformanceRecord& r : records) {
      if (r.rule_label == label && r.split == split) return &r;
    }
    return nullptr;
  };

  const std::size_t label_w = 26;
  std::ostringstream out;
  out << pad_right("Decision rule", label_w) << pad_right("  Training set", 31)
      << "  Testing set\n";
  const std::string cols =
      pad_left("#Frug", 6) + pad_left("%Frug", 7) + pad_left("Acc", 6) +
      pad_left("Sens", 6) + pad_left("Spec", 6);
  out << pad_right("", label_w) << cols << "  " << cols << '\n';

  bool tree_header = false, regression_header = false;
  for (const std::string& label : order) {
    if (!is_regression_label(label) && !tree_header) {
      out << "Fast-and-frugal trees\n";
      tree_header = true;
    }
    if (is_regression_label(label) && !regression_header) {
      out << "Logistic regression\n";
      regression_header = true;
    }
    const PerformanceRecord* train = find_record(label, Split::Training);
    const PerformanceRecord* test = find_record(label, Split::Testing);
    out << pad_right("  " + label, label_w) << (train ? metrics_cell(*train) : empty_cell())
        << "  " << (test ? metrics_cell(*test) : empty_cell()) << '\n';
  }
  return out.str();
}

std::string regression_table_text(const LogisticModel& model,
                                  const std::vector<CueSpec>& schema) {
  const FitDiagnostics& d = model.diagnostics;
  const std::size_t p = model.column_names.size();
  const bool inf = !d.se.empty();
  const bool vifs = !d.vif.empty();

  std::ostringstream out;
  out << pad_right("Variable", 28) << pad_left("Estimate", 9) << pad_left("SE", 8)
      << pad_left("CI LL", 8) << pad_left("CI UL", 8) << pad_left("p", 8)
      << pad_left("VIF", 6) << '\n';

  CueGroup last_group = CueGroup::Environment;
  bool first = true;
  for (std::size_t j = 0; j < p; ++j) {
    const std::string& id = model.column_names[j];
    const CueSpec* spec = nullptr;
    for (const CueSpec& c : schema) {
      if (c.id == id) spec = &c;
    }
    if (spec && (first || spec->group != last_group)) {
      out << group_name(spec->group) << '\n';
      last_group = spec->group;
      first = false;
    }
    out << pad_right("  " + (spec ? spec->name : id), 28)
        << pad_left(fmt2(model.coefficients[j]), 9);
    if (inf) {
      const double pv = d.p_values[j];
      out << pad_left(fmt2(d.se[j]), 8) << pad_left(fmt2(d.ci_lower[j]), 8)
          << pad_left(fmt2(d.ci_upper[j]), 8)
          << pad_left(pv < 0.001 ? "<.001" : fmt3(pv), 8);
    } else {
      out << pad_left("-", 8) << pad_left("-", 8) << pad_left("-", 8) << pad_left("-", 8);
    }
    if (vifs && std::isfinite(d.vif[j])) {
      out << pad_left(fmt1(d.vif[j]), 6);
    } else if (vifs) {
      out << pad_left("inf", 6);
    } else {
      out << pad_left("-", 6);
    }
    out << '\n';
  }
  out << pad_right("  Constant", 28) << pad_left(fmt2(model.coefficients[p]), 9);
  if (inf) {
    const double pv = d.p_values[p];
    out << pad_left(fmt2(d.se[p]), 8) << pad_left(fmt2(d.ci_lower[p]), 8)
        << pad_left(fmt2(d.ci_upper[p]), 8) << pad_left(pv < 0.001 ? "<.001" : fmt3(pv), 8);
  } else {
    out << pad_left("-", 8) << pad_left("-", 8) << pad_left("-", 8) << pad_left("-", 8);
  }
  out << pad_left("", 6) << '\n';

  out << '\n'
      << "AIC = " << fmt2(d.aic) << "; chi2(" << d.lr_df << ") = " << fmt2(d.lr_chi_square)
      << "; pseudo-R2: McKelvey-Zavoina = " << fmt2(d.mckelvey_zavoina)
      << ", Veall-Zimmermann = " << fmt2(d.veall_zimmermann)
      << ", McFadden = " << fmt2(d.mcfadden) << '\n';
  if (model.separated) {
    out << "note: perfect separation detected; inference suppressed\n";
  }
  return out.str();
}

std::string cue_table_text(const std::vector<CueStats>& stats,
                           const std::vector<CueSpec>& schema) {
  std::ostringstream out;
  out << pad_right("Rank", 6) << pad_right("Cue", 28) << pad_right("Best rule", 34)
      << pad_left("Validity", 9) << pad_left("Sens", 6) << pad_left("Spec", 6) << '\n';
  for (std::size_t i = 0; i < stats.size(); ++i) {
    const CueStats& s = stats[i];
    out << pad_right(std::to_string(i + 1), 6)
        << pad_right(display_name(schema, s.cue_id), 28) << pad_right(rule_text(s.rule), 34)
        << pad_left(fmt2(s.validity), 9) << pad_left(fmt2(s.sens), 6)
        << pad_left(fmt2(s.spec), 6);
    if (s.uninformative) out << "  (uninformative)";
    out << '\n';
  }
  return out.str();
}

std::string agreement_text(const AgreementProfile& profile) {
  std::ostringstream out;
  auto section = [&](const char* title, const std::vector<RefereeAgreement>& list) {
    out << title << '\n';
    out << pad_right("  Referee", 12) << pad_left("Judgments", 10) << pad_left("Tree", 8)
        << pad_left("Regression", 12) << '\n';
    for (const RefereeAgreement& a : list) {
      out << pad_right("  " + a.referee_id, 12) << pad_left(std::to_string(a.n_judgments), 10)
          << pad_left(fmt2(a.proportion_correct_tree), 8)
          << pad_left(fmt2(a.proportion_correct_regression), 12) << '\n';
    }
  };
  section("Per-referee agreement, training set", profile.training);
  out << '\n';
  section("Per-referee agreement, testing set", profile.testing);
  return out.str();
}

AnalyzeResult run_analyze(const Dataset& dataset, const SplitPlan& plan,
                          const CompareOptions& options, const std::string& input_name) {
  AnalyzeResult result;
  result.input_name = input_name;
  result.plan = plan;
  result.options = options;
  result.comparison = compare(dataset, plan, options);
  result.train_prevalence = prevalence(dataset.subset(plan.train_indices));
  result.test_prevalence = prevalence(dataset.subset(plan.test_indices));
  // Agreement profiles follow the paper's pairing: two-cue tree (or the
  // deepest available) against the full regression.
  const std::size_t tree_idx = result.comparison.trees.size() > 1 ? 1 : 0;
  result.agreement = per_referee_agreement(dataset, result.comparison.trees[tree_idx],
                                           result.comparison.full_model, plan);
  return result;
}

std::string analyze_text(const AnalyzeResult& result) {
  std::ostringstream out;
  out << "Input: " << result.input_name << '\n';
  out << "Split: "
      << (result.plan.design == SplitDesign::RoleBased
              ? std::string("role-based")
              : "stratified random (seed " + std::to_string(result.plan.seed) + ")")
      << " -- training " << result.plan.train_indices.size() << ", testing "
      << result.plan.test_indices.size() << '\n';
  out << "Prevalence: training " << fmt3(result.train_prevalence) << ", testing "
      << fmt3(result.test_prevalence) << '\n';
  out << "Goal: " << goal_name(result.options.goal) << "\n\n";
  out << performance_table_text(result.comparison.records) << '\n';
  out << agreement_text(result.agreement);
  if (!result.comparison.warnings.empty()) {
    out << "\nWarnings:\n";
    for (const std::string& w : result.comparison.warnings) out << "  " << w << '\n';
  }
  return out.str();
}

namespace {

nlohmann::json cue_stats_object(const CueStats& s) {
  return {{"cue", s.cue_id},
          {"rule",
           {{"direction", direction_symbol(s.rule.direction)},
            {"threshold", s.rule.threshold},
            {"class_when_true",
             s.rule.positive_class_when_true == JudgmentClass::Outstanding
                 ? "outstanding"
                 : "not_outstanding"}}},
          {"validity", s.validity},
          {"sens", s.sens},
          {"spec", s.spec},
          {"uninformative", s.uninformative}};
}

nlohmann::json record_object(const PerformanceRecord& r) {
  return {{"rule", r.rule_label},
          {"split", split_name(r.split)},
          {"frug_abs", r.frug_abs},
          {"frug_rel", r.frug_rel},
          {"acc", r.acc},
          {"sens", r.sens},
          {"spec", r.spec},
          {"confusion", {{"tp", r.cm.tp}, {"fp", r.cm.fp}, {"tn", r.cm.tn}, {"fn", r.cm.fn}}},
          {"prevalence", r.prevalence}};
}

PerformanceRecord record_from_object(const nlohmann::json& j) {
  PerformanceRecord r;
  r.rule_label = j.at("rule").get<std::string>();
  r.split = j.at("split").get<std::string>() == "training" ? Split::Training : Split::Testing;
  auto num = [&](const char* key) {
    const auto& v = j.at(key);
    return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
  };
  r.frug_abs = num("frug_abs");
  r.frug_rel = num("frug_rel");
  r.acc = num("acc");
  r.sens = num("sens");
  r.spec = num("spec");
  r.prevalence = num("prevalence");
  const auto& cm = j.at("confusion");
  r.cm = {cm.at("tp").get<long>(), cm.at("fp").get<long>(), cm.at("tn").get<long>(),
          cm.at("fn").get<long>()};
  return r;
}

nlohmann::json agreement_object(const std::vector<RefereeAgreement>& list) {
  nlohmann::json arr = nlohmann::json::array();
  for (const RefereeAgreement& a : list) {
    arr.push_back({{"referee", a.referee_id},
                   {"judgments", a.n_judgments},
                   {"tree", a.proportion_correct_tree},
                   {"regression", a.proportion_correct_regression}});
  }
  return arr;
}

std::vector<RefereeAgreement> agreement_from_object(const nlohmann::json& arr) {
  std::vector<RefereeAgreement> out;
  for (const auto& j : arr) {
    out.push_back({j.at("referee").get<std::string>(), j.at("judgments").get<int>(),
                   j.at("tree").get<double>(), j.at("regression").get<double>()});
  }
  return out;
}

}  // namespace

std::string cue_stats_json(const std::vector<CueStats>& stats) {
  nlohmann::json arr = nlohmann::json::array();
  for (const CueStats& s : stats) arr.push_back(cue_stats_object(s));
  return arr.dump(2);
}

std::string analyze_report_json(const AnalyzeResult& result) {
  const ComparisonResult& c = result.comparison;
  nlohmann::json cues = nlohmann::json::array();
  for (const CueStats& s : c.ranking) cues.push_back(cue_stats_object(s));
  nlohmann::json trees = nlohmann::json::array();
  for (const FFTree& t : c.trees) trees.push_back(tree_to_json_object(t));
  nlohmann::json performance = nlohmann::json::array();
  for (const PerformanceRecord& r : c.records) performance.push_back(record_object(r));
  nlohmann::json reduced = nlohmann::json::array();
  for (std::size_t i = 0; i < c.reduced_models.size(); ++i) {
    reduced.push_back({{"label", c.reduced_specs[i].label},
                       {"cues", c.reduced_specs[i].cue_ids},
                       {"model", model_to_json_object(c.reduced_models[i])}});
  }

  nlohmann::json j{
      {"schema_version", kReportSchemaVersion},
      {"input", result.input_name},
      {"goal", goal_name(result.options.goal)},
      {"split",
       {{"design",
         result.plan.design == SplitDesign::RoleBased ? "role" : "stratified"},
        {"seed", result.plan.seed},
        {"train_size", result.plan.train_indices.size()},
        {"test_size", result.plan.test_indices.size()}}},
      {"prevalence",
       {{"training", result.train_prevalence}, {"testing", result.test_prevalence}}},
      {"cues", cues},
      {"trees", trees},
      {"regressions", {{"full", model_to_json_object(c.full_model)}, {"reduced", reduced}}},
      {"performance", performance},
      {"agreement",
       {{"training", agreement_object(result.agreement.training)},
        {"testing", agreement_object(result.agreement.testing)}}},
      {"warnings", c.warnings}};
  return j.dump(2);
}

namespace {

nlohmann::json parse_report(const std::string& report_json) {
  nlohmann::json j = nlohmann::json::parse(report_json, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("performance")) {
    throw ValidationError("bad report JSON", {"expected an analyze report object"});
  }
  return j;
}

}  // namespace

std::string report_json_to_text(const std::string& report_json) {
  const nlohmann::json j = parse_report(report_json);
  std::vector<PerformanceRecord> records;
  for (const auto& r : j.at("performance")) records.push_back(record_from_object(r));
  std::ostringstream out;
  out << "Input: " << j.value("input", std::string("?")) << '\n';
  if (j.contains("split")) {
    out << "Split: " << j["split"].value("design", std::string("?")) << " -- training "
        << j["split"].value("train_size", 0) << ", testing " << j["split"].value("test_size", 0)
        << '\n';
  }
  out << '\n' << performance_table_text(records);
  if (j.contains("agreement")) {
    AgreementProfile profile;
    profile.training = agreement_from_object(j["agreement"].at("training"));
    profile.testing = agreement_from_object(j["agreement"].at("testing"));
    out << '\n' << agreement_text(profile);
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// SVG rendering. Static markup only; no scripts, fixed viewBox sizes.

namespace {

std::string svg_open(int w, int h) {
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << w << ' ' << h
      << "\" width=\"" << w << "\" height=\"" << h << "\" font-family=\"sans-serif\">\n";
  return out.str();
}

std::string text_el(double x, double y, const std::string& s, int size = 12,
                    const char* anchor = "start", const char* extra = "") {
  std::ostringstream out;
  out << "<text x=\"" << fmt("%.1f", x) << "\" y=\"" << fmt("%.1f", y) << "\" font-size=\""
      << size << "\" text-anchor=\"" << anchor << "\"" << extra << ">" << s << "</text>\n";
  return out.str();
}

std::string line_el(double x1, double y1, double x2, double y2, const char* style) {
  std::ostringstream out;
  out << "<line x1=\"" << fmt("%.1f", x1) << "\" y1=\"" << fmt("%.1f", y1) << "\" x2=\""
      << fmt("%.1f", x2) << "\" y2=\"" << fmt("%.1f", y2) << "\" " << style << "/>\n";
  return out.str();
}

std::string rect_el(double x, double y, double w, double h, const char* style) {
  std::ostringstream out;
  out << "<rect x=\"" << fmt("%.1f", x) << "\" y=\"" << fmt("%.1f", y) << "\" width=\""
      << fmt("%.1f", w) << "\" height=\"" << fmt("%.1f", h) << "\" " << style << "/>\n";
  return out.str();
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string roc_svg(const std::vector<RocPoint>& points) {
  const int W = 560, H = 560;
  const double left = 70, right = 30, top = 40, bottom = 60;
  const double pw = W - left - right, ph = H - top - bottom;
  auto px = [&](double x) { return left + x * pw; };
  auto py = [&](double y) { return top + (1.0 - y) * ph; };

  std::ostringstream out;
  out << svg_open(W, H);
  out << text_el(W / 2.0, 22, "Cue validities in ROC space", 15, "middle");
  out << rect_el(left, top, pw, ph, "fill=\"none\" stroke=\"#333\" stroke-width=\"1\"");
  out << line_el(px(0), py(0), px(1), py(1),
                 "stroke=\"#bbb\" stroke-width=\"1\" stroke-dasharray=\"5,4\"");
  for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    out << line_el(px(t), py(0), px(t), py(0) + 5, "stroke=\"#333\"");
    out << text_el(px(t), py(0) + 20, fmt("%.2f", t), 11, "middle");
    out << line_el(px(0) - 5, py(t), px(0), py(t), "stroke=\"#333\"");
    out << text_el(px(0) - 9, py(t) + 4, fmt("%.2f", t), 11, "end");
  }
  out << text_el(left + pw / 2, H - 14, "1 - specificity", 13, "middle");
  out << text_el(18, top + ph / 2, "sensitivity", 13, "middle",
                 " transform=\"rotate(-90 18 280)\"");
  for (const RocPoint& p : points) {
    if (std::isnan(p.x) || std::isnan(p.y)) continue;
    out << "<circle cx=\"" << fmt("%.1f", px(p.x)) << "\" cy=\"" << fmt("%.1f", py(p.y))
        << "\" r=\"4.5\" fill=\"#2166ac\" fill-opacity=\"0.85\"/>\n";
    out << text_el(px(p.x) + 7, py(p.y) - 6, escape_xml(p.label), 10);
  }
  out << "</svg>\n";
  return out.str();
}

std::string tree_svg(const FFTree& tree) {
  const int depth = tree.depth();
  const int W = 640;
  const int level_h = 120;
  const int H = level_h * depth + 110;
  const double cx = W / 2.0;
  const double box_w = 240, box_h = 40, leaf_w = 150, leaf_h = 32;

  auto leaf = [&](double x, double y, JudgmentClass c) {
    std::string out = rect_el(x - leaf_w / 2, y, leaf_w, leaf_h,
                              c == JudgmentClass::Outstanding
                                  ? "fill=\"#d7efd7\" stroke=\"#2a7\" rx=\"6\""
                                  : "fill=\"#f4dcdc\" stroke=\"#b55\" rx=\"6\"");
    out += text_el(x, y + 21, class_name(c), 12, "middle");
    return out;
  };

  std::ostringstream out;
  out << svg_open(W, H);
  out << text_el(cx, 24, "Fast-and-frugal tree (" + std::to_string(depth) +
                             (depth == 1 ? " cue)" : " cues)"),
                 14, "middle");
  double y = 48;
  for (int i = 0; i < depth; ++i) {
    const TreeLevel& level = tree.levels[i];
    const CueRule& rule = level.rule;
    const std::string cond = level.cue_name + " " + direction_symbol(rule.direction) + " " +
                             std::to_string(rule.threshold) + "?";
    out << rect_el(cx - box_w / 2, y, box_w, box_h,
                   "fill=\"#eef2f7\" stroke=\"#345\" rx=\"6\"");
    out << text_el(cx, y + 25, escape_xml(cond), 13, "middle");

    const bool exit_right = rule.positive_class_when_true == JudgmentClass::Outstanding;
    const double exit_x = exit_right ? cx + 190 : cx - 190;
    const double exit_y = y + box_h + 28;
    out << line_el(exit_right ? cx + box_w / 2 : cx - box_w / 2, y + box_h / 2, exit_x,
                   exit_y, "stroke=\"#345\"");
    out << text_el((exit_x + cx) / 2 + (exit_right ? 6 : -6), y + box_h / 2 + 2, "yes", 11,
                   exit_right ? "start" : "end");
    out << leaf(exit_x, exit_y, rule.positive_class_when_true);

    if (i + 1 < depth) {
      out << line_el(cx, y + box_h, cx, y + level_h, "stroke=\"#345\"");
      out << text_el(cx + 6, y + box_h + 18, "no", 11);
      y += level_h;
    } else {
      const double other_x = exit_right ? cx - 190 : cx + 190;
      out << line_el(exit_right ? cx - box_w / 2 : cx + box_w / 2, y + box_h / 2, other_x,
                     exit_y, "stroke=\"#345\"");
      out << text_el((other_x + cx) / 2 + (exit_right ? -6 : 6), y + box_h / 2 + 2, "no", 11,
                     exit_right ? "end" : "start");
      out << leaf(other_x, exit_y, other_class(rule.positive_class_when_true));
    }
  }
  out << "</svg>\n";
  return out.str();
}

std::string agreement_svg(const std::vector<RefereeAgreement>& agreement,
                          const std::string& title) {
  const int n = static_cast<int>(agreement.size());
  const int W = std::max(560, 80 + n * 26 + 30);
  const int H = 380;
  const double left = 60, top = 50, bottom = 70;
  const double ph = H - top - bottom;
  auto py = [&](double v) { return top + (1.0 - v) * ph; };

  std::ostringstream out;
  out << svg_open(W, H);
  out << text_el(W / 2.0, 22, escape_xml(title), 14, "middle");
  for (double t : {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}) {
    out << line_el(left, py(t), W - 20, py(t),
                   t == 0.0 ? "stroke=\"#333\"" : "stroke=\"#ddd\"");
    out << text_el(left - 8, py(t) + 4, fmt("%.1f", t), 11, "end");
  }
  out << rect_el(W - 190, 30, 12, 12, "fill=\"#9ab7d3\"");
  out << text_el(W - 174, 40, "tree", 11);
  out << rect_el(W - 120, 30, 12, 12, "fill=\"#28527a\"");
  out << text_el(W - 104, 40, "regression", 11);

  for (int i = 0; i < n; ++i) {
    const RefereeAgreement& a = agreement[i];
    const double x = left + 10 + i * 26.0;
    out << rect_el(x, py(a.proportion_correct_tree), 10,
                   ph * a.proportion_correct_tree, "fill=\"#9ab7d3\"");
    out << rect_el(x + 11, py(a.proportion_correct_regression), 10,
                   ph * a.proportion_correct_regression, "fill=\"#28527a\"");
    out << text_el(x + 10, H - bottom + 14, escape_xml(a.referee_id), 9, "middle",
                   " transform=\"rotate(-60 " + fmt("%.1f", x + 10) + " " +
                       fmt("%.1f", H - bottom + 14) + ")\"");
    out << text_el(x + 10, H - bottom + 34, "n=" + std::to_string(a.n_judgments), 8,
                   "middle");
  }
  out << text_el(W / 2.0, H - 8, "referees, ordered by review load", 12, "middle");
  out << "</svg>\n";
  return out.str();
}

std::vector<std::pair<std::string, std::string>> report_json_to_svgs(
    const std::string& report_json) {
  const nlohmann::json j = parse_report(report_json);
  std::vector<std::pair<std::string, std::string>> out;

  if (j.contains("cues")) {
    std::vector<RocPoint> points;
    for (const auto& c : j["cues"]) {
      const double sens = c.value("sens", std::numeric_limits<double>::quiet_NaN());
      const double spec = c.value("spec", std::numeric_limits<double>::quiet_NaN());
      points.push_back({1.0 - spec, sens, c.value("cue", std::string("?"))});
    }
    out.emplace_back("roc.svg", roc_svg(points));
  }
  if (j.contains("trees")) {
    for (const auto& t : j["trees"]) {
      const FFTree tree = tree_from_json_object(t);
      out.emplace_back("tree_" + std::to_string(tree.depth()) + ".svg", tree_svg(tree));
    }
  }
  if (j.contains("agreement")) {
    out.emplace_back(
        "agreement_training.svg",
        agreement_svg(agreement_from_object(j["agreement"].at("training")),
                      "Per-referee agreement, training set"));
    out.emplace_back("agreement_testing.svg",
                     agreement_svg(agreement_from_object(j["agreement"].at("testing")),
                                   "Per-referee agreement, testing set"));
  }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
  }
  fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file", {path});
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace frugal
