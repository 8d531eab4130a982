#include "frugaljudge/fft.hpp"

#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "frugaljudge/parallel.hpp"
#include "json_io.hpp"
#include "rule_search.hpp"

namespace frugal {

namespace {

using detail::RuleEval;

std::vector<std::size_t> level_cue_indices(const FFTree& tree,
                                           const std::vector<CueSpec>& schema) {
  std::vector<std::size_t> idx;
  idx.reserve(tree.levels.size());
  for (const TreeLevel& level : tree.levels) {
    std::size_t j = 0;
    for (; j < schema.size(); ++j) {
      if (schema[j].id == level.rule.cue_id) break;
    }
    if (j == schema.size()) {
      throw std::invalid_argument("tree references unknown cue: " + level.rule.cue_id);
    }
    idx.push_back(j);
  }
  return idx;
}

ClassificationTrace classify_indexed(const FFTree& tree,
                                     const std::vector<std::size_t>& cue_idx,
                                     const RatingForm& record) {
  const int depth = tree.depth();
  for (int i = 0; i < depth; ++i) {
    const CueRule& rule = tree.levels[i].rule;
    if (rule_fires(rule, record.scores[cue_idx[i]])) {
      return {rule.positive_class_when_true, i + 1};
    }
    if (i == depth - 1) {
      return {other_class(rule.positive_class_when_true), depth};
    }
  }
  throw std::logic_error("empty tree");
}

struct TreeEval {
  long correct = 0;
  long tp = 0, fp = 0, tn = 0, fn = 0;
  double goal_value = 0.0;
};

TreeEval evaluate_tree(const FFTree& tree, const Dataset& dataset, Goal goal) {
  const auto cue_idx = level_cue_indices(tree, dataset.schema());
  TreeEval ev;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const JudgmentClass predicted =
        classify_indexed(tree, cue_idx, dataset.records()[i]).predicted;
    const bool pred_pos = predicted == JudgmentClass::Outstanding;
    const bool actual_pos = dataset.labels()[i] == JudgmentClass::Outstanding;
    if (pred_pos && actual_pos) ++ev.tp;
    else if (pred_pos && !actual_pos) ++ev.fp;
    else if (!pred_pos && actual_pos) ++ev.fn;
    else ++ev.tn;
  }
  ev.correct = ev.tp + ev.tn;
  if (goal == Goal::Accuracy) {
    ev.goal_value = dataset.size() ? static_cast<double>(ev.correct) / dataset.size() : 0.0;
  } else {
    const long np = ev.tp + ev.fn;
    const long nn = ev.tn + ev.fp;
    const double sens_part = np > 0 ? static_cast<double>(ev.tp) / np : 0.0;
    const double spec_part = nn > 0 ? static_cast<double>(ev.tn) / nn : 0.0;
    ev.goal_value = 0.5 * (sens_part + spec_part);
  }
  return ev;
}

long long tree_goal_key(const TreeEval& ev, Goal goal) {
  if (goal == Goal::Accuracy) return ev.correct;
  const long np = ev.tp + ev.fn;
  const long nn = ev.tn + ev.fp;
  if (np == 0) return ev.tn;
  if (nn == 0) return ev.tp;
  return static_cast<long long>(ev.tp) * nn + static_cast<long long>(ev.tn) * np;
}

/// Fits one exit structure: levels re-optimize their threshold on the
/// records reaching them; a level reached by no training record keeps the
/// rule fitted on the full dataset.
FFTree fit_structure(const Dataset& dataset, const std::vector<CueStats>& ranking,
                     const std::vector<JudgmentClass>& exits, int depth, Goal goal) {
  FFTree tree;
  tree.goal = goal;
  const auto full = detail::all_indices(dataset.size());
  std::vector<std::size_t> reaching = full;

  for (int i = 0; i < depth; ++i) {
    const std::size_t cue_idx = dataset.cue_index(ranking[i].cue_id);
    const CueSpec& cue = dataset.schema()[cue_idx];
    const auto candidates = candidate_thresholds(cue);
    const bool final_level = i == depth - 1;
    std::optional<JudgmentClass> forced;
    if (!final_level) forced = exits[i];

    const std::vector<std::size_t>& fit_on = reaching.empty() ? full : reaching;
    RuleEval ev = detail::best_rule(dataset, cue_idx, candidates, forced, fit_on, goal);
    tree.levels.push_back({ev.rule, cue.name});

    if (!final_level) {
      std::vector<std::size_t> next;
      next.reserve(reaching.size());
      for (std::size_t r : reaching) {
        if (!rule_fires(ev.rule, dataset.records()[r].scores[cue_idx])) next.push_back(r);
      }
      reaching = std::move(next);
    }
  }
  tree.training_goal_value = evaluate_tree(tree, dataset, goal).goal_value;
  return tree;
}

int exits_to_outstanding(const FFTree& tree) {
  int count = 0;
  for (std::size_t i = 0; i + 1 < tree.levels.size(); ++i) {
    if (tree.levels[i].rule.positive_class_when_true == JudgmentClass::Outstanding) ++count;
  }
  return count;
}

}  // namespace

std::vector<JudgmentClass> FFTree::exit_structure() const {
  std::vector<JudgmentClass> exits;
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
    exits.push_back(levels[i].rule.positive_class_when_true);
  }
  return exits;
}

Fan build_fan_at_depth(const Dataset& dataset, const std::vector<CueStats>& ranking,
                       int depth, Goal goal) {
  if (depth < 1) throw std::invalid_argument("tree depth must be >= 1");
  if (static_cast<std::size_t>(depth) > ranking.size()) {
    throw std::invalid_argument("tree depth exceeds the number of ranked cues");
  }
  const std::size_t n_structures = std::size_t{1} << (depth - 1);
  Fan fan;
  fan.all.resize(n_structures);

  parallel_for(n_structures, [&](std::size_t s) {
    std::vector<JudgmentClass> exits(depth - 1);
    for (int i = 0; i + 1 < depth; ++i) {
      exits[i] = ((s >> i) & 1) ? JudgmentClass::Outstanding : JudgmentClass::NotOutstanding;
    }
    fan.all[s] = fit_structure(dataset, ranking, exits, depth, goal);
  });

  // Selection reduces in enumeration order: best goal, then fewer exits to
  // Outstanding, then lower structure index.
  std::size_t best = 0;
  long long best_key = tree_goal_key(evaluate_tree(fan.all[0], dataset, goal), goal);
  for (std::size_t s = 1; s < n_structures; ++s) {
    const long long key = tree_goal_key(evaluate_tree(fan.all[s], dataset, goal), goal);
    if (key > best_key ||
        (key == best_key &&
         exits_to_outstanding(fan.all[s]) < exits_to_outstanding(fan.all[best]))) {
      best = s;
      best_key = key;
    }
  }
  fan.selected = fan.all[best];
  return fan;
}

std::vector<FFTree> build_fan(const Dataset& dataset, int depth_max, Goal goal) {
  if (depth_max < 1) throw std::invalid_argument("depth_max must be >= 1");
  if (static_cast<std::size_t>(depth_max) > dataset.cue_count()) {
    throw std::invalid_argument("depth_max exceeds the number of cues (" +
                                std::to_string(dataset.cue_count()) + ")");
  }
  if (depth_max > kDefaultMaxDepth) {
    std::cerr << "warning: fitting trees deeper than " << kDefaultMaxDepth
              << " cues; fan size doubles per level\n";
  }
  const std::vector<CueStats> ranking = rank_cues(dataset, goal);
  std::vector<FFTree> trees;
  trees.reserve(depth_max);
  for (int d = 1; d <= depth_max; ++d) {
    trees.push_back(build_fan_at_depth(dataset, ranking, d, goal).selected);
  }
  return trees;
}

ClassificationTrace classify_record(const FFTree& tree, const std::vector<CueSpec>& schema,
                                    const RatingForm& record) {
  if (tree.levels.empty()) throw std::invalid_argument("classify with an empty tree");
  return classify_indexed(tree, level_cue_indices(tree, schema), record);
}

std::string describe_tree(const FFTree& tree) {
  if (tree.levels.empty()) return "";
  std::ostringstream out;
  for (std::size_t i = 0; i < tree.levels.size(); ++i) {
    const TreeLevel& level = tree.levels[i];
    const CueRule& rule = level.rule;
    out << "If " << level.cue_name << ' ' << direction_symbol(rule.direction) << ' '
        << rule.threshold << ", decide '" << class_name(rule.positive_class_when_true)
        << "';\n";
    if (i + 1 < tree.levels.size()) {
      out << "otherwise, assess " << tree.levels[i + 1].cue_name << ".\n";
    } else {
      out << "otherwise, decide '" << class_name(other_class(rule.positive_class_when_true))
          << "'.\n";
    }
  }
  return out.str();
}

namespace {

nlohmann::json direction_to_json(Direction d) { return direction_symbol(d); }

Direction direction_from_json(const std::string& s) {
  if (s == ">=") return Direction::GreaterOrEqual;
  if (s == "<=") return Direction::LessOrEqual;
  if (s == "=") return Direction::Equal;
  throw ValidationError("bad tree JSON", {"unknown direction: " + s});
}

nlohmann::json class_to_json(JudgmentClass c) {
  return c == JudgmentClass::Outstanding ? "outstanding" : "not_outstanding";
}

JudgmentClass class_from_json(const std::string& s) {
  if (s == "outstanding") return JudgmentClass::Outstanding;
  if (s == "not_outstanding") return JudgmentClass::NotOutstanding;
  throw ValidationError("bad tree JSON", {"unknown class: " + s});
}

Goal goal_from_json(const std::string& s) {
  if (s == "accuracy") return Goal::Accuracy;
  if (s == "balanced-accuracy") return Goal::BalancedAccuracy;
  throw ValidationError("bad tree JSON", {"unknown goal: " + s});
}

}  // namespace

nlohmann::json tree_to_json_object(const FFTree& tree) {
  nlohmann::json levels = nlohmann::json::array();
  for (const TreeLevel& level : tree.levels) {
    levels.push_back({{"cue", level.rule.cue_id},
                      {"name", level.cue_name},
                      {"direction", direction_to_json(level.rule.direction)},
                      {"threshold", level.rule.threshold},
                      {"exit", class_to_json(level.rule.positive_class_when_true)}});
  }
  return {{"depth", tree.depth()},
          {"goal", goal_name(tree.goal)},
          {"training_goal_value", tree.training_goal_value},
          {"levels", levels}};
}

FFTree tree_from_json_object(const nlohmann::json& j) {
  FFTree tree;
  try {
    tree.goal = goal_from_json(j.at("goal").get<std::string>());
    tree.training_goal_value = j.at("training_goal_value").get<double>();
    for (const auto& jl : j.at("levels")) {
      TreeLevel level;
      level.rule.cue_id = jl.at("cue").get<std::string>();
      level.cue_name = jl.value("name", level.rule.cue_id);
      level.rule.direction = direction_from_json(jl.at("direction").get<std::string>());
      level.rule.threshold = jl.at("threshold").get<int>();
      level.rule.positive_class_when_true = class_from_json(jl.at("exit").get<std::string>());
      tree.levels.push_back(std::move(level));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("bad tree JSON", {e.what()});
  }
  if (tree.levels.empty()) throw ValidationError("bad tree JSON", {"tree has no levels"});
  return tree;
}

std::string tree_to_json(const FFTree& tree) { return tree_to_json_object(tree).dump(2); }

FFTree tree_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ValidationError("bad tree JSON", {"not valid JSON"});
  return tree_from_json_object(j);
}

}  // namespace frugal
