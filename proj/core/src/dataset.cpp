#include "frugaljudge/dataset.hpp"

#include <map>
#include <sstream>
#include <utility>

namespace frugal {

int scale_min(ScaleKind kind) { return kind == ScaleKind::Binary ? 0 : 1; }

int scale_max(ScaleKind kind) {
  switch (kind) {
    case ScaleKind::Ordinal5: return 5;
    case ScaleKind::Ordinal6: return 6;
    case ScaleKind::Binary: return 1;
  }
  return 0;
}

bool in_scale(ScaleKind kind, int score) {
  return score >= scale_min(kind) && score <= scale_max(kind);
}

const char* scale_name(ScaleKind kind) {
  switch (kind) {
    case ScaleKind::Ordinal5: return "ordinal-1..5";
    case ScaleKind::Ordinal6: return "ordinal-1..6";
    case ScaleKind::Binary: return "binary-0/1";
  }
  return "?";
}

const char* group_name(CueGroup group) {
  switch (group) {
    case CueGroup::Applicant: return "Applicant";
    case CueGroup::Project: return "Project";
    case CueGroup::Environment: return "Environment";
  }
  return "?";
}

JudgmentClass other_class(JudgmentClass c) {
  return c == JudgmentClass::Outstanding ? JudgmentClass::NotOutstanding
                                         : JudgmentClass::Outstanding;
}

const char* class_name(JudgmentClass c) {
  return c == JudgmentClass::Outstanding ? "outstanding" : "not outstanding";
}

JudgmentClass binarize_overall(int overall) {
  if (overall < 1 || overall > 6) {
    throw ValidationError("overall assessment out of range",
                          {"overall = " + std::to_string(overall) + ", expected 1..6"});
  }
  return overall >= 5 ? JudgmentClass::Outstanding : JudgmentClass::NotOutstanding;
}

ValidationError::ValidationError(const std::string& summary, std::vector<std::string> details)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << summary;
        for (const auto& d : details) os << "\n  " << d;
        return os.str();
      }()),
      details_(std::move(details)) {}

const std::vector<CueSpec>& canonical_schema() {
  static const std::vector<CueSpec> schema = {
      {"education", "Education", CueGroup::Applicant, ScaleKind::Ordinal5},
      {"track_record", "Track record", CueGroup::Applicant, ScaleKind::Ordinal5},
      {"career_plan", "Career plan", CueGroup::Applicant, ScaleKind::Ordinal5},
      {"career_potential", "Career potential", CueGroup::Applicant, ScaleKind::Ordinal6},
      {"top5", "Top 5% in the field", CueGroup::Applicant, ScaleKind::Binary},
      {"clarity_goal", "Clarity of project goal", CueGroup::Project, ScaleKind::Ordinal5},
      {"clarity_plan", "Clarity of research plan", CueGroup::Project, ScaleKind::Ordinal5},
      {"own_question", "Own research question", CueGroup::Project, ScaleKind::Ordinal5},
      {"method", "Methodological approach", CueGroup::Project, ScaleKind::Ordinal5},
      {"feasibility", "Feasibility", CueGroup::Project, ScaleKind::Ordinal5},
      {"innovative", "Highly innovative proposal", CueGroup::Project, ScaleKind::Binary},
      {"cooperation", "Cooperation, network", CueGroup::Environment, ScaleKind::Ordinal5},
      {"recommendation", "Recommendation letter", CueGroup::Environment, ScaleKind::Ordinal5},
  };
  return schema;
}

Dataset Dataset::validate(std::vector<CueSpec> schema, std::vector<RatingForm> records) {
  std::vector<std::string> problems;
  std::map<std::pair<std::string, Role>, std::size_t> seen;

  for (std::size_t i = 0; i < records.size(); ++i) {
    const RatingForm& r = records[i];
    const std::string where = "row " + std::to_string(i + 1) + " (proposal " + r.proposal_id +
                              ", referee " + r.referee_id + ")";
    if (r.scores.size() != schema.size()) {
      problems.push_back(where + ": has " + std::to_string(r.scores.size()) +
                         " cue scores, schema expects " + std::to_string(schema.size()));
    } else {
      for (std::size_t j = 0; j < schema.size(); ++j) {
        if (!in_scale(schema[j].scale, r.scores[j])) {
          problems.push_back(where + ": " + schema[j].id + " = " +
                             std::to_string(r.scores[j]) + " outside " +
                             scale_name(schema[j].scale));
        }
      }
    }
    if (r.overall < 1 || r.overall > 6) {
      problems.push_back(where + ": overall = " + std::to_string(r.overall) +
                         " outside 1..6");
    }
    auto key = std::make_pair(r.proposal_id, r.referee_role);
    auto [it, inserted] = seen.emplace(key, i);
    if (!inserted) {
      problems.push_back(where + ": duplicate (proposal, role) pair, first seen at row " +
                         std::to_string(it->second + 1));
    }
  }

  if (!problems.empty()) {
    throw ValidationError("dataset validation failed (" + std::to_string(problems.size()) +
                              " problem(s))",
                          std::move(problems));
  }

  Dataset ds;
  ds.schema_ = std::move(schema);
  ds.records_ = std::move(records);
  ds.labels_.reserve(ds.records_.size());
  for (const RatingForm& r : ds.records_) ds.labels_.push_back(binarize_overall(r.overall));
  return ds;
}

std::size_t Dataset::cue_index(const std::string& cue_id) const {
  for (std::size_t j = 0; j < schema_.size(); ++j) {
    if (schema_[j].id == cue_id) return j;
  }
  throw std::invalid_argument("unknown cue id: " + cue_id);
}

Dataset Dataset::subset(const std::vector<std::size_t>& indices) const {
  Dataset ds;
  ds.schema_ = schema_;
  ds.records_.reserve(indices.size());
  ds.labels_.reserve(indices.size());
  for (std::size_t i : indices) {
    ds.records_.push_back(records_.at(i));
    ds.labels_.push_back(labels_.at(i));
  }
  return ds;
}

double prevalence(const Dataset& dataset) {
  if (dataset.size() == 0) throw std::invalid_argument("prevalence of an empty dataset");
  std::size_t outstanding = 0;
  for (JudgmentClass c : dataset.labels()) {
    if (c == JudgmentClass::Outstanding) ++outstanding;
  }
  return static_cast<double>(outstanding) / static_cast<double>(dataset.size());
}

}  // namespace frugal
