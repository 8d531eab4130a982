#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace frugal {

/// Score scales used on the rating form. All scores are integers.
enum class ScaleKind { Ordinal5, Ordinal6, Binary };

int scale_min(ScaleKind kind);
int scale_max(ScaleKind kind);
bool in_scale(ScaleKind kind, int score);
const char* scale_name(ScaleKind kind);

enum class CueGroup { Applicant, Project, Environment };

const char* group_name(CueGroup group);

/// One evaluation criterion of the rating form.
struct CueSpec {
  std::string id;    // stable identifier; doubles as the CSV column name
  std::string name;  // display string
  CueGroup group = CueGroup::Applicant;
  ScaleKind scale = ScaleKind::Ordinal5;
};

enum class Role { First, Second };

/// Binary judgment classes. NotOutstanding < Outstanding.
enum class JudgmentClass { NotOutstanding, Outstanding };

JudgmentClass other_class(JudgmentClass c);
const char* class_name(JudgmentClass c);  // "not outstanding" / "outstanding"

/// Overall assessments of 5 or 6 count as outstanding, 1 to 4 do not.
JudgmentClass binarize_overall(int overall);

/// One referee's criterion scores plus overall assessment for one proposal.
struct RatingForm {
  std::string proposal_id;
  std::string referee_id;
  Role referee_role = Role::First;
  std::vector<int> scores;  // parallel to the dataset schema
  int overall = 0;          // 1..6
};

/// Input-data rejection. details() lists one message per offending row.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(const std::string& summary, std::vector<std::string> details);
  const std::vector<std::string>& details() const { return details_; }

 private:
  std::vector<std::string> details_;
};

/// Validated rating data. Immutable after construction; safe to share
/// across concurrent readers. Record order is preserved from input.
class Dataset {
 public:
  /// Validates raw records against the schema and populates labels.
  /// Rejects missing scores, out-of-range values, and duplicate
  /// (proposal, role) pairs, listing every offending row.
  static Dataset validate(std::vector<CueSpec> schema, std::vector<RatingForm> records);

  const std::vector<CueSpec>& schema() const { return schema_; }
  const std::vector<RatingForm>& records() const { return records_; }
  const std::vector<JudgmentClass>& labels() const { return labels_; }
  std::size_t size() const { return records_.size(); }
  std::size_t cue_count() const { return schema_.size(); }

  /// Index of a cue in the schema; throws std::invalid_argument if unknown.
  std::size_t cue_index(const std::string& cue_id) const;

  /// New dataset holding the given records (same schema, given order).
  Dataset subset(const std::vector<std::size_t>& indices) const;

 private:
  Dataset() = default;
  std::vector<CueSpec> schema_;
  std::vector<RatingForm> records_;
  std::vector<JudgmentClass> labels_;
};

/// The 13-criterion rating-form schema: 5 applicant, 6 project, 2 environment.
const std::vector<CueSpec>& canonical_schema();

/// Fraction of Outstanding labels. Throws std::invalid_argument on empty data.
double prevalence(const Dataset& dataset);

}  // namespace frugal
