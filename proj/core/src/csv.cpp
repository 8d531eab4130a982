#include "frugaljudge/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace frugal {

const char* const kCsvHeader =
    "proposal_id,referee_id,referee_role,education,track_record,career_plan,"
    "career_potential,top5,clarity_goal,clarity_plan,own_question,method,"
    "feasibility,innovative,cooperation,recommendation,overall";

namespace {

constexpr std::size_t kFieldCount = 17;  // 2 ids + role + 13 cues + overall

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

bool parse_int(const std::string& field, int& value) {
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last && !field.empty();
}

// The canonical form carries ids verbatim, so they must not need quoting.
bool valid_id(const std::string& id) {
  if (id.empty()) return false;
  for (char c : id) {
    if (c == ',' || c == '"' || c == '\n' || c == '\r') return false;
  }
  return true;
}

}  // namespace

Dataset parse_csv(const std::string& text) {
  const std::vector<CueSpec>& schema = canonical_schema();
  std::vector<std::string> problems;
  std::vector<RatingForm> records;

  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!header_seen) {
      if (line != kCsvHeader) {
        throw ValidationError("CSV header mismatch",
                              {"line 1: expected exact canonical header:\n  " +
                               std::string(kCsvHeader) + "\n  got:\n  " + line});
      }
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;

    const std::string where = "line " + std::to_string(line_no);
    std::vector<std::string> fields = split_fields(line);
    if (fields.size() != kFieldCount) {
      problems.push_back(where + ": expected " + std::to_string(kFieldCount) +
                         " fields, got " + std::to_string(fields.size()));
      continue;
    }

    RatingForm r;
    bool row_ok = true;
    r.proposal_id = fields[0];
    r.referee_id = fields[1];
    if (!valid_id(r.proposal_id) || !valid_id(r.referee_id)) {
      problems.push_back(where + ": empty or non-canonical id field");
      row_ok = false;
    }
    int role = 0;
    if (!parse_int(fields[2], role) || (role != 1 && role != 2)) {
      problems.push_back(where + ": referee_role = '" + fields[2] + "', expected 1 or 2");
      row_ok = false;
    } else {
      r.referee_role = role == 1 ? Role::First : Role::Second;
    }
    r.scores.resize(schema.size(), 0);
    for (std::size_t j = 0; j < schema.size(); ++j) {
      const std::string& f = fields[3 + j];
      if (f.empty()) {
        problems.push_back(where + ": missing score for " + schema[j].id);
        row_ok = false;
      } else if (!parse_int(f, r.scores[j])) {
        problems.push_back(where + ": " + schema[j].id + " = '" + f + "' is not an integer");
        row_ok = false;
      }
    }
    if (!parse_int(fields[16], r.overall)) {
      problems.push_back(where + ": overall = '" + fields[16] + "' is not an integer");
      row_ok = false;
    }
    if (row_ok) records.push_back(std::move(r));
  }

  if (!header_seen) {
    throw ValidationError("empty CSV input", {"no header line found"});
  }
  if (!problems.empty()) {
    throw ValidationError("CSV parse failed (" + std::to_string(problems.size()) +
                              " problem(s))",
                          std::move(problems));
  }
  return Dataset::validate(schema, std::move(records));
}

Dataset load_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open input file", {path});
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

std::string serialize_csv(const Dataset& dataset) {
  const std::vector<CueSpec>& canon = canonical_schema();
  if (dataset.schema().size() != canon.size()) {
    throw std::invalid_argument("CSV format is defined for the canonical 13-cue schema only");
  }
  for (std::size_t j = 0; j < canon.size(); ++j) {
    if (dataset.schema()[j].id != canon[j].id) {
      throw std::invalid_argument("CSV format is defined for the canonical 13-cue schema only");
    }
  }
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const RatingForm& r : dataset.records()) {
    out << r.proposal_id << ',' << r.referee_id << ','
        << (r.referee_role == Role::First ? 1 : 2);
    for (int s : r.scores) out << ',' << s;
    out << ',' << r.overall << '\n';
  }
  return out.str();
}

}  // namespace frugal
