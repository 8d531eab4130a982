#pragma once

// Internal JSON object converters shared by the engines and the report
// renderer. Not installed; public APIs exchange JSON as strings.

#include <nlohmann/json.hpp>

#include "frugaljudge/fft.hpp"
#include "frugaljudge/logistic.hpp"

namespace frugal {

nlohmann::json tree_to_json_object(const FFTree& tree);
FFTree tree_from_json_object(const nlohmann::json& j);

nlohmann::json model_to_json_object(const LogisticModel& model);
LogisticModel model_from_json_object(const nlohmann::json& j);

}  // namespace frugal
