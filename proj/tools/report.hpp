#pragma once

// JSON views of the library reports, shared by the CLI and the acceptance run.

#include <string>
#include <vector>

#include <json.hpp>

#include "bergman/conditions.hpp"
#include "bergman/quad.hpp"
#include "bergman/settings.hpp"
#include "bergman/weights.hpp"

namespace bergman::report {

using nlohmann::json;

inline constexpr int kSchema = 1;

json to_json(const Settings& cfg);
json to_json(const quad::SupVerdict& v, bool with_values = true);
json to_json(const ClassificationReport& r);
json to_json(const conditions::ConditionReport& r);

/// Wraps a result with the schema tag and the echoed invocation.
json envelope(const std::string& command, const std::vector<std::string>& args,
              const Settings& cfg, json result);

}  // namespace bergman::report
