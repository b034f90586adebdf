#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace oligo {

/// Command names accepted by run_command, sorted.
std::vector<std::string> command_names();

/// Keys of a command's parameters that hold input data (structures, groups, ...).
/// Certificates store these by digest with an embedded copy.
std::vector<std::string> command_input_keys(const std::string& name);

/// Runs one command on JSON parameters. The result always has "command" and
/// "verdict" ("pass" or "fail"); everything else is command-specific. Results are
/// deterministic functions of the parameters. Throws Error on invalid input.
nlohmann::json run_command(const std::string& name, const nlohmann::json& params);

}  // namespace oligo
