#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "oligo/suite.hpp"

namespace oligo {

inline constexpr const char* kCertSchema = "oligo-cert/1";

/// FNV-1a 64 of the compact dump, as 16 hex digits.
std::string digest(const nlohmann::json& j);

/// Certificate for one command run: schema, command, params with input data moved
/// into "inputs" (each with its digest), result, and verdict.
nlohmann::json make_certificate(const std::string& command, const nlohmann::json& params,
                                const nlohmann::json& result);

/// Writes pretty-printed JSON via a temporary file and a rename.
void write_json_atomic(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

struct ReplayReport {
  bool ok = false;
  std::string detail;  // first problem found, empty when ok
  nlohmann::json to_json() const;
};

/// Checks schema and input digests, re-runs the command and compares the result
/// dump byte for byte.
ReplayReport replay_certificate(const nlohmann::json& cert);

struct SuiteOutcome {
  bool pass = false;
  nlohmann::json summary;
};

/// Runs the battery checks of a module on `config.jobs` threads. Writes
/// <out>/<check>.json per check and <out>/summary.json; file contents do not
/// depend on the number of jobs.
SuiteOutcome run_suite(const std::string& module, const SuiteConfig& config);

}  // namespace oligo
