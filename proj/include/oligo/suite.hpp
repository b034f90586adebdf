#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "oligo/fraisse.hpp"

namespace oligo {

/// Bounds and caps for the verification battery. Every field has a default, so an
/// empty config object is valid; the resolved values are recorded in certificates.
struct SuiteConfig {
  int bound = 4;            // member size for HP/JEP/AP
  int grade = 2;            // partition grade N
  int depth = 3;            // back-and-forth steps when realizing class permutations
  int sigma_grade = 3;      // grade whose class permutations are realized
  int mix_rounds = 2;       // saturation rounds (base 1) for mixing witnesses
  int kernel_bound = 3;     // member size for the kernel correspondence
  int encode_bound = 3;     // inner member size for round trips
  int amalgam_bound = 4;    // encoded member size for free amalgams
  int order_bound = 16;     // group order for splitting and chains
  int limit_bound = 24;     // group order for truncated limits
  int gadget_arity2 = 3;    // max arity for the gadget on 2 points
  int gadget_arity3 = 2;    // max arity for the gadget on 3 points
  int iso_arity = 3;        // max arity of composites for the clone map
  int cap_size = 7;         // Caps::max_member_size
  int cap_elems = 5000;     // Caps::max_elements
  std::string out = "oligo-certs";
  int jobs = 1;
  std::uint64_t seed = 0;   // reserved: nothing is randomized

  Caps caps() const;
  void validate() const;  // throws unless bounds and caps are positive
  /// Snapshot of everything that affects results (out and jobs excluded).
  nlohmann::json to_json() const;
  /// Missing keys keep their defaults; unknown keys are rejected.
  static SuiteConfig from_json(const nlohmann::json& j);
};

/// Names of the battery checks for a module ("fraisse", "partition", "encoding",
/// "groups", "clones") or every check for "all". Sorted.
std::vector<std::string> battery_checks(const std::string& module);

/// Runs one check. The result has "check", "pass" and check-specific statistics,
/// and never contains timings, so equal configs give equal results.
nlohmann::json run_check(const std::string& name, const SuiteConfig& config);

}  // namespace oligo
