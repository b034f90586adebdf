#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "oligo/structures.hpp"

namespace oligo {

/// Resource caps shared by the exhaustive machinery.
struct Caps {
  std::size_t max_free_slots = 22;      // generic subset enumeration: 2^slots candidates
  std::size_t max_elements = 5000;      // approximation size
  std::size_t max_search_nodes = 2'000'000;
  int max_member_size = 7;              // exhaustive member generation
};

/// A fact involving the new element that a one-point extension must (not) contain.
struct RequiredFact {
  std::size_t symbol;
  Tuple tuple;
  bool holds;
};

using ExtensionVisitor = std::function<bool(const FinStructure&)>;  // false stops the walk

/// A class of finite structures presented by membership, an amalgamation
/// strategy, and an enumerator of one-point extensions.
class ClassOracle {
 public:
  explicit ClassOracle(Signature signature, Caps caps = {})
      : signature_(std::move(signature)), caps_(caps) {}
  virtual ~ClassOracle() = default;

  virtual std::string name() const = 0;
  const Signature& signature() const { return signature_; }
  const Caps& caps() const { return caps_; }
  void set_caps(const Caps& caps) { caps_ = caps; }

  virtual bool is_member(const FinStructure& s) const = 0;

  /// Amalgam of f: A -> B and g: A -> C inside the class. The default runs
  /// the blind search and throws if no amalgam exists.
  virtual Amalgam amalgamate(const FinStructure& a, const FinStructure& b, std::span<const int> f,
                             const FinStructure& c, std::span<const int> g) const;

  /// Amalgam built inside b: B keeps its indices, new elements are appended and new
  /// facts mention a new element. Returns the embedding C -> b, or nullopt (b untouched)
  /// when the class has no such amalgam rule. Must agree with amalgamate().
  virtual std::optional<std::vector<int>> amalgamate_into(FinStructure& b, const FinStructure& a,
                                                          std::span<const int> f, const FinStructure& c,
                                                          std::span<const int> g) const {
    (void)b, (void)a, (void)f, (void)c, (void)g;
    return std::nullopt;
  }

  /// Visits the members extending `base` by one element (index base.size())
  /// that satisfy `required`. Extensions over a fixed base are distinct
  /// structures, so no two visited ones are isomorphic over the base.
  virtual void for_each_extension(const FinStructure& base, std::span<const RequiredFact> required,
                                  const ExtensionVisitor& visit) const;

  std::vector<FinStructure> extensions(const FinStructure& base) const;

  /// Members with exactly `size` elements, one per isomorphism type.
  virtual std::vector<FinStructure> members(int size) const;

 protected:
  // Filters every structure of the given size through is_member.
  std::vector<FinStructure> members_by_filtering(int size) const;

 private:
  Signature signature_;
  Caps caps_;
};

/// Independent amalgam search: grows B element by element through the
/// oracle's one-point extensions (never calling amalgamate) until C embeds
/// over A. Domain size is at most |B| + |C| - |A|.
std::optional<Amalgam> search_amalgam(const ClassOracle& oracle, const FinStructure& a, const FinStructure& b,
                                      std::span<const int> f, const FinStructure& c, std::span<const int> g);

struct CheckReport {
  std::string property;
  int bound = 0;
  bool pass = true;
  std::size_t instances = 0;
  std::size_t disagreements = 0;  // oracle amalgam vs blind search
  std::optional<nlohmann::json> counterexample;

  nlohmann::json to_json() const;
};

CheckReport check_hp(const ClassOracle& oracle, int size_bound);
CheckReport check_jep(const ClassOracle& oracle, int size_bound);
CheckReport check_ap(const ClassOracle& oracle, int size_bound);

// ------------------------------------------------------------ approximations

/// Amalgamate `extension` into the current structure over `base`; the first
/// base.size() elements of `extension` play the role of the base.
struct ExtensionEvent {
  std::vector<int> base;
  FinStructure extension;

  nlohmann::json to_json() const;
  static ExtensionEvent from_json(const nlohmann::json& j);
};

class LimitApprox {
 public:
  explicit LimitApprox(Signature signature) : current_(std::move(signature), 0) {}

  const FinStructure& current() const { return current_; }
  const std::vector<ExtensionEvent>& log() const { return log_; }
  const std::set<std::pair<std::vector<int>, std::string>>& fulfilled() const { return fulfilled_; }
  int saturated_base() const { return saturated_base_; }

  /// Applies the event; returns where the extension's elements ended up.
  std::vector<int> apply(const ClassOracle& oracle, ExtensionEvent event);

  void mark_fulfilled(std::vector<int> base, std::string extension_type) {
    fulfilled_.emplace(std::move(base), std::move(extension_type));
  }
  void mark_saturated(int base_size) { saturated_base_ = std::max(saturated_base_, base_size); }

  /// State that can be restored after applying events that only add elements.
  struct Checkpoint {
    std::size_t events = 0;
    int elements = 0;
    std::size_t fulfilled = 0;
  };
  Checkpoint checkpoint() const { return {log_.size(), current_.size(), fulfilled_.size()}; }
  /// Undoes the events applied since `cp`. Throws if witnesses were marked in between.
  void rollback(const Checkpoint& cp);

  nlohmann::json to_json() const;

 private:
  FinStructure current_;
  std::vector<ExtensionEvent> log_;
  std::set<std::pair<std::vector<int>, std::string>> fulfilled_;
  int saturated_base_ = -1;
};

/// Re-executes a construction log from the empty structure.
FinStructure replay_log(const ClassOracle& oracle, const std::vector<ExtensionEvent>& log);

/// Runs `rounds` saturation rounds. A round walks base sizes 0..base_size;
/// at size j it takes every j-subset of the structure as it stands when
/// layer j starts and realizes each one-point extension over it that has no
/// witness yet.
LimitApprox& saturate(const ClassOracle& oracle, LimitApprox& approx, int base_size, int rounds);

// ----------------------------------------------------------- back and forth

using StructureMap = std::function<FinStructure(const FinStructure&)>;

/// Type of a tuple after applying `view` to the substructure on its span.
/// An empty view is the identity.
TypeFingerprint view_type(const FinStructure& s, const Tuple& t, const StructureMap& view = {});

struct BackAndForthOptions {
  int steps = 0;
  std::vector<int> forth_targets;
  std::vector<int> back_targets;
  // Required structure on (image, y) from the structure on (domain, x); identity when empty.
  StructureMap forth_transport;
  StructureMap back_transport;
  StructureMap view;
};

struct BackAndForthStep {
  bool forth = true;
  int source = -1;
  int target = -1;
  int event = -1;  // index into the approximation log, -1 if an existing witness was used
};

struct BackAndForthCertificate {
  PartialMap initial;
  std::vector<BackAndForthStep> steps;
  PartialMap final_map;

  nlohmann::json to_json() const;
};

struct BackAndForthResult {
  std::optional<BackAndForthCertificate> certificate;
  std::string failure;  // fingerprint diff when the initial map is not a partial isomorphism
  bool ok() const { return certificate.has_value(); }
};

BackAndForthResult extend_partial_iso(const ClassOracle& oracle, LimitApprox& approx, const PartialMap& f,
                                      const BackAndForthOptions& options);

/// Checks every prefix of the certificate is a partial isomorphism (under view).
bool verify_back_and_forth(const FinStructure& s, const BackAndForthCertificate& cert,
                           const StructureMap& view = {});

// ------------------------------------------------------------------ orbits

class InsufficientSaturation : public Error {
 public:
  using Error::Error;
};

struct OrbitCount {
  std::size_t count = 0;
  std::vector<Tuple> representatives;  // first tuple realizing each type, lexicographic
  std::size_t count_after_extra_round = 0;
};

/// Number of k-types realized in the approximation. Requires saturation over
/// bases of size >= k-1 and checks the count survives one more round.
OrbitCount count_orbits(const ClassOracle& oracle, const LimitApprox& approx, int k);

/// Independent count: all k-tuples over all members of size <= k.
std::size_t brute_force_type_count(const ClassOracle& oracle, int k);

}  // namespace oligo
