#pragma once

#include <optional>
#include <string>
#include <vector>

#include "oligo/fraisse.hpp"

namespace oligo {

/// R_n of arity l(n) <= n, remembering the raw symbol it came from.
struct GradedSymbol {
  int n = 1;
  int arity = 1;
  std::string source;
};

/// Inner signature of the encoding: symbols R_n with l(n) <= n, in input order.
class GradedSignature {
 public:
  GradedSignature() = default;
  explicit GradedSignature(std::vector<GradedSymbol> entries);  // throws unless n unique and l(n) <= n

  const std::vector<GradedSymbol>& entries() const { return entries_; }
  /// Signature with symbols "R_n" in entry order.
  const Signature& signature() const { return signature_; }
  /// Entry index of R_n, if present.
  std::optional<std::size_t> find(int n) const;
  nlohmann::json to_json() const;
  static GradedSignature from_json(const nlohmann::json& j);

 private:
  std::vector<GradedSymbol> entries_;
  Signature signature_;
};

/// Re-indexes raw symbols as R_n, n the smallest unused index >= arity, in input order.
GradedSignature pad_signature(const Signature& raw);

/// Same structure read over another signature with equal arities in the same order.
FinStructure with_signature(const FinStructure& s, const Signature& sig);

/// L = {P, Q, lambda, rho (1-ary), H (2-ary), S (4-ary)}.
const Signature& enc_signature();
/// L followed by the R_n symbols.
Signature plus_signature(const GradedSignature& g);

/// One n-pair: cycle c_1..c_n and labelled tuple a_1..a_{l(n)}.
///
/// Labels are read from S: S(c_h, c_i, a, b) holds iff h, i <= l(n), a = a_h and b = a_i.
struct NPair {
  int n = 0;
  std::vector<int> cycle;
  Tuple labels;
  nlohmann::json to_json() const;
  friend bool operator==(const NPair&, const NPair&) = default;
};

class MalformedGadget : public Error {
 public:
  using Error::Error;
};

/// L-structure: S's elements carry P, and each fact R_n(a) gets n fresh Q elements
/// forming an n-pair labelling a. Facts are taken symbol by symbol in sorted order.
FinStructure encode(const FinStructure& s, const GradedSignature& g);
/// encode() together with the R_n facts on the P part (an L+ structure).
FinStructure encode_plus(const FinStructure& s, const GradedSignature& g);

/// Elements satisfying P, increasing.
std::vector<int> p_part(const FinStructure& e);

struct NPairScan {
  std::vector<NPair> pairs;
  std::vector<std::string> malformations;
};

/// Recovery by walking H from each lambda element. A walk that branches, a position
/// with two diagonal labels, or two recovered gadgets sharing a cycle element is a
/// malformation. Candidates that fail an n-pair condition are not n-pairs.
NPairScan scan_npairs(const FinStructure& e, const GradedSignature& g);
/// scan_npairs, throwing MalformedGadget on any malformation.
std::vector<NPair> find_npairs(const FinStructure& e, const GradedSignature& g);

/// P part as domain (in increasing order), R_n(a) iff some recovered n-pair labels a.
FinStructure decode(const FinStructure& e, const GradedSignature& g);

/// Whether the elements cycle and labels form an n-pair labelling `labels`.
bool is_npair(const FinStructure& e, const GradedSignature& g, int n, const std::vector<int>& cycle,
              const Tuple& labels);

/// Every n-pair as a set, by search over H paths from lambda elements; no uniqueness
/// assumptions, so gadgets may share elements. Sorted.
std::vector<NPair> search_npairs(const FinStructure& e, const GradedSignature& g);

/// Whether some y makes (x, y) an n-pair labelling x.
bool npair_exists(const FinStructure& e, const GradedSignature& g, int n, const Tuple& x);

struct MembershipReport {
  bool ok = true;
  std::vector<std::string> diagnostics;
  nlohmann::json to_json() const;
};

/// Membership in the encoded class. `e` is over L or over L+ (plus_signature).
/// Checks the shape axioms of T, hands the inner structure on the P part to `inner`,
/// and checks that every n-pair labels a fact of it. Over L the inner structure is
/// the set of labelled tuples.
MembershipReport class_membership(const FinStructure& e, const GradedSignature& g, const ClassOracle& inner);

struct EpReport {
  bool ok = true;
  std::size_t tuples = 0;     // l(n)-tuples over the P part
  std::size_t extension = 0;  // tuples satisfying the existential formula
  std::vector<Tuple> mismatches;
  std::optional<std::string> error;
  nlohmann::json to_json() const;
};

/// Evaluates exists y ((x, y) is an n-pair) on every l(n)-tuple x over the P part
/// and compares the extension with R_n of decode(e). Tuples are in decoded indices.
EpReport ep_define_check(const FinStructure& e, const GradedSignature& g, int n);

struct EncodedAmalgamReport {
  bool pass = true;
  std::size_t pairs_in_b = 0;
  std::size_t pairs_in_c = 0;  // inside the image of C but not of B
  std::size_t cross_pairs = 0;
  MembershipReport membership;
  std::optional<FinStructure> amalgam;
  std::optional<std::string> problem;
  nlohmann::json to_json() const;
};

/// L+ structures a -> b, a -> c. Builds the free amalgam, replaces its inner facts by
/// the inner oracle's amalgam of the inner parts (the lowest-label rule for partition
/// classes, free amalgamation for classes that allow it), checks membership, and
/// locates every n-pair of the result inside the image of b or of c.
EncodedAmalgamReport free_amalgam_membership(const FinStructure& a, const FinStructure& b, std::span<const int> f,
                                             const FinStructure& c, std::span<const int> g,
                                             const GradedSignature& graded, const ClassOracle& inner);

/// Inner part of an L+ structure: induced on p_part, R_n symbols only.
FinStructure inner_part(const FinStructure& e, const GradedSignature& g);

}  // namespace oligo
