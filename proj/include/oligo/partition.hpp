#pragma once

#include <optional>
#include <string>
#include <vector>

#include "oligo/fraisse.hpp"

namespace oligo {

/// Symbol name of P_i^n.
std::string partition_symbol(int n, int i);
/// Symbol name of E^n.
std::string reduct_symbol(int n);

/// Signature {P_i^n : 1 <= i <= n <= N}, ordered by n then i.
Signature partition_signature(int grade);
/// Signature {E^n : n <= N}, E^n of arity 2n.
Signature reduct_signature(int grade);

/// Partition structures of grade N: for each n <= N the relations
/// P_1^n..P_n^n partition the injective n-tuples and hold on nothing else.
class PartitionOracle : public ClassOracle {
 public:
  explicit PartitionOracle(int grade, Caps caps = {});
  int grade() const { return grade_; }

  std::string name() const override { return "partition-" + std::to_string(grade_); }
  bool is_member(const FinStructure& s) const override;
  /// Free amalgam, then label every unlabelled injective tuple with the lowest index.
  Amalgam amalgamate(const FinStructure& a, const FinStructure& b, std::span<const int> f, const FinStructure& c,
                     std::span<const int> g) const override;
  std::optional<std::vector<int>> amalgamate_into(FinStructure& b, const FinStructure& a, std::span<const int> f,
                                                  const FinStructure& c, std::span<const int> g) const override;
  void for_each_extension(const FinStructure& base, std::span<const RequiredFact> required,
                          const ExtensionVisitor& visit) const override;
  std::vector<FinStructure> members(int size) const override;

  /// Label of an injective tuple of length n <= N, 0 if unlabelled.
  int label(const FinStructure& s, const Tuple& t) const;
  /// Adds P_1^n to every injective tuple of length n <= N that has no label yet and mentions
  /// an element >= from (all tuples when from is 0).
  void complete_lowest(FinStructure& s, int from = 0) const;

 private:
  int grade_;
};

/// The class of E-reducts of partition structures of grade N.
class EReductOracle : public ClassOracle {
 public:
  explicit EReductOracle(int grade, Caps caps = {});
  int grade() const { return grade_; }

  std::string name() const override { return "partition-reduct-" + std::to_string(grade_); }
  bool is_member(const FinStructure& s) const override;
  Amalgam amalgamate(const FinStructure& a, const FinStructure& b, std::span<const int> f, const FinStructure& c,
                     std::span<const int> g) const override;
  void for_each_extension(const FinStructure& base, std::span<const RequiredFact> required,
                          const ExtensionVisitor& visit) const override;
  std::vector<FinStructure> members(int size) const override;

  /// A partition structure whose reduct is `s`; classes get labels in order of their least tuple.
  FinStructure lift(const FinStructure& s) const;

 private:
  int grade_;
  PartitionOracle source_;
};

/// E^n(x, y) iff x and y are injective n-tuples with the same label.
FinStructure en_reduct(const PartitionOracle& oracle, const FinStructure& s);

/// Partial permutations sigma_n of {1..n}; images[n-1][i-1] is sigma_n(i), 0 when undefined.
struct ClassAction {
  std::vector<std::vector<int>> images;

  static ClassAction identity(int grade);
  int grade() const { return static_cast<int>(images.size()); }
  bool is_total() const;
  bool is_partial_identity() const;
  nlohmann::json to_json() const;
  static ClassAction from_json(const nlohmann::json& j);
  friend bool operator==(const ClassAction&, const ClassAction&) = default;
};

class ClassActionConflict : public Error {
 public:
  using Error::Error;
};

/// Action of f on labels. Throws ClassActionConflict when f sends one label to two
/// labels or two labels to one, which certifies f is not a reduct partial isomorphism.
ClassAction class_action(const PartitionOracle& oracle, const FinStructure& s, const PartialMap& f);

/// (alpha ∘ beta)_n(i) = alpha_n(beta_n(i)) where both are defined.
ClassAction compose_actions(const ClassAction& alpha, const ClassAction& beta);

bool kernel_check(const PartitionOracle& oracle, const FinStructure& s, const PartialMap& f);

/// Relabels every P_i^n as P_{sigma_n(i)}^n; sigma must be total.
FinStructure relabel(const PartitionOracle& oracle, const FinStructure& s, const ClassAction& sigma);

/// Grade-N member on N points in which the injective n-tuples, in lexicographic
/// order, are labelled 1, 2, .., n, 1, 2, .. so every label occurs.
FinStructure rainbow_member(const PartitionOracle& oracle);

struct RealizationResult {
  BackAndForthCertificate certificate;
  ClassAction action;  // class action of the final map, equal to sigma
};

/// Builds a reduct partial isomorphism with class action sigma and extends it
/// by `depth` back-and-forth steps. Throws if the final action differs from sigma.
RealizationResult realize_class_permutation(const PartitionOracle& oracle, LimitApprox& approx,
                                            const ClassAction& sigma, int depth);

/// m fresh tuples, pairwise disjoint and disjoint from y, each of y's type.
std::vector<Tuple> disjoint_copies(const PartitionOracle& oracle, LimitApprox& approx, const Tuple& y, int m);

struct MixingWitness {
  Tuple d;
  TypeFingerprint ya, da, db;  // types of (y,a), (d,a), (d,b)
  nlohmann::json to_json() const;
};

/// Compatibility of (y, a, b): equal types, distinct entries, y disjoint from a and b,
/// and a equal to b or disjoint from it. Returns the reason when incompatible.
std::optional<std::string> mixing_incompatibility(const FinStructure& s, const Tuple& y, const Tuple& a,
                                                  const Tuple& b);

/// A fresh d with type(y,a) = type(d,a) = type(d,b); throws on incompatible input.
MixingWitness mixing_witness(const PartitionOracle& oracle, LimitApprox& approx, const Tuple& y, const Tuple& a,
                             const Tuple& b);

}  // namespace oligo
