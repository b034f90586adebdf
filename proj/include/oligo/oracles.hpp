#pragma once

#include <functional>
#include <string>

#include "oligo/fraisse.hpp"

namespace oligo {

/// Every finite structure of the signature. Amalgamates freely.
class AllStructuresClass : public ClassOracle {
 public:
  using ClassOracle::ClassOracle;
  std::string name() const override { return "all-structures"; }
  bool is_member(const FinStructure&) const override { return true; }
  Amalgam amalgamate(const FinStructure& a, const FinStructure& b, std::span<const int> f, const FinStructure& c,
                     std::span<const int> g) const override {
    return free_amalgam(a, b, f, c, g);
  }
};

/// Finite simple graphs (symmetric irreflexive E). Amalgamates freely.
class RandomGraphClass : public ClassOracle {
 public:
  explicit RandomGraphClass(Caps caps = {});
  std::string name() const override { return "random-graph"; }
  bool is_member(const FinStructure& s) const override;
  Amalgam amalgamate(const FinStructure& a, const FinStructure& b, std::span<const int> f, const FinStructure& c,
                     std::span<const int> g) const override;
  void for_each_extension(const FinStructure& base, std::span<const RequiredFact> required,
                          const ExtensionVisitor& visit) const override;
  std::vector<FinStructure> members(int size) const override;
};

/// Simple graphs without isolated vertices. Not hereditary.
class NoIsolatedGraphClass : public RandomGraphClass {
 public:
  using RandomGraphClass::RandomGraphClass;
  std::string name() const override { return "no-isolated-graph"; }
  bool is_member(const FinStructure& s) const override;
  Amalgam amalgamate(const FinStructure& a, const FinStructure& b, std::span<const int> f, const FinStructure& c,
                     std::span<const int> g) const override;
  void for_each_extension(const FinStructure& base, std::span<const RequiredFact> required,
                          const ExtensionVisitor& visit) const override;
  std::vector<FinStructure> members(int size) const override;
};

/// Strict linear orders in "<". Amalgamates by search.
class LinearOrderClass : public ClassOracle {
 public:
  explicit LinearOrderClass(Caps caps = {});
  std::string name() const override { return "linear-order"; }
  bool is_member(const FinStructure& s) const override;
  void for_each_extension(const FinStructure& base, std::span<const RequiredFact> required,
                          const ExtensionVisitor& visit) const override;
  std::vector<FinStructure> members(int size) const override;
};

/// Class given by a membership predicate; everything else is generic.
class PredicateClass : public ClassOracle {
 public:
  PredicateClass(std::string name, Signature sig, std::function<bool(const FinStructure&)> pred, Caps caps = {})
      : ClassOracle(std::move(sig), caps), name_(std::move(name)), pred_(std::move(pred)) {}
  std::string name() const override { return name_; }
  bool is_member(const FinStructure& s) const override { return pred_(s); }

 private:
  std::string name_;
  std::function<bool(const FinStructure&)> pred_;
};

/// Another class read over a signature with the same arities in the same order.
/// Membership, amalgamation and extensions are delegated through the renaming.
class RenamedClass : public ClassOracle {
 public:
  RenamedClass(const ClassOracle& base, Signature renamed);
  std::string name() const override { return base_.name(); }
  bool is_member(const FinStructure& s) const override;
  Amalgam amalgamate(const FinStructure& a, const FinStructure& b, std::span<const int> f, const FinStructure& c,
                     std::span<const int> g) const override;
  void for_each_extension(const FinStructure& base, std::span<const RequiredFact> required,
                          const ExtensionVisitor& visit) const override;
  std::vector<FinStructure> members(int size) const override;

 private:
  FinStructure to_base(const FinStructure& s) const;
  FinStructure from_base(const FinStructure& s) const;
  const ClassOracle& base_;
};

/// Members of size n from one-point extensions of members of size n-1,
/// deduplicated up to isomorphism. Complete for hereditary classes.
std::vector<FinStructure> members_by_extension(const ClassOracle& oracle, int size);

}  // namespace oligo
