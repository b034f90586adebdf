#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "oligo/error.hpp"

namespace oligo {

using Tuple = std::vector<int>;

struct Symbol {
  std::string name;
  int arity = 1;

  friend bool operator==(const Symbol&, const Symbol&) = default;
};

/// Ordered list of relation symbols with unique names and arities >= 1.
class Signature {
 public:
  Signature() = default;
  explicit Signature(std::vector<Symbol> symbols);

  std::size_t size() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }
  const Symbol& operator[](std::size_t i) const { return symbols_[i]; }
  const std::vector<Symbol>& symbols() const { return symbols_; }

  std::optional<std::size_t> find(std::string_view name) const;
  std::size_t index_of(std::string_view name) const;  // throws if absent

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  std::vector<Symbol> symbols_;
};

/// A finite relational structure on the domain {0, ..., size-1}.
///
/// Relations are stored extensionally as sorted, duplicate-free tuple sets.
/// Nothing is implied: a symmetric relation lists both orientations.
class FinStructure {
 public:
  FinStructure() = default;
  FinStructure(Signature signature, int size);

  const Signature& signature() const { return signature_; }
  int size() const { return size_; }

  const std::set<Tuple>& relation(std::size_t symbol) const { return relations_[symbol]; }
  const std::set<Tuple>& relation(std::string_view name) const;

  bool holds(std::size_t symbol, const Tuple& t) const { return relations_[symbol].contains(t); }
  bool holds(std::string_view name, const Tuple& t) const;

  // Adders do not validate; call validate() on untrusted input.
  void add(std::size_t symbol, Tuple t) { relations_[symbol].insert(std::move(t)); }
  void add(std::string_view name, Tuple t);
  void remove(std::size_t symbol, const Tuple& t) { relations_[symbol].erase(t); }
  int add_element() { return size_++; }
  /// Drops the elements >= new_size and every fact mentioning them.
  void truncate(int new_size);

  std::size_t fact_count() const;

  /// Substructure induced on `elements`, relabelled so elements[i] becomes i.
  FinStructure induced(std::span<const int> elements) const;

  /// Image of this structure under an injective map into a domain of `new_size`.
  FinStructure mapped(std::span<const int> map, int new_size) const;

  friend bool operator==(const FinStructure&, const FinStructure&) = default;

 private:
  Signature signature_;
  int size_ = 0;
  std::vector<std::set<Tuple>> relations_;
};

/// Finite injective partial map between domains.
class PartialMap {
 public:
  PartialMap() = default;
  explicit PartialMap(std::map<int, int> pairs);  // throws unless injective
  static PartialMap total(std::span<const int> images);

  bool defined(int x) const { return pairs_.contains(x); }
  int at(int x) const { return pairs_.at(x); }
  bool in_range(int y) const { return inverse_.contains(y); }
  int preimage(int y) const { return inverse_.at(y); }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }

  void set(int x, int y);  // throws if it would break functionality or injectivity

  const std::map<int, int>& pairs() const { return pairs_; }
  std::vector<int> domain() const;
  std::vector<int> image_of_domain() const;  // images in increasing source order
  Tuple apply(const Tuple& t) const;
  PartialMap inverse() const;
  /// (this ∘ other)(x) = this(other(x)) where both are defined.
  PartialMap compose(const PartialMap& other) const;

  friend bool operator==(const PartialMap& a, const PartialMap& b) { return a.pairs_ == b.pairs_; }

 private:
  std::map<int, int> pairs_;
  std::map<int, int> inverse_;
};

enum class ViolationKind { Arity, OutOfRange, Duplicate, UnknownSymbol };

struct Violation {
  ViolationKind kind;
  std::string symbol;
  Tuple tuple;
  std::string message() const;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate(const FinStructure& s);

/// Checks the raw JSON form, which is where duplicates can actually occur.
ValidationReport validate_json(const nlohmann::json& j);

struct EmbeddingCheck {
  bool ok = false;
  std::string diagnostic;
  explicit operator bool() const { return ok; }
};

/// Induced-substructure embedding test.
EmbeddingCheck is_embedding(const PartialMap& f, const FinStructure& a, const FinStructure& b);
/// Same test for a raw image vector, which may fail to be injective.
EmbeddingCheck is_embedding(std::span<const int> images, const FinStructure& a, const FinStructure& b);

/// All embeddings of `a` into `b` (each as the image vector of 0..|a|-1), in
/// lexicographic order of assignments. Stops after `limit` when given.
std::vector<std::vector<int>> find_embeddings(const FinStructure& a, const FinStructure& b,
                                              std::optional<std::size_t> limit = std::nullopt);

/// Lexicographically least isomorphism, if any.
std::optional<std::vector<int>> are_isomorphic(const FinStructure& a, const FinStructure& b);

struct Amalgam {
  FinStructure d;
  std::vector<int> left;   // embedding B -> D
  std::vector<int> right;  // embedding C -> D
};

/// Free amalgam of f: A -> B and g: A -> C. D's domain is B followed by
/// C \ g(A) in increasing order; D carries exactly the images of B's and C's facts.
Amalgam free_amalgam(const FinStructure& a, const FinStructure& b, std::span<const int> f,
                     const FinStructure& c, std::span<const int> g);
/// free_amalgam written into b itself; returns the embedding C -> b.
std::vector<int> free_amalgam_into(FinStructure& b, const FinStructure& a, std::span<const int> f,
                                   const FinStructure& c, std::span<const int> g);

/// Quantifier-free type of a tuple.
///
/// `pattern` numbers entries by first occurrence (1-based). `facts[s]` lists,
/// for symbol s, every word over the distinct entries (0-based, in pattern
/// order) that lies in the relation. Two tuples have equal fingerprints iff a
/// relation-preserving bijection of their spans maps one onto the other.
struct TypeFingerprint {
  std::vector<int> pattern;
  std::vector<std::vector<Tuple>> facts;

  std::string serialize() const;
  friend bool operator==(const TypeFingerprint&, const TypeFingerprint&) = default;
};

TypeFingerprint qf_type(const FinStructure& s, const Tuple& t);

/// Human-readable first difference between two fingerprints of one signature.
std::optional<std::string> fingerprint_diff(const Signature& sig, const TypeFingerprint& a,
                                            const TypeFingerprint& b);

/// Spans of `t` as distinct entries in order of first occurrence.
std::vector<int> distinct_entries(const Tuple& t);

/// Permutation-minimal relabelling, used to deduplicate enumerations up to
/// isomorphism. Brute force; only for small structures.
FinStructure canonical_form(const FinStructure& s);

// JSON interchange: {"signature":[...],"size":n,"relations":{name:[[...],...]}}
nlohmann::json to_json(const FinStructure& s);
FinStructure structure_from_json(const nlohmann::json& j);  // throws on violations
nlohmann::json to_json(const Signature& sig);
Signature signature_from_json(const nlohmann::json& j);

}  // namespace oligo
