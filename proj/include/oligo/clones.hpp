#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "oligo/structures.hpp"

namespace oligo {

/// k-ary operation on {0..d-1}. The value of (x_1..x_k) sits at index
/// x_1 d^(k-1) + .. + x_k (first argument most significant). Coordinates are 0-based.
struct FinOperation {
  int d = 2;
  int k = 1;
  std::vector<int> table;

  static FinOperation projection(int d, int k, int i);
  static FinOperation constant(int d, int k, int c);
  static FinOperation from_function(int d, int k, const std::function<int(const std::vector<int>&)>& f);
  int operator()(const std::vector<int>& args) const;
  void validate() const;  // throws unless total with values in range

  nlohmann::json to_json() const;  // {"d":..,"k":..,"table":[..]}
  static FinOperation from_json(const nlohmann::json& j);
  friend bool operator==(const FinOperation&, const FinOperation&) = default;
  friend auto operator<=>(const FinOperation&, const FinOperation&) = default;
};

/// g(x_1..x_k) = f(x_{slots[0]}, .., x_{slots[arity-1]}); slots must be distinct and < k.
FinOperation add_dummies(const FinOperation& f, int k, const std::vector<int>& slots);

/// f(g_1, .., g_k) for g_i of a common arity.
FinOperation compose(const FinOperation& f, const std::vector<FinOperation>& gs);

struct EssentialCoordinates {
  bool essentially_unary = false;
  std::vector<int> coordinates;  // those f depends on
};
EssentialCoordinates is_essentially_unary(const FinOperation& f);

/// Unary u with f(x) = u(x_i) for the essential coordinate i (or constant); nullopt otherwise.
std::optional<FinOperation> unary_core(const FinOperation& f);

/// Unary operations containing the identity, closed under composition.
class FunctionMonoid {
 public:
  explicit FunctionMonoid(std::vector<FinOperation> elements);  // checks closure and identity
  static FunctionMonoid generated(int d, const std::vector<FinOperation>& gens);
  static FunctionMonoid full(int d);  // all d^d unary maps

  int d() const { return d_; }
  const std::vector<FinOperation>& elements() const { return elements_; }
  std::optional<std::size_t> index_of(const FinOperation& u) const;
  bool contains(const FinOperation& u) const { return index_of(u).has_value(); }

 private:
  int d_ = 0;
  std::vector<FinOperation> elements_;  // sorted
};

/// Clone generated by a monoid: operations that depend on at most one coordinate with core in M.
class CloneHandle {
 public:
  explicit CloneHandle(FunctionMonoid m) : monoid_(std::move(m)) {}
  const FunctionMonoid& monoid() const { return monoid_; }
  bool contains(const FinOperation& f) const;
  /// All members of arity k, in table order.
  std::vector<FinOperation> members(int k) const;

 private:
  FunctionMonoid monoid_;
};

CloneHandle clone_from_monoid(const FunctionMonoid& m);

/// All k-ary polymorphisms of S in table order. Throws ResourceError above the cap on d^(d^k).
std::vector<FinOperation> polymorphisms(const FinStructure& s, int k, std::size_t cap = 1u << 20);
bool preserves(const FinOperation& f, const FinStructure& s);

/// ({0..d-1}; R) with R(x, y, a, b) iff x = y or a = b.
FinStructure r_gadget(int d);

using CloneMap = std::function<std::optional<FinOperation>(const FinOperation&)>;

struct CloneHomReport {
  bool pass = true;
  std::size_t composites = 0;
  std::size_t projections = 0;
  std::optional<std::string> violation;
  nlohmann::json to_json() const;
};

/// Checks xi(f(g_1..g_n)) = xi(f)(xi(g_1)..xi(g_n)) over every f in `samples` and
/// every tuple of samples of a common arity, then xi(pi^k_i) = pi^k_i for k up to max_arity.
CloneHomReport check_clone_homomorphism(const CloneMap& xi, const std::vector<FinOperation>& samples, int max_arity);

class RejectedIso : public Error {
 public:
  RejectedIso(const std::string& what, FinOperation witness) : Error(what), witness(std::move(witness)) {}
  FinOperation witness;
};

/// Extension of a monoid isomorphism xi0: M -> N (image[i] is the index in N of
/// xi0(M.elements()[i])) to the generated clones: projections are fixed, and an
/// operation with core u at coordinate i goes to the operation with core xi0(u) at i.
/// Throws RejectedIso when xi0 is not a bijective homomorphism or fails to send
/// constants to constants in either direction.
CloneMap extend_monoid_iso(const FunctionMonoid& m, const FunctionMonoid& n, const std::vector<std::size_t>& image);

}  // namespace oligo
