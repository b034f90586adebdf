#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "oligo/error.hpp"

namespace oligo {

using Perm = std::vector<int>;
/// Subgroup or subset of a FinGroup as sorted element indices.
using Subgroup = std::vector<int>;

/// Finite group given by its multiplication table on 0..order-1; 0 is the identity.
class FinGroup {
 public:
  FinGroup();  // trivial group

  /// Closure of permutations of {0..degree-1}. Elements are ordered
  /// lexicographically as image vectors, so the identity comes first.
  static FinGroup generate(const std::vector<Perm>& gens, int degree, std::size_t cap = 100000);
  /// Validates closure, identity, inverses and associativity (exhaustive up to
  /// 128 elements, a fixed sample of triples above). The identity is moved to index 0.
  static FinGroup from_table(const std::vector<std::vector<int>>& table, std::size_t cap = 100000);

  int order() const { return n_; }
  int mul(int a, int b) const { return table_[static_cast<std::size_t>(a) * n_ + b]; }
  int inv(int a) const { return inv_[a]; }
  /// Permutation realization, empty for table groups.
  const std::vector<Perm>& perms() const { return perms_; }
  std::vector<std::vector<int>> table() const;

  nlohmann::json to_json() const;
  static FinGroup from_json(const nlohmann::json& j);
  friend bool operator==(const FinGroup& a, const FinGroup& b) { return a.table_ == b.table_; }

 private:
  int n_ = 1;
  std::vector<int> table_;
  std::vector<int> inv_;
  std::vector<Perm> perms_;
};

/// Image vector of a map between the element indices of two groups.
struct GroupHom {
  std::vector<int> image;
};

bool is_homomorphism(const FinGroup& g, const FinGroup& h, const GroupHom& f);
bool is_isomorphism(const FinGroup& g, const FinGroup& h, const GroupHom& f);
Subgroup kernel(const GroupHom& f);

int element_order(const FinGroup& g, int x);
Subgroup closure(const FinGroup& g, const std::vector<int>& gens);
bool is_subgroup(const FinGroup& g, const Subgroup& s);
bool is_normal(const FinGroup& g, const Subgroup& s);
Subgroup center(const FinGroup& g);
Subgroup commutator_subgroup(const FinGroup& g);
Subgroup intersect(const Subgroup& a, const Subgroup& b);
Subgroup trivial_subgroup();
Subgroup whole(const FinGroup& g);

/// Left cosets xS ordered by their least element.
std::vector<Subgroup> left_cosets(const FinGroup& g, const Subgroup& s);

struct Quotient {
  FinGroup group;             // cosets in least-element order; coset 0 is S
  GroupHom projection;        // element -> coset index
  std::vector<Subgroup> cosets;
};
Quotient quotient(const FinGroup& g, const Subgroup& normal);

/// Subgroup as a group, with the embedding into g.
struct SubgroupGroup {
  FinGroup group;
  GroupHom embedding;
};
SubgroupGroup as_group(const FinGroup& g, const Subgroup& s);

/// Elements (a, b) at index a * |h| + b.
FinGroup direct_product(const FinGroup& g, const FinGroup& h);

/// Every subgroup, sorted by (order, element list). Throws ResourceError above the cap.
std::vector<Subgroup> all_subgroups(const FinGroup& g, int order_cap = 64);
std::vector<Subgroup> normal_subgroups(const FinGroup& g, int order_cap = 64);

/// First subgroup C in enumeration order with |C| = |G|/|F| and C ∩ F trivial.
std::optional<Subgroup> find_complement(const FinGroup& g, const Subgroup& f, int order_cap = 64);

struct KappaResult {
  Quotient quotient;
  GroupHom map;  // coset index -> element of the complement
};
/// gF -> the unique element of gF ∩ F'. Verified to be an isomorphism onto F'.
KappaResult kappa(const FinGroup& g, const Subgroup& f, const Subgroup& complement);

struct GroupInvariants {
  int order = 0;
  std::vector<int> order_profile;  // element orders, sorted
  int center_order = 0;
  int abelianization_order = 0;
  friend bool operator==(const GroupInvariants&, const GroupInvariants&) = default;
};
GroupInvariants invariants(const FinGroup& g);

/// Isomorphism by invariant screening then backtracking over generator images.
std::optional<GroupHom> find_isomorphism(const FinGroup& g, const FinGroup& h);

struct SplitReport {
  bool split = false;
  std::optional<Subgroup> complement;
  bool isomorphism_verified = false;  // G -> (G/F) x F built from kappa, checked elementwise
  int candidates_searched = 0;        // subgroups of order |G|/|F| examined
  bool brute_isomorphic = false;      // G ≅ (G/F) x F by find_isomorphism
  bool agree() const { return split == brute_isomorphic; }
  nlohmann::json to_json() const;
};
SplitReport verify_splitting(const FinGroup& g, const Subgroup& f, int order_cap = 64);

/// Normal subgroups G_0, .., G_N of one group.
struct CosetChain {
  std::vector<Subgroup> members;
  nlohmann::json to_json() const;
};
void validate_chain(const FinGroup& g, const CosetChain& chain);

struct CosetAction {
  int from = 0;
  std::vector<std::pair<int, int>> points;  // (level i, coset index in G/G_i)
  std::vector<Perm> perms;                  // one per group element
  Subgroup kernel;
};
/// Translation action on the union of G/G_i for i >= from.
CosetAction coset_action(const FinGroup& g, const CosetChain& chain, int from = 0);
/// Elements fixing every point of level >= from.
Subgroup stabilizer_of_union(const FinGroup& g, const CosetAction& action, int from);

/// G_0 followed by the preimages of H_1..H_N under G -> G/F. The H_i are given as
/// coset-index subgroups of quotient(g, f). Checks the preconditions and that the
/// intersection over i >= 1 is F and over i >= 0 is trivial.
CosetChain build_chain(const FinGroup& g, const Subgroup& f, const std::vector<Subgroup>& h, const Subgroup& g0);

/// Finite inverse system: groups with surjections maps[k] from groups[from] to groups[to].
struct InverseSystem {
  struct Map {
    int from = 0, to = 0;
    GroupHom hom;
  };
  std::vector<FinGroup> groups;
  std::vector<Map> maps;
};
/// Subgroup of the product made of compatible tuples, ordered lexicographically.
FinGroup truncated_limit(const InverseSystem& system, std::size_t cap = 100000);
/// System of quotients G/N_k with the natural maps G/N_j -> G/N_k whenever N_j ⊆ N_k.
InverseSystem quotient_system(const FinGroup& g, const std::vector<Subgroup>& normals);

struct CatalogueEntry {
  std::string id;
  FinGroup group;
};
/// Every group of order <= 16 once up to isomorphism, plus some of orders 18..24.
const std::vector<CatalogueEntry>& group_catalogue();
const FinGroup& catalogue_group(const std::string& id);

FinGroup cyclic_group(int n);
/// <a, b | a^m, b^k = a^t, b a b^-1 = a^r>, elements a^i b^j at index j*m + i, before sorting.
FinGroup metacyclic_group(int m, int k, int r, int t);
/// N ⋊ Z_k where the generator of Z_k acts by the automorphism `alpha` of N.
FinGroup semidirect_cyclic(const FinGroup& n, int k, const Perm& alpha);

}  // namespace oligo
