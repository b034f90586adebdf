#include <algorithm>
#include <map>
#include <numeric>

#include "doctest.h"
#include "oligo/groups.hpp"

using namespace oligo;

namespace {

// Test-side isomorphism test: every bijection fixing the identity.
bool brute_isomorphic(const FinGroup& g, const FinGroup& h) {
  if (g.order() != h.order()) return false;
  std::vector<int> rest(g.order() - 1);
  std::iota(rest.begin(), rest.end(), 1);
  do {
    bool hom = true;
    auto f = [&](int x) { return x == 0 ? 0 : rest[x - 1]; };
    for (int a = 0; a < g.order() && hom; ++a)
      for (int b = 0; b < g.order() && hom; ++b) hom = f(g.mul(a, b)) == h.mul(f(a), f(b));
    if (hom) return true;
  } while (std::next_permutation(rest.begin(), rest.end()));
  return false;
}

// Subgroups by brute force over subsets (small groups only).
std::vector<Subgroup> brute_subgroups(const FinGroup& g) {
  std::vector<Subgroup> out;
  for (unsigned mask = 1; mask < (1u << g.order()); mask += 2) {
    Subgroup s;
    for (int x = 0; x < g.order(); ++x)
      if (mask >> x & 1) s.push_back(x);
    bool closed = true;
    for (int a : s)
      for (int b : s) closed = closed && std::binary_search(s.begin(), s.end(), g.mul(a, b));
    if (closed) out.push_back(s);
  }
  return out;
}

}  // namespace

TEST_CASE("generate closes permutations") {
  CHECK(FinGroup::generate({{1, 0, 2}}, 3).order() == 2);
  auto s3 = FinGroup::generate({{1, 0, 2}, {1, 2, 0}}, 3);
  CHECK(s3.order() == 6);
  CHECK(s3.perms()[0] == Perm{0, 1, 2});
  CHECK(FinGroup::generate({}, 3).order() == 1);
  CHECK_THROWS_AS(FinGroup::generate({{0, 0, 1}}, 3), Error);
  CHECK_THROWS_AS(FinGroup::generate({{1, 2, 3, 4, 5, 6, 0}}, 7, 5), ResourceError);
  CHECK(brute_isomorphic(s3, catalogue_group("S3")));
  // a table with the identity in the middle is relabelled
  auto t = FinGroup::from_table({{1, 0}, {0, 1}});
  CHECK(t.mul(0, 1) == 1);
  CHECK_THROWS_AS(FinGroup::from_table({{0, 1, 2}, {1, 0, 2}, {2, 2, 0}}), Error);
}

TEST_CASE("catalogue lists each small group once") {
  // numbers of groups of order 1..16
  const std::vector<int> counts{1, 1, 1, 2, 1, 2, 1, 5, 2, 2, 1, 5, 1, 2, 1, 14};
  std::map<int, std::vector<const CatalogueEntry*>> by_order;
  for (const auto& e : group_catalogue()) by_order[e.group.order()].push_back(&e);
  for (int n = 1; n <= 16; ++n) CHECK_MESSAGE(static_cast<int>(by_order[n].size()) == counts[n - 1], n);
  for (auto& [n, list] : by_order)
    for (std::size_t i = 0; i < list.size(); ++i)
      for (std::size_t j = i + 1; j < list.size(); ++j) {
        const bool iso = find_isomorphism(list[i]->group, list[j]->group).has_value();
        CHECK_MESSAGE(!iso, std::string(list[i]->id + " vs " + list[j]->id));
        if (n <= 8) CHECK(!brute_isomorphic(list[i]->group, list[j]->group));
      }
  CHECK(center(catalogue_group("Q8")).size() == 2);
  CHECK(center(catalogue_group("Pauli")).size() == 4);
  CHECK(commutator_subgroup(catalogue_group("A4")).size() == 4);
}

TEST_CASE("find_isomorphism matches brute force") {
  auto c2c2 = direct_product(cyclic_group(2), cyclic_group(2));
  CHECK(find_isomorphism(c2c2, catalogue_group("C2^2")).has_value());
  CHECK_FALSE(find_isomorphism(cyclic_group(4), c2c2).has_value());
  auto s3 = FinGroup::generate({{1, 0, 2}, {1, 2, 0}}, 3);
  auto f = find_isomorphism(s3, catalogue_group("S3"));
  REQUIRE(f);
  CHECK(is_isomorphism(s3, catalogue_group("S3"), *f));
  CHECK(find_isomorphism(direct_product(catalogue_group("S3"), cyclic_group(2)), catalogue_group("D12")).has_value());
}

TEST_CASE("subgroup enumeration matches subsets") {
  for (const char* id : {"C4", "C2^2", "S3", "Q8", "D8", "C2^3"}) {
    const auto& g = catalogue_group(id);
    auto subs = all_subgroups(g);
    auto brute = brute_subgroups(g);
    std::sort(brute.begin(), brute.end());
    auto sorted = subs;
    std::sort(sorted.begin(), sorted.end());
    CHECK_MESSAGE(sorted == brute, id);
  }
  CHECK(all_subgroups(catalogue_group("C2^3")).size() == 16);
  CHECK_THROWS_AS(all_subgroups(catalogue_group("S4"), 16), ResourceError);
}

TEST_CASE("quotients") {
  const auto& s3 = catalogue_group("S3");
  CHECK(quotient(s3, whole(s3)).group.order() == 1);
  auto copy = quotient(s3, trivial_subgroup());
  CHECK(copy.group.order() == 6);
  CHECK(find_isomorphism(copy.group, s3).has_value());
  Subgroup a3;
  for (const auto& s : all_subgroups(s3))
    if (s.size() == 3) a3 = s;
  auto q = quotient(s3, a3);
  CHECK(q.group.order() == 2);
  CHECK(kernel(q.projection) == a3);
  CHECK(is_homomorphism(s3, q.group, q.projection));
  Subgroup reflection;
  for (const auto& s : all_subgroups(s3))
    if (s.size() == 2) reflection = s;
  CHECK_THROWS_AS(quotient(s3, reflection), Error);
}

TEST_CASE("complements and kappa") {
  auto c2c2 = direct_product(cyclic_group(2), cyclic_group(2));
  Subgroup first{0, 2}, second{0, 1};
  auto comp = find_complement(c2c2, first);
  REQUIRE(comp);
  CHECK(*comp == second);
  auto k = kappa(c2c2, first, second);
  CHECK(k.quotient.group.order() == 2);
  CHECK(k.map.image[0] == 0);
  CHECK(k.map.image[1] == 1);

  const auto& z4 = catalogue_group("C4");
  CHECK_FALSE(find_complement(z4, Subgroup{0, 2}).has_value());

  auto s3z2 = direct_product(catalogue_group("S3"), cyclic_group(2));
  Subgroup f{0, 1};
  auto c = find_complement(s3z2, f);
  REQUIRE(c);
  CHECK(*c == Subgroup{0, 2, 4, 6, 8, 10});
  auto ks = kappa(s3z2, f, *c);
  CHECK(find_isomorphism(ks.quotient.group, catalogue_group("S3")).has_value());
  for (int x : *c) CHECK(ks.map.image[ks.quotient.projection.image[x]] == x);
  CHECK_THROWS_AS(kappa(s3z2, Subgroup{0, 2, 4}, Subgroup{0, 1}), Error);
}

TEST_CASE("splitting fixtures") {
  auto z4 = verify_splitting(catalogue_group("C4"), Subgroup{0, 2});
  CHECK_FALSE(z4.split);
  CHECK_FALSE(z4.brute_isomorphic);
  CHECK(z4.candidates_searched == 1);

  const auto& q8 = catalogue_group("Q8");
  auto q = verify_splitting(q8, center(q8));
  CHECK_FALSE(q.split);
  CHECK(q.agree());

  auto s3z2 = direct_product(catalogue_group("S3"), cyclic_group(2));
  auto s = verify_splitting(s3z2, Subgroup{0, 1});
  CHECK(s.split);
  CHECK(s.isomorphism_verified);
  CHECK(s.agree());
  CHECK_THROWS_AS(verify_splitting(catalogue_group("S3"), Subgroup{0, 1, 2}), Error);
}

TEST_CASE("coset actions and stabilizers") {
  auto s3z2 = direct_product(catalogue_group("S3"), cyclic_group(2));
  auto regular = coset_action(s3z2, CosetChain{{trivial_subgroup()}});
  CHECK(regular.kernel == trivial_subgroup());
  CHECK(regular.points.size() == 12);
  auto point = coset_action(s3z2, CosetChain{{whole(s3z2)}});
  CHECK(point.kernel == whole(s3z2));

  Subgroup a3e{0, 2, 4}, s3e{0, 2, 4, 6, 8, 10};
  CosetChain chain{{a3e, s3e}};
  auto act = coset_action(s3z2, chain);
  CHECK(act.kernel == a3e);
  CHECK(act.points.size() == 4 + 2);
  CHECK(stabilizer_of_union(s3z2, act, 1) == s3e);
  CHECK(stabilizer_of_union(s3z2, act, 2) == whole(s3z2));
  // each permutation is a bijection of the points
  for (const auto& p : act.perms) {
    auto sorted = p;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> id(p.size());
    std::iota(id.begin(), id.end(), 0);
    CHECK(sorted == id);
  }
}

TEST_CASE("build_chain lifts quotient subgroups") {
  auto s3z2 = direct_product(catalogue_group("S3"), cyclic_group(2));
  Subgroup f{0, 1};
  auto chain = build_chain(s3z2, f, {trivial_subgroup()}, trivial_subgroup());
  REQUIRE(chain.members.size() == 2);
  CHECK(chain.members[1] == f);
  auto act = coset_action(s3z2, chain);
  CHECK(act.kernel == trivial_subgroup());
  CHECK(stabilizer_of_union(s3z2, act, 1) == f);

  // F trivial: G_i are the H_i themselves
  const auto& s3 = catalogue_group("S3");
  Subgroup a3{0, 1, 2};
  auto plain = build_chain(s3, trivial_subgroup(), {a3, trivial_subgroup()}, trivial_subgroup());
  CHECK(plain.members[1] == a3);
  CHECK_THROWS_AS(build_chain(s3z2, f, {trivial_subgroup()}, Subgroup{0, 1}), Error);
  CHECK_THROWS_AS(build_chain(s3z2, f, {Subgroup{0, 1}}, trivial_subgroup()), Error);
}

TEST_CASE("truncated limits") {
  const auto& s3 = catalogue_group("S3");
  InverseSystem single{{s3}, {}};
  CHECK(truncated_limit(single) == s3);

  const auto& z4 = catalogue_group("C4");
  auto chain = quotient_system(z4, {Subgroup{0, 2}, trivial_subgroup()});
  REQUIRE(chain.maps.size() == 1);
  auto lim = truncated_limit(chain);
  CHECK(lim.order() == 4);
  CHECK(brute_isomorphic(lim, z4));

  // S3 -> S3/A3 with trivial kernel intersection
  auto two = quotient_system(s3, {Subgroup{0, 1, 2}, trivial_subgroup()});
  CHECK(brute_isomorphic(truncated_limit(two), s3));
  // C6 from C2 and C3 over the trivial quotient
  const auto& c6 = catalogue_group("C6");
  auto diamond = quotient_system(c6, {Subgroup{0, 2, 4}, Subgroup{0, 3}, whole(c6)});
  CHECK(diamond.maps.size() == 2);
  CHECK(brute_isomorphic(truncated_limit(diamond), c6));
  // without the finest levels the limit is a proper quotient
  auto coarse = quotient_system(c6, {Subgroup{0, 2, 4}, whole(c6)});
  CHECK(truncated_limit(coarse).order() == 2);
}
