#include "doctest.h"
#include "oligo/encoding.hpp"
#include "oligo/oracles.hpp"
#include "oligo/partition.hpp"
#include "test_util.hpp"

using namespace oligo;
using namespace testutil;

namespace {

// R_1 (l=1), R_2 (l=2), R_3 (l=3)
GradedSignature uet() { return pad_signature(Signature({{"U", 1}, {"E", 2}, {"T", 3}})); }

FinStructure inner(const GradedSignature& g, int size, std::vector<std::pair<int, Tuple>> facts) {
  FinStructure s(g.signature(), size);
  for (auto& [n, t] : facts) s.add(*g.find(n), t);
  return s;
}

}  // namespace

TEST_CASE("pad_signature picks the smallest free index") {
  auto one = pad_signature(Signature({{"E", 2}}));
  REQUIRE(one.entries().size() == 1);
  CHECK(one.entries()[0].n == 2);
  CHECK(one.entries()[0].arity == 2);

  auto two = pad_signature(Signature({{"E", 2}, {"F", 2}}));
  CHECK(two.entries()[0].n == 2);
  CHECK(two.entries()[1].n == 3);
  CHECK(two.entries()[1].arity == 2);

  auto unary = pad_signature(Signature({{"U", 1}, {"V", 1}}));
  CHECK(unary.entries()[0].n == 1);
  CHECK(unary.entries()[1].n == 2);
  CHECK(unary.entries()[1].arity == 1);
  CHECK(unary.signature()[1].name == "R_2");
  CHECK_THROWS_AS(GradedSignature({{2, 3, "X"}}), Error);
}

TEST_CASE("encode builds one gadget per fact") {
  auto g = pad_signature(Signature({{"E", 2}}));
  CHECK(encode(FinStructure(g.signature(), 0), g).size() == 0);

  auto e = encode(inner(g, 2, {{2, {0, 1}}}), g);
  // written out by hand: a=0, b=1, c1=2, c2=3
  FinStructure want(enc_signature(), 4);
  want.add("P", {0});
  want.add("P", {1});
  want.add("Q", {2});
  want.add("Q", {3});
  want.add("H", {2, 3});
  want.add("H", {3, 2});
  want.add("lambda", {2});
  want.add("rho", {3});
  want.add("S", {2, 2, 0, 0});
  want.add("S", {2, 3, 0, 1});
  want.add("S", {3, 2, 1, 0});
  want.add("S", {3, 3, 1, 1});
  CHECK(e == want);

  auto two = encode(inner(g, 4, {{2, {0, 1}}, {2, {2, 3}}}), g);
  CHECK(two.size() == 4 + 2 + 2);
  auto pairs = find_npairs(two, g);
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0].cycle != pairs[1].cycle);
}

TEST_CASE("find_npairs recovers gadgets and reports malformations") {
  auto g = uet();
  auto s = inner(g, 2, {{3, {1, 0, 1}}});
  auto e = encode(s, g);
  auto pairs = find_npairs(e, g);
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].n == 3);
  CHECK(pairs[0].labels == Tuple{1, 0, 1});

  // H cycle without lambda
  auto no_lambda = e;
  no_lambda.remove(enc_signature().index_of("lambda"), {pairs[0].cycle[0]});
  CHECK(find_npairs(no_lambda, g).empty());
  CHECK(search_npairs(no_lambda, g).empty());

  // a second gadget glued onto the first cycle element
  auto shared = encode(inner(g, 2, {{2, {0, 1}}}), g);
  int c1 = 2;
  int extra = shared.add_element();
  shared.add("Q", {extra});
  shared.add("H", {c1, extra});
  shared.add("H", {extra, c1});
  shared.add("rho", {extra});
  shared.add("S", {extra, extra, 1, 1});
  shared.add("S", {c1, extra, 0, 1});
  shared.add("S", {extra, c1, 1, 0});
  CHECK_THROWS_AS(find_npairs(shared, g), MalformedGadget);
  CHECK_FALSE(scan_npairs(shared, g).malformations.empty());
  // as sets, both gadgets are n-pairs
  CHECK(search_npairs(shared, g).size() == 2);

  // two labels at one position
  auto twice = encode(inner(g, 2, {{1, {0}}}), g);
  twice.add("S", {2, 2, 1, 1});
  CHECK_THROWS_AS(decode(twice, g), MalformedGadget);
}

TEST_CASE("decode inverts encode") {
  auto g = uet();
  auto s = inner(g, 3, {{1, {2}}, {2, {0, 1}}, {2, {1, 1}}, {3, {0, 1, 2}}});
  CHECK(decode(encode(s, g), g) == s);
  CHECK(decode(encode_plus(s, g), g) == s);
  CHECK(inner_part(encode_plus(s, g), g) == s);

  FinStructure bare(enc_signature(), 2);
  bare.add("P", {0});
  bare.add("P", {1});
  CHECK(decode(bare, g).fact_count() == 0);

  // two gadgets labelling the same tuple give one fact
  auto e = encode(inner(g, 2, {{2, {0, 1}}}), g);
  const int base = e.size();
  for (int i = 0; i < 2; ++i) e.add("Q", {e.add_element()});
  e.add("H", {base, base + 1});
  e.add("H", {base + 1, base});
  e.add("lambda", {base});
  e.add("rho", {base + 1});
  e.add("S", {base, base, 0, 0});
  e.add("S", {base, base + 1, 0, 1});
  e.add("S", {base + 1, base, 1, 0});
  e.add("S", {base + 1, base + 1, 1, 1});
  CHECK(find_npairs(e, g).size() == 2);
  CHECK(decode(e, g) == inner(g, 2, {{2, {0, 1}}}));
}

TEST_CASE("class membership") {
  auto g = uet();
  AllStructuresClass all(g.signature());
  CHECK(class_membership(FinStructure(enc_signature(), 0), g, all).ok);
  auto s = inner(g, 2, {{2, {0, 1}}, {1, {1}}});
  CHECK(class_membership(encode(s, g), g, all).ok);
  CHECK(class_membership(encode_plus(s, g), g, all).ok);

  // inner class without loops of E rejects R_2(a, a)
  PredicateClass loopless("loopless", g.signature(), [](const FinStructure& x) {
    for (const auto& t : x.relation(1))
      if (t[0] == t[1]) return false;
    return true;
  });
  CHECK(class_membership(encode(s, g), g, loopless).ok);
  auto loop = encode(inner(g, 1, {{2, {0, 0}}}), g);
  CHECK_FALSE(class_membership(loop, g, loopless).ok);

  // L+ with a gadget whose fact is missing
  auto plus = encode_plus(s, g);
  plus.remove(plus.signature().index_of("R_2"), {0, 1});
  CHECK_FALSE(class_membership(plus, g, all).ok);

  // shape axiom: an element that is both P and Q
  auto both = encode(s, g);
  both.add("Q", {0});
  CHECK_FALSE(class_membership(both, g, all).ok);
}

TEST_CASE("existential positive definition of R_n") {
  auto g = uet();
  CHECK(ep_define_check(FinStructure(enc_signature(), 0), g, 2).ok);
  auto s = inner(g, 3, {{1, {2}}, {2, {0, 1}}, {2, {2, 2}}, {3, {0, 0, 1}}});
  auto e = encode(s, g);
  for (int n : {1, 2, 3}) {
    auto r = ep_define_check(e, g, n);
    CHECK_MESSAGE(r.ok, r.to_json().dump());
  }
  CHECK(ep_define_check(e, g, 2).extension == 2);
  CHECK(ep_define_check(e, g, 3).tuples == 27);

  // removing one H edge breaks the gadget for both readings
  auto pairs = find_npairs(e, g);
  auto broken = e;
  const auto& p = pairs[1];
  REQUIRE(p.n == 2);
  broken.remove(enc_signature().index_of("H"), {p.cycle[1], p.cycle[0]});
  CHECK_FALSE(npair_exists(broken, g, 2, p.labels));
  CHECK(decode(broken, g).relation(1).size() == 1);
  CHECK(ep_define_check(broken, g, 2).ok);
}

TEST_CASE("free amalgamation of encoded members") {
  auto g = uet();
  AllStructuresClass all(g.signature());
  auto b = encode_plus(inner(g, 2, {{2, {0, 1}}}), g);
  auto c = encode_plus(inner(g, 2, {{1, {1}}}), g);
  FinStructure empty(plus_signature(g), 0);
  auto r = free_amalgam_membership(empty, b, std::vector<int>{}, c, std::vector<int>{}, g, all);
  CHECK_MESSAGE(r.pass, r.to_json().dump());
  CHECK(r.amalgam->size() == b.size() + c.size());
  CHECK(r.pairs_in_b == 1);
  CHECK(r.pairs_in_c == 1);

  // glue along the full P part of b
  std::vector<int> pa{0, 1};
  auto a = b.induced(pa);
  auto glued = free_amalgam_membership(a, b, pa, b, pa, g, all);
  CHECK(glued.pass);
  CHECK(glued.amalgam->size() == 6);

  // glue along a cycle element: overlap is allowed for set-based n-pairs
  std::vector<int> one{2};
  auto point = b.induced(one);
  auto shared = free_amalgam_membership(point, b, one, b, one, g, all);
  CHECK_MESSAGE(shared.pass, shared.to_json().dump());
  CHECK(shared.cross_pairs == 0);

  // partition inner class: the amalgam gets lowest labels on new pairs
  PartitionOracle part(2);
  auto pg = pad_signature(part.signature());
  auto point_member = [&](int label) {
    FinStructure s(pg.signature(), 2);
    s.add(0, {0});
    s.add(0, {1});
    s.add(label, {0, 1});
    s.add(label, {1, 0});
    return encode_plus(s, pg);
  };
  auto pb = point_member(1), pc = point_member(2);
  std::vector<int> z{0};
  auto pr = free_amalgam_membership(pb.induced(z), pb, z, pc, z, pg, part);
  CHECK_MESSAGE(pr.pass, pr.to_json().dump());
  CHECK(inner_part(*pr.amalgam, pg).relation(1).size() == 2 + 2);
}
