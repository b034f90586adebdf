#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "oligo/clones.hpp"
#include "oligo/encoding.hpp"
#include "oligo/enumerate.hpp"
#include "oligo/groups.hpp"
#include "oligo/oracles.hpp"
#include "oligo/partition.hpp"
#include "oligo/suite.hpp"

namespace oligo {

using nlohmann::json;

// ------------------------------------------------------------------ config

Caps SuiteConfig::caps() const {
  Caps c;
  c.max_member_size = cap_size;
  c.max_elements = static_cast<std::size_t>(cap_elems);
  return c;
}

void SuiteConfig::validate() const {
  for (int v : {bound, grade, depth, sigma_grade, mix_rounds, kernel_bound, encode_bound, amalgam_bound, order_bound,
                limit_bound, gadget_arity2, gadget_arity3, iso_arity, cap_size, cap_elems, jobs})
    if (v <= 0) throw Error("config: bounds, caps and jobs must be positive");
  if (out.empty()) throw Error("config: empty output directory");
}

json SuiteConfig::to_json() const {
  return {{"bound", bound},
          {"grade", grade},
          {"depth", depth},
          {"sigma_grade", sigma_grade},
          {"mix_rounds", mix_rounds},
          {"kernel_bound", kernel_bound},
          {"encode_bound", encode_bound},
          {"amalgam_bound", amalgam_bound},
          {"order_bound", order_bound},
          {"limit_bound", limit_bound},
          {"gadget_arity2", gadget_arity2},
          {"gadget_arity3", gadget_arity3},
          {"iso_arity", iso_arity},
          {"cap_size", cap_size},
          {"cap_elems", cap_elems},
          {"seed", seed}};
}

SuiteConfig SuiteConfig::from_json(const json& j) {
  SuiteConfig c;
  if (j.is_null()) return c;
  if (!j.is_object()) throw Error("config: expected a JSON object");
  std::map<std::string, int*> ints{{"bound", &c.bound},
                                   {"grade", &c.grade},
                                   {"depth", &c.depth},
                                   {"sigma_grade", &c.sigma_grade},
                                   {"mix_rounds", &c.mix_rounds},
                                   {"kernel_bound", &c.kernel_bound},
                                   {"encode_bound", &c.encode_bound},
                                   {"amalgam_bound", &c.amalgam_bound},
                                   {"order_bound", &c.order_bound},
                                   {"limit_bound", &c.limit_bound},
                                   {"gadget_arity2", &c.gadget_arity2},
                                   {"gadget_arity3", &c.gadget_arity3},
                                   {"iso_arity", &c.iso_arity},
                                   {"cap_size", &c.cap_size},
                                   {"cap_elems", &c.cap_elems},
                                   {"jobs", &c.jobs}};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (auto p = ints.find(it.key()); p != ints.end()) *p->second = it.value().get<int>();
    else if (it.key() == "out") c.out = it.value().get<std::string>();
    else if (it.key() == "seed") c.seed = it.value().get<std::uint64_t>();
    else throw Error("config: unknown key " + it.key());
  }
  c.validate();
  return c;
}

// ----------------------------------------------------------------- helpers

namespace {

constexpr std::size_t kMaxFailures = 5;

struct Tally {
  std::size_t instances = 0;
  std::size_t failed = 0;
  json failures = json::array();
  void fail(json why) {
    ++failed;
    if (failures.size() < kMaxFailures) failures.push_back(std::move(why));
  }
};

json finish(const std::string& name, bool pass, json stats, const Tally* tally = nullptr) {
  json j{{"check", name}, {"pass", pass}, {"stats", std::move(stats)}};
  if (tally) {
    j["stats"]["instances"] = tally->instances;
    j["stats"]["failed"] = tally->failed;
    if (!tally->failures.empty()) j["failures"] = tally->failures;
  }
  return j;
}

// Injective tuples of length len over 0..n-1, lexicographic.
std::vector<Tuple> injective_tuples(int n, int len) {
  std::vector<Tuple> out;
  for_each_word(iota_vector(n), len, [&](const std::vector<int>& w) {
    if (static_cast<int>(distinct_entries(w).size()) == len) out.push_back(w);
    return true;
  });
  return out;
}

// Every labelled partition structure of the grade on `size` points: each injective
// n-tuple (n <= grade) gets one of the labels 1..n.
std::vector<FinStructure> labelled_partition_members(int grade, int size) {
  std::vector<std::pair<int, Tuple>> slots;
  for (int n = 1; n <= std::min(grade, size); ++n)
    for (auto& t : injective_tuples(size, n)) slots.emplace_back(n, t);
  std::vector<int> label(slots.size(), 1);
  std::vector<FinStructure> out;
  while (true) {
    FinStructure s(partition_signature(grade), size);
    for (std::size_t i = 0; i < slots.size(); ++i) s.add(partition_symbol(slots[i].first, label[i]), slots[i].second);
    out.push_back(std::move(s));
    std::size_t i = slots.size();
    while (i > 0 && label[i - 1] == slots[i - 1].first) label[--i] = 1;
    if (i == 0) break;
    ++label[i - 1];
  }
  return out;
}

// Extensional label preservation: every fact inside dom(f) holds iff its image holds.
bool preserves_facts(const FinStructure& s, const PartialMap& f) {
  const auto dom = f.domain();
  for (std::size_t sym = 0; sym < s.signature().size(); ++sym) {
    bool ok = true;
    for_each_word(dom, s.signature()[sym].arity, [&](const std::vector<int>& w) {
      ok = s.holds(sym, w) == s.holds(sym, f.apply(w));
      return ok;
    });
    if (!ok) return false;
  }
  return true;
}

std::vector<PartialMap> partial_injections(int n) {
  std::vector<PartialMap> out;
  for (int k = 0; k <= n; ++k)
    for_each_combination(n, k, [&](const std::vector<int>& dom) {
      for (auto& img : injective_tuples(n, k)) {
        std::map<int, int> m;
        for (int i = 0; i < k; ++i) m[dom[i]] = img[i];
        out.emplace_back(m);
      }
      return true;
    });
  return out;
}

Tuple concat(const Tuple& a, const Tuple& b) {
  Tuple t = a;
  t.insert(t.end(), b.begin(), b.end());
  return t;
}

// ------------------------------------------------------------- the checks

json check_fraisse_axioms(const SuiteConfig& c) {
  PartitionOracle o(c.grade, c.caps());
  json stats = json::object();
  bool pass = true;
  for (auto* fn : {&check_hp, &check_jep, &check_ap}) {
    auto r = fn(o, c.bound);
    pass = pass && r.pass && r.disagreements == 0;
    stats[r.property] = r.to_json();
  }
  stats["class"] = o.name();
  return finish("fraisse.axioms", pass, stats);
}

json check_fraisse_orbits(const SuiteConfig& c) {
  json stats = json::object();
  bool pass = true;
  auto one = [&](const ClassOracle& o, std::size_t expected) {
    const auto brute = brute_force_type_count(o, 2);  // independent count first
    LimitApprox approx(o.signature());
    saturate(o, approx, 1, 1);
    auto count = count_orbits(o, approx, 2);
    const bool ok = brute == expected && count.count == brute && count.count_after_extra_round == count.count;
    pass = pass && ok;
    stats[o.name()] = {{"brute", brute},
                       {"count", count.count},
                       {"after_extra_round", count.count_after_extra_round},
                       {"expected", expected},
                       {"approx_size", approx.current().size()},
                       {"pass", ok}};
  };
  one(RandomGraphClass(c.caps()), 3);
  // k = 2 types: the diagonal pair, plus the four labellings of (x,y),(y,x) once N >= 2
  std::size_t expected = c.grade >= 2 ? 1 + 4 : 2;
  one(PartitionOracle(c.grade, c.caps()), expected);
  return finish("fraisse.orbits", pass, stats);
}

json check_partition_realize(const SuiteConfig& c) {
  PartitionOracle o(c.sigma_grade, c.caps());
  Tally t;
  json certs = json::array();
  std::vector<std::vector<int>> rows(c.sigma_grade);
  for (int n = 1; n <= c.sigma_grade; ++n) {
    rows[n - 1].resize(n);
    std::iota(rows[n - 1].begin(), rows[n - 1].end(), 1);
  }
  // odometer over the product of Sym(n), each factor in lexicographic order
  std::function<void(int)> walk = [&](int n) {
    if (n > c.sigma_grade) {
      ClassAction sigma{rows};
      ++t.instances;
      LimitApprox approx(o.signature());
      try {
        auto r = realize_class_permutation(o, approx, sigma, c.depth);
        const bool steps_ok = static_cast<int>(r.certificate.steps.size()) == c.depth;
        const bool verified = verify_back_and_forth(approx.current(), r.certificate,
                                                    [&](const FinStructure& s) { return en_reduct(o, s); });
        const bool replayed = replay_log(o, approx.log()) == approx.current();
        const bool action_ok = class_action(o, approx.current(), r.certificate.final_map) == sigma;
        if (!(r.action == sigma && steps_ok && verified && replayed && action_ok))
          t.fail({{"sigma", sigma.to_json()}, {"verified", verified}, {"replayed", replayed}, {"action", action_ok}});
        certs.push_back({{"sigma", sigma.to_json()},
                         {"approx_size", approx.current().size()},
                         {"events", approx.log().size()},
                         {"certificate", r.certificate.to_json()}});
      } catch (const Error& e) {
        t.fail({{"sigma", sigma.to_json()}, {"error", e.what()}});
      }
      return;
    }
    auto& row = rows[n - 1];
    std::sort(row.begin(), row.end());
    do walk(n + 1);
    while (std::next_permutation(row.begin(), row.end()));
  };
  walk(1);
  std::size_t expected = 1;
  for (int n = 2; n <= c.sigma_grade; ++n)
    for (int m = 2; m <= n; ++m) expected *= m;
  json stats{{"grade", c.sigma_grade}, {"depth", c.depth}, {"group_order", expected}, {"realizations", certs}};
  return finish("partition.realize", t.failed == 0 && t.instances == expected, stats, &t);
}

json check_partition_kernel(const SuiteConfig& c) {
  PartitionOracle o(c.grade, c.caps());
  Tally t;
  std::size_t in_kernel = 0, members = 0;
  for (int n = 1; n <= c.kernel_bound; ++n) {
    auto maps = partial_injections(n);
    for (auto& s : labelled_partition_members(c.grade, n)) {
      ++members;
      const auto reduct = en_reduct(o, s);
      for (auto& f : maps) {
        if (!(view_type(reduct, f.domain()) == view_type(reduct, f.image_of_domain()))) continue;
        ++t.instances;
        const bool expected = preserves_facts(s, f);
        in_kernel += expected;
        bool got = false;
        try {
          got = kernel_check(o, s, f);
        } catch (const Error& e) {
          t.fail({{"structure", to_json(s)}, {"map", f.pairs()}, {"error", e.what()}});
          continue;
        }
        if (got != expected) t.fail({{"structure", to_json(s)}, {"map", f.pairs()}, {"expected", expected}});
      }
    }
  }
  json stats{{"grade", c.grade}, {"size_bound", c.kernel_bound}, {"members", members}, {"in_kernel", in_kernel}};
  return finish("partition.kernel", t.failed == 0 && t.instances > 0, stats, &t);
}

json check_partition_mixing(const SuiteConfig& c) {
  PartitionOracle o(c.grade, c.caps());
  LimitApprox approx(o.signature());
  saturate(o, approx, 1, c.mix_rounds);
  const auto start = approx.checkpoint();
  const FinStructure s = approx.current();
  const int n = s.size();
  Tally t;
  std::size_t triples = 0;
  for (int len = 1; len <= 2; ++len) {
    const auto tuples = injective_tuples(n, len);
    std::map<std::string, std::vector<const Tuple*>> by_type;
    for (auto& x : tuples) by_type[qf_type(s, x).serialize()].push_back(&x);
    for (auto& [type, group] : by_type)
      for (auto* y : group)
        for (auto* a : group) {
          // the old elements keep their structure, so type(y, a) can be read before any witness
          const auto ya = qf_type(s, concat(*y, *a));
          for (auto* b : group) {
            ++triples;
            if (mixing_incompatibility(s, *y, *a, *b)) continue;
            ++t.instances;
            approx.rollback(start);
            try {
              auto w = mixing_witness(o, approx, *y, *a, *b);
              const auto& cur = approx.current();
              bool ok = qf_type(cur, concat(w.d, *a)) == ya && qf_type(cur, concat(w.d, *b)) == ya;
              for (int v : w.d)
                ok = ok && std::find(y->begin(), y->end(), v) == y->end() &&
                     std::find(a->begin(), a->end(), v) == a->end() && std::find(b->begin(), b->end(), v) == b->end();
              if (!ok) t.fail({{"y", *y}, {"a", *a}, {"b", *b}, {"d", w.d}});
            } catch (const Error& e) {
              t.fail({{"y", *y}, {"a", *a}, {"b", *b}, {"error", e.what()}});
            }
          }
        }
  }
  json stats{{"grade", c.grade}, {"rounds", c.mix_rounds}, {"approx_size", n}, {"triples_scanned", triples}};
  return finish("partition.mixing", t.failed == 0 && t.instances > 0, stats, &t);
}

GradedSignature uet_signature() { return pad_signature(Signature({{"U", 1}, {"E", 2}, {"T", 3}})); }

json check_encoding_roundtrip(const SuiteConfig& c) {
  Tally t;
  json stats = json::object();
  auto run = [&](const FinStructure& raw, const GradedSignature& g) {
    ++t.instances;
    const auto s = with_signature(raw, g.signature());
    try {
      const auto e = encode(s, g);
      if (!(decode(e, g) == s)) t.fail({{"structure", to_json(s)}, {"stage", "decode"}});
      for (const auto& entry : g.entries()) {
        auto ep = ep_define_check(e, g, entry.n);
        if (!ep.ok) t.fail({{"structure", to_json(s)}, {"stage", "ep"}, {"n", entry.n}, {"report", ep.to_json()}});
      }
    } catch (const Error& e) {
      t.fail({{"structure", to_json(s)}, {"error", e.what()}});
    }
  };
  // the partition class: every labelled member
  PartitionOracle o(c.grade, c.caps());
  const auto pg = pad_signature(o.signature());
  std::size_t partition_members = 0;
  for (int n = 0; n <= c.encode_bound; ++n)
    for (auto& s : n == 0 ? std::vector<FinStructure>{FinStructure(o.signature(), 0)}
                          : labelled_partition_members(c.grade, n)) {
      ++partition_members;
      run(s, pg);
    }
  stats["partition"] = {{"grade", c.grade}, {"members", partition_members}, {"signature", pg.to_json()}};
  // every structure over unary, binary and ternary symbols, up to two points
  const auto ug = uet_signature();
  std::size_t all_members = 0;
  for (int n = 0; n <= std::min(2, c.encode_bound); ++n) {
    std::vector<std::pair<std::size_t, Tuple>> slots;
    for (std::size_t sym = 0; sym < ug.signature().size(); ++sym)
      for_each_word(iota_vector(n), ug.signature()[sym].arity, [&](const std::vector<int>& w) {
        slots.emplace_back(sym, w);
        return true;
      });
    for (unsigned long mask = 0; mask < (1ul << slots.size()); ++mask) {
      FinStructure s(ug.signature(), n);
      for (std::size_t i = 0; i < slots.size(); ++i)
        if (mask >> i & 1) s.add(slots[i].first, slots[i].second);
      ++all_members;
      run(s, ug);
    }
  }
  stats["all_structures"] = {{"size_bound", std::min(2, c.encode_bound)}, {"members", all_members},
                             {"signature", ug.to_json()}};
  return finish("encoding.roundtrip", t.failed == 0, stats, &t);
}

json check_encoding_amalgam(const SuiteConfig& c) {
  Tally t;
  std::size_t cross = 0, skipped_a = 0;
  json stats = json::object();
  auto battery = [&](const GradedSignature& g, const ClassOracle& inner, const std::vector<FinStructure>& inners,
                     const std::string& label) {
    std::vector<FinStructure> encoded;
    for (auto& s : inners) {
      auto e = encode_plus(s, g);
      if (e.size() <= c.amalgam_bound) encoded.push_back(std::move(e));
    }
    std::size_t before = t.instances;
    for (auto& b : encoded)
      for (int k = 0; k <= b.size(); ++k)
        for_each_combination(b.size(), k, [&](const std::vector<int>& sub) {
          const auto a = b.induced(sub);
          if (!class_membership(a, g, inner).ok) {
            ++skipped_a;
            return true;
          }
          for (auto& cc : encoded)
            for (auto& emb : find_embeddings(a, cc)) {
              ++t.instances;
              auto r = free_amalgam_membership(a, b, sub, cc, emb, g, inner);
              cross += r.cross_pairs;
              if (!r.pass || r.cross_pairs != 0)
                t.fail({{"a", to_json(a)}, {"b", to_json(b)}, {"c", to_json(cc)}, {"report", r.to_json()}});
            }
          return true;
        });
    stats[label] = {{"encoded_members", encoded.size()}, {"instances", t.instances - before}};
  };
  // inner structures with at most one fact
  const auto ug = uet_signature();
  std::vector<FinStructure> inners;
  for (int p = 0; p <= c.amalgam_bound; ++p) {
    inners.emplace_back(ug.signature(), p);
    for (std::size_t sym = 0; sym < ug.signature().size(); ++sym)
      for_each_word(iota_vector(p), ug.signature()[sym].arity, [&](const std::vector<int>& w) {
        FinStructure s(ug.signature(), p);
        s.add(sym, w);
        inners.push_back(std::move(s));
        return true;
      });
  }
  battery(ug, AllStructuresClass(ug.signature(), c.caps()), inners, "all_structures");
  // the partition class: members with at most one fact
  PartitionOracle o(c.grade, c.caps());
  const auto pg = pad_signature(o.signature());
  std::vector<FinStructure> pinners;
  for (int p = 0; p <= c.amalgam_bound; ++p)
    for (auto& s : p == 0 ? std::vector<FinStructure>{FinStructure(o.signature(), 0)} : labelled_partition_members(c.grade, p))
      if (s.fact_count() <= 1) pinners.push_back(with_signature(s, pg.signature()));
  RenamedClass partition_view(o, pg.signature());
  battery(pg, partition_view, pinners, "partition");
  stats["cross_pairs"] = cross;
  stats["a_outside_class"] = skipped_a;
  return finish("encoding.amalgam", t.failed == 0 && t.instances > 0, stats, &t);
}

std::vector<Subgroup> central_subgroups(const FinGroup& g) {
  const auto z = center(g);
  std::vector<Subgroup> out;
  for (auto& s : all_subgroups(g))
    if (std::includes(z.begin(), z.end(), s.begin(), s.end())) out.push_back(s);
  return out;
}

json check_groups_split(const SuiteConfig& c) {
  Tally t;
  std::size_t split = 0, kappas = 0, groups = 0;
  for (const auto& entry : group_catalogue()) {
    const auto& g = entry.group;
    if (g.order() > c.order_bound) continue;
    ++groups;
    for (auto& f : central_subgroups(g)) {
      ++t.instances;
      try {
        auto r = verify_splitting(g, f);
        split += r.split;
        bool ok = r.agree() && (!r.split || r.isomorphism_verified);
        if (r.complement) {
          auto k = kappa(g, f, *r.complement);
          ++kappas;
          // kappa o pi is the identity on the complement
          for (int x : *r.complement) ok = ok && k.map.image[k.quotient.projection.image[x]] == x;
        }
        if (!ok) t.fail({{"group", entry.id}, {"f", f}, {"report", r.to_json()}});
      } catch (const Error& e) {
        t.fail({{"group", entry.id}, {"f", f}, {"error", e.what()}});
      }
    }
  }
  // fixtures
  const auto s3z2 = direct_product(catalogue_group("S3"), cyclic_group(2));
  const auto& q8 = catalogue_group("Q8");
  json fixtures{{"C4", !verify_splitting(catalogue_group("C4"), Subgroup{0, 2}).split},
                {"Q8", !verify_splitting(q8, center(q8)).split},
                {"S3xC2", verify_splitting(s3z2, Subgroup{0, 1}).split}};
  bool fixtures_ok = true;
  for (auto& [k, v] : fixtures.items()) fixtures_ok = fixtures_ok && v.get<bool>();
  json stats{{"order_bound", c.order_bound}, {"groups", groups}, {"split", split}, {"kappa_checked", kappas},
             {"fixtures_expected", fixtures}};
  return finish("groups.split", t.failed == 0 && fixtures_ok, stats, &t);
}

json check_groups_chains(const SuiteConfig& c) {
  Tally chains, limits;
  for (const auto& entry : group_catalogue()) {
    const auto& g = entry.group;
    if (g.order() <= c.order_bound) {
      const auto normals = normal_subgroups(g);
      for (auto& f : central_subgroups(g)) {
        const auto q = quotient(g, f);
        const auto qn = normal_subgroups(q.group);
        std::vector<std::vector<Subgroup>> families{{trivial_subgroup()}};
        std::vector<Subgroup> proper(qn.begin(), qn.end() - 1);
        if (proper.size() > 1) families.push_back(proper);
        for (std::size_t i = 1; i + 1 < qn.size(); ++i)
          for (std::size_t j = i + 1; j + 1 < qn.size(); ++j)
            if (intersect(qn[i], qn[j]).size() == 1) families.push_back({qn[i], qn[j]});
        for (auto& g0 : normals) {
          if (intersect(g0, f).size() != 1) continue;
          for (auto& h : families) {
            ++chains.instances;
            try {
              auto chain = build_chain(g, f, h, g0);
              auto act = coset_action(g, chain);
              const bool ok = stabilizer_of_union(g, act, 1) == f && act.kernel == trivial_subgroup();
              if (!ok) chains.fail({{"group", entry.id}, {"f", f}, {"g0", g0}, {"chain", chain.to_json()}});
            } catch (const Error& e) {
              chains.fail({{"group", entry.id}, {"f", f}, {"g0", g0}, {"error", e.what()}});
            }
          }
        }
      }
    }
    if (g.order() <= c.limit_bound) {
      const auto normals = normal_subgroups(g);
      auto check_limit = [&](const std::vector<Subgroup>& ns) {
        ++limits.instances;
        try {
          auto lim = truncated_limit(quotient_system(g, ns));
          if (lim.order() != g.order() || !find_isomorphism(lim, g))
            limits.fail({{"group", entry.id}, {"normals", ns}, {"limit_order", lim.order()}});
        } catch (const Error& e) {
          limits.fail({{"group", entry.id}, {"normals", ns}, {"error", e.what()}});
        }
      };
      // chains ending in the trivial subgroup
      for (auto& n : normals) check_limit({whole(g), n, trivial_subgroup()});
      // diamonds over N1 N2 with N1 and N2 meeting trivially
      for (std::size_t i = 1; i < normals.size(); ++i)
        for (std::size_t j = i + 1; j < normals.size(); ++j) {
          if (intersect(normals[i], normals[j]).size() != 1) continue;
          auto join = normals[i];
          join.insert(join.end(), normals[j].begin(), normals[j].end());
          check_limit({normals[i], normals[j], closure(g, join)});
        }
    }
  }
  json stats{{"order_bound", c.order_bound},
             {"limit_bound", c.limit_bound},
             {"chains", {{"instances", chains.instances}, {"failed", chains.failed}}},
             {"limits", {{"instances", limits.instances}, {"failed", limits.failed}}}};
  json j = finish("groups.chains", chains.failed == 0 && limits.failed == 0 && chains.instances > 0, stats);
  json failures = chains.failures;
  for (auto& f : limits.failures) failures.push_back(f);
  if (!failures.empty()) j["failures"] = failures;
  return j;
}

json check_clones_gadget(const SuiteConfig& c) {
  Tally t;
  json per = json::array();
  for (auto [d, max_k] : {std::pair{2, c.gadget_arity2}, std::pair{3, c.gadget_arity3}}) {
    const auto r = r_gadget(d);
    for (int k = 1; k <= max_k; ++k) {
      auto polys = polymorphisms(r, k);
      std::size_t non_unary = 0;
      for (auto& f : polys) {
        ++t.instances;
        if (!is_essentially_unary(f).essentially_unary) {
          ++non_unary;
          t.fail({{"d", d}, {"k", k}, {"operation", f.to_json()}});
        }
      }
      per.push_back({{"d", d}, {"k", k}, {"polymorphisms", polys.size()}, {"not_essentially_unary", non_unary}});
    }
  }
  json stats{{"per_arity", per}, {"note", "bounded arities only"}};
  return finish("clones.gadget", t.failed == 0, stats, &t);
}

json check_clones_iso(const SuiteConfig& c) {
  const auto m = FunctionMonoid::full(2);
  const FinOperation flip{2, 1, {1, 0}};
  std::vector<std::size_t> image;
  for (const auto& u : m.elements()) image.push_back(*m.index_of(compose(flip, {compose(u, {flip})})));
  auto xi = extend_monoid_iso(m, m, image);
  const auto clone = clone_from_monoid(m);
  std::vector<FinOperation> samples;
  for (int k = 1; k <= c.iso_arity; ++k)
    for (auto& f : clone.members(k)) samples.push_back(f);
  auto r = check_clone_homomorphism(xi, samples, c.iso_arity);
  json stats{{"samples", samples.size()}, {"report", r.to_json()}, {"max_arity", c.iso_arity}};
  return finish("clones.iso", r.pass && r.composites > 0, stats);
}

const std::map<std::string, json (*)(const SuiteConfig&)>& registry() {
  static const std::map<std::string, json (*)(const SuiteConfig&)> r{
      {"fraisse.axioms", &check_fraisse_axioms},   {"fraisse.orbits", &check_fraisse_orbits},
      {"partition.realize", &check_partition_realize}, {"partition.kernel", &check_partition_kernel},
      {"partition.mixing", &check_partition_mixing}, {"encoding.roundtrip", &check_encoding_roundtrip},
      {"encoding.amalgam", &check_encoding_amalgam}, {"groups.split", &check_groups_split},
      {"groups.chains", &check_groups_chains},     {"clones.gadget", &check_clones_gadget},
      {"clones.iso", &check_clones_iso}};
  return r;
}

}  // namespace

std::vector<std::string> battery_checks(const std::string& module) {
  std::vector<std::string> out;
  for (auto& [name, fn] : registry())
    if (module == "all" || name.rfind(module + ".", 0) == 0) out.push_back(name);
  if (out.empty()) throw Error("unknown suite module: " + module);
  return out;
}

json run_check(const std::string& name, const SuiteConfig& config) {
  auto it = registry().find(name);
  if (it == registry().end()) throw Error("unknown check: " + name);
  config.validate();
  return it->second(config);
}

}  // namespace oligo
