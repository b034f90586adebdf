#include "oligo/encoding.hpp"

#include <algorithm>
#include <set>

#include "oligo/enumerate.hpp"

namespace oligo {

using nlohmann::json;

namespace {

enum : std::size_t { kP = 0, kQ = 1, kLambda = 2, kRho = 3, kH = 4, kS = 5, kInner = 6 };

std::string r_name(int n) { return "R_" + std::to_string(n); }

void require_enc(const FinStructure& e) {
  const auto& sig = e.signature();
  const auto& l = enc_signature();
  if (sig.size() < l.size()) throw Error("encoding: structure is not over the encoding language");
  for (std::size_t s = 0; s < l.size(); ++s)
    if (!(sig[s] == l[s])) throw Error("encoding: structure is not over the encoding language");
}

bool is_plus(const FinStructure& e, const GradedSignature& g) {
  if (e.signature().size() == enc_signature().size()) return false;
  if (!(e.signature() == plus_signature(g))) throw Error("encoding: signature is neither L nor L+");
  return true;
}

bool has(const FinStructure& e, std::size_t s, int x) { return e.holds(s, Tuple{x}); }

// Successor lists of H, restricted to Q elements.
std::vector<std::vector<int>> h_successors(const FinStructure& e) {
  std::vector<std::vector<int>> succ(e.size());
  for (const auto& t : e.relation(kH))
    if (has(e, kQ, t[0]) && has(e, kQ, t[1])) succ[t[0]].push_back(t[1]);
  return succ;
}

// Labels a with S(c, c, a, a), per element.
std::vector<std::vector<int>> diagonal_labels(const FinStructure& e) {
  std::vector<std::vector<int>> diag(e.size());
  for (const auto& t : e.relation(kS))
    if (t[0] == t[1] && t[2] == t[3]) diag[t[0]].push_back(t[2]);
  return diag;
}

// Depth-first search over H paths c_1 .. c_n of distinct Q elements closing back to c_1.
template <class Fn>
void for_each_cycle(const FinStructure& e, const std::vector<std::vector<int>>& succ, int n, Fn&& fn) {
  std::vector<int> path;
  std::vector<char> on(e.size(), 0);
  std::function<void()> dfs = [&]() {
    if (static_cast<int>(path.size()) == n) {
      if (e.holds(kH, Tuple{path.back(), path.front()})) fn(path);
      return;
    }
    for (int y : succ[path.back()]) {
      if (on[y]) continue;
      on[y] = 1;
      path.push_back(y);
      dfs();
      path.pop_back();
      on[y] = 0;
    }
  };
  for (int c = 0; c < e.size(); ++c) {
    if (!has(e, kQ, c) || !has(e, kLambda, c)) continue;
    path = {c};
    on[c] = 1;
    dfs();
    on[c] = 0;
  }
}

int arity_of(const GradedSignature& g, int n) {
  auto k = g.find(n);
  if (!k) throw Error("encoding: no symbol R_" + std::to_string(n));
  return g.entries()[*k].arity;
}

}  // namespace

// ------------------------------------------------------------- signatures

GradedSignature::GradedSignature(std::vector<GradedSymbol> entries) : entries_(std::move(entries)) {
  std::vector<Symbol> syms;
  std::set<int> seen;
  for (const auto& e : entries_) {
    if (e.n < 1 || e.arity < 1 || e.arity > e.n)
      throw Error("graded signature: R_" + std::to_string(e.n) + " needs 1 <= l(n) <= n");
    if (!seen.insert(e.n).second) throw Error("graded signature: R_" + std::to_string(e.n) + " repeated");
    syms.push_back({r_name(e.n), e.arity});
  }
  signature_ = Signature(std::move(syms));
}

std::optional<std::size_t> GradedSignature::find(int n) const {
  for (std::size_t k = 0; k < entries_.size(); ++k)
    if (entries_[k].n == n) return k;
  return std::nullopt;
}

json GradedSignature::to_json() const {
  json j = json::array();
  for (const auto& e : entries_) j.push_back({{"n", e.n}, {"arity", e.arity}, {"source", e.source}});
  return j;
}

GradedSignature GradedSignature::from_json(const json& j) {
  std::vector<GradedSymbol> entries;
  for (const auto& e : j) entries.push_back({e.at("n").get<int>(), e.at("arity").get<int>(), e.value("source", "")});
  return GradedSignature(std::move(entries));
}

GradedSignature pad_signature(const Signature& raw) {
  std::set<int> used;
  std::vector<GradedSymbol> entries;
  for (const auto& s : raw.symbols()) {
    int n = s.arity;
    while (used.contains(n)) ++n;
    used.insert(n);
    entries.push_back({n, s.arity, s.name});
  }
  return GradedSignature(std::move(entries));
}

FinStructure with_signature(const FinStructure& s, const Signature& sig) {
  if (s.signature().size() != sig.size()) throw Error("with_signature: symbol counts differ");
  for (std::size_t k = 0; k < sig.size(); ++k)
    if (s.signature()[k].arity != sig[k].arity) throw Error("with_signature: arities differ at " + sig[k].name);
  FinStructure out(sig, s.size());
  for (std::size_t k = 0; k < sig.size(); ++k)
    for (const auto& t : s.relation(k)) out.add(k, t);
  return out;
}

const Signature& enc_signature() {
  static const Signature sig({{"P", 1}, {"Q", 1}, {"lambda", 1}, {"rho", 1}, {"H", 2}, {"S", 4}});
  return sig;
}

Signature plus_signature(const GradedSignature& g) {
  auto syms = enc_signature().symbols();
  for (const auto& s : g.signature().symbols()) syms.push_back(s);
  return Signature(std::move(syms));
}

json NPair::to_json() const { return {{"n", n}, {"cycle", cycle}, {"labels", labels}}; }

// ------------------------------------------------------------------ encode

namespace {

FinStructure encode_into(const FinStructure& s, const GradedSignature& g, Signature sig) {
  if (s.signature().size() != g.entries().size()) throw Error("encode: structure does not match the graded signature");
  for (std::size_t k = 0; k < g.entries().size(); ++k)
    if (s.signature()[k].arity != g.entries()[k].arity) throw Error("encode: arity mismatch at " + r_name(g.entries()[k].n));
  if (auto v = validate(s); !v.ok()) throw Error("encode: invalid structure: " + v.violations.front().message());
  FinStructure e(std::move(sig), s.size());
  for (int x = 0; x < s.size(); ++x) e.add(kP, {x});
  for (std::size_t k = 0; k < g.entries().size(); ++k) {
    const int n = g.entries()[k].n, l = g.entries()[k].arity;
    for (const auto& t : s.relation(k)) {
      std::vector<int> c(n);
      for (int i = 0; i < n; ++i) {
        c[i] = e.add_element();
        e.add(kQ, {c[i]});
      }
      for (int i = 0; i < n; ++i) e.add(kH, {c[i], c[(i + 1) % n]});
      e.add(kLambda, {c[0]});
      e.add(kRho, {c[l - 1]});
      for (int h = 0; h < l; ++h)
        for (int i = 0; i < l; ++i) e.add(kS, {c[h], c[i], t[h], t[i]});
    }
  }
  return e;
}

}  // namespace

FinStructure encode(const FinStructure& s, const GradedSignature& g) { return encode_into(s, g, enc_signature()); }

FinStructure encode_plus(const FinStructure& s, const GradedSignature& g) {
  auto e = encode_into(s, g, plus_signature(g));
  for (std::size_t k = 0; k < g.entries().size(); ++k)
    for (const auto& t : s.relation(k)) e.add(kInner + k, t);
  return e;
}

std::vector<int> p_part(const FinStructure& e) {
  require_enc(e);
  std::vector<int> out;
  for (const auto& t : e.relation(kP)) out.push_back(t[0]);
  return out;
}

FinStructure inner_part(const FinStructure& e, const GradedSignature& g) {
  if (!is_plus(e, g)) throw Error("inner_part: structure has no inner symbols");
  auto sub = e.induced(p_part(e));
  FinStructure out(g.signature(), sub.size());
  for (std::size_t k = 0; k < g.entries().size(); ++k)
    for (const auto& t : sub.relation(kInner + k)) out.add(k, t);
  return out;
}

// ---------------------------------------------------------------- n-pairs

bool is_npair(const FinStructure& e, const GradedSignature& g, int n, const std::vector<int>& cycle,
              const Tuple& labels) {
  require_enc(e);
  auto k = g.find(n);
  if (!k) return false;
  const int l = g.entries()[*k].arity;
  if (static_cast<int>(cycle.size()) != n || static_cast<int>(labels.size()) != l) return false;
  std::set<int> cs(cycle.begin(), cycle.end());
  if (static_cast<int>(cs.size()) != n) return false;
  for (int c : cycle)
    if (c < 0 || c >= e.size() || !has(e, kQ, c)) return false;
  for (int a : labels)
    if (a < 0 || a >= e.size() || !has(e, kP, a)) return false;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      if (e.holds(kH, Tuple{cycle[i], cycle[j]}) != (j == (i + 1) % n)) return false;
    if (has(e, kLambda, cycle[i]) != (i == 0)) return false;
    if (has(e, kRho, cycle[i]) != (i == l - 1)) return false;
  }
  const auto as = distinct_entries(labels);
  for (int h = 0; h < n; ++h)
    for (int i = 0; i < n; ++i)
      for (int a : as)
        for (int b : as) {
          const bool want = h < l && i < l && a == labels[h] && b == labels[i];
          if (e.holds(kS, Tuple{cycle[h], cycle[i], a, b}) != want) return false;
        }
  return true;
}

NPairScan scan_npairs(const FinStructure& e, const GradedSignature& g) {
  require_enc(e);
  NPairScan scan;
  const auto succ = h_successors(e);
  const auto diag = diagonal_labels(e);
  for (int c1 = 0; c1 < e.size(); ++c1) {
    if (!has(e, kQ, c1) || !has(e, kLambda, c1)) continue;
    std::vector<int> cycle{c1};
    bool closed = false, broken = false;
    while (!closed && !broken) {
      const auto& next = succ[cycle.back()];
      if (next.empty()) {
        broken = true;
      } else if (next.size() > 1) {
        scan.malformations.push_back("walk from lambda element " + std::to_string(c1) + " branches at " +
                                     std::to_string(cycle.back()));
        broken = true;
      } else if (next[0] == c1) {
        closed = true;
      } else if (std::find(cycle.begin(), cycle.end(), next[0]) != cycle.end()) {
        scan.malformations.push_back("walk from lambda element " + std::to_string(c1) + " revisits " +
                                     std::to_string(next[0]));
        broken = true;
      } else {
        cycle.push_back(next[0]);
      }
    }
    if (!closed) continue;
    const int n = static_cast<int>(cycle.size());
    auto k = g.find(n);
    if (!k) continue;
    const int l = g.entries()[*k].arity;
    Tuple labels;
    bool ok = true;
    for (int h = 0; h < l && ok; ++h) {
      if (diag[cycle[h]].size() > 1) {
        scan.malformations.push_back("cycle element " + std::to_string(cycle[h]) + " carries " +
                                     std::to_string(diag[cycle[h]].size()) + " labels");
        ok = false;
      } else if (diag[cycle[h]].empty()) {
        ok = false;
      } else {
        labels.push_back(diag[cycle[h]][0]);
      }
    }
    if (ok && is_npair(e, g, n, cycle, labels)) scan.pairs.push_back({n, cycle, labels});
  }
  std::vector<int> owner(e.size(), -1);
  for (std::size_t p = 0; p < scan.pairs.size(); ++p)
    for (int c : scan.pairs[p].cycle) {
      if (owner[c] >= 0)
        scan.malformations.push_back("gadgets at " + std::to_string(scan.pairs[owner[c]].cycle[0]) + " and " +
                                     std::to_string(scan.pairs[p].cycle[0]) + " share cycle element " +
                                     std::to_string(c));
      owner[c] = static_cast<int>(p);
    }
  return scan;
}

std::vector<NPair> find_npairs(const FinStructure& e, const GradedSignature& g) {
  auto scan = scan_npairs(e, g);
  if (!scan.malformations.empty()) throw MalformedGadget("malformed gadget: " + scan.malformations.front());
  return std::move(scan.pairs);
}

FinStructure decode(const FinStructure& e, const GradedSignature& g) {
  const auto pairs = find_npairs(e, g);
  const auto pp = p_part(e);
  std::vector<int> index(e.size(), -1);
  for (std::size_t i = 0; i < pp.size(); ++i) index[pp[i]] = static_cast<int>(i);
  FinStructure out(g.signature(), static_cast<int>(pp.size()));
  for (const auto& p : pairs) {
    Tuple t;
    for (int a : p.labels) t.push_back(index[a]);
    out.add(*g.find(p.n), std::move(t));
  }
  return out;
}

std::vector<NPair> search_npairs(const FinStructure& e, const GradedSignature& g) {
  require_enc(e);
  const auto succ = h_successors(e);
  const auto diag = diagonal_labels(e);
  std::set<std::tuple<int, std::vector<int>, Tuple>> found;
  for (const auto& entry : g.entries()) {
    const int n = entry.n, l = entry.arity;
    for_each_cycle(e, succ, n, [&](const std::vector<int>& cycle) {
      // every label a_h has S(c_h, c_h, a_h, a_h); try all such choices
      std::vector<const std::vector<int>*> options;
      for (int h = 0; h < l; ++h) options.push_back(&diag[cycle[h]]);
      Tuple labels(l);
      std::function<void(int)> pick = [&](int h) {
        if (h == l) {
          if (is_npair(e, g, n, cycle, labels)) found.insert({n, cycle, labels});
          return;
        }
        for (int a : *options[h]) {
          labels[h] = a;
          pick(h + 1);
        }
      };
      pick(0);
    });
  }
  std::vector<NPair> out;
  for (const auto& [n, cycle, labels] : found) out.push_back({n, cycle, labels});
  return out;
}

bool npair_exists(const FinStructure& e, const GradedSignature& g, int n, const Tuple& x) {
  require_enc(e);
  if (static_cast<int>(x.size()) != arity_of(g, n)) return false;
  bool hit = false;
  for_each_cycle(e, h_successors(e), n, [&](const std::vector<int>& cycle) {
    if (!hit && is_npair(e, g, n, cycle, x)) hit = true;
  });
  return hit;
}

// -------------------------------------------------------------- membership

json MembershipReport::to_json() const { return {{"ok", ok}, {"diagnostics", diagnostics}}; }

MembershipReport class_membership(const FinStructure& e, const GradedSignature& g, const ClassOracle& inner) {
  require_enc(e);
  MembershipReport r;
  auto fail = [&](std::string why) {
    r.ok = false;
    r.diagnostics.push_back(std::move(why));
  };
  if (auto v = validate(e); !v.ok()) {
    fail("invalid structure: " + v.violations.front().message());
    return r;
  }
  const bool plus = is_plus(e, g);
  for (int x = 0; x < e.size(); ++x)
    if (has(e, kP, x) == has(e, kQ, x)) fail("element " + std::to_string(x) + ": Q must hold iff P fails");
  for (std::size_t s : {kLambda, kRho})
    for (const auto& t : e.relation(s))
      if (!has(e, kQ, t[0])) fail(e.signature()[s].name + " on non-Q element " + std::to_string(t[0]));
  for (const auto& t : e.relation(kH))
    if (!has(e, kQ, t[0]) || !has(e, kQ, t[1])) fail("H outside Q");
  for (const auto& t : e.relation(kS))
    if (!has(e, kQ, t[0]) || !has(e, kQ, t[1]) || !has(e, kP, t[2]) || !has(e, kP, t[3])) fail("S outside Q x Q x P x P");
  if (plus)
    for (std::size_t k = 0; k < g.entries().size(); ++k)
      for (const auto& t : e.relation(kInner + k))
        if (std::any_of(t.begin(), t.end(), [&](int x) { return !has(e, kP, x); }))
          fail(r_name(g.entries()[k].n) + " outside P");
  if (!r.ok) return r;

  const auto pp = p_part(e);
  std::vector<int> index(e.size(), -1);
  for (std::size_t i = 0; i < pp.size(); ++i) index[pp[i]] = static_cast<int>(i);
  const auto pairs = search_npairs(e, g);
  FinStructure in(g.signature(), static_cast<int>(pp.size()));
  if (plus) {
    in = inner_part(e, g);
  } else {
    for (const auto& p : pairs) {
      Tuple t;
      for (int a : p.labels) t.push_back(index[a]);
      in.add(*g.find(p.n), std::move(t));
    }
  }
  if (inner.signature().size() != g.signature().size()) {
    fail("inner oracle " + inner.name() + " does not match the graded signature");
    return r;
  }
  if (!inner.is_member(with_signature(in, inner.signature()))) fail("P part is rejected by " + inner.name());
  for (const auto& p : pairs) {
    Tuple t;
    for (int a : p.labels) t.push_back(index[a]);
    if (!in.holds(*g.find(p.n), t))
      fail(std::to_string(p.n) + "-pair at " + std::to_string(p.cycle[0]) + " labels a tuple outside " + r_name(p.n));
  }
  return r;
}

json EpReport::to_json() const {
  json j{{"ok", ok}, {"tuples", tuples}, {"extension", extension}, {"mismatches", mismatches}};
  if (error) j["error"] = *error;
  return j;
}

EpReport ep_define_check(const FinStructure& e, const GradedSignature& g, int n) {
  EpReport r;
  auto k = g.find(n);
  if (!k) {
    r.ok = false;
    r.error = "no symbol R_" + std::to_string(n);
    return r;
  }
  FinStructure decoded;
  try {
    decoded = decode(e, g);
  } catch (const MalformedGadget& ex) {
    r.ok = false;
    r.error = ex.what();
    return r;
  }
  const auto pp = p_part(e);
  const int l = g.entries()[*k].arity;
  for_each_word(iota_vector(static_cast<int>(pp.size())), l, [&](const Tuple& w) {
    ++r.tuples;
    Tuple x;
    for (int i : w) x.push_back(pp[i]);
    const bool formula = npair_exists(e, g, n, x);
    if (formula) ++r.extension;
    if (formula != decoded.holds(*k, w)) {
      r.ok = false;
      r.mismatches.push_back(w);
    }
    return true;
  });
  return r;
}

// ------------------------------------------------------------ amalgamation

json EncodedAmalgamReport::to_json() const {
  json j{{"pass", pass},
         {"pairs_in_b", pairs_in_b},
         {"pairs_in_c", pairs_in_c},
         {"cross_pairs", cross_pairs},
         {"membership", membership.to_json()}};
  if (problem) j["problem"] = *problem;
  if (amalgam) j["amalgam"] = oligo::to_json(*amalgam);
  return j;
}

EncodedAmalgamReport free_amalgam_membership(const FinStructure& a, const FinStructure& b, std::span<const int> f,
                                             const FinStructure& c, std::span<const int> g,
                                             const GradedSignature& graded, const ClassOracle& inner) {
  EncodedAmalgamReport r;
  auto stop = [&](std::string why) {
    r.pass = false;
    r.problem = std::move(why);
    return r;
  };
  const auto sig = plus_signature(graded);
  for (const auto* s : {&a, &b, &c})
    if (!(s->signature() == sig)) return stop("inputs must be over L plus the graded symbols");
  Amalgam am;
  try {
    am = free_amalgam(a, b, f, c, g);
  } catch (const Error& ex) {
    return stop(ex.what());
  }

  // inner parts and the maps between them
  const auto pa = p_part(a), pb = p_part(b), pc = p_part(c);
  auto position = [](const std::vector<int>& v, int x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    return it != v.end() && *it == x ? static_cast<int>(it - v.begin()) : -1;
  };
  std::vector<int> f_in, g_in;
  for (int x : pa) {
    f_in.push_back(position(pb, f[x]));
    g_in.push_back(position(pc, g[x]));
  }
  const auto& isig = inner.signature();
  Amalgam in_am;
  try {
    in_am = inner.amalgamate(with_signature(inner_part(a, graded), isig), with_signature(inner_part(b, graded), isig),
                             f_in, with_signature(inner_part(c, graded), isig), g_in);
  } catch (const Error& ex) {
    return stop(std::string("inner amalgamation failed: ") + ex.what());
  }
  std::vector<int> to(in_am.d.size(), -1);
  auto bind = [&](int from, int target) {
    if (to[from] >= 0 && to[from] != target) return false;
    to[from] = target;
    return true;
  };
  for (std::size_t i = 0; i < pb.size(); ++i)
    if (!bind(in_am.left[i], am.left[pb[i]])) return stop("inner amalgam disagrees with the free amalgam");
  for (std::size_t i = 0; i < pc.size(); ++i)
    if (!bind(in_am.right[i], am.right[pc[i]])) return stop("inner amalgam disagrees with the free amalgam");
  if (std::find(to.begin(), to.end(), -1) != to.end()) return stop("inner amalgam adds elements");

  FinStructure d(sig, am.d.size());
  for (std::size_t s = 0; s < kInner; ++s)
    for (const auto& t : am.d.relation(s)) d.add(s, t);
  for (std::size_t k = 0; k < graded.entries().size(); ++k)
    for (const auto& t : in_am.d.relation(k)) {
      Tuple u;
      for (int x : t) u.push_back(to[x]);
      d.add(kInner + k, std::move(u));
    }

  r.membership = class_membership(d, graded, inner);
  std::vector<char> in_b(d.size(), 0), in_c(d.size(), 0);
  for (int x : am.left) in_b[x] = 1;
  for (int x : am.right) in_c[x] = 1;
  for (const auto& p : search_npairs(d, graded)) {
    auto inside = [&](const std::vector<char>& side) {
      return std::all_of(p.cycle.begin(), p.cycle.end(), [&](int x) { return side[x]; }) &&
             std::all_of(p.labels.begin(), p.labels.end(), [&](int x) { return side[x]; });
    };
    if (inside(in_b))
      ++r.pairs_in_b;
    else if (inside(in_c))
      ++r.pairs_in_c;
    else
      ++r.cross_pairs;
  }
  r.pass = r.membership.ok && r.cross_pairs == 0;
  if (!r.membership.ok) r.problem = "amalgam is not in the encoded class";
  else if (r.cross_pairs) r.problem = "an n-pair spans both sides";
  r.amalgam = std::move(d);
  return r;
}

}  // namespace oligo
