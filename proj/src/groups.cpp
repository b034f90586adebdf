#include "oligo/groups.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>

namespace oligo {

using nlohmann::json;

namespace {

bool contains(const Subgroup& s, int x) { return std::binary_search(s.begin(), s.end(), x); }

bool is_permutation(const std::vector<int>& p, int n) {
  if (static_cast<int>(p.size()) != n) return false;
  std::vector<char> seen(n, 0);
  for (int x : p) {
    if (x < 0 || x >= n || seen[x]) return false;
    seen[x] = 1;
  }
  return true;
}

}  // namespace

// ------------------------------------------------------------------ groups

FinGroup::FinGroup() : n_(1), table_{0}, inv_{0} {}

FinGroup FinGroup::generate(const std::vector<Perm>& gens, int degree, std::size_t cap) {
  if (degree < 0) throw Error("generate: negative degree");
  for (const auto& p : gens)
    if (!is_permutation(p, degree)) throw Error("generate: generator is not a permutation of the domain");
  Perm id(degree);
  std::iota(id.begin(), id.end(), 0);
  auto compose = [](const Perm& a, const Perm& b) {
    Perm c(a.size());
    for (std::size_t x = 0; x < a.size(); ++x) c[x] = a[b[x]];
    return c;
  };
  std::set<Perm> seen{id};
  std::vector<Perm> queue{id};
  for (std::size_t q = 0; q < queue.size(); ++q)
    for (const auto& s : gens) {
      auto y = compose(queue[q], s);
      if (seen.insert(y).second) {
        if (seen.size() > cap) throw ResourceError("generate: group order above cap");
        queue.push_back(std::move(y));
      }
    }
  std::vector<Perm> elems(seen.begin(), seen.end());
  std::map<Perm, int> index;
  for (std::size_t i = 0; i < elems.size(); ++i) index[elems[i]] = static_cast<int>(i);
  FinGroup g;
  g.n_ = static_cast<int>(elems.size());
  g.table_.assign(static_cast<std::size_t>(g.n_) * g.n_, 0);
  g.inv_.assign(g.n_, 0);
  for (int a = 0; a < g.n_; ++a)
    for (int b = 0; b < g.n_; ++b) {
      int c = index.at(compose(elems[a], elems[b]));
      g.table_[static_cast<std::size_t>(a) * g.n_ + b] = c;
      if (c == 0) g.inv_[a] = b;
    }
  g.perms_ = std::move(elems);
  return g;
}

FinGroup FinGroup::from_table(const std::vector<std::vector<int>>& table, std::size_t cap) {
  const int n = static_cast<int>(table.size());
  if (n == 0) throw Error("from_table: empty table");
  if (static_cast<std::size_t>(n) > cap) throw ResourceError("from_table: group order above cap");
  for (const auto& row : table)
    if (!is_permutation(row, n)) throw Error("from_table: rows must be permutations of the elements");
  int e = -1;
  for (int a = 0; a < n && e < 0; ++a) {
    bool id = true;
    for (int x = 0; x < n && id; ++x) id = table[a][x] == x && table[x][a] == x;
    if (id) e = a;
  }
  if (e < 0) throw Error("from_table: no identity");
  // relabel so the identity is 0
  std::vector<int> r(n);
  std::iota(r.begin(), r.end(), 0);
  std::swap(r[0], r[e]);
  FinGroup g;
  g.n_ = n;
  g.table_.assign(static_cast<std::size_t>(n) * n, 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) g.table_[static_cast<std::size_t>(r[a]) * n + r[b]] = r[table[a][b]];
  for (int a = 0; a < n; ++a) {
    std::vector<char> col(n, 0);
    for (int b = 0; b < n; ++b) col[g.mul(b, a)] = 1;
    if (std::find(col.begin(), col.end(), 0) != col.end()) throw Error("from_table: columns must be permutations");
  }
  auto assoc = [&](int a, int b, int c) { return g.mul(g.mul(a, b), c) == g.mul(a, g.mul(b, c)); };
  if (n <= 128) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          if (!assoc(a, b, c)) throw Error("from_table: not associative");
  } else {
    std::mt19937 rng(12345);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int k = 0; k < 200000; ++k)
      if (!assoc(pick(rng), pick(rng), pick(rng))) throw Error("from_table: not associative");
  }
  g.inv_.assign(n, 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (g.mul(a, b) == 0) g.inv_[a] = b;
  return g;
}

std::vector<std::vector<int>> FinGroup::table() const {
  std::vector<std::vector<int>> t(n_);
  for (int a = 0; a < n_; ++a) t[a].assign(table_.begin() + static_cast<std::ptrdiff_t>(a) * n_,
                                           table_.begin() + static_cast<std::ptrdiff_t>(a + 1) * n_);
  return t;
}

json FinGroup::to_json() const {
  if (!perms_.empty()) {
    const int degree = static_cast<int>(perms_[0].size());
    return {{"degree", degree}, {"elements", perms_}, {"order", n_}};
  }
  return {{"table", table()}, {"order", n_}};
}

FinGroup FinGroup::from_json(const json& j) {
  if (j.contains("table")) return from_table(j.at("table").get<std::vector<std::vector<int>>>());
  if (j.contains("generators"))
    return generate(j.at("generators").get<std::vector<Perm>>(), j.at("degree").get<int>());
  if (j.contains("elements")) return generate(j.at("elements").get<std::vector<Perm>>(), j.at("degree").get<int>());
  throw Error("group JSON needs \"table\" or \"generators\" with \"degree\"");
}

// ------------------------------------------------------------ homomorphisms

bool is_homomorphism(const FinGroup& g, const FinGroup& h, const GroupHom& f) {
  if (static_cast<int>(f.image.size()) != g.order()) return false;
  for (int x : f.image)
    if (x < 0 || x >= h.order()) return false;
  for (int a = 0; a < g.order(); ++a)
    for (int b = 0; b < g.order(); ++b)
      if (f.image[g.mul(a, b)] != h.mul(f.image[a], f.image[b])) return false;
  return true;
}

bool is_isomorphism(const FinGroup& g, const FinGroup& h, const GroupHom& f) {
  return g.order() == h.order() && is_homomorphism(g, h, f) && is_permutation(f.image, h.order());
}

Subgroup kernel(const GroupHom& f) {
  Subgroup k;
  for (std::size_t x = 0; x < f.image.size(); ++x)
    if (f.image[x] == 0) k.push_back(static_cast<int>(x));
  return k;
}

// -------------------------------------------------------------- subgroups

int element_order(const FinGroup& g, int x) {
  int k = 1;
  for (int y = x; y != 0; y = g.mul(y, x)) ++k;
  return k;
}

Subgroup closure(const FinGroup& g, const std::vector<int>& gens) {
  std::vector<char> in(g.order(), 0);
  std::vector<int> queue{0};
  in[0] = 1;
  for (std::size_t q = 0; q < queue.size(); ++q)
    for (int s : gens) {
      int y = g.mul(queue[q], s);
      if (!in[y]) {
        in[y] = 1;
        queue.push_back(y);
      }
    }
  std::sort(queue.begin(), queue.end());
  return queue;
}

bool is_subgroup(const FinGroup& g, const Subgroup& s) {
  if (s.empty() || s[0] != 0 || !std::is_sorted(s.begin(), s.end())) return false;
  for (int x : s) {
    if (x < 0 || x >= g.order()) return false;
    for (int y : s)
      if (!contains(s, g.mul(x, y))) return false;
  }
  return true;
}

bool is_normal(const FinGroup& g, const Subgroup& s) {
  if (!is_subgroup(g, s)) return false;
  for (int x = 0; x < g.order(); ++x)
    for (int y : s)
      if (!contains(s, g.mul(g.mul(x, y), g.inv(x)))) return false;
  return true;
}

Subgroup center(const FinGroup& g) {
  Subgroup z;
  for (int x = 0; x < g.order(); ++x) {
    bool central = true;
    for (int y = 0; y < g.order() && central; ++y) central = g.mul(x, y) == g.mul(y, x);
    if (central) z.push_back(x);
  }
  return z;
}

Subgroup commutator_subgroup(const FinGroup& g) {
  std::set<int> comms;
  for (int a = 0; a < g.order(); ++a)
    for (int b = 0; b < g.order(); ++b) comms.insert(g.mul(g.mul(a, b), g.mul(g.inv(a), g.inv(b))));
  return closure(g, std::vector<int>(comms.begin(), comms.end()));
}

Subgroup intersect(const Subgroup& a, const Subgroup& b) {
  Subgroup out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Subgroup trivial_subgroup() { return {0}; }

Subgroup whole(const FinGroup& g) {
  Subgroup s(g.order());
  std::iota(s.begin(), s.end(), 0);
  return s;
}

std::vector<Subgroup> left_cosets(const FinGroup& g, const Subgroup& s) {
  std::vector<char> done(g.order(), 0);
  std::vector<Subgroup> out;
  for (int x = 0; x < g.order(); ++x) {
    if (done[x]) continue;
    Subgroup c;
    for (int y : s) c.push_back(g.mul(x, y));
    std::sort(c.begin(), c.end());
    for (int y : c) done[y] = 1;
    out.push_back(std::move(c));
  }
  return out;
}

Quotient quotient(const FinGroup& g, const Subgroup& normal) {
  if (!is_normal(g, normal)) throw Error("quotient: subgroup is not normal");
  Quotient q;
  q.cosets = left_cosets(g, normal);
  q.projection.image.assign(g.order(), 0);
  for (std::size_t c = 0; c < q.cosets.size(); ++c)
    for (int x : q.cosets[c]) q.projection.image[x] = static_cast<int>(c);
  const int m = static_cast<int>(q.cosets.size());
  std::vector<std::vector<int>> table(m, std::vector<int>(m));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) table[a][b] = q.projection.image[g.mul(q.cosets[a][0], q.cosets[b][0])];
  q.group = FinGroup::from_table(table);
  return q;
}

SubgroupGroup as_group(const FinGroup& g, const Subgroup& s) {
  if (!is_subgroup(g, s)) throw Error("as_group: not a subgroup");
  const int m = static_cast<int>(s.size());
  std::vector<std::vector<int>> table(m, std::vector<int>(m));
  auto pos = [&](int x) { return static_cast<int>(std::lower_bound(s.begin(), s.end(), x) - s.begin()); };
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) table[a][b] = pos(g.mul(s[a], s[b]));
  return {FinGroup::from_table(table), GroupHom{s}};
}

FinGroup direct_product(const FinGroup& g, const FinGroup& h) {
  const int n = g.order() * h.order();
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      table[a][b] = g.mul(a / h.order(), b / h.order()) * h.order() + h.mul(a % h.order(), b % h.order());
  return FinGroup::from_table(table);
}

std::vector<Subgroup> all_subgroups(const FinGroup& g, int order_cap) {
  if (g.order() > order_cap) throw ResourceError("subgroup enumeration: group order above cap");
  // each subgroup with a small generating set; joins with one element at a time
  std::map<Subgroup, std::vector<int>> found{{trivial_subgroup(), {}}};
  std::vector<Subgroup> queue{trivial_subgroup()};
  for (std::size_t q = 0; q < queue.size(); ++q) {
    const Subgroup s = queue[q];
    const auto gens = found.at(s);
    for (int x = 0; x < g.order(); ++x) {
      if (contains(s, x)) continue;
      auto more = gens;
      more.push_back(x);
      auto t = closure(g, more);
      if (found.emplace(t, more).second) queue.push_back(std::move(t));
    }
  }
  std::vector<Subgroup> out;
  for (auto& [s, gens] : found) out.push_back(s);
  std::stable_sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

std::vector<Subgroup> normal_subgroups(const FinGroup& g, int order_cap) {
  std::vector<Subgroup> out;
  for (auto& s : all_subgroups(g, order_cap))
    if (is_normal(g, s)) out.push_back(std::move(s));
  return out;
}

namespace {

std::optional<Subgroup> complement_search(const FinGroup& g, const Subgroup& f, int order_cap, int& searched) {
  if (!is_normal(g, f)) throw Error("find_complement: F is not normal");
  const std::size_t want = g.order() / f.size();
  searched = 0;
  for (auto& s : all_subgroups(g, order_cap)) {
    if (s.size() != want) continue;
    ++searched;
    if (intersect(s, f).size() == 1) return s;
  }
  return std::nullopt;
}

}  // namespace

std::optional<Subgroup> find_complement(const FinGroup& g, const Subgroup& f, int order_cap) {
  int searched = 0;
  return complement_search(g, f, order_cap, searched);
}

KappaResult kappa(const FinGroup& g, const Subgroup& f, const Subgroup& complement) {
  const auto z = center(g);
  if (!is_subgroup(g, f) || !std::includes(z.begin(), z.end(), f.begin(), f.end()))
    throw Error("kappa: F is not a central subgroup");
  if (!is_subgroup(g, complement) || complement.size() * f.size() != static_cast<std::size_t>(g.order()) ||
      intersect(complement, f).size() != 1)
    throw Error("kappa: F' is not a complement of F");
  KappaResult r{quotient(g, f), {}};
  for (const auto& coset : r.quotient.cosets) {
    auto meet = intersect(coset, complement);
    if (meet.size() != 1) throw Error("kappa: a coset meets the complement in " + std::to_string(meet.size()) + " elements");
    r.map.image.push_back(meet[0]);
  }
  // isomorphism onto F'
  const auto& q = r.quotient.group;
  for (int a = 0; a < q.order(); ++a)
    for (int b = 0; b < q.order(); ++b)
      if (r.map.image[q.mul(a, b)] != g.mul(r.map.image[a], r.map.image[b])) throw Error("kappa: not multiplicative");
  auto sorted = r.map.image;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != complement) throw Error("kappa: not a bijection onto F'");
  for (int x : complement)
    if (r.map.image[r.quotient.projection.image[x]] != x) throw Error("kappa: kappa after projection moves F'");
  return r;
}

// ------------------------------------------------------------- isomorphism

GroupInvariants invariants(const FinGroup& g) {
  GroupInvariants inv;
  inv.order = g.order();
  for (int x = 0; x < g.order(); ++x) inv.order_profile.push_back(element_order(g, x));
  std::sort(inv.order_profile.begin(), inv.order_profile.end());
  inv.center_order = static_cast<int>(center(g).size());
  inv.abelianization_order = g.order() / static_cast<int>(commutator_subgroup(g).size());
  return inv;
}

std::optional<GroupHom> find_isomorphism(const FinGroup& g, const FinGroup& h) {
  if (!(invariants(g) == invariants(h))) return std::nullopt;
  // greedy generating set, largest orders first
  std::vector<int> by_order(g.order());
  std::iota(by_order.begin(), by_order.end(), 0);
  std::stable_sort(by_order.begin(), by_order.end(),
                   [&](int a, int b) { return element_order(g, a) > element_order(g, b); });
  std::vector<int> gens;
  Subgroup span = trivial_subgroup();
  for (int x : by_order)
    if (!contains(span, x)) {
      gens.push_back(x);
      span = closure(g, gens);
    }
  std::vector<int> images(gens.size());
  // extends the generator images along the Cayley graph; fails on a conflict
  auto extend = [&](std::size_t count, std::vector<int>& img) {
    img.assign(g.order(), -1);
    img[0] = 0;
    std::vector<int> queue{0};
    for (std::size_t q = 0; q < queue.size(); ++q)
      for (std::size_t k = 0; k < count; ++k) {
        int y = g.mul(queue[q], gens[k]);
        int iy = h.mul(img[queue[q]], images[k]);
        if (img[y] < 0) {
          img[y] = iy;
          queue.push_back(y);
        } else if (img[y] != iy) {
          return false;
        }
      }
    std::vector<char> used(h.order(), 0);
    for (int x : queue) {
      if (used[img[x]]) return false;
      used[img[x]] = 1;
    }
    return true;
  };
  std::vector<int> img;
  std::function<bool(std::size_t)> assign = [&](std::size_t k) {
    if (k == gens.size()) return extend(k, img);
    const int want = element_order(g, gens[k]);
    for (int y = 0; y < h.order(); ++y) {
      if (element_order(h, y) != want) continue;
      images[k] = y;
      if (extend(k + 1, img) && assign(k + 1)) return true;
    }
    return false;
  };
  if (!assign(0)) return std::nullopt;
  GroupHom f{img};
  if (!is_isomorphism(g, h, f)) throw Error("find_isomorphism: internal check failed");
  return f;
}

// --------------------------------------------------------------- splitting

json SplitReport::to_json() const {
  json j{{"split", split},
         {"isomorphism_verified", isomorphism_verified},
         {"candidates_searched", candidates_searched},
         {"brute_isomorphic", brute_isomorphic},
         {"agree", agree()}};
  if (complement) j["complement"] = *complement;
  return j;
}

SplitReport verify_splitting(const FinGroup& g, const Subgroup& f, int order_cap) {
  const auto z = center(g);
  if (!is_subgroup(g, f) || !std::includes(z.begin(), z.end(), f.begin(), f.end()))
    throw Error("verify_splitting: F is not a central subgroup");
  SplitReport r;
  r.complement = complement_search(g, f, order_cap, r.candidates_searched);
  r.split = r.complement.has_value();
  auto q = quotient(g, f);
  auto fg = as_group(g, f);
  auto product = direct_product(q.group, fg.group);
  if (r.split) {
    auto k = kappa(g, f, *r.complement);
    // g -> (gF, kappa(gF)^-1 g)
    GroupHom iso;
    const int fo = fg.group.order();
    for (int x = 0; x < g.order(); ++x) {
      const int c = q.projection.image[x];
      const int rest = g.mul(g.inv(k.map.image[c]), x);
      auto it = std::lower_bound(f.begin(), f.end(), rest);
      if (it == f.end() || *it != rest) throw Error("verify_splitting: kappa(gF)^-1 g is outside F");
      iso.image.push_back(c * fo + static_cast<int>(it - f.begin()));
    }
    r.isomorphism_verified = is_isomorphism(g, product, iso);
  }
  r.brute_isomorphic = find_isomorphism(g, product).has_value();
  return r;
}

// ------------------------------------------------------------ coset chains

json CosetChain::to_json() const { return {{"members", members}}; }

void validate_chain(const FinGroup& g, const CosetChain& chain) {
  for (std::size_t i = 0; i < chain.members.size(); ++i)
    if (!is_normal(g, chain.members[i])) throw Error("coset chain: G_" + std::to_string(i) + " is not normal");
}

CosetAction coset_action(const FinGroup& g, const CosetChain& chain, int from) {
  validate_chain(g, chain);
  CosetAction a;
  a.from = from;
  std::vector<std::vector<Subgroup>> cosets;
  std::vector<std::vector<int>> index;
  std::vector<int> offset;
  Subgroup meet = whole(g);
  for (int i = std::max(from, 0); i < static_cast<int>(chain.members.size()); ++i) {
    auto cs = left_cosets(g, chain.members[i]);
    std::vector<int> idx(g.order());
    for (std::size_t c = 0; c < cs.size(); ++c) {
      for (int x : cs[c]) idx[x] = static_cast<int>(c);
      a.points.push_back({i, static_cast<int>(c)});
    }
    cosets.push_back(std::move(cs));
    index.push_back(std::move(idx));
    meet = intersect(meet, chain.members[i]);
  }
  for (int x = 0; x < g.order(); ++x) {
    Perm p;
    for (const auto& [level, c] : a.points) {
      const auto k = static_cast<std::size_t>(level - std::max(from, 0));
      const int before = static_cast<int>(p.size()) - c;  // first point of this level
      p.push_back(before + index[k][g.mul(x, cosets[k][c][0])]);
    }
    bool fixes = true;
    for (std::size_t i = 0; i < p.size() && fixes; ++i) fixes = p[i] == static_cast<int>(i);
    if (fixes) a.kernel.push_back(x);
    a.perms.push_back(std::move(p));
  }
  if (a.kernel != meet) throw Error("coset_action: kernel differs from the intersection of the chain");
  return a;
}

Subgroup stabilizer_of_union(const FinGroup& g, const CosetAction& action, int from) {
  if (from < action.from) throw Error("stabilizer_of_union: the action does not cover level " + std::to_string(from));
  Subgroup s;
  for (int x = 0; x < g.order(); ++x) {
    bool fixes = true;
    for (std::size_t p = 0; p < action.points.size() && fixes; ++p)
      if (action.points[p].first >= from) fixes = action.perms[x][p] == static_cast<int>(p);
    if (fixes) s.push_back(x);
  }
  return s;
}

CosetChain build_chain(const FinGroup& g, const Subgroup& f, const std::vector<Subgroup>& h, const Subgroup& g0) {
  const auto z = center(g);
  if (!is_subgroup(g, f) || !std::includes(z.begin(), z.end(), f.begin(), f.end()))
    throw Error("build_chain: F is not central");
  if (h.empty()) throw Error("build_chain: needs at least one H_i");
  auto q = quotient(g, f);
  Subgroup meet_h = whole(q.group);
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!is_normal(q.group, h[i])) throw Error("build_chain: H_" + std::to_string(i + 1) + " is not normal in G/F");
    meet_h = intersect(meet_h, h[i]);
  }
  if (meet_h.size() != 1) throw Error("build_chain: the H_i do not intersect trivially");
  if (!is_normal(g, g0)) throw Error("build_chain: G_0 is not normal");
  if (intersect(g0, f).size() != 1) throw Error("build_chain: G_0 meets F");
  CosetChain chain{{g0}};
  for (const auto& hi : h) {
    Subgroup gi;
    for (int x = 0; x < g.order(); ++x)
      if (contains(hi, q.projection.image[x])) gi.push_back(x);
    chain.members.push_back(std::move(gi));
  }
  Subgroup upper = whole(g);
  for (std::size_t i = 1; i < chain.members.size(); ++i) upper = intersect(upper, chain.members[i]);
  if (upper != f) throw Error("build_chain: intersection over i >= 1 is not F");
  if (intersect(upper, g0).size() != 1) throw Error("build_chain: intersection over i >= 0 is not trivial");
  return chain;
}

// -------------------------------------------------------- inverse systems

FinGroup truncated_limit(const InverseSystem& system, std::size_t cap) {
  const int k = static_cast<int>(system.groups.size());
  if (k == 0) return FinGroup();
  for (const auto& m : system.maps) {
    if (m.from < 0 || m.from >= k || m.to < 0 || m.to >= k) throw Error("truncated_limit: map index out of range");
    const auto& src = system.groups[m.from];
    const auto& dst = system.groups[m.to];
    if (!is_homomorphism(src, dst, m.hom)) throw Error("truncated_limit: connecting map is not a homomorphism");
    std::vector<char> hit(dst.order(), 0);
    for (int x : m.hom.image) hit[x] = 1;
    if (std::find(hit.begin(), hit.end(), 0) != hit.end()) throw Error("truncated_limit: connecting map is not onto");
  }
  std::vector<std::vector<int>> tuples;
  std::vector<int> cur(k, -1);
  std::function<void(int)> dfs = [&](int i) {
    if (i == k) {
      tuples.push_back(cur);
      if (tuples.size() > cap) throw ResourceError("truncated_limit: limit above cap");
      return;
    }
    for (int x = 0; x < system.groups[i].order(); ++x) {
      cur[i] = x;
      bool ok = true;
      for (const auto& m : system.maps)
        if (std::max(m.from, m.to) == i) ok = ok && m.hom.image[cur[m.from]] == cur[m.to];
      if (ok) dfs(i + 1);
    }
    cur[i] = -1;
  };
  dfs(0);
  std::map<std::vector<int>, int> index;
  for (std::size_t t = 0; t < tuples.size(); ++t) index[tuples[t]] = static_cast<int>(t);
  const int n = static_cast<int>(tuples.size());
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      std::vector<int> c(k);
      for (int i = 0; i < k; ++i) c[i] = system.groups[i].mul(tuples[a][i], tuples[b][i]);
      auto it = index.find(c);
      if (it == index.end()) throw Error("truncated_limit: compatible tuples are not closed");
      table[a][b] = it->second;
    }
  return FinGroup::from_table(table);
}

InverseSystem quotient_system(const FinGroup& g, const std::vector<Subgroup>& normals) {
  InverseSystem sys;
  std::vector<Quotient> qs;
  for (const auto& n : normals) {
    qs.push_back(quotient(g, n));
    sys.groups.push_back(qs.back().group);
  }
  for (std::size_t j = 0; j < normals.size(); ++j)
    for (std::size_t k = 0; k < normals.size(); ++k) {
      if (j == k || !std::includes(normals[k].begin(), normals[k].end(), normals[j].begin(), normals[j].end())) continue;
      if (normals[j] == normals[k] && j > k) continue;
      GroupHom hom;
      for (const auto& coset : qs[j].cosets) hom.image.push_back(qs[k].projection.image[coset[0]]);
      sys.maps.push_back({static_cast<int>(j), static_cast<int>(k), std::move(hom)});
    }
  return sys;
}

// --------------------------------------------------------------- catalogue

FinGroup cyclic_group(int n) {
  if (n < 1) throw Error("cyclic_group: order must be positive");
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  return FinGroup::from_table(t);
}

FinGroup metacyclic_group(int m, int k, int r, int t) {
  if (m < 1 || k < 1) throw Error("metacyclic_group: bad orders");
  auto mod = [](long long x, int n) { return static_cast<int>(((x % n) + n) % n); };
  std::vector<int> rp(k + 1, 1);
  for (int j = 1; j <= k; ++j) rp[j] = mod(static_cast<long long>(rp[j - 1]) * r, m);
  if (rp[k] != 1 % m || mod(static_cast<long long>(t) * r - t, m) != 0)
    throw Error("metacyclic_group: parameters do not define a group");
  const int n = m * k;
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const int i1 = x % m, j1 = x / m, i2 = y % m, j2 = y / m;
      long long i = i1 + static_cast<long long>(i2) * rp[j1];
      int j = j1 + j2;
      if (j >= k) {
        j -= k;
        i += t;
      }
      table[x][y] = j * m + mod(i, m);
    }
  return FinGroup::from_table(table);
}

FinGroup semidirect_cyclic(const FinGroup& n, int k, const Perm& alpha) {
  if (!is_permutation(alpha, n.order()) || alpha[0] != 0) throw Error("semidirect_cyclic: alpha is not a permutation fixing 1");
  std::vector<Perm> powers{Perm(n.order())};
  std::iota(powers[0].begin(), powers[0].end(), 0);
  for (int j = 1; j <= k; ++j) {
    Perm p(n.order());
    for (int x = 0; x < n.order(); ++x) p[x] = alpha[powers[j - 1][x]];
    powers.push_back(std::move(p));
  }
  if (powers[k] != powers[0]) throw Error("semidirect_cyclic: alpha^k is not the identity");
  if (!is_homomorphism(n, n, GroupHom{alpha})) throw Error("semidirect_cyclic: alpha is not an automorphism");
  const int size = n.order() * k;
  std::vector<std::vector<int>> table(size, std::vector<int>(size));
  for (int x = 0; x < size; ++x)
    for (int y = 0; y < size; ++y) {
      const int n1 = x % n.order(), j1 = x / n.order(), n2 = y % n.order(), j2 = y / n.order();
      table[x][y] = ((j1 + j2) % k) * n.order() + n.mul(n1, powers[j1][n2]);
    }
  return FinGroup::from_table(table);
}

namespace {

FinGroup dihedral(int order) { return metacyclic_group(order / 2, 2, order / 2 - 1, 0); }

// Automorphism of Z_4 x Z_2 (index 2i + j) given on coordinates.
Perm z4z2_auto(const std::function<std::pair<int, int>(int, int)>& f) {
  Perm p(8);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 2; ++j) {
      auto [a, b] = f(i, j);
      p[2 * i + j] = 2 * a + b;
    }
  return p;
}

std::vector<CatalogueEntry> build_catalogue() {
  std::vector<CatalogueEntry> c;
  auto add = [&](std::string id, FinGroup g) { c.push_back({std::move(id), std::move(g)}); };
  auto C = [](int n) { return cyclic_group(n); };
  auto x = [](const FinGroup& a, const FinGroup& b) { return direct_product(a, b); };
  const auto z4z2 = x(C(4), C(2));
  const auto a4 = FinGroup::generate({{1, 2, 0, 3}, {1, 0, 3, 2}}, 4);

  for (int n = 1; n <= 16; ++n) {
    add("C" + std::to_string(n), C(n));
    switch (n) {
      case 4: add("C2^2", x(C(2), C(2))); break;
      case 6: add("S3", dihedral(6)); break;
      case 8:
        add("C4xC2", z4z2);
        add("C2^3", x(x(C(2), C(2)), C(2)));
        add("D8", dihedral(8));
        add("Q8", metacyclic_group(4, 2, 3, 2));
        break;
      case 9: add("C3^2", x(C(3), C(3))); break;
      case 10: add("D10", dihedral(10)); break;
      case 12:
        add("C6xC2", x(C(6), C(2)));
        add("A4", a4);
        add("D12", dihedral(12));
        add("Dic12", metacyclic_group(6, 2, 5, 3));
        break;
      case 14: add("D14", dihedral(14)); break;
      case 16:
        add("C4^2", x(C(4), C(4)));
        add("C8xC2", x(C(8), C(2)));
        add("C4xC2^2", x(z4z2, C(2)));
        add("C2^4", x(x(C(2), C(2)), x(C(2), C(2))));
        add("C2^2:C4", semidirect_cyclic(z4z2, 2, z4z2_auto([](int i, int j) { return std::pair{i, (i + j) % 2}; })));
        add("C4:C4", metacyclic_group(4, 4, 3, 0));
        add("M16", metacyclic_group(8, 2, 5, 0));
        add("D16", dihedral(16));
        add("SD16", metacyclic_group(8, 2, 3, 0));
        add("Q16", metacyclic_group(8, 2, 7, 4));
        add("D8xC2", x(dihedral(8), C(2)));
        add("Q8xC2", x(metacyclic_group(4, 2, 3, 2), C(2)));
        add("Pauli", semidirect_cyclic(z4z2, 2, z4z2_auto([](int i, int j) { return std::pair{(i + 2 * j) % 4, j}; })));
        break;
      default: break;
    }
  }
  add("C18", C(18));
  add("D18", dihedral(18));
  add("S3xC3", x(dihedral(6), C(3)));
  add("C20", C(20));
  add("D20", dihedral(20));
  add("F20", metacyclic_group(5, 4, 2, 0));
  add("C21", C(21));
  add("C7:C3", metacyclic_group(7, 3, 2, 0));
  add("C24", C(24));
  add("D24", dihedral(24));
  add("A4xC2", x(a4, C(2)));
  add("S4", FinGroup::generate({{1, 2, 3, 0}, {1, 0, 2, 3}}, 4));
  return c;
}

}  // namespace

const std::vector<CatalogueEntry>& group_catalogue() {
  static const std::vector<CatalogueEntry> c = build_catalogue();
  return c;
}

const FinGroup& catalogue_group(const std::string& id) {
  for (const auto& e : group_catalogue())
    if (e.id == id) return e.group;
  throw Error("no catalogue group " + id);
}

}  // namespace oligo
