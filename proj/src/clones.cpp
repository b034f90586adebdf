#include "oligo/clones.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "oligo/enumerate.hpp"

namespace oligo {

using nlohmann::json;

namespace {

std::size_t table_size(int d, int k) {
  std::size_t n = 1;
  for (int i = 0; i < k; ++i) n *= static_cast<std::size_t>(d);
  return n;
}

std::vector<int> decode_index(std::size_t idx, int d, int k) {
  std::vector<int> x(k);
  for (int i = k - 1; i >= 0; --i) {
    x[i] = static_cast<int>(idx % d);
    idx /= d;
  }
  return x;
}

std::string show(const FinOperation& f) { return f.to_json().dump(); }

}  // namespace

// -------------------------------------------------------------- operations

FinOperation FinOperation::projection(int d, int k, int i) {
  if (i < 0 || i >= k) throw Error("projection: coordinate out of range");
  return from_function(d, k, [i](const std::vector<int>& x) { return x[i]; });
}

FinOperation FinOperation::constant(int d, int k, int c) {
  if (c < 0 || c >= d) throw Error("constant: value out of range");
  return {d, k, std::vector<int>(table_size(d, k), c)};
}

FinOperation FinOperation::from_function(int d, int k, const std::function<int(const std::vector<int>&)>& f) {
  if (d < 1 || k < 0) throw Error("operation: bad domain size or arity");
  FinOperation op{d, k, {}};
  const auto n = table_size(d, k);
  op.table.reserve(n);
  for (std::size_t i = 0; i < n; ++i) op.table.push_back(f(decode_index(i, d, k)));
  op.validate();
  return op;
}

int FinOperation::operator()(const std::vector<int>& args) const {
  std::size_t idx = 0;
  for (int x : args) idx = idx * d + x;
  return table[idx];
}

void FinOperation::validate() const {
  if (d < 1 || k < 0) throw Error("operation: bad domain size or arity");
  if (table.size() != table_size(d, k)) throw Error("operation: table has the wrong size");
  for (int v : table)
    if (v < 0 || v >= d) throw Error("operation: value out of range");
}

json FinOperation::to_json() const { return {{"d", d}, {"k", k}, {"table", table}}; }

FinOperation FinOperation::from_json(const json& j) {
  FinOperation f{j.at("d").get<int>(), j.at("k").get<int>(), j.at("table").get<std::vector<int>>()};
  f.validate();
  return f;
}

FinOperation add_dummies(const FinOperation& f, int k, const std::vector<int>& slots) {
  if (static_cast<int>(slots.size()) != f.k || k < f.k) throw Error("add_dummies: need one slot per coordinate");
  std::set<int> seen;
  for (int s : slots)
    if (s < 0 || s >= k || !seen.insert(s).second) throw Error("add_dummies: slots must be distinct and below k");
  return FinOperation::from_function(f.d, k, [&](const std::vector<int>& x) {
    std::vector<int> args;
    for (int s : slots) args.push_back(x[s]);
    return f(args);
  });
}

FinOperation compose(const FinOperation& f, const std::vector<FinOperation>& gs) {
  if (static_cast<int>(gs.size()) != f.k) throw Error("compose: need one inner operation per coordinate");
  if (gs.empty()) return f;
  const int m = gs[0].k;
  for (const auto& g : gs)
    if (g.k != m || g.d != f.d) throw Error("compose: inner operations differ in arity or domain");
  return FinOperation::from_function(f.d, m, [&](const std::vector<int>& x) {
    std::vector<int> args;
    for (const auto& g : gs) args.push_back(g(x));
    return f(args);
  });
}

EssentialCoordinates is_essentially_unary(const FinOperation& f) {
  EssentialCoordinates r;
  const auto n = f.table.size();
  for (int i = 0; i < f.k; ++i) {
    bool depends = false;
    for (std::size_t idx = 0; idx < n && !depends; ++idx) {
      auto x = decode_index(idx, f.d, f.k);
      for (int v = 0; v < f.d && !depends; ++v) {
        auto y = x;
        y[i] = v;
        depends = f(y) != f.table[idx];
      }
    }
    if (depends) r.coordinates.push_back(i);
  }
  r.essentially_unary = r.coordinates.size() <= 1;
  return r;
}

std::optional<FinOperation> unary_core(const FinOperation& f) {
  auto e = is_essentially_unary(f);
  if (!e.essentially_unary) return std::nullopt;
  if (e.coordinates.empty()) return FinOperation::constant(f.d, 1, f.table[0]);
  const int i = e.coordinates[0];
  return FinOperation::from_function(f.d, 1, [&](const std::vector<int>& x) {
    std::vector<int> args(f.k, 0);
    args[i] = x[0];
    return f(args);
  });
}

// ----------------------------------------------------------------- monoids

FunctionMonoid::FunctionMonoid(std::vector<FinOperation> elements) : elements_(std::move(elements)) {
  if (elements_.empty()) throw Error("monoid: no elements");
  d_ = elements_[0].d;
  for (const auto& u : elements_) {
    u.validate();
    if (u.k != 1 || u.d != d_) throw Error("monoid: elements must be unary on one domain");
  }
  std::sort(elements_.begin(), elements_.end());
  elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
  if (!contains(FinOperation::projection(d_, 1, 0))) throw Error("monoid: identity missing");
  for (const auto& u : elements_)
    for (const auto& v : elements_)
      if (!contains(compose(u, {v}))) throw Error("monoid: not closed under composition: " + show(compose(u, {v})));
}

FunctionMonoid FunctionMonoid::generated(int d, const std::vector<FinOperation>& gens) {
  std::set<FinOperation> found{FinOperation::projection(d, 1, 0)};
  std::vector<FinOperation> queue(found.begin(), found.end());
  for (std::size_t q = 0; q < queue.size(); ++q)
    for (const auto& g : gens) {
      auto c = compose(g, {queue[q]});
      if (found.insert(c).second) queue.push_back(c);
    }
  return FunctionMonoid(std::vector<FinOperation>(found.begin(), found.end()));
}

FunctionMonoid FunctionMonoid::full(int d) {
  std::vector<FinOperation> all;
  for_each_word(iota_vector(d), d, [&](const std::vector<int>& w) {
    all.push_back({d, 1, w});
    return true;
  });
  return FunctionMonoid(std::move(all));
}

std::optional<std::size_t> FunctionMonoid::index_of(const FinOperation& u) const {
  auto it = std::lower_bound(elements_.begin(), elements_.end(), u);
  if (it == elements_.end() || !(*it == u)) return std::nullopt;
  return static_cast<std::size_t>(it - elements_.begin());
}

bool CloneHandle::contains(const FinOperation& f) const {
  if (f.d != monoid_.d()) return false;
  auto core = unary_core(f);
  return core && monoid_.contains(*core);
}

std::vector<FinOperation> CloneHandle::members(int k) const {
  std::set<FinOperation> out;
  for (const auto& u : monoid_.elements()) {
    if (k == 0) {
      if (is_essentially_unary(u).coordinates.empty()) out.insert({u.d, 0, {u.table[0]}});
      continue;
    }
    for (int i = 0; i < k; ++i) out.insert(add_dummies(u, k, {i}));
  }
  return {out.begin(), out.end()};
}

CloneHandle clone_from_monoid(const FunctionMonoid& m) { return CloneHandle(m); }

// ----------------------------------------------------------- polymorphisms

bool preserves(const FinOperation& f, const FinStructure& s) {
  if (f.d != s.size()) throw Error("preserves: domain sizes differ");
  for (std::size_t sym = 0; sym < s.signature().size(); ++sym) {
    const int arity = s.signature()[sym].arity;
    const std::vector<Tuple> rel(s.relation(sym).begin(), s.relation(sym).end());
    if (rel.empty() && f.k > 0) continue;
    std::vector<int> pick(f.k, 0);
    // every choice of f.k tuples from the relation
    while (true) {
      Tuple image(arity);
      std::vector<int> args(f.k);
      for (int c = 0; c < arity; ++c) {
        for (int j = 0; j < f.k; ++j) args[j] = rel[pick[j]][c];
        image[c] = f(args);
      }
      if (!s.holds(sym, image)) return false;
      int j = f.k - 1;
      while (j >= 0 && pick[j] + 1 == static_cast<int>(rel.size())) pick[j--] = 0;
      if (j < 0) break;
      ++pick[j];
    }
  }
  return true;
}

std::vector<FinOperation> polymorphisms(const FinStructure& s, int k, std::size_t cap) {
  const int d = s.size();
  if (d < 1) throw Error("polymorphisms: empty domain");
  const auto cells = table_size(d, k);
  double count = 1;
  for (std::size_t i = 0; i < cells; ++i) count *= d;
  if (count > static_cast<double>(cap)) throw ResourceError("polymorphisms: too many candidate tables");
  std::vector<FinOperation> out;
  FinOperation f{d, k, std::vector<int>(cells, 0)};
  while (true) {
    if (preserves(f, s)) out.push_back(f);
    std::size_t i = cells;
    while (i > 0 && f.table[i - 1] == d - 1) f.table[--i] = 0;
    if (i == 0) break;
    ++f.table[i - 1];
  }
  return out;
}

FinStructure r_gadget(int d) {
  if (d < 2) throw Error("r_gadget: domain needs at least two elements");
  FinStructure s(Signature({{"R", 4}}), d);
  for_each_word(iota_vector(d), 4, [&](const std::vector<int>& t) {
    if (t[0] == t[1] || t[2] == t[3]) s.add(0, t);
    return true;
  });
  return s;
}

// ------------------------------------------------------- clone morphisms

json CloneHomReport::to_json() const {
  json j{{"pass", pass}, {"composites", composites}, {"projections", projections}};
  if (violation) j["violation"] = *violation;
  return j;
}

CloneHomReport check_clone_homomorphism(const CloneMap& xi, const std::vector<FinOperation>& samples, int max_arity) {
  CloneHomReport r;
  auto fail = [&](std::string why) {
    if (r.pass) r.violation = std::move(why);
    r.pass = false;
  };
  auto image = [&](const FinOperation& f) {
    auto y = xi(f);
    if (!y) fail("map undefined on " + show(f));
    return y;
  };
  std::map<int, std::vector<const FinOperation*>> by_arity;
  for (const auto& g : samples) by_arity[g.k].push_back(&g);
  for (const auto& f : samples) {
    auto xf = image(f);
    if (!xf || f.k == 0) continue;
    for (auto& [m, inner] : by_arity) {
      if (m == 0) continue;
      std::vector<int> pick(f.k, 0);
      while (true) {
        std::vector<FinOperation> gs, xgs;
        bool defined = true;
        for (int j = 0; j < f.k; ++j) {
          gs.push_back(*inner[pick[j]]);
          auto xg = image(gs.back());
          if (!xg) defined = false;
          else xgs.push_back(*xg);
        }
        if (!defined) return r;
        auto c = compose(f, gs);
        auto xc = image(c);
        if (!xc) return r;
        ++r.composites;
        if (!(*xc == compose(*xf, xgs))) {
          std::string args;
          for (const auto& g : gs) args += " " + show(g);
          fail("composite of " + show(f) + " with" + args + " is not preserved");
        }
        int j = f.k - 1;
        while (j >= 0 && pick[j] + 1 == static_cast<int>(inner.size())) pick[j--] = 0;
        if (j < 0) break;
        ++pick[j];
      }
    }
  }
  const int d = samples.empty() ? 0 : samples[0].d;
  for (int k = 1; k <= max_arity && d > 0; ++k)
    for (int i = 0; i < k; ++i) {
      auto p = FinOperation::projection(d, k, i);
      auto xp = image(p);
      ++r.projections;
      if (xp && !(*xp == p)) fail("projection " + show(p) + " is moved");
    }
  return r;
}

CloneMap extend_monoid_iso(const FunctionMonoid& m, const FunctionMonoid& n, const std::vector<std::size_t>& image) {
  const auto& me = m.elements();
  const auto& ne = n.elements();
  if (image.size() != me.size() || me.size() != ne.size()) throw RejectedIso("monoid map is not a bijection", me[0]);
  std::vector<char> hit(ne.size(), 0);
  for (std::size_t i = 0; i < image.size(); ++i) {
    if (image[i] >= ne.size() || hit[image[i]]) throw RejectedIso("monoid map is not a bijection", me[i]);
    hit[image[i]] = 1;
  }
  for (std::size_t i = 0; i < me.size(); ++i)
    for (std::size_t j = 0; j < me.size(); ++j) {
      auto c = m.index_of(compose(me[i], {me[j]}));
      if (!(compose(ne[image[i]], {ne[image[j]]}) == ne[image[*c]]))
        throw RejectedIso("monoid map does not preserve composition", me[i]);
    }
  auto is_constant = [](const FinOperation& u) { return is_essentially_unary(u).coordinates.empty(); };
  for (std::size_t i = 0; i < me.size(); ++i)
    if (is_constant(me[i]) != is_constant(ne[image[i]]))
      throw RejectedIso("constants are not matched with constants: " + show(me[i]) + " -> " + show(ne[image[i]]), me[i]);

  return [m, n, image](const FinOperation& f) -> std::optional<FinOperation> {
    if (f.d != m.d()) return std::nullopt;
    auto e = is_essentially_unary(f);
    if (!e.essentially_unary) return std::nullopt;
    auto core = unary_core(f);
    auto idx = m.index_of(*core);
    if (!idx) return std::nullopt;
    const auto& u = n.elements()[image[*idx]];
    if (e.coordinates.empty()) return FinOperation::constant(n.d(), f.k, u.table[0]);
    return add_dummies(u, f.k, {e.coordinates[0]});
  };
}

}  // namespace oligo
