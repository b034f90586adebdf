#include "oligo/oracles.hpp"

#include <algorithm>

#include "oligo/enumerate.hpp"

namespace oligo {

namespace {

bool satisfies(const FinStructure& s, std::span<const RequiredFact> required) {
  return std::all_of(required.begin(), required.end(),
                     [&](const RequiredFact& r) { return s.holds(r.symbol, r.tuple) == r.holds; });
}

bool is_simple_graph(const FinStructure& s) {
  for (const auto& t : s.relation(0))
    if (t[0] == t[1] || !s.holds(0, {t[1], t[0]})) return false;
  return true;
}

}  // namespace

std::vector<FinStructure> members_by_extension(const ClassOracle& oracle, int size) {
  if (size > oracle.caps().max_member_size) throw ResourceError(oracle.name() + ": member size above cap");
  if (size == 0) {
    FinStructure empty(oracle.signature(), 0);
    if (oracle.is_member(empty)) return {empty};
    return {};
  }
  std::set<std::string> seen;
  std::vector<FinStructure> out;
  for (const auto& smaller : oracle.members(size - 1))
    for (auto& e : oracle.extensions(smaller))
      if (seen.insert(to_json(canonical_form(e)).dump()).second) out.push_back(std::move(e));
  return out;
}

// ------------------------------------------------------------------ graphs

RandomGraphClass::RandomGraphClass(Caps caps) : ClassOracle(Signature({{"E", 2}}), caps) {}

bool RandomGraphClass::is_member(const FinStructure& s) const { return is_simple_graph(s); }

Amalgam RandomGraphClass::amalgamate(const FinStructure& a, const FinStructure& b, std::span<const int> f,
                                     const FinStructure& c, std::span<const int> g) const {
  return free_amalgam(a, b, f, c, g);
}

void RandomGraphClass::for_each_extension(const FinStructure& base, std::span<const RequiredFact> required,
                                          const ExtensionVisitor& visit) const {
  const int m = base.size();
  // -1 free, 0 non-neighbour, 1 neighbour
  std::vector<int> forced(m, -1);
  for (const auto& r : required) {
    const auto& t = r.tuple;
    const bool x_new = t[0] == m, y_new = t[1] == m;
    if (!x_new && !y_new) {
      if (base.holds(0, t) != r.holds) return;
      continue;
    }
    if (x_new && y_new) {
      if (r.holds) return;
      continue;
    }
    int v = x_new ? t[1] : t[0];
    int want = r.holds ? 1 : 0;
    if (forced[v] >= 0 && forced[v] != want) return;
    forced[v] = want;
  }
  std::vector<int> free;
  for (int v = 0; v < m; ++v)
    if (forced[v] < 0) free.push_back(v);
  if (free.size() > caps().max_free_slots)
    throw ResourceError(name() + ": " + std::to_string(free.size()) + " free neighbours");
  const unsigned long total = 1ul << free.size();
  for (unsigned long mask = 0; mask < total; ++mask) {
    FinStructure e = base;
    e.add_element();
    for (int v = 0; v < m; ++v) {
      bool adj = forced[v] == 1;
      if (forced[v] < 0) adj = mask >> (std::find(free.begin(), free.end(), v) - free.begin()) & 1;
      if (adj) {
        e.add(0, {v, m});
        e.add(0, {m, v});
      }
    }
    if (is_member(e) && !visit(e)) return;
  }
}

std::vector<FinStructure> RandomGraphClass::members(int size) const { return members_by_extension(*this, size); }

bool NoIsolatedGraphClass::is_member(const FinStructure& s) const {
  if (!is_simple_graph(s)) return false;
  std::vector<bool> touched(s.size(), false);
  for (const auto& t : s.relation(0)) touched[t[0]] = true;
  return std::all_of(touched.begin(), touched.end(), [](bool b) { return b; });
}

Amalgam NoIsolatedGraphClass::amalgamate(const FinStructure& a, const FinStructure& b, std::span<const int> f,
                                         const FinStructure& c, std::span<const int> g) const {
  return free_amalgam(a, b, f, c, g);
}

void NoIsolatedGraphClass::for_each_extension(const FinStructure& base, std::span<const RequiredFact> required,
                                              const ExtensionVisitor& visit) const {
  RandomGraphClass::for_each_extension(base, required, [&](const FinStructure& e) {
    return !is_member(e) || visit(e);
  });
}

std::vector<FinStructure> NoIsolatedGraphClass::members(int size) const {
  std::vector<FinStructure> out;
  RandomGraphClass graphs(caps());
  for (auto& g : graphs.members(size))
    if (is_member(g)) out.push_back(std::move(g));
  return out;
}

// ------------------------------------------------------------------ orders

LinearOrderClass::LinearOrderClass(Caps caps) : ClassOracle(Signature({{"<", 2}}), caps) {}

bool LinearOrderClass::is_member(const FinStructure& s) const {
  const int n = s.size();
  for (int x = 0; x < n; ++x) {
    if (s.holds(0, {x, x})) return false;
    for (int y = x + 1; y < n; ++y)
      if (s.holds(0, {x, y}) == s.holds(0, {y, x})) return false;
  }
  for (const auto& t : s.relation(0))
    for (int z = 0; z < n; ++z)
      if (s.holds(0, {t[1], z}) && !s.holds(0, {t[0], z})) return false;
  return true;
}

void LinearOrderClass::for_each_extension(const FinStructure& base, std::span<const RequiredFact> required,
                                          const ExtensionVisitor& visit) const {
  const int m = base.size();
  // rank of each base element = number of elements below it
  std::vector<int> rank(m, 0);
  for (const auto& t : base.relation(0)) ++rank[t[1]];
  for (int p = 0; p <= m; ++p) {
    FinStructure e = base;
    e.add_element();
    for (int v = 0; v < m; ++v) {
      if (rank[v] < p)
        e.add(0, {v, m});
      else
        e.add(0, {m, v});
    }
    if (satisfies(e, required) && is_member(e) && !visit(e)) return;
  }
}

std::vector<FinStructure> LinearOrderClass::members(int size) const {
  FinStructure chain(signature(), size);
  for (int x = 0; x < size; ++x)
    for (int y = x + 1; y < size; ++y) chain.add(0, {x, y});
  return {chain};
}

// ---------------------------------------------------------------- renaming

namespace {

FinStructure renamed(const FinStructure& s, const Signature& sig) {
  FinStructure out(sig, s.size());
  for (std::size_t k = 0; k < sig.size(); ++k)
    for (const auto& t : s.relation(k)) out.add(k, t);
  return out;
}

}  // namespace

RenamedClass::RenamedClass(const ClassOracle& base, Signature sig) : ClassOracle(std::move(sig), base.caps()), base_(base) {
  if (signature().size() != base.signature().size()) throw Error("RenamedClass: symbol counts differ");
  for (std::size_t k = 0; k < signature().size(); ++k)
    if (signature()[k].arity != base.signature()[k].arity) throw Error("RenamedClass: arities differ");
}

FinStructure RenamedClass::to_base(const FinStructure& s) const { return renamed(s, base_.signature()); }
FinStructure RenamedClass::from_base(const FinStructure& s) const { return renamed(s, signature()); }

bool RenamedClass::is_member(const FinStructure& s) const { return base_.is_member(to_base(s)); }

Amalgam RenamedClass::amalgamate(const FinStructure& a, const FinStructure& b, std::span<const int> f,
                                 const FinStructure& c, std::span<const int> g) const {
  auto am = base_.amalgamate(to_base(a), to_base(b), f, to_base(c), g);
  am.d = from_base(am.d);
  return am;
}

void RenamedClass::for_each_extension(const FinStructure& base, std::span<const RequiredFact> required,
                                      const ExtensionVisitor& visit) const {
  base_.for_each_extension(to_base(base), required, [&](const FinStructure& e) { return visit(from_base(e)); });
}

std::vector<FinStructure> RenamedClass::members(int size) const {
  auto out = base_.members(size);
  for (auto& m : out) m = from_base(m);
  return out;
}

}  // namespace oligo
