#include "oligo/partition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <map>

#include "oligo/enumerate.hpp"

namespace oligo {

using nlohmann::json;

namespace {

std::size_t symbol_index(int n, int i) { return static_cast<std::size_t>(n * (n - 1) / 2 + i - 1); }

bool injective(const Tuple& t) {
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = i + 1; j < t.size(); ++j)
      if (t[i] == t[j]) return false;
  return true;
}

// Injective n-tuples over {0..size-1} mentioning some element >= from, lexicographic.
template <class Fn>
void for_each_injective(int size, int n, int from, Fn&& fn) {
  Tuple t(n);
  std::vector<bool> used(size, false);
  auto rec = [&](auto& self, int pos, bool hit) -> void {
    if (pos == n) {
      if (hit) fn(static_cast<const Tuple&>(t));
      return;
    }
    const int lo = (!hit && pos == n - 1) ? from : 0;
    for (int x = lo; x < size; ++x) {
      if (used[x]) continue;
      used[x] = true;
      t[pos] = x;
      self(self, pos + 1, hit || x >= from);
      used[x] = false;
    }
  };
  rec(rec, 0, false);
}

// Mixed-radix walk over label choices; options[k] lists the allowed labels of slots[k].
bool for_each_labeling(const FinStructure& seed, const std::vector<std::pair<int, Tuple>>& slots,
                       const std::vector<std::vector<int>>& options, std::size_t max_log2,
                       const std::function<bool(const FinStructure&)>& visit) {
  double log2 = 0;
  for (const auto& o : options) {
    if (o.empty()) return true;
    log2 += std::log2(static_cast<double>(o.size()));
  }
  if (log2 > static_cast<double>(max_log2))
    throw ResourceError("partition labelling: 2^" + std::to_string(log2) + " candidates");
  std::vector<std::size_t> digit(slots.size(), 0);
  FinStructure s = seed;
  for (std::size_t k = 0; k < slots.size(); ++k) s.add(symbol_index(slots[k].first, options[k][0]), slots[k].second);
  while (true) {
    if (!visit(s)) return false;
    std::size_t k = 0;
    while (k < slots.size() && digit[k] + 1 == options[k].size()) {
      s.remove(symbol_index(slots[k].first, options[k][digit[k]]), slots[k].second);
      digit[k] = 0;
      s.add(symbol_index(slots[k].first, options[k][0]), slots[k].second);
      ++k;
    }
    if (k == slots.size()) return true;
    s.remove(symbol_index(slots[k].first, options[k][digit[k]]), slots[k].second);
    ++digit[k];
    s.add(symbol_index(slots[k].first, options[k][digit[k]]), slots[k].second);
  }
}

std::string iso_key(const FinStructure& s) { return to_json(canonical_form(s)).dump(); }

}  // namespace

std::string partition_symbol(int n, int i) { return "P" + std::to_string(n) + "_" + std::to_string(i); }
std::string reduct_symbol(int n) { return "E" + std::to_string(n); }

Signature partition_signature(int grade) {
  if (grade < 1) throw Error("partition grade must be at least 1");
  std::vector<Symbol> symbols;
  for (int n = 1; n <= grade; ++n)
    for (int i = 1; i <= n; ++i) symbols.push_back({partition_symbol(n, i), n});
  return Signature(std::move(symbols));
}

Signature reduct_signature(int grade) {
  if (grade < 1) throw Error("partition grade must be at least 1");
  std::vector<Symbol> symbols;
  for (int n = 1; n <= grade; ++n) symbols.push_back({reduct_symbol(n), 2 * n});
  return Signature(std::move(symbols));
}

// --------------------------------------------------------------- partition

PartitionOracle::PartitionOracle(int grade, Caps caps)
    : ClassOracle(partition_signature(grade), caps), grade_(grade) {}

int PartitionOracle::label(const FinStructure& s, const Tuple& t) const {
  const int n = static_cast<int>(t.size());
  if (n < 1 || n > grade_) throw Error("label: tuple length outside 1.." + std::to_string(grade_));
  for (int i = 1; i <= n; ++i)
    if (s.holds(symbol_index(n, i), t)) return i;
  return 0;
}

bool PartitionOracle::is_member(const FinStructure& s) const {
  if (!(s.signature() == signature())) return false;
  for (int n = 1; n <= grade_; ++n) {
    long count = 0;
    for (int i = 1; i <= n; ++i)
      for (const auto& t : s.relation(symbol_index(n, i))) {
        if (!injective(t)) return false;
        for (int v : t)
          if (v < 0 || v >= s.size()) return false;
        for (int j = i + 1; j <= n; ++j)
          if (s.holds(symbol_index(n, j), t)) return false;
        ++count;
      }
    long expected = 1;
    for (int k = 0; k < n; ++k) expected *= std::max(0, s.size() - k);
    if (count != expected) return false;
  }
  return true;
}

void PartitionOracle::complete_lowest(FinStructure& s, int from) const {
  for (int n = 1; n <= grade_; ++n)
    for_each_injective(s.size(), n, from, [&](const Tuple& t) {
      if (label(s, t) == 0) s.add(symbol_index(n, 1), t);
    });
}

Amalgam PartitionOracle::amalgamate(const FinStructure& a, const FinStructure& b, std::span<const int> f,
                                    const FinStructure& c, std::span<const int> g) const {
  Amalgam am;
  am.d = b;
  am.right = *amalgamate_into(am.d, a, f, c, g);
  am.left = iota_vector(b.size());
  return am;
}

std::optional<std::vector<int>> PartitionOracle::amalgamate_into(FinStructure& b, const FinStructure& a,
                                                                 std::span<const int> f, const FinStructure& c,
                                                                 std::span<const int> g) const {
  const int old = b.size();
  auto right = free_amalgam_into(b, a, f, c, g);
  complete_lowest(b, old);
  return right;
}

void PartitionOracle::for_each_extension(const FinStructure& base, std::span<const RequiredFact> required,
                                         const ExtensionVisitor& visit) const {
  const int m = base.size();
  std::vector<std::pair<int, Tuple>> slots;
  std::vector<std::vector<int>> options;
  for (int n = 1; n <= grade_; ++n)
    for_each_injective(m + 1, n, m, [&](const Tuple& t) {
      slots.emplace_back(n, t);
      options.push_back(iota_vector(n, 1));
    });
  for (const auto& r : required) {
    if (std::find(r.tuple.begin(), r.tuple.end(), m) == r.tuple.end()) {
      if (base.holds(r.symbol, r.tuple) != r.holds) return;
      continue;
    }
    const int n = static_cast<int>(r.tuple.size());
    const int i = static_cast<int>(r.symbol) - n * (n - 1) / 2 + 1;
    if (!injective(r.tuple)) {
      if (r.holds) return;  // non-injective tuples carry no label
      continue;
    }
    auto it = std::lower_bound(slots.begin(), slots.end(), std::pair<int, Tuple>{n, r.tuple});
    auto& opts = options[it - slots.begin()];
    if (r.holds)
      opts = std::find(opts.begin(), opts.end(), i) != opts.end() ? std::vector<int>{i} : std::vector<int>{};
    else
      std::erase(opts, i);
  }
  FinStructure seed = base;
  seed.add_element();
  for_each_labeling(seed, slots, options, caps().max_free_slots, visit);
}

std::vector<FinStructure> PartitionOracle::members(int size) const {
  if (size > caps().max_member_size) throw ResourceError(name() + ": member size above cap");
  std::vector<std::pair<int, Tuple>> slots;
  std::vector<std::vector<int>> options;
  for (int n = 1; n <= grade_; ++n)
    for_each_injective(size, n, 0, [&](const Tuple& t) {
      slots.emplace_back(n, t);
      options.push_back(iota_vector(n, 1));
    });
  std::set<std::string> seen;
  std::vector<FinStructure> out;
  for_each_labeling(FinStructure(signature(), size), slots, options, caps().max_free_slots,
                    [&](const FinStructure& s) {
                      if (seen.insert(iso_key(s)).second) out.push_back(s);
                      return true;
                    });
  return out;
}

FinStructure en_reduct(const PartitionOracle& oracle, const FinStructure& s) {
  if (!oracle.is_member(s)) throw Error("en_reduct: input is not a partition structure");
  FinStructure r(reduct_signature(oracle.grade()), s.size());
  for (int n = 1; n <= oracle.grade(); ++n)
    for (int i = 1; i <= n; ++i) {
      const auto& cls = s.relation(symbol_index(n, i));
      for (const auto& x : cls)
        for (const auto& y : cls) {
          Tuple xy = x;
          xy.insert(xy.end(), y.begin(), y.end());
          r.add(static_cast<std::size_t>(n - 1), std::move(xy));
        }
    }
  return r;
}

// ------------------------------------------------------------------ reduct

EReductOracle::EReductOracle(int grade, Caps caps)
    : ClassOracle(reduct_signature(grade), caps), grade_(grade), source_(grade, caps) {}

namespace {

// Classes of E^n on injective n-tuples; class ids follow the least tuple.
// Returns nullopt when E^n is not an equivalence on injective tuples.
std::optional<std::map<Tuple, int>> reduct_classes(const FinStructure& s, int n) {
  std::map<Tuple, int> id;
  std::vector<Tuple> tuples;
  for_each_injective(s.size(), n, 0, [&](const Tuple& t) {
    id.emplace(t, static_cast<int>(tuples.size()));
    tuples.push_back(t);
  });
  std::vector<int> parent(tuples.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  const auto& rel = s.relation(static_cast<std::size_t>(n - 1));
  for (const auto& xy : rel) {
    Tuple x(xy.begin(), xy.begin() + n), y(xy.begin() + n, xy.end());
    auto ix = id.find(x), iy = id.find(y);
    if (ix == id.end() || iy == id.end()) return std::nullopt;
    int rx = find(ix->second), ry = find(iy->second);
    if (rx != ry) parent[std::max(rx, ry)] = std::min(rx, ry);
  }
  std::map<int, long> size;
  for (std::size_t k = 0; k < tuples.size(); ++k) ++size[find(static_cast<int>(k))];
  long pairs = 0;
  for (auto [root, c] : size) pairs += c * c;
  if (pairs != static_cast<long>(rel.size())) return std::nullopt;
  std::map<Tuple, int> out;
  std::map<int, int> number;
  for (std::size_t k = 0; k < tuples.size(); ++k) {
    int root = find(static_cast<int>(k));
    auto [it, fresh] = number.emplace(root, static_cast<int>(number.size()));
    out[tuples[k]] = it->second;
  }
  return out;
}

// Labels reduct classes; preset labels win, other classes take the least unused label.
FinStructure lift_with(const PartitionOracle& source, const FinStructure& s,
                       const std::vector<std::map<int, int>>& preset) {
  FinStructure p(source.signature(), s.size());
  for (int n = 1; n <= source.grade(); ++n) {
    auto classes = reduct_classes(s, n);
    if (!classes) throw Error("lift: E" + std::to_string(n) + " is not an equivalence on injective tuples");
    std::map<int, int> label = n - 1 < static_cast<int>(preset.size()) ? preset[n - 1] : std::map<int, int>{};
    std::set<int> used;
    for (auto [cls, l] : label) used.insert(l);
    int next = 1;
    for (const auto& [t, cls] : *classes) {
      if (!label.contains(cls)) {
        while (used.contains(next)) ++next;
        if (next > n) throw Error("lift: more than " + std::to_string(n) + " classes of E" + std::to_string(n));
        label[cls] = next;
        used.insert(next);
      }
      p.add(symbol_index(n, label[cls]), t);
    }
  }
  return p;
}

}  // namespace

bool EReductOracle::is_member(const FinStructure& s) const {
  if (!(s.signature() == signature())) return false;
  for (int n = 1; n <= grade_; ++n) {
    auto classes = reduct_classes(s, n);
    if (!classes) return false;
    std::set<int> ids;
    for (const auto& [t, c] : *classes) ids.insert(c);
    if (static_cast<int>(ids.size()) > n) return false;
  }
  return true;
}

FinStructure EReductOracle::lift(const FinStructure& s) const { return lift_with(source_, s, {}); }

Amalgam EReductOracle::amalgamate(const FinStructure& a, const FinStructure& b, std::span<const int> f,
                                  const FinStructure& c, std::span<const int> g) const {
  auto lb = lift(b);
  // C's classes meeting g(A) take the labels their A-tuples carry in B.
  std::vector<std::map<int, int>> preset(grade_);
  std::vector<int> g_inv(c.size(), -1);
  for (std::size_t x = 0; x < g.size(); ++x) g_inv[g[x]] = static_cast<int>(x);
  for (int n = 1; n <= grade_; ++n) {
    auto classes = reduct_classes(c, n);
    if (!classes) throw Error("reduct amalgam: C is not a member");
    for (const auto& [t, cls] : *classes) {
      if (std::any_of(t.begin(), t.end(), [&](int v) { return g_inv[v] < 0; })) continue;
      Tuple in_b(t.size());
      for (std::size_t k = 0; k < t.size(); ++k) in_b[k] = f[g_inv[t[k]]];
      preset[n - 1][cls] = source_.label(lb, in_b);
    }
  }
  auto lc = lift_with(source_, c, preset);
  auto la = lb.induced(f);
  auto am = source_.amalgamate(la, lb, f, lc, g);
  return {en_reduct(source_, am.d), am.left, am.right};
}

void EReductOracle::for_each_extension(const FinStructure& base, std::span<const RequiredFact> required,
                                       const ExtensionVisitor& visit) const {
  auto lb = lift(base);
  std::set<std::string> seen;
  source_.for_each_extension(lb, {}, [&](const FinStructure& e) {
    auto r = en_reduct(source_, e);
    for (const auto& q : required)
      if (r.holds(q.symbol, q.tuple) != q.holds) return true;
    if (!seen.insert(to_json(r).dump()).second) return true;
    return visit(r);
  });
}

std::vector<FinStructure> EReductOracle::members(int size) const {
  std::set<std::string> seen;
  std::vector<FinStructure> out;
  for (const auto& m : source_.members(size)) {
    auto r = en_reduct(source_, m);
    if (seen.insert(iso_key(r)).second) out.push_back(std::move(r));
  }
  return out;
}

}  // namespace oligo
