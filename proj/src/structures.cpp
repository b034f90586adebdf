#include "oligo/structures.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace oligo {

using nlohmann::json;

// ---------------------------------------------------------------- Signature

Signature::Signature(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
  std::set<std::string> seen;
  for (const auto& s : symbols_) {
    if (s.arity < 1) throw Error("symbol '" + s.name + "' has arity < 1");
    if (!seen.insert(s.name).second) throw Error("duplicate symbol name '" + s.name + "'");
  }
}

std::optional<std::size_t> Signature::find(std::string_view name) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i)
    if (symbols_[i].name == name) return i;
  return std::nullopt;
}

std::size_t Signature::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw Error("unknown relation symbol '" + std::string(name) + "'");
}

// ------------------------------------------------------------- FinStructure

FinStructure::FinStructure(Signature signature, int size)
    : signature_(std::move(signature)), size_(size), relations_(signature_.size()) {
  if (size < 0) throw Error("negative structure size");
}

const std::set<Tuple>& FinStructure::relation(std::string_view name) const {
  return relations_[signature_.index_of(name)];
}

bool FinStructure::holds(std::string_view name, const Tuple& t) const {
  return holds(signature_.index_of(name), t);
}

void FinStructure::add(std::string_view name, Tuple t) { add(signature_.index_of(name), std::move(t)); }

std::size_t FinStructure::fact_count() const {
  std::size_t n = 0;
  for (const auto& r : relations_) n += r.size();
  return n;
}

FinStructure FinStructure::induced(std::span<const int> elements) const {
  std::vector<int> index(size_, -1);
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (elements[i] < 0 || elements[i] >= size_) throw Error("induced: element out of range");
    if (index[elements[i]] != -1) throw Error("induced: repeated element");
    index[elements[i]] = static_cast<int>(i);
  }
  FinStructure out(signature_, static_cast<int>(elements.size()));
  const std::size_t k = elements.size();
  Tuple u;
  for (std::size_t s = 0; s < relations_.size(); ++s) {
    const auto arity = static_cast<std::size_t>(signature_[s].arity);
    // probe the words over the subset when there are fewer of them than facts
    double words = 1;
    for (std::size_t i = 0; i < arity; ++i) words *= static_cast<double>(k);
    if (words < static_cast<double>(relations_[s].size())) {
      if (k == 0 && arity > 0) continue;
      Tuple w(arity, 0);
      u.assign(arity, 0);
      while (true) {
        for (std::size_t i = 0; i < arity; ++i) u[i] = elements[w[i]];
        if (relations_[s].contains(u)) out.relations_[s].insert(w);
        std::size_t i = arity;
        while (i > 0 && w[i - 1] + 1 == static_cast<int>(k)) w[--i] = 0;
        if (i == 0) break;
        ++w[i - 1];
      }
      continue;
    }
    for (const auto& t : relations_[s]) {
      u.resize(t.size());
      bool inside = true;
      for (std::size_t j = 0; j < t.size() && inside; ++j) {
        u[j] = index[t[j]];
        inside = u[j] >= 0;
      }
      if (inside) out.relations_[s].insert(u);
    }
  }
  return out;
}

void FinStructure::truncate(int new_size) {
  if (new_size < 0 || new_size > size_) throw Error("truncate: size out of range");
  for (auto& rel : relations_)
    std::erase_if(rel, [&](const Tuple& t) { return std::any_of(t.begin(), t.end(), [&](int x) { return x >= new_size; }); });
  size_ = new_size;
}

FinStructure FinStructure::mapped(std::span<const int> map, int new_size) const {
  if (static_cast<int>(map.size()) != size_) throw Error("mapped: map is not total");
  FinStructure out(signature_, new_size);
  for (std::size_t s = 0; s < relations_.size(); ++s) {
    for (const auto& t : relations_[s]) {
      Tuple u(t.size());
      for (std::size_t k = 0; k < t.size(); ++k) u[k] = map[t[k]];
      out.relations_[s].insert(std::move(u));
    }
  }
  return out;
}

// --------------------------------------------------------------- PartialMap

PartialMap::PartialMap(std::map<int, int> pairs) {
  for (auto [x, y] : pairs) set(x, y);
}

PartialMap PartialMap::total(std::span<const int> images) {
  PartialMap f;
  for (std::size_t i = 0; i < images.size(); ++i) f.set(static_cast<int>(i), images[i]);
  return f;
}

void PartialMap::set(int x, int y) {
  if (auto it = pairs_.find(x); it != pairs_.end()) {
    if (it->second == y) return;
    throw Error("partial map: " + std::to_string(x) + " already mapped");
  }
  if (inverse_.contains(y)) throw Error("partial map: " + std::to_string(y) + " already in range");
  pairs_[x] = y;
  inverse_[y] = x;
}

std::vector<int> PartialMap::domain() const {
  std::vector<int> d;
  for (auto [x, y] : pairs_) d.push_back(x);
  return d;
}

std::vector<int> PartialMap::image_of_domain() const {
  std::vector<int> d;
  for (auto [x, y] : pairs_) d.push_back(y);
  return d;
}

Tuple PartialMap::apply(const Tuple& t) const {
  Tuple u(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) u[i] = pairs_.at(t[i]);
  return u;
}

PartialMap PartialMap::inverse() const { return PartialMap(inverse_); }

PartialMap PartialMap::compose(const PartialMap& other) const {
  PartialMap out;
  for (auto [x, y] : other.pairs_)
    if (auto it = pairs_.find(y); it != pairs_.end()) out.set(x, it->second);
  return out;
}

// --------------------------------------------------------------- validation

std::string Violation::message() const {
  std::ostringstream os;
  switch (kind) {
    case ViolationKind::Arity: os << "arity"; break;
    case ViolationKind::OutOfRange: os << "out-of-range"; break;
    case ViolationKind::Duplicate: os << "duplicate"; break;
    case ViolationKind::UnknownSymbol: os << "unknown-symbol"; break;
  }
  os << ": " << symbol << " [";
  for (std::size_t i = 0; i < tuple.size(); ++i) os << (i ? "," : "") << tuple[i];
  os << "]";
  return os.str();
}

ValidationReport validate(const FinStructure& s) {
  ValidationReport report;
  for (std::size_t i = 0; i < s.signature().size(); ++i) {
    const auto& sym = s.signature()[i];
    for (const auto& t : s.relation(i)) {
      if (static_cast<int>(t.size()) != sym.arity)
        report.violations.push_back({ViolationKind::Arity, sym.name, t});
      if (std::any_of(t.begin(), t.end(), [&](int x) { return x < 0 || x >= s.size(); }))
        report.violations.push_back({ViolationKind::OutOfRange, sym.name, t});
    }
  }
  return report;
}

ValidationReport validate_json(const json& j) {
  ValidationReport report;
  Signature sig = signature_from_json(j.at("signature"));
  int size = j.at("size").get<int>();
  for (const auto& [name, tuples] : j.at("relations").items()) {
    auto idx = sig.find(name);
    if (!idx) {
      report.violations.push_back({ViolationKind::UnknownSymbol, name, {}});
      continue;
    }
    std::set<Tuple> seen;
    for (const auto& tj : tuples) {
      Tuple t = tj.get<Tuple>();
      if (static_cast<int>(t.size()) != sig[*idx].arity)
        report.violations.push_back({ViolationKind::Arity, name, t});
      if (std::any_of(t.begin(), t.end(), [&](int x) { return x < 0 || x >= size; }))
        report.violations.push_back({ViolationKind::OutOfRange, name, t});
      if (!seen.insert(t).second) report.violations.push_back({ViolationKind::Duplicate, name, t});
    }
  }
  return report;
}

// ---------------------------------------------------------------- embeddings

namespace {

void require_same_signature(const FinStructure& a, const FinStructure& b) {
  if (!(a.signature() == b.signature())) throw SignatureMismatch("structures have different signatures");
}

}  // namespace

EmbeddingCheck is_embedding(const PartialMap& f, const FinStructure& a, const FinStructure& b) {
  if (static_cast<int>(f.size()) != a.size()) return {false, "map is not total on the source domain"};
  std::vector<int> images(a.size());
  for (int x = 0; x < a.size(); ++x) {
    if (!f.defined(x)) return {false, "map is not total on the source domain"};
    images[x] = f.at(x);
  }
  return is_embedding(std::span<const int>(images), a, b);
}

EmbeddingCheck is_embedding(std::span<const int> images, const FinStructure& a, const FinStructure& b) {
  if (!(a.signature() == b.signature())) return {false, "signature mismatch"};
  if (static_cast<int>(images.size()) != a.size()) return {false, "map is not total on the source domain"};
  std::vector<char> in_img(b.size(), 0);
  for (int y : images) {
    if (y < 0 || y >= b.size()) return {false, "image " + std::to_string(y) + " out of range"};
    if (in_img[y]) return {false, "map is not injective: " + std::to_string(y) + " hit twice"};
    in_img[y] = 1;
  }
  Tuple u;
  for (std::size_t s = 0; s < a.signature().size(); ++s) {
    for (const auto& t : a.relation(s)) {
      u.resize(t.size());
      for (std::size_t k = 0; k < t.size(); ++k) u[k] = images[t[k]];
      if (!b.holds(s, u)) return {false, "fact of " + a.signature()[s].name + " not preserved"};
    }
    // Reflection: count target facts inside the image.
    std::size_t inside = 0;
    for (const auto& t : b.relation(s))
      if (std::all_of(t.begin(), t.end(), [&](int y) { return in_img[y]; })) ++inside;
    if (inside != a.relation(s).size())
      return {false, "non-fact of " + a.signature()[s].name + " not reflected"};
  }
  return {true, {}};
}

namespace {

class EmbeddingSearch {
 public:
  EmbeddingSearch(const FinStructure& a, const FinStructure& b, std::optional<std::size_t> limit)
      : a_(a), b_(b), limit_(limit) {
    const std::size_t nsym = a.signature().size();
    by_max_.assign(nsym, std::vector<std::vector<const Tuple*>>(a.size()));
    containing_.assign(nsym, std::vector<std::vector<const Tuple*>>(b.size()));
    for (std::size_t s = 0; s < nsym; ++s) {
      for (const auto& t : a.relation(s)) by_max_[s][*std::max_element(t.begin(), t.end())].push_back(&t);
      for (const auto& t : b.relation(s)) {
        std::vector<int> seen;
        for (int y : t) {
          if (std::find(seen.begin(), seen.end(), y) != seen.end()) continue;
          seen.push_back(y);
          containing_[s][y].push_back(&t);
        }
      }
    }
    // Positional occurrence counts: an induced embedding cannot lower them.
    const int max_arity = nsym ? std::max_element(a.signature().symbols().begin(), a.signature().symbols().end(),
                                                  [](const Symbol& x, const Symbol& y) { return x.arity < y.arity; })
                                     ->arity
                               : 0;
    deg_a_.assign(nsym * max_arity, std::vector<int>(a.size(), 0));
    deg_b_.assign(nsym * max_arity, std::vector<int>(b.size(), 0));
    for (std::size_t s = 0; s < nsym; ++s) {
      for (const auto& t : a.relation(s))
        for (std::size_t p = 0; p < t.size(); ++p) ++deg_a_[s * max_arity + p][t[p]];
      for (const auto& t : b.relation(s))
        for (std::size_t p = 0; p < t.size(); ++p) ++deg_b_[s * max_arity + p][t[p]];
    }
    assignment_.assign(a.size(), -1);
    used_.assign(b.size(), 0);
  }

  std::vector<std::vector<int>> run() {
    if (a_.size() <= b_.size()) extend(0);
    return std::move(results_);
  }

 private:
  bool compatible_degrees(int x, int y) const {
    for (std::size_t k = 0; k < deg_a_.size(); ++k)
      if (deg_a_[k][x] > deg_b_[k][y]) return false;
    return true;
  }

  bool consistent(int x, int y) const {
    for (std::size_t s = 0; s < by_max_.size(); ++s) {
      for (const Tuple* t : by_max_[s][x]) {
        Tuple u(t->size());
        for (std::size_t k = 0; k < t->size(); ++k) u[k] = assignment_[(*t)[k]];
        if (!b_.holds(s, u)) return false;
      }
      std::size_t inside = 0;
      for (const Tuple* t : containing_[s][y])
        if (std::all_of(t->begin(), t->end(), [&](int z) { return used_[z]; })) ++inside;
      if (inside != by_max_[s][x].size()) return false;
    }
    return true;
  }

  bool extend(int x) {
    if (x == a_.size()) {
      results_.push_back(assignment_);
      return !(limit_ && results_.size() >= *limit_);
    }
    for (int y = 0; y < b_.size(); ++y) {
      if (used_[y] || !compatible_degrees(x, y)) continue;
      assignment_[x] = y;
      used_[y] = 1;
      bool go_on = true;
      if (consistent(x, y)) go_on = extend(x + 1);
      used_[y] = 0;
      assignment_[x] = -1;
      if (!go_on) return false;
    }
    return true;
  }

  const FinStructure& a_;
  const FinStructure& b_;
  std::optional<std::size_t> limit_;
  std::vector<std::vector<std::vector<const Tuple*>>> by_max_;
  std::vector<std::vector<std::vector<const Tuple*>>> containing_;
  std::vector<std::vector<int>> deg_a_, deg_b_;
  std::vector<int> assignment_;
  std::vector<char> used_;
  std::vector<std::vector<int>> results_;
};

}  // namespace

std::vector<std::vector<int>> find_embeddings(const FinStructure& a, const FinStructure& b,
                                              std::optional<std::size_t> limit) {
  require_same_signature(a, b);
  if (limit && *limit == 0) return {};
  return EmbeddingSearch(a, b, limit).run();
}

std::optional<std::vector<int>> are_isomorphic(const FinStructure& a, const FinStructure& b) {
  require_same_signature(a, b);
  if (a.size() != b.size()) return std::nullopt;
  for (std::size_t s = 0; s < a.signature().size(); ++s)
    if (a.relation(s).size() != b.relation(s).size()) return std::nullopt;
  auto found = find_embeddings(a, b, 1);
  if (found.empty()) return std::nullopt;
  return found.front();
}

std::vector<int> free_amalgam_into(FinStructure& b, const FinStructure& a, std::span<const int> f,
                                   const FinStructure& c, std::span<const int> g) {
  require_same_signature(a, b);
  require_same_signature(a, c);
  if (!is_embedding(f, a, b)) throw Error("free_amalgam: f is not an embedding");
  if (!is_embedding(g, a, c)) throw Error("free_amalgam: g is not an embedding");

  std::vector<int> g_inverse(c.size(), -1);
  for (std::size_t x = 0; x < g.size(); ++x) g_inverse[g[x]] = static_cast<int>(x);
  int next = b.size();
  std::vector<int> right(c.size());
  for (int z = 0; z < c.size(); ++z) right[z] = g_inverse[z] >= 0 ? f[g_inverse[z]] : next++;

  while (b.size() < next) b.add_element();
  Tuple u;
  for (std::size_t s = 0; s < c.signature().size(); ++s)
    for (const auto& t : c.relation(s)) {
      u.resize(t.size());
      for (std::size_t k = 0; k < t.size(); ++k) u[k] = right[t[k]];
      b.add(s, u);
    }
  return right;
}

Amalgam free_amalgam(const FinStructure& a, const FinStructure& b, std::span<const int> f,
                     const FinStructure& c, std::span<const int> g) {
  Amalgam out;
  out.d = b;
  out.right = free_amalgam_into(out.d, a, f, c, g);
  out.left.resize(b.size());
  std::iota(out.left.begin(), out.left.end(), 0);
  return out;
}

// ----------------------------------------------------------------- qf types

std::vector<int> distinct_entries(const Tuple& t) {
  std::vector<int> span;
  for (int x : t)
    if (std::find(span.begin(), span.end(), x) == span.end()) span.push_back(x);
  return span;
}

TypeFingerprint qf_type(const FinStructure& s, const Tuple& t) {
  for (int x : t)
    if (x < 0 || x >= s.size()) throw Error("qf_type: tuple entry out of range");
  TypeFingerprint fp;
  const auto span = distinct_entries(t);
  for (int x : t)
    fp.pattern.push_back(static_cast<int>(std::find(span.begin(), span.end(), x) - span.begin()) + 1);

  const std::size_t m = span.size();
  std::vector<int> index(s.size(), -1);
  for (std::size_t i = 0; i < m; ++i) index[span[i]] = static_cast<int>(i);

  fp.facts.resize(s.signature().size());
  for (std::size_t sym = 0; sym < s.signature().size(); ++sym) {
    const int arity = s.signature()[sym].arity;
    const auto& rel = s.relation(sym);
    double words = 1;
    for (int k = 0; k < arity; ++k) words *= static_cast<double>(m);
    auto& out = fp.facts[sym];
    if (m == 0) continue;
    if (words <= static_cast<double>(rel.size())) {
      Tuple w(arity, 0);
      Tuple image(arity);
      while (true) {
        for (int k = 0; k < arity; ++k) image[k] = span[w[k]];
        if (rel.contains(image)) out.push_back(w);
        int k = arity - 1;
        while (k >= 0 && w[k] == static_cast<int>(m) - 1) w[k--] = 0;
        if (k < 0) break;
        ++w[k];
      }
    } else {
      for (const auto& r : rel) {
        Tuple w(r.size());
        bool inside = true;
        for (std::size_t k = 0; k < r.size() && inside; ++k) inside = (w[k] = index[r[k]]) >= 0;
        if (inside) out.push_back(std::move(w));
      }
      std::sort(out.begin(), out.end());
    }
  }
  return fp;
}

std::string TypeFingerprint::serialize() const {
  std::ostringstream os;
  for (int p : pattern) os << p << '.';
  for (const auto& words : facts) {
    os << '|';
    for (const auto& w : words) {
      for (int x : w) os << x << ',';
      os << ';';
    }
  }
  return os.str();
}

std::optional<std::string> fingerprint_diff(const Signature& sig, const TypeFingerprint& a,
                                            const TypeFingerprint& b) {
  auto word = [](const Tuple& w) {
    std::string s = "(";
    for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + std::to_string(w[i]);
    return s + ")";
  };
  if (a.pattern != b.pattern) return "equality patterns differ";
  for (std::size_t s = 0; s < a.facts.size() && s < b.facts.size(); ++s) {
    std::vector<Tuple> only_a, only_b;
    std::set_difference(a.facts[s].begin(), a.facts[s].end(), b.facts[s].begin(), b.facts[s].end(),
                        std::back_inserter(only_a));
    std::set_difference(b.facts[s].begin(), b.facts[s].end(), a.facts[s].begin(), a.facts[s].end(),
                        std::back_inserter(only_b));
    const std::string name = s < sig.size() ? sig[s].name : std::to_string(s);
    if (!only_a.empty()) return name + word(only_a.front()) + " holds on the left only";
    if (!only_b.empty()) return name + word(only_b.front()) + " holds on the right only";
  }
  return std::nullopt;
}

FinStructure canonical_form(const FinStructure& s) {
  if (s.size() > 8) throw ResourceError("canonical_form: size above 8");
  std::vector<int> perm(s.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::optional<FinStructure> best;
  auto key = [](const FinStructure& x) {
    std::vector<std::vector<Tuple>> k;
    for (std::size_t i = 0; i < x.signature().size(); ++i)
      k.emplace_back(x.relation(i).begin(), x.relation(i).end());
    return k;
  };
  std::vector<std::vector<Tuple>> best_key;
  do {
    FinStructure candidate = s.mapped(perm, s.size());
    auto k = key(candidate);
    if (!best || k < best_key) {
      best = std::move(candidate);
      best_key = std::move(k);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return *best;
}

// --------------------------------------------------------------------- JSON

json to_json(const Signature& sig) {
  json arr = json::array();
  for (const auto& s : sig.symbols()) arr.push_back({{"name", s.name}, {"arity", s.arity}});
  return arr;
}

Signature signature_from_json(const json& j) {
  std::vector<Symbol> symbols;
  for (const auto& s : j) symbols.push_back({s.at("name").get<std::string>(), s.at("arity").get<int>()});
  return Signature(std::move(symbols));
}

json to_json(const FinStructure& s) {
  json rel = json::object();
  for (std::size_t i = 0; i < s.signature().size(); ++i) {
    json tuples = json::array();
    for (const auto& t : s.relation(i)) tuples.push_back(t);
    rel[s.signature()[i].name] = std::move(tuples);
  }
  return {{"signature", to_json(s.signature())}, {"size", s.size()}, {"relations", std::move(rel)}};
}

FinStructure structure_from_json(const json& j) {
  auto report = validate_json(j);
  if (!report.ok()) throw Error("invalid structure: " + report.violations.front().message());
  FinStructure s(signature_from_json(j.at("signature")), j.at("size").get<int>());
  for (const auto& [name, tuples] : j.at("relations").items())
    for (const auto& t : tuples) s.add(name, t.get<Tuple>());
  return s;
}

}  // namespace oligo
