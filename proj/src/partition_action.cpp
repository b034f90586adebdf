#include <algorithm>

#include "oligo/enumerate.hpp"
#include "oligo/partition.hpp"

namespace oligo {

using nlohmann::json;

// ------------------------------------------------------------ class action

ClassAction ClassAction::identity(int grade) {
  ClassAction a;
  for (int n = 1; n <= grade; ++n) a.images.push_back(iota_vector(n, 1));
  return a;
}

bool ClassAction::is_total() const {
  for (const auto& row : images)
    if (std::find(row.begin(), row.end(), 0) != row.end()) return false;
  return true;
}

bool ClassAction::is_partial_identity() const {
  for (const auto& row : images)
    for (std::size_t i = 0; i < row.size(); ++i)
      if (row[i] != 0 && row[i] != static_cast<int>(i) + 1) return false;
  return true;
}

json ClassAction::to_json() const {
  json j = json::object();
  for (std::size_t n = 0; n < images.size(); ++n) {
    json row = json::array();
    for (int v : images[n]) row.push_back(v == 0 ? json(nullptr) : json(v));
    j[std::to_string(n + 1)] = std::move(row);
  }
  return j;
}

ClassAction ClassAction::from_json(const json& j) {
  ClassAction a;
  for (int n = 1;; ++n) {
    auto key = std::to_string(n);
    if (!j.contains(key)) break;
    const auto& row = j.at(key);
    if (static_cast<int>(row.size()) != n) throw Error("class action: row " + key + " must have " + key + " entries");
    std::vector<int> r;
    std::set<int> seen;
    for (const auto& v : row) {
      int x = v.is_null() ? 0 : v.get<int>();
      if (x < 0 || x > n) throw Error("class action: image out of range in row " + key);
      if (x != 0 && !seen.insert(x).second) throw Error("class action: row " + key + " is not injective");
      r.push_back(x);
    }
    a.images.push_back(std::move(r));
  }
  if (a.images.size() != j.size()) throw Error("class action: keys must be 1..N");
  return a;
}

ClassAction class_action(const PartitionOracle& oracle, const FinStructure& s, const PartialMap& f) {
  ClassAction out;
  const auto dom = f.domain();
  for (int v : dom)
    if (v < 0 || v >= s.size() || f.at(v) < 0 || f.at(v) >= s.size())
      throw Error("class_action: map leaves the structure");
  for (int n = 1; n <= oracle.grade(); ++n) {
    std::vector<int> fwd(n, 0), back(n, 0);
    for_each_word(dom, n, [&](const Tuple& t) {
      if (static_cast<int>(distinct_entries(t).size()) != n) return true;
      int i = oracle.label(s, t);
      int j = oracle.label(s, f.apply(t));
      if (i == 0 || j == 0) throw Error("class_action: unlabelled tuple");
      if ((fwd[i - 1] != 0 && fwd[i - 1] != j) || (back[j - 1] != 0 && back[j - 1] != i))
        throw ClassActionConflict("class_action: label " + std::to_string(i) + " of grade " + std::to_string(n) +
                                  " has conflicting images");
      fwd[i - 1] = j;
      back[j - 1] = i;
      return true;
    });
    out.images.push_back(std::move(fwd));
  }
  return out;
}

ClassAction compose_actions(const ClassAction& alpha, const ClassAction& beta) {
  ClassAction out;
  const auto grade = std::min(alpha.images.size(), beta.images.size());
  for (std::size_t n = 0; n < grade; ++n) {
    std::vector<int> row(n + 1, 0);
    for (std::size_t i = 0; i <= n; ++i) {
      int mid = beta.images[n][i];
      if (mid != 0) row[i] = alpha.images[n][mid - 1];
    }
    out.images.push_back(std::move(row));
  }
  return out;
}

bool kernel_check(const PartitionOracle& oracle, const FinStructure& s, const PartialMap& f) {
  return class_action(oracle, s, f).is_partial_identity();
}

FinStructure relabel(const PartitionOracle& oracle, const FinStructure& s, const ClassAction& sigma) {
  if (sigma.grade() != oracle.grade() || !sigma.is_total()) throw Error("relabel: needs a total action of the oracle's grade");
  FinStructure out(s.signature(), s.size());
  for (int n = 1; n <= oracle.grade(); ++n)
    for (int i = 1; i <= n; ++i) {
      auto from = s.signature().index_of(partition_symbol(n, i));
      auto to = s.signature().index_of(partition_symbol(n, sigma.images[n - 1][i - 1]));
      for (const auto& t : s.relation(from)) out.add(to, t);
    }
  return out;
}

FinStructure rainbow_member(const PartitionOracle& oracle) {
  const int size = oracle.grade();
  FinStructure s(oracle.signature(), size);
  for (int n = 1; n <= size; ++n) {
    int counter = 0;
    for_each_word(iota_vector(size), n, [&](const Tuple& t) {
      if (static_cast<int>(distinct_entries(t).size()) != n) return true;
      s.add(partition_symbol(n, counter++ % n + 1), t);
      return true;
    });
  }
  return s;
}

// ------------------------------------------------------------ surjectivity

RealizationResult realize_class_permutation(const PartitionOracle& oracle, LimitApprox& approx,
                                            const ClassAction& sigma, int depth) {
  if (sigma.grade() != oracle.grade() || !sigma.is_total())
    throw Error("realize_class_permutation: sigma must be total on grades 1.." + std::to_string(oracle.grade()));
  ClassAction inverse = sigma;
  for (std::size_t n = 0; n < sigma.images.size(); ++n)
    for (std::size_t i = 0; i < sigma.images[n].size(); ++i) inverse.images[n][sigma.images[n][i] - 1] = static_cast<int>(i) + 1;

  auto source = rainbow_member(oracle);
  auto image = relabel(oracle, source, sigma);
  auto p = approx.apply(oracle, {{}, source});
  auto q = approx.apply(oracle, {{}, image});
  PartialMap f;
  for (std::size_t x = 0; x < p.size(); ++x) f.set(p[x], q[x]);

  BackAndForthOptions opts;
  opts.steps = depth;
  opts.forth_transport = [&](const FinStructure& s) { return relabel(oracle, s, sigma); };
  opts.back_transport = [&](const FinStructure& s) { return relabel(oracle, s, inverse); };
  opts.view = [&](const FinStructure& s) { return en_reduct(oracle, s); };
  auto result = extend_partial_iso(oracle, approx, f, opts);
  if (!result.ok()) throw Error("realize_class_permutation: " + result.failure);
  if (!verify_back_and_forth(approx.current(), *result.certificate, opts.view))
    throw Error("realize_class_permutation: certificate does not verify on the reduct");
  auto action = class_action(oracle, approx.current(), result.certificate->final_map);
  if (!(action == sigma)) throw Error("realize_class_permutation: final action differs from sigma");
  return {std::move(*result.certificate), std::move(action)};
}

// ------------------------------------------------------------------ mixing

std::vector<Tuple> disjoint_copies(const PartitionOracle& oracle, LimitApprox& approx, const Tuple& y, int m) {
  if (static_cast<std::size_t>(distinct_entries(y).size()) != y.size())
    throw Error("disjoint_copies: tuple entries must be distinct");
  auto sub = approx.current().induced(y);
  auto want = qf_type(approx.current(), y);
  std::vector<Tuple> out;
  for (int k = 0; k < m; ++k) {
    auto placed = approx.apply(oracle, {{}, sub});
    if (!(qf_type(approx.current(), placed) == want)) throw Error("disjoint_copies: copy has a different type");
    out.push_back(std::move(placed));
  }
  return out;
}

json MixingWitness::to_json() const {
  return {{"d", d}, {"type_ya", ya.serialize()}, {"type_da", da.serialize()}, {"type_db", db.serialize()}};
}

namespace {

Tuple concat(const Tuple& x, const Tuple& y) {
  Tuple out = x;
  out.insert(out.end(), y.begin(), y.end());
  return out;
}

bool disjoint(const Tuple& x, const Tuple& y) {
  return std::none_of(x.begin(), x.end(), [&](int v) { return std::find(y.begin(), y.end(), v) != y.end(); });
}

}  // namespace

std::optional<std::string> mixing_incompatibility(const FinStructure& s, const Tuple& y, const Tuple& a,
                                                  const Tuple& b) {
  if (y.size() != a.size() || a.size() != b.size()) return "tuples differ in length";
  for (const auto* t : {&y, &a, &b}) {
    for (int v : *t)
      if (v < 0 || v >= s.size()) return "element out of range";
    if (distinct_entries(*t).size() != t->size()) return "tuple entries repeat";
  }
  if (!disjoint(y, a) || !disjoint(y, b)) return "y meets a or b";
  if (a != b && !disjoint(a, b)) return "a and b overlap without being equal";
  if (auto d = fingerprint_diff(s.signature(), qf_type(s, y), qf_type(s, a))) return "type(y) vs type(a): " + *d;
  if (auto d = fingerprint_diff(s.signature(), qf_type(s, a), qf_type(s, b))) return "type(a) vs type(b): " + *d;
  return std::nullopt;
}

MixingWitness mixing_witness(const PartitionOracle& oracle, LimitApprox& approx, const Tuple& y, const Tuple& a,
                             const Tuple& b) {
  if (auto why = mixing_incompatibility(approx.current(), y, a, b)) throw Error("mixing_witness: " + *why);
  const int l = static_cast<int>(y.size());
  Tuple base = a;
  for (int v : b)
    if (std::find(base.begin(), base.end(), v) == base.end()) base.push_back(v);
  const int nb = static_cast<int>(base.size());
  auto pos = [&](int v) { return static_cast<int>(std::find(base.begin(), base.end(), v) - base.begin()); };

  // Copy the structure on (y, a) onto (d, a) and onto (d, b).
  FinStructure ext = approx.current().induced(base);
  for (int k = 0; k < l; ++k) ext.add_element();
  auto source = approx.current().induced(concat(y, a));
  for (const auto* target : {&a, &b}) {
    std::vector<int> phi(2 * l);
    for (int k = 0; k < l; ++k) {
      phi[k] = nb + k;
      phi[l + k] = pos((*target)[k]);
    }
    auto copy = source.mapped(phi, ext.size());
    for (std::size_t sym = 0; sym < copy.signature().size(); ++sym)
      for (const auto& t : copy.relation(sym)) ext.add(sym, t);
  }
  oracle.complete_lowest(ext, nb);
  if (!oracle.is_member(ext)) throw Error("mixing_witness: copied facts clash");

  auto placed = approx.apply(oracle, {base, ext});
  MixingWitness w;
  w.d.assign(placed.begin() + nb, placed.end());
  const auto& cur = approx.current();
  w.ya = qf_type(cur, concat(y, a));
  w.da = qf_type(cur, concat(w.d, a));
  w.db = qf_type(cur, concat(w.d, b));
  if (!(w.ya == w.da) || !(w.da == w.db)) throw Error("mixing_witness: fingerprints differ after construction");
  return w;
}

}  // namespace oligo
