#include "oligo/fraisse.hpp"

#include <algorithm>
#include <map>

#include "oligo/enumerate.hpp"

namespace oligo {

using nlohmann::json;

namespace {

std::string iso_key(const FinStructure& s) { return to_json(canonical_form(s)).dump(); }

// Words of the given arity over {0..n} that mention n.
std::vector<Tuple> words_through(int n, int arity) {
  std::vector<Tuple> out;
  for_each_word(iota_vector(n + 1), arity, [&](const Tuple& w) {
    if (std::find(w.begin(), w.end(), n) != w.end()) out.push_back(w);
    return true;
  });
  return out;
}

}  // namespace

// ------------------------------------------------------------------ oracle

Amalgam ClassOracle::amalgamate(const FinStructure& a, const FinStructure& b, std::span<const int> f,
                                const FinStructure& c, std::span<const int> g) const {
  auto found = search_amalgam(*this, a, b, f, c, g);
  if (!found) throw Error(name() + ": no amalgam found");
  return std::move(*found);
}

void ClassOracle::for_each_extension(const FinStructure& base, std::span<const RequiredFact> required,
                                     const ExtensionVisitor& visit) const {
  const int m = base.size();
  FinStructure seed = base;
  seed.add_element();
  std::set<std::pair<std::size_t, Tuple>> fixed;
  for (const auto& r : required) {
    bool mentions_new = std::find(r.tuple.begin(), r.tuple.end(), m) != r.tuple.end();
    if (!mentions_new) {
      if (base.holds(r.symbol, r.tuple) != r.holds) return;
      continue;
    }
    fixed.emplace(r.symbol, r.tuple);
    if (r.holds) seed.add(r.symbol, r.tuple);
  }
  std::vector<std::pair<std::size_t, Tuple>> free;
  for (std::size_t s = 0; s < signature().size(); ++s)
    for (auto& w : words_through(m, signature()[s].arity))
      if (!fixed.contains({s, w})) free.emplace_back(s, std::move(w));
  if (free.size() > caps().max_free_slots)
    throw ResourceError(name() + ": " + std::to_string(free.size()) + " free slots in one-point extension");
  const unsigned long total = 1ul << free.size();
  for (unsigned long mask = 0; mask < total; ++mask) {
    FinStructure candidate = seed;
    for (std::size_t i = 0; i < free.size(); ++i)
      if (mask >> i & 1) candidate.add(free[i].first, free[i].second);
    if (is_member(candidate) && !visit(candidate)) return;
  }
}

std::vector<FinStructure> ClassOracle::extensions(const FinStructure& base) const {
  std::vector<FinStructure> out;
  for_each_extension(base, {}, [&](const FinStructure& e) {
    out.push_back(e);
    return true;
  });
  return out;
}

std::vector<FinStructure> ClassOracle::members(int size) const { return members_by_filtering(size); }

std::vector<FinStructure> ClassOracle::members_by_filtering(int size) const {
  if (size > caps().max_member_size) throw ResourceError(name() + ": member size above cap");
  std::vector<std::pair<std::size_t, Tuple>> slots;
  for (std::size_t s = 0; s < signature().size(); ++s)
    for_each_word(iota_vector(size), signature()[s].arity, [&](const Tuple& w) {
      slots.emplace_back(s, w);
      return true;
    });
  if (slots.size() > caps().max_free_slots)
    throw ResourceError(name() + ": " + std::to_string(slots.size()) + " slots for members of size " +
                        std::to_string(size));
  std::set<std::string> seen;
  std::vector<FinStructure> out;
  const unsigned long total = 1ul << slots.size();
  for (unsigned long mask = 0; mask < total; ++mask) {
    FinStructure st(signature(), size);
    for (std::size_t i = 0; i < slots.size(); ++i)
      if (mask >> i & 1) st.add(slots[i].first, slots[i].second);
    if (is_member(st) && seen.insert(iso_key(st)).second) out.push_back(std::move(st));
  }
  return out;
}

// ----------------------------------------------------------- blind search

namespace {

struct BlindSearch {
  const ClassOracle& oracle;
  const FinStructure& c;
  std::vector<int> c_only;
  std::size_t nodes = 0;

  // Facts of C on words over `placed` + x that mention x, mapped through phi with x -> target.
  std::vector<RequiredFact> facts_for(const std::vector<int>& placed, int x, const std::vector<int>& phi,
                                      int target) const {
    std::vector<int> alphabet = placed;
    alphabet.push_back(x);
    std::vector<RequiredFact> out;
    for (std::size_t s = 0; s < c.signature().size(); ++s)
      for_each_word(alphabet, c.signature()[s].arity, [&](const Tuple& w) {
        if (std::find(w.begin(), w.end(), x) == w.end()) return true;
        Tuple img(w.size());
        for (std::size_t i = 0; i < w.size(); ++i) img[i] = w[i] == x ? target : phi[w[i]];
        out.push_back({s, std::move(img), c.holds(s, w)});
        return true;
      });
    return out;
  }

  // Whether sending x to the existing element y agrees with C on every word through x.
  bool consistent(const FinStructure& d, const std::vector<int>& placed, int x, const std::vector<int>& phi,
                  int y) const {
    std::vector<int> alphabet = placed;
    alphabet.push_back(x);
    Tuple img;
    for (std::size_t s = 0; s < c.signature().size(); ++s) {
      bool ok = for_each_word(alphabet, c.signature()[s].arity, [&](const Tuple& w) {
        if (std::find(w.begin(), w.end(), x) == w.end()) return true;
        img.resize(w.size());
        for (std::size_t i = 0; i < w.size(); ++i) img[i] = w[i] == x ? y : phi[w[i]];
        return c.holds(s, w) == d.holds(s, img);
      });
      if (!ok) return false;
    }
    return true;
  }

  std::optional<Amalgam> run(const FinStructure& d, std::vector<int>& phi, std::vector<int>& placed,
                             std::size_t idx, int b_size) {
    if (++nodes > oracle.caps().max_search_nodes) throw ResourceError("amalgam search: node cap reached");
    if (idx == c_only.size()) return Amalgam{d, iota_vector(b_size), phi};
    const int x = c_only[idx];
    std::vector<bool> used(d.size(), false);
    for (int p : placed) used[phi[p]] = true;
    // identify x with an element of D outside the image so far
    for (int y = 0; y < d.size(); ++y) {
      if (used[y] || !consistent(d, placed, x, phi, y)) continue;
      phi[x] = y;
      placed.push_back(x);
      if (auto r = run(d, phi, placed, idx + 1, b_size)) return r;
      placed.pop_back();
      phi[x] = -1;
    }
    // or add a fresh element
    auto req = facts_for(placed, x, phi, d.size());
    std::optional<Amalgam> result;
    oracle.for_each_extension(d, req, [&](const FinStructure& ext) {
      phi[x] = d.size();
      placed.push_back(x);
      result = run(ext, phi, placed, idx + 1, b_size);
      placed.pop_back();
      phi[x] = -1;
      return !result;
    });
    return result;
  }
};

}  // namespace

std::optional<Amalgam> search_amalgam(const ClassOracle& oracle, const FinStructure& a, const FinStructure& b,
                                      std::span<const int> f, const FinStructure& c, std::span<const int> g) {
  if (static_cast<int>(f.size()) != a.size() || static_cast<int>(g.size()) != a.size())
    throw Error("amalgam search: embedding length differs from |A|");
  BlindSearch search{oracle, c, {}};
  std::vector<int> phi(c.size(), -1);
  std::vector<int> placed;
  for (int x = 0; x < a.size(); ++x) {
    phi[g[x]] = f[x];
    placed.push_back(g[x]);
  }
  for (int x = 0; x < c.size(); ++x)
    if (phi[x] < 0) search.c_only.push_back(x);
  return search.run(b, phi, placed, 0, b.size());
}

// ------------------------------------------------------------------ checks

json CheckReport::to_json() const {
  json j{{"property", property}, {"bound", bound}, {"pass", pass}, {"instances", instances},
         {"disagreements", disagreements}};
  if (counterexample) j["counterexample"] = *counterexample;
  return j;
}

namespace {

std::vector<FinStructure> members_up_to(const ClassOracle& oracle, int bound) {
  std::vector<FinStructure> out;
  for (int s = 0; s <= bound; ++s)
    for (auto& m : oracle.members(s)) out.push_back(std::move(m));
  return out;
}

// Verifies an amalgam and returns a reason when it is not one.
std::optional<std::string> amalgam_problem(const ClassOracle& oracle, const Amalgam& am, const FinStructure& b,
                                           std::span<const int> f, const FinStructure& c,
                                           std::span<const int> g) {
  if (!validate(am.d).ok()) return "amalgam is not a valid structure";
  if (!oracle.is_member(am.d)) return "amalgam is not in the class";
  if (auto e = is_embedding(am.left, b, am.d); !e) return "left map: " + e.diagnostic;
  if (auto e = is_embedding(am.right, c, am.d); !e) return "right map: " + e.diagnostic;
  for (std::size_t x = 0; x < f.size(); ++x)
    if (am.left[f[x]] != am.right[g[x]]) return "square does not commute";
  return std::nullopt;
}

json instance_json(const FinStructure& a, const FinStructure& b, std::span<const int> f, const FinStructure& c,
                   std::span<const int> g) {
  return {{"A", to_json(a)},
          {"B", to_json(b)},
          {"C", to_json(c)},
          {"f", std::vector<int>(f.begin(), f.end())},
          {"g", std::vector<int>(g.begin(), g.end())}};
}

// Runs the oracle and the blind search on one instance and records the outcome.
void run_instance(const ClassOracle& oracle, CheckReport& report, const FinStructure& a, const FinStructure& b,
                  std::span<const int> f, const FinStructure& c, std::span<const int> g) {
  ++report.instances;
  std::optional<Amalgam> from_oracle;
  std::string oracle_error;
  try {
    from_oracle = oracle.amalgamate(a, b, f, c, g);
  } catch (const ResourceError&) {
    throw;
  } catch (const Error& e) {
    oracle_error = e.what();
  }
  auto blind = search_amalgam(oracle, a, b, f, c, g);
  if (from_oracle.has_value() != blind.has_value()) ++report.disagreements;
  std::optional<std::string> problem;
  if (from_oracle)
    problem = amalgam_problem(oracle, *from_oracle, b, f, c, g);
  else if (blind)
    problem = "oracle failed where the search succeeded: " + oracle_error;
  else
    problem = "no amalgam exists within the search bound";
  if (blind && !problem) {
    if (auto p = amalgam_problem(oracle, *blind, b, f, c, g)) problem = "search result: " + *p;
  }
  if (problem && report.pass) {
    report.pass = false;
    auto j = instance_json(a, b, f, c, g);
    j["reason"] = *problem;
    report.counterexample = std::move(j);
  }
}

}  // namespace

CheckReport check_hp(const ClassOracle& oracle, int size_bound) {
  CheckReport report{"HP", size_bound, true, 0, 0, std::nullopt};
  for (const auto& m : members_up_to(oracle, size_bound)) {
    for (int k = 0; k <= m.size() && report.pass; ++k)
      for_each_combination(m.size(), k, [&](const std::vector<int>& sub) {
        ++report.instances;
        if (oracle.is_member(m.induced(sub))) return true;
        report.pass = false;
        report.counterexample = json{{"structure", to_json(m)}, {"subset", sub},
                                     {"reason", "induced substructure is not in the class"}};
        return false;
      });
    if (!report.pass) break;
  }
  return report;
}

CheckReport check_jep(const ClassOracle& oracle, int size_bound) {
  CheckReport report{"JEP", size_bound, true, 0, 0, std::nullopt};
  auto reps = members_up_to(oracle, size_bound);
  const FinStructure empty(oracle.signature(), 0);
  for (std::size_t i = 0; i < reps.size() && report.pass; ++i)
    for (std::size_t j = i; j < reps.size() && report.pass; ++j)
      run_instance(oracle, report, empty, reps[i], {}, reps[j], {});
  return report;
}

CheckReport check_ap(const ClassOracle& oracle, int size_bound) {
  CheckReport report{"AP", size_bound, true, 0, 0, std::nullopt};
  auto reps = members_up_to(oracle, size_bound);
  // Instances with C before B are mirror images of ones enumerated here.
  for (std::size_t i = 0; i < reps.size() && report.pass; ++i) {
    const auto& b = reps[i];
    for (int k = 0; k <= b.size() && report.pass; ++k)
      for_each_combination(b.size(), k, [&](const std::vector<int>& sub) {
        auto a = b.induced(sub);
        if (!oracle.is_member(a)) return true;
        for (std::size_t j = i; j < reps.size() && report.pass; ++j) {
          const auto& c = reps[j];
          if (c.size() < a.size()) continue;
          for (const auto& g : find_embeddings(a, c)) {
            run_instance(oracle, report, a, b, sub, c, g);
            if (!report.pass) break;
          }
        }
        return report.pass;
      });
  }
  return report;
}

}  // namespace oligo
