#include <algorithm>
#include <map>

#include "oligo/enumerate.hpp"
#include "oligo/fraisse.hpp"

namespace oligo {

using nlohmann::json;

// ----------------------------------------------------------- approximation

json ExtensionEvent::to_json() const { return {{"base", base}, {"extension", oligo::to_json(extension)}}; }

ExtensionEvent ExtensionEvent::from_json(const json& j) {
  return {j.at("base").get<std::vector<int>>(), structure_from_json(j.at("extension"))};
}

std::vector<int> LimitApprox::apply(const ClassOracle& oracle, ExtensionEvent event) {
  const int j = static_cast<int>(event.base.size());
  if (event.extension.size() < j) throw Error("extension event: extension smaller than its base");
  for (int x : event.base)
    if (x < 0 || x >= current_.size()) throw Error("extension event: base element out of range");
  auto a = event.extension.induced(iota_vector(j));
  if (!(current_.induced(event.base) == a)) throw Error("extension event: base structure mismatch");

  const int old_size = current_.size();
  std::vector<int> placed;
  FinStructure d;
  if (auto right = oracle.amalgamate_into(current_, a, event.base, event.extension, iota_vector(j))) {
    placed = std::move(*right);
  } else {
    auto am = oracle.amalgamate(a, current_, event.base, event.extension, iota_vector(j));
    const int n = am.d.size();
    // Relabel so the old structure keeps its indices.
    std::vector<int> pi(n, -1);
    for (int x = 0; x < old_size; ++x) pi[am.left[x]] = x;
    int next = old_size;
    for (int y = 0; y < n; ++y)
      if (pi[y] < 0) pi[y] = next++;
    bool moved = false;
    for (int y = 0; y < n; ++y) moved = moved || pi[y] != y;
    d = moved ? am.d.mapped(pi, n) : std::move(am.d);
    placed.resize(event.extension.size());
    for (int x = 0; x < event.extension.size(); ++x) placed[x] = pi[am.right[x]];
    current_ = std::move(d);
  }
  auto undo = [&] { current_.truncate(old_size); };
  if (static_cast<std::size_t>(current_.size()) > oracle.caps().max_elements) {
    undo();
    throw ResourceError("approximation exceeds " + std::to_string(oracle.caps().max_elements) + " elements");
  }
  for (int x = 0; x < j; ++x)
    if (placed[x] != event.base[x]) {
      undo();
      throw Error("extension event: amalgam does not fix the base");
    }
  if (auto e = is_embedding(placed, event.extension, current_); !e) {
    undo();
    throw Error("extension event: extension does not embed: " + e.diagnostic);
  }

  log_.push_back(std::move(event));
  return placed;
}

void LimitApprox::rollback(const Checkpoint& cp) {
  if (cp.events > log_.size() || cp.elements > current_.size()) throw Error("rollback: checkpoint is ahead of the state");
  if (cp.fulfilled != fulfilled_.size()) throw Error("rollback: witnesses were marked after the checkpoint");
  log_.resize(cp.events);
  current_.truncate(cp.elements);
}

json LimitApprox::to_json() const {
  json log = json::array();
  for (const auto& e : log_) log.push_back(e.to_json());
  return {{"structure", oligo::to_json(current_)}, {"log", std::move(log)}, {"saturated_base", saturated_base_}};
}

FinStructure replay_log(const ClassOracle& oracle, const std::vector<ExtensionEvent>& log) {
  LimitApprox approx(oracle.signature());
  for (const auto& e : log) approx.apply(oracle, e);
  return approx.current();
}

LimitApprox& saturate(const ClassOracle& oracle, LimitApprox& approx, int base_size, int rounds) {
  if (base_size < 0 || rounds < 0) throw Error("saturate: negative base size or round count");
  for (int round = 0; round < rounds; ++round) {
    for (int j = 0; j <= base_size; ++j) {
      const int n = approx.current().size();
      for_each_combination(n, j, [&](const std::vector<int>& base) {
        auto exts = oracle.extensions(approx.current().induced(base));
        std::set<std::string> realized;
        bool scanned = false;
        for (auto& ext : exts) {
          auto key = qf_type(ext, iota_vector(j + 1)).serialize();
          if (approx.fulfilled().contains({base, key})) continue;
          if (!scanned) {
            const auto& cur = approx.current();
            Tuple t = base;
            t.push_back(0);
            for (int z = 0; z < cur.size(); ++z) {
              if (std::find(base.begin(), base.end(), z) != base.end()) continue;
              t.back() = z;
              realized.insert(qf_type(cur, t).serialize());
            }
            scanned = true;
          }
          if (!realized.contains(key)) approx.apply(oracle, {base, std::move(ext)});
          approx.mark_fulfilled(base, key);
        }
        return true;
      });
    }
    approx.mark_saturated(base_size);
  }
  return approx;
}

// ----------------------------------------------------------- back and forth

TypeFingerprint view_type(const FinStructure& s, const Tuple& t, const StructureMap& view) {
  auto span = distinct_entries(t);
  auto sub = s.induced(span);
  if (view) sub = view(sub);
  Tuple local(t.size());
  for (std::size_t i = 0; i < t.size(); ++i)
    local[i] = static_cast<int>(std::find(span.begin(), span.end(), t[i]) - span.begin());
  return qf_type(sub, local);
}

json BackAndForthCertificate::to_json() const {
  auto pairs = [](const PartialMap& m) {
    json arr = json::array();
    for (auto [x, y] : m.pairs()) arr.push_back({x, y});
    return arr;
  };
  json steps_json = json::array();
  for (const auto& s : steps)
    steps_json.push_back(
        {{"direction", s.forth ? "forth" : "back"}, {"source", s.source}, {"target", s.target}, {"event", s.event}});
  return {{"initial", pairs(initial)}, {"steps", std::move(steps_json)}, {"final", pairs(final_map)}};
}

namespace {

FinStructure apply_map(const StructureMap& m, FinStructure s) { return m ? m(s) : s; }

int next_unmapped(const std::vector<int>& targets, int size, const std::function<bool(int)>& taken) {
  for (int t : targets)
    if (!taken(t)) return t;
  for (int x = 0; x < size; ++x)
    if (!taken(x)) return x;
  return -1;
}

// Element outside `avoid` whose addition to `prefix` induces exactly `required`.
int find_witness(const FinStructure& s, const std::vector<int>& prefix, const FinStructure& required,
                 const std::function<bool(int)>& avoid) {
  std::vector<int> span = prefix;
  span.push_back(0);
  for (int y = 0; y < s.size(); ++y) {
    if (avoid(y)) continue;
    span.back() = y;
    if (s.induced(span) == required) return y;
  }
  return -1;
}

}  // namespace

BackAndForthResult extend_partial_iso(const ClassOracle& oracle, LimitApprox& approx, const PartialMap& f,
                                      const BackAndForthOptions& options) {
  BackAndForthResult result;
  const auto dom = f.domain();
  const auto img = f.image_of_domain();
  for (int x : dom)
    if (x < 0 || x >= approx.current().size()) throw Error("back and forth: domain element out of range");
  for (int y : img)
    if (y < 0 || y >= approx.current().size()) throw Error("back and forth: image element out of range");

  const auto& cur0 = approx.current();
  auto tdom = view_type(cur0, dom, options.view);
  auto timg = view_type(cur0, img, options.view);
  if (auto diff = fingerprint_diff(cur0.signature(), tdom, timg)) {
    result.failure = *diff;
    return result;
  }
  if (!(apply_map(options.forth_transport, cur0.induced(dom)) == cur0.induced(img))) {
    result.failure = "transport of the domain structure differs from the image structure";
    return result;
  }

  BackAndForthCertificate cert{f, {}, f};
  PartialMap& map = cert.final_map;
  for (int step = 0; step < options.steps; ++step) {
    const bool forth = step % 2 == 0;
    const auto& cur = approx.current();
    auto a = map.domain();
    auto b = map.image_of_domain();
    BackAndForthStep rec;
    rec.forth = forth;
    if (forth) {
      int x = next_unmapped(options.forth_targets, cur.size(), [&](int v) { return map.defined(v); });
      if (x < 0) continue;
      auto span = a;
      span.push_back(x);
      auto required = apply_map(options.forth_transport, cur.induced(span));
      int y = find_witness(cur, b, required, [&](int v) { return map.in_range(v); });
      if (y < 0) {
        auto placed = approx.apply(oracle, {b, required});
        y = placed.back();
        rec.event = static_cast<int>(approx.log().size()) - 1;
      }
      map.set(x, y);
      rec.source = x;
      rec.target = y;
    } else {
      int y = next_unmapped(options.back_targets, cur.size(), [&](int v) { return map.in_range(v); });
      if (y < 0) continue;
      auto span = b;
      span.push_back(y);
      auto required = apply_map(options.back_transport, cur.induced(span));
      int x = find_witness(cur, a, required, [&](int v) { return map.defined(v); });
      if (x < 0) {
        auto placed = approx.apply(oracle, {a, required});
        x = placed.back();
        rec.event = static_cast<int>(approx.log().size()) - 1;
      }
      map.set(x, y);
      rec.source = y;
      rec.target = x;
    }
    cert.steps.push_back(rec);
  }
  result.certificate = std::move(cert);
  return result;
}

bool verify_back_and_forth(const FinStructure& s, const BackAndForthCertificate& cert, const StructureMap& view) {
  PartialMap map = cert.initial;
  auto good = [&] {
    auto dom = map.domain();
    auto img = map.image_of_domain();
    for (int v : dom)
      if (v >= s.size()) return false;
    for (int v : img)
      if (v >= s.size()) return false;
    return view_type(s, dom, view) == view_type(s, img, view);
  };
  if (!good()) return false;
  for (const auto& st : cert.steps) {
    try {
      if (st.forth)
        map.set(st.source, st.target);
      else
        map.set(st.target, st.source);
    } catch (const Error&) {
      return false;
    }
    if (!good()) return false;
  }
  return map == cert.final_map;
}

// ------------------------------------------------------------------ orbits

namespace {

// Types of k-tuples realized in s, with the lexicographically first realizer of each.
std::map<std::string, Tuple> realized_types(const FinStructure& s, int k) {
  std::map<std::string, Tuple> types;
  if (k == 0) {
    types.emplace(qf_type(s, {}).serialize(), Tuple{});
    return types;
  }
  // A type is fixed by its span's isomorphism type and a surjective word, so
  // one span per isomorphism type suffices.
  for (int size = 1; size <= std::min(k, s.size()); ++size) {
    std::set<std::string> labelled;
    std::set<std::string> classes;
    for_each_combination(s.size(), size, [&](const std::vector<int>& span) {
      auto sub = s.induced(span);
      if (!labelled.insert(to_json(sub).dump()).second) return true;
      if (!classes.insert(to_json(canonical_form(sub)).dump()).second) return true;
      for_each_word(span, k, [&](const Tuple& w) {
        if (static_cast<int>(distinct_entries(w).size()) != size) return true;
        types.emplace(qf_type(s, w).serialize(), w);
        return true;
      });
      return true;
    });
  }
  return types;
}

// Representatives come from the first span of each isomorphism type.
OrbitCount summarize(const std::map<std::string, Tuple>& types) {
  OrbitCount out;
  out.count = types.size();
  for (const auto& [key, t] : types) out.representatives.push_back(t);
  std::sort(out.representatives.begin(), out.representatives.end());
  return out;
}

}  // namespace

OrbitCount count_orbits(const ClassOracle& oracle, const LimitApprox& approx, int k) {
  if (k < 0) throw Error("count_orbits: negative k");
  if (approx.saturated_base() < k - 1)
    throw InsufficientSaturation("count_orbits: approximation saturated over bases of size " +
                                 std::to_string(approx.saturated_base()) + ", need " + std::to_string(k - 1));
  auto result = summarize(realized_types(approx.current(), k));
  LimitApprox extra = approx;
  saturate(oracle, extra, approx.saturated_base(), 1);
  result.count_after_extra_round = realized_types(extra.current(), k).size();
  if (result.count_after_extra_round != result.count)
    throw InsufficientSaturation("count_orbits: " + std::to_string(result.count) + " types before and " +
                                 std::to_string(result.count_after_extra_round) + " after one more round");
  return result;
}

std::size_t brute_force_type_count(const ClassOracle& oracle, int k) {
  std::set<std::string> types;
  for (int size = 0; size <= k; ++size)
    for (const auto& m : oracle.members(size))
      for_each_word(iota_vector(size), k, [&](const Tuple& w) {
        if (static_cast<int>(distinct_entries(w).size()) == size) types.insert(qf_type(m, w).serialize());
        return true;
      });
  return types.size();
}

}  // namespace oligo
