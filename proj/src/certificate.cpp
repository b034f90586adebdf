#include "oligo/certificate.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "oligo/commands.hpp"
#include "oligo/error.hpp"

namespace oligo {

using nlohmann::json;

std::string digest(const json& j) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : j.dump()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json make_certificate(const std::string& command, const json& params, const json& result) {
  json rest = params;
  json inputs = json::object();
  for (const auto& key : command_input_keys(command)) {
    if (!rest.contains(key)) continue;
    inputs[key] = {{"digest", digest(rest.at(key))}, {"data", rest.at(key)}};
    rest.erase(key);
  }
  return {{"schema", kCertSchema}, {"command", command}, {"params", rest},
          {"inputs", inputs},      {"result", result},   {"verdict", result.value("verdict", "fail")}};
}

void write_json_atomic(const std::filesystem::path& path, const json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << j.dump(2) << '\n';
    if (!out) throw Error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

json ReplayReport::to_json() const { return {{"ok", ok}, {"detail", detail}}; }

ReplayReport replay_certificate(const json& cert) {
  ReplayReport r;
  if (!cert.is_object() || cert.value("schema", "") != kCertSchema) {
    r.detail = "unknown schema";
    return r;
  }
  for (const char* key : {"command", "params", "inputs", "result", "verdict"})
    if (!cert.contains(key)) {
      r.detail = std::string("missing field ") + key;
      return r;
    }
  const auto command = cert.at("command").get<std::string>();
  json params = cert.at("params");
  for (const auto& [key, entry] : cert.at("inputs").items()) {
    if (!entry.contains("digest") || !entry.contains("data")) {
      r.detail = "malformed input " + key;
      return r;
    }
    if (digest(entry.at("data")) != entry.at("digest").get<std::string>()) {
      r.detail = "digest mismatch for input " + key;
      return r;
    }
    params[key] = entry.at("data");
  }
  json again;
  try {
    again = run_command(command, params);
  } catch (const std::exception& e) {
    r.detail = std::string("re-run failed: ") + e.what();
    return r;
  }
  if (again.dump() != cert.at("result").dump()) {
    r.detail = "result differs on re-run";
    return r;
  }
  if (again.value("verdict", "") != cert.at("verdict").get<std::string>()) {
    r.detail = "verdict differs from result";
    return r;
  }
  r.ok = true;
  return r;
}

SuiteOutcome run_suite(const std::string& module, const SuiteConfig& config) {
  config.validate();
  const auto names = battery_checks(module);
  if (names.empty()) throw Error("no checks for module " + module);
  const std::filesystem::path out = config.out;
  std::vector<json> certs(names.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::string first_error;

  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < names.size();) {
      try {
        json params{{"name", names[i]}, {"config", config.to_json()}};
        auto result = run_command("check", params);
        certs[i] = make_certificate("check", params, result);
        write_json_atomic(out / (names[i] + ".json"), certs[i]);
      } catch (const std::exception& e) {
        std::lock_guard lock(error_mutex);
        if (first_error.empty()) first_error = names[i] + ": " + e.what();
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(config.jobs, static_cast<int>(names.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (!first_error.empty()) throw Error(first_error);

  SuiteOutcome outcome;
  outcome.pass = true;
  json checks = json::array();
  for (std::size_t i = 0; i < names.size(); ++i) {
    const auto v = certs[i].at("verdict").get<std::string>();
    outcome.pass = outcome.pass && v == "pass";
    checks.push_back({{"check", names[i]}, {"verdict", v}, {"digest", digest(certs[i])}});
  }
  outcome.summary = {{"schema", kCertSchema},
                     {"module", module},
                     {"config", config.to_json()},
                     {"checks", checks},
                     {"verdict", outcome.pass ? "pass" : "fail"}};
  write_json_atomic(out / "summary.json", outcome.summary);
  return outcome;
}

}  // namespace oligo
