// Acceptance run: one line per criterion with its verdict, runtime and limit.
// Criteria 1-11 run one battery check each at the default config; 12 runs the
// whole suite at two thread counts, compares the files byte for byte, and
// replays every certificate.
//
// usage: oligo_acceptance [--only N] [--out DIR]

#include <chrono>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "oligo/certificate.hpp"
#include "oligo/commands.hpp"
#include "oligo/suite.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Criterion {
  int id;
  const char* check;
  double limit_s;
};

// limits in seconds, as pinned for each criterion
constexpr Criterion kCriteria[] = {
    {1, "fraisse.axioms", 60},       {2, "fraisse.orbits", 60},    {3, "partition.realize", 300},
    {4, "partition.kernel", 60},     {5, "partition.mixing", 120}, {6, "encoding.roundtrip", 120},
    {7, "encoding.amalgam", 120},    {8, "groups.split", 300},     {9, "groups.chains", 120},
    {10, "clones.gadget", 300},      {11, "clones.iso", 60},
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Short human summary of a check's statistics: its integer fields, one level deep.
std::string brief(const json& stats) {
  std::string s;
  for (const auto& [k, v] : stats.items()) {
    if (v.is_number_integer()) s += " " + k + "=" + std::to_string(v.get<long long>());
    else if (v.is_object())
      for (const auto& [k2, v2] : v.items())
        if (v2.is_number_integer() && (k2 == "instances" || k2 == "failed" || k2 == "count" || k2 == "brute"))
          s += " " + k + "." + k2 + "=" + std::to_string(v2.get<long long>());
  }
  return s;
}

bool run_criterion(const Criterion& c) {
  const oligo::SuiteConfig config;
  const auto t0 = std::chrono::steady_clock::now();
  json r;
  std::string error;
  try {
    r = oligo::run_command("check", {{"name", c.check}, {"config", config.to_json()}});
  } catch (const std::exception& e) {
    error = e.what();
  }
  const double t = seconds_since(t0);
  const bool verdict = error.empty() && r.at("verdict") == "pass";
  const bool in_time = t <= c.limit_s;
  const bool pass = verdict && in_time;
  std::string detail;
  if (!error.empty()) detail = " error: " + error;
  else if (r.at("result").contains("error")) detail = " error: " + r.at("result").at("error").get<std::string>();
  else detail = brief(r.at("result").value("stats", json::object()));
  if (!in_time) detail += " (over time limit)";
  std::printf("criterion %2d: %s  %-19s %7.2fs / %4.0fs %s\n", c.id, pass ? "PASS" : "FAIL", c.check, t, c.limit_s,
              detail.c_str());
  if (verdict && r.at("result").contains("failures"))
    std::printf("              failures: %s\n", r.at("result").at("failures").dump().substr(0, 400).c_str());
  std::fflush(stdout);
  return pass;
}

bool run_determinism(const fs::path& out) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string problem;
  std::size_t compared = 0, replayed = 0;
  try {
    std::vector<fs::path> dirs;
    for (int jobs : {1, 4}) {
      oligo::SuiteConfig config;
      config.jobs = jobs;
      config.out = (out / ("jobs" + std::to_string(jobs))).string();
      fs::remove_all(config.out);
      dirs.emplace_back(config.out);
      oligo::run_suite("all", config);  // verdicts are judged by criteria 1-11
    }
    const auto summary = oligo::read_json(dirs[0] / "summary.json");
    if (summary.at("checks").size() != oligo::battery_checks("all").size()) problem = "summary count mismatch";
    for (const auto& e : fs::directory_iterator(dirs[0])) {
      ++compared;
      if (slurp(e.path()) != slurp(dirs[1] / e.path().filename()) && problem.empty())
        problem = "files differ: " + e.path().filename().string();
    }
    std::size_t other = 0;
    for (const auto& e : fs::directory_iterator(dirs[1])) other += e.is_regular_file();
    if (other != compared && problem.empty()) problem = "different file sets";
    for (const auto& e : fs::directory_iterator(dirs[1])) {
      if (e.path().filename() == "summary.json") continue;
      ++replayed;
      auto r = oligo::replay_certificate(oligo::read_json(e.path()));
      if (!r.ok && problem.empty()) problem = "replay of " + e.path().filename().string() + ": " + r.detail;
    }
  } catch (const std::exception& e) {
    problem = e.what();
  }
  const double t = seconds_since(t0);
  std::printf("criterion 12: %s  %-19s %7.2fs          files=%zu replayed=%zu%s%s\n", problem.empty() ? "PASS" : "FAIL",
              "suite determinism", t, compared, replayed, problem.empty() ? "" : " problem: ", problem.c_str());
  std::fflush(stdout);
  return problem.empty();
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  fs::path out = fs::temp_directory_path() / "oligo-acceptance";
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--only") && i + 1 < argc) only = std::atoi(argv[++i]);
    else if (!std::strcmp(argv[i], "--out") && i + 1 < argc) out = argv[++i];
    else {
      std::fprintf(stderr, "usage: %s [--only N] [--out DIR]\n", argv[0]);
      return 2;
    }
  }
  int failed = 0, ran = 0;
  for (const auto& c : kCriteria)
    if (only == 0 || only == c.id) {
      ++ran;
      failed += !run_criterion(c);
    }
  if (only == 0 || only == 12) {
    ++ran;
    failed += !run_determinism(out);
  }
  std::printf("%d of %d criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
