#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "oligo/certificate.hpp"
#include "oligo/commands.hpp"

using namespace oligo;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("oligo-test-" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("digest is FNV-1a 64 of the compact dump") {
  // reference values from an independent implementation
  CHECK(digest(json(nullptr)) == "5b9bc4ba528108e4");  // "null"
  CHECK(digest(json::parse(R"({"a":2,"b":1})")) == "f85f5878cbf2dc03");
  CHECK(digest(json::parse("\"a\"")) != digest(json::parse("\"b\"")));
  CHECK(digest(json::object()) == digest(json::parse("{ }")));
  CHECK(digest(json::parse(R"({"b":1,"a":2})")) == digest(json::parse(R"({"a":2,"b":1})")));
}

TEST_CASE("config defaults and validation") {
  auto c = SuiteConfig::from_json(json::object());
  CHECK(c.bound == 4);
  CHECK(c.grade == 2);
  CHECK(c.to_json() == SuiteConfig{}.to_json());
  CHECK_FALSE(c.to_json().contains("out"));
  CHECK_FALSE(c.to_json().contains("jobs"));
  CHECK(SuiteConfig::from_json(json{{"bound", 3}}).bound == 3);
  CHECK_THROWS_AS(SuiteConfig::from_json(json{{"bogus", 1}}), Error);
  CHECK_THROWS_AS(SuiteConfig::from_json(json{{"bound", 0}}).validate(), Error);
  CHECK_THROWS_AS(SuiteConfig::from_json(json::array()), Error);
}

TEST_CASE("commands report a verdict and reject bad input") {
  auto names = command_names();
  CHECK(std::is_sorted(names.begin(), names.end()));
  CHECK(names.size() == 14);
  auto r = run_command("gadget-check", {{"d", 2}, {"arity", 2}});
  CHECK(r.at("verdict") == "pass");
  CHECK(r.at("command") == "gadget-check");
  CHECK_THROWS_AS(run_command("nope", json::object()), Error);
  CHECK_THROWS_AS(run_command("poly", json::object()), Error);
  CHECK_THROWS_AS(run_command("ap-check", {{"class", "nope"}}), Error);
  CHECK_THROWS_AS(run_command("check", {{"name", "nope"}}), Error);
  // a cap violation fails the check instead of throwing
  auto capped = run_command("check", {{"name", "partition.mixing"}, {"config", {{"cap_elems", 10}}}});
  CHECK(capped.at("verdict") == "fail");
  CHECK(capped.at("result").contains("error"));
}

TEST_CASE("certificates replay and detect tampering") {
  const json sigma{{"1", {1}}, {"2", {2, 1}}};
  const json params{{"sigma", sigma}, {"depth", 2}};
  auto result = run_command("realize-sigma", params);
  REQUIRE(result.at("verdict") == "pass");
  auto cert = make_certificate("realize-sigma", params, result);
  CHECK(cert.at("schema") == kCertSchema);
  CHECK(cert.at("inputs").at("sigma").at("digest") == digest(sigma));
  CHECK_FALSE(cert.at("params").contains("sigma"));
  CHECK(replay_certificate(cert).ok);

  SUBCASE("through a file") {
    auto dir = scratch("cert");
    write_json_atomic(dir / "c.json", cert);
    CHECK_FALSE(fs::exists(dir / "c.json.tmp"));
    CHECK(replay_certificate(read_json(dir / "c.json")).ok);
    // edit one byte of a witness
    auto text = slurp(dir / "c.json");
    auto at = text.find("\"target\": ");
    REQUIRE(at != std::string::npos);
    auto digit = at + 10;
    text[digit] = text[digit] == '0' ? '1' : '0';
    std::ofstream(dir / "c.json", std::ios::binary) << text;
    auto r = replay_certificate(read_json(dir / "c.json"));
    CHECK_FALSE(r.ok);
    CHECK(r.detail == "result differs on re-run");
  }
  SUBCASE("input tampering") {
    auto bad = cert;
    bad["inputs"]["sigma"]["data"]["2"] = {1, 2};
    CHECK(replay_certificate(bad).detail == "digest mismatch for input sigma");
  }
  SUBCASE("schema") {
    auto bad = cert;
    bad["schema"] = "oligo-cert/0";
    CHECK_FALSE(replay_certificate(bad).ok);
    bad = cert;
    bad.erase("result");
    CHECK(replay_certificate(bad).detail == "missing field result");
  }
  SUBCASE("verdict") {
    auto bad = cert;
    bad["verdict"] = "fail";
    CHECK_FALSE(replay_certificate(bad).ok);
  }
}

TEST_CASE("suite output does not depend on the number of jobs") {
  SuiteConfig c;
  c.order_bound = 8;
  c.limit_bound = 8;
  c.gadget_arity2 = 2;
  c.gadget_arity3 = 1;
  c.iso_arity = 2;
  std::vector<fs::path> dirs;
  for (int jobs : {1, 3}) {
    c.jobs = jobs;
    c.out = scratch("suite-" + std::to_string(jobs)).string();
    dirs.emplace_back(c.out);
    auto groups = run_suite("groups", c);
    auto clones = run_suite("clones", c);
    CHECK(groups.pass);
    CHECK(clones.pass);
    CHECK(groups.summary.at("checks").size() == 2);
  }
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dirs[0])) {
    ++files;
    CHECK(slurp(e.path()) == slurp(dirs[1] / e.path().filename()));
    if (e.path().filename() != "summary.json") CHECK(replay_certificate(read_json(e.path())).ok);
  }
  // four checks plus the summary, which the second module overwrote
  CHECK(files == 5);
  CHECK_THROWS_AS(run_suite("nope", c), Error);
}

TEST_CASE("a failing check makes the suite fail") {
  SuiteConfig c;
  c.cap_elems = 10;
  c.out = scratch("suite-fail").string();
  auto outcome = run_suite("partition", c);
  CHECK_FALSE(outcome.pass);
  CHECK(outcome.summary.at("verdict") == "fail");
  auto cert = read_json(fs::path(c.out) / "partition.mixing.json");
  CHECK(cert.at("verdict") == "fail");
  CHECK(replay_certificate(cert).ok);  // the failure itself is reproducible
}
