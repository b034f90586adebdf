// Command-line front end: one subcommand per operation, JSON in and out.
// Exit status: 0 pass, 1 fail, 2 usage or runtime error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oligo/certificate.hpp"
#include "oligo/commands.hpp"
#include "oligo/error.hpp"
#include "oligo/suite.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// A value given inline as JSON, or a path to a JSON file.
json json_arg(const std::string& value) {
  if (fs::exists(value)) return oligo::read_json(value);
  try {
    return json::parse(value);
  } catch (const json::parse_error&) {
    throw oligo::Error("not a file or JSON value: " + value);
  }
}

struct Common {
  std::string config;
  std::string out;
  std::string cert;
  std::optional<int> jobs, bound, grade, depth, cap_size, cap_elems;
  bool quiet = false;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "JSON file (or inline JSON) with parameters");
  sub->add_option("--out", c.out, "output file or directory");
  sub->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
  sub->add_option("--bound", c.bound, "member size bound")->check(CLI::PositiveNumber);
  sub->add_option("--grade", c.grade, "partition grade N")->check(CLI::PositiveNumber);
  sub->add_option("--depth", c.depth, "saturation depth or back-and-forth steps")->check(CLI::NonNegativeNumber);
  sub->add_option("--cap-size", c.cap_size, "largest member size generated exhaustively")->check(CLI::PositiveNumber);
  sub->add_option("--cap-elems", c.cap_elems, "largest approximation size")->check(CLI::PositiveNumber);
  sub->add_flag("--quiet", c.quiet, "print only the verdict");
}

void overlay(json& p, const char* key, const std::optional<int>& v) {
  if (v) p[key] = *v;
}

int exit_code(const std::string& verdict) { return verdict == "pass" ? 0 : 1; }

void print_result(const json& result, bool quiet) {
  if (!quiet) std::cout << result.dump(2) << '\n';
  std::cerr << result.value("command", "?") << ": " << result.value("verdict", "?") << '\n';
}

// Per-command parameter flags; each maps onto a key of the params object.
struct CommandArgs {
  std::optional<std::string> structure, signature, sigma, instance, spec, group, a, b, c, f, g, center, cls, property,
      inner, name;
  std::optional<int> arity, d, k, n, rounds;
  bool plus = false;
};

int run_single(const std::string& command, const Common& c, const CommandArgs& a) {
  json params = c.config.empty() ? json::object() : json_arg(c.config);
  if (!params.is_object()) throw oligo::Error("--config must hold a JSON object");
  overlay(params, "bound", c.bound);
  overlay(params, "grade", c.grade);
  overlay(params, "depth", c.depth);
  overlay(params, "cap_size", c.cap_size);
  overlay(params, "cap_elems", c.cap_elems);
  overlay(params, "arity", a.arity);
  overlay(params, "d", a.d);
  overlay(params, "k", a.k);
  overlay(params, "n", a.n);
  overlay(params, "rounds", a.rounds);
  auto file = [&](const char* key, const std::optional<std::string>& v) {
    if (v) params[key] = json_arg(*v);
  };
  file("structure", a.structure);
  file("signature", a.signature);
  file("sigma", a.sigma);
  file("instance", a.instance);
  file("spec", a.spec);
  file("a", a.a);
  file("b", a.b);
  file("c", a.c);
  file("f", a.f);
  file("g", a.g);
  if (a.group) params["group"] = fs::exists(*a.group) ? oligo::read_json(*a.group) : json(*a.group);
  if (a.center) params["center"] = (*a.center == "all" || *a.center == "full") ? json(*a.center) : json_arg(*a.center);
  if (a.cls) params["class"] = *a.cls;
  if (a.property) params["property"] = *a.property;
  if (a.inner) params["inner"] = *a.inner;
  if (a.name) params["name"] = *a.name;
  if (a.plus) params["plus"] = true;

  const auto result = oligo::run_command(command, params);
  const auto cert = oligo::make_certificate(command, params, result);
  if (!c.cert.empty()) oligo::write_json_atomic(c.cert, cert);
  if (!c.out.empty()) {
    // encode and decode write the structure they produce; the rest write the certificate
    if (command == "encode") oligo::write_json_atomic(c.out, result.at("encoded"));
    else if (command == "decode" && result.contains("decoded")) oligo::write_json_atomic(c.out, result.at("decoded"));
    else oligo::write_json_atomic(c.out, cert);
  }
  print_result(result, c.quiet);
  return exit_code(result.at("verdict").get<std::string>());
}

int run_suite_cmd(const std::string& module, const Common& c) {
  json cfg_json = c.config.empty() ? json::object() : json_arg(c.config);
  auto cfg = oligo::SuiteConfig::from_json(cfg_json);
  if (c.bound) cfg.bound = *c.bound;
  if (c.grade) cfg.grade = *c.grade;
  if (c.depth) cfg.depth = *c.depth;
  if (c.cap_size) cfg.cap_size = *c.cap_size;
  if (c.cap_elems) cfg.cap_elems = *c.cap_elems;
  if (c.jobs) cfg.jobs = *c.jobs;
  if (!c.out.empty()) cfg.out = c.out;
  auto outcome = oligo::run_suite(module, cfg);
  std::printf("%-22s %s\n", "check", "verdict");
  for (const auto& row : outcome.summary.at("checks"))
    std::printf("%-22s %s\n", row.at("check").get<std::string>().c_str(), row.at("verdict").get<std::string>().c_str());
  std::printf("%zu certificates in %s; suite %s\n", outcome.summary.at("checks").size(), cfg.out.c_str(),
              outcome.pass ? "pass" : "fail");
  return outcome.pass ? 0 : 1;
}

int run_replay(const std::vector<std::string>& targets) {
  std::vector<fs::path> files;
  for (const auto& t : targets) {
    if (fs::is_directory(t)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(t))
        if (e.path().extension() == ".json" && e.path().filename() != "summary.json") found.push_back(e.path());
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.emplace_back(t);
    }
  }
  if (files.empty()) throw oligo::Error("nothing to replay");
  bool all = true;
  for (const auto& f : files) {
    auto r = oligo::replay_certificate(oligo::read_json(f));
    all = all && r.ok;
    std::printf("%s: %s%s%s\n", f.string().c_str(), r.ok ? "match" : "MISMATCH", r.ok ? "" : " - ",
                r.detail.c_str());
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  // "partition orbits ..." and "orbits ..." are the same command
  static const std::set<std::string> groups{"fraisse", "partition", "encoding", "groups", "clones"};
  std::vector<char*> args(argv, argv + argc);
  if (args.size() > 2 && groups.contains(args[1]) && args[2][0] != '-') args.erase(args.begin() + 1);

  CLI::App app{"oligo: finite-scale workbench for homogeneous structures, encodings, groups and clones"};
  app.require_subcommand(1);
  Common common;
  CommandArgs cargs;

  const std::vector<std::pair<std::string, std::string>> commands{
      {"ap-check", "check HP, JEP and AP exhaustively up to --bound"},
      {"saturate", "build a saturated approximation of the limit"},
      {"orbits", "count k-types in a saturated approximation"},
      {"realize-sigma", "realize a class permutation by back and forth"},
      {"mixing", "find a mixing witness for (y, a, b)"},
      {"encode", "encode a structure into the finite language"},
      {"decode", "decode an encoded structure"},
      {"verify-ep", "check existential positive definability of R_n"},
      {"amalgam-check", "free amalgam of encoded structures and class membership"},
      {"split", "splitting of a group over central subgroups"},
      {"chain-verify", "stabilizer and kernel identities of a coset chain"},
      {"poly", "polymorphisms of a structure at one arity"},
      {"gadget-check", "essential unarity of the gadget's polymorphisms"},
      {"check", "run one battery check by name"},
  };
  std::string chosen;
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    add_common(sub, common);
    sub->add_option("--cert", common.cert, "also write the certificate here");
    sub->add_option("--structure,--in", cargs.structure, "structure JSON (file or inline)");
    sub->add_option("--signature", cargs.signature, "graded signature JSON");
    sub->add_option("--sigma", cargs.sigma, "class action JSON");
    sub->add_option("--instance", cargs.instance, "mixing instance {y, a, b}");
    sub->add_option("--spec", cargs.spec, "chain or amalgam specification");
    sub->add_option("--order,--group", cargs.group, "catalogue id or group JSON");
    sub->add_option("--center", cargs.center, "all, full, or a list of elements");
    sub->add_option("--a", cargs.a, "amalgam base");
    sub->add_option("--b", cargs.b, "left factor");
    sub->add_option("--c", cargs.c, "right factor");
    sub->add_option("--f", cargs.f, "embedding of the base into b");
    sub->add_option("--g", cargs.g, "embedding of the base into c");
    sub->add_option("--class", cargs.cls, "partition, reduct, random-graph, no-isolated-graph, linear-order");
    sub->add_option("--property", cargs.property, "HP, JEP, AP or all");
    sub->add_option("--inner", cargs.inner, "inner class for amalgam-check: all or partition");
    sub->add_option("--name", cargs.name, "battery check name");
    sub->add_option("--arity", cargs.arity, "operation arity")->check(CLI::PositiveNumber);
    sub->add_option("--d", cargs.d, "domain size")->check(CLI::PositiveNumber);
    sub->add_option("--k", cargs.k, "tuple length")->check(CLI::NonNegativeNumber);
    sub->add_option("--n", cargs.n, "index of the relation R_n")->check(CLI::PositiveNumber);
    sub->add_option("--rounds", cargs.rounds, "saturation rounds")->check(CLI::PositiveNumber);
    sub->add_flag("--plus", cargs.plus, "encode over L plus the R_n symbols");
    sub->callback([&chosen, name = name] { chosen = name; });
  }

  std::string module = "all";
  auto* suite = app.add_subcommand("suite", "run a module's battery and write certificates");
  add_common(suite, common);
  suite->add_option("module", module, "fraisse, partition, encoding, groups, clones or all")
      ->check(CLI::IsMember({"fraisse", "partition", "encoding", "groups", "clones", "all"}));
  suite->callback([&] { chosen = "suite"; });

  std::vector<std::string> targets;
  auto* replay = app.add_subcommand("replay", "re-run certificates and compare results");
  replay->add_option("targets", targets, "certificate files or directories")->required();
  replay->callback([&] { chosen = "replay"; });

  try {
    app.parse(static_cast<int>(args.size()), args.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (chosen == "suite") return run_suite_cmd(module, common);
    if (chosen == "replay") return run_replay(targets);
    return run_single(chosen, common, cargs);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
