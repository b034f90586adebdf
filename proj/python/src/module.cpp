// Python bindings. JSON crosses the boundary as strings; the oligo package
// wraps them in dict-based functions.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "oligo/certificate.hpp"
#include "oligo/commands.hpp"
#include "oligo/error.hpp"
#include "oligo/suite.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw oligo::Error(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

PYBIND11_MODULE(_oligo, m) {
  m.doc() = "Finite-scale workbench: class oracles, encodings, group and clone checks";
  py::register_exception<oligo::Error>(m, "OligoError", PyExc_ValueError);

  m.def("command_names", &oligo::command_names);
  m.def("battery_checks", &oligo::battery_checks, py::arg("module") = "all");
  m.def(
      "run_command",
      [](const std::string& name, const std::string& params) {
        json out;
        {
          py::gil_scoped_release release;
          out = oligo::run_command(name, parse(params));
        }
        return out.dump();
      },
      py::arg("name"), py::arg("params_json"));
  m.def(
      "run_check",
      [](const std::string& name, const std::string& config) {
        const auto cfg = oligo::SuiteConfig::from_json(parse(config));
        py::gil_scoped_release release;
        return oligo::run_check(name, cfg).dump();
      },
      py::arg("name"), py::arg("config_json") = "{}");
  m.def(
      "make_certificate",
      [](const std::string& name, const std::string& params, const std::string& result) {
        return oligo::make_certificate(name, parse(params), parse(result)).dump();
      },
      py::arg("name"), py::arg("params_json"), py::arg("result_json"));
  m.def(
      "replay",
      [](const std::string& cert) {
        const auto c = parse(cert);
        py::gil_scoped_release release;
        return oligo::replay_certificate(c).to_json().dump();
      },
      py::arg("certificate_json"));
  m.def(
      "run_suite",
      [](const std::string& module, const std::string& config, const std::string& out, int jobs) {
        auto cfg = oligo::SuiteConfig::from_json(parse(config));
        cfg.out = out;
        cfg.jobs = jobs;
        py::gil_scoped_release release;
        return oligo::run_suite(module, cfg).summary.dump();
      },
      py::arg("module"), py::arg("config_json"), py::arg("out"), py::arg("jobs") = 1);
  m.def("digest", [](const std::string& j) { return oligo::digest(parse(j)); }, py::arg("json"));
}
