// Python face of the simulator: thin JSON-string shims over the C++ engine.
// The python package wraps these in dict-returning helpers.
#include <pybind11/pybind11.h>

#include <string>

#include "scaleguard/config_io.hpp"
#include "scaleguard/engine.hpp"
#include "scaleguard/report.hpp"
#include "scaleguard/types.hpp"

namespace py = pybind11;
using namespace scaleguard;

namespace {

std::string run_scenario_json(const std::string& name,
                              const std::string& variant) {
  return to_json(compute(run(scenario_config(name, variant))));
}

std::string run_config_json(const std::string& config_json) {
  return to_json(compute(run(config_from_json(config_json))));
}

std::string scenario_config_json(const std::string& name,
                                 const std::string& variant) {
  return config_to_json(scenario_config(name, variant));
}

std::string compare_json(const std::string& report_a,
                         const std::string& report_b) {
  return to_json(compare(report_from_json(report_a),
                         report_from_json(report_b)));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Deterministic three-tier ingress defense and autoscaling simulator";
  m.attr("__version__") = SCALEGUARD_VERSION;
  py::register_exception<ValidationError>(m, "ValidationError",
                                          PyExc_ValueError);
  m.def("run_scenario", &run_scenario_json, py::arg("name"),
        py::arg("variant"),
        "Run a canned scenario variant; returns the metrics report as JSON "
        "text.");
  m.def("run_config", &run_config_json, py::arg("config_json"),
        "Run a simulation config given as JSON text; returns the metrics "
        "report as JSON text.");
  m.def("scenario_config", &scenario_config_json, py::arg("name"),
        py::arg("variant"), "Canned scenario config as JSON text.");
  m.def("compare", &compare_json, py::arg("report_a"), py::arg("report_b"),
        "Compare two metrics reports (JSON text) of the same workload seed; "
        "returns the comparison as JSON text.");
}
