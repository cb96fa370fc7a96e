#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "acceptmc/commands.hpp"
#include "acceptmc/vcbound.hpp"

namespace py = pybind11;

namespace {

std::string run_command(const std::string& config_json, int workers,
                        const char* which, const std::vector<double>* s = nullptr,
                        double w0 = 0.0) {
    const auto config = acceptmc::load_config_string(config_json);
    acceptmc::CommandOptions options;
    options.workers = workers;
    acceptmc::CommandResult result;
    const std::string name = which;
    if (name == "plan") {
        result = acceptmc::cmd_plan(config, options);
    } else if (name == "sample") {
        result = acceptmc::cmd_sample(config, options);
    } else if (name == "run") {
        result = acceptmc::cmd_run(config, options);
    } else if (name == "eval") {
        result = acceptmc::cmd_eval(config, *s, w0, options);
    } else {
        result = acceptmc::cmd_oracle_check(config, options);
    }
    return result.report.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Monte-Carlo computation of near-minimal capital and trading "
              "strategies under scenario-based convex risk measures";

    m.def("plan", [](const std::string& config) { return run_command(config, 1, "plan"); },
          py::arg("config_json"),
          "Compute constants and certified sample sizes; returns a JSON report.");
    m.def("run",
          [](const std::string& config, int workers) {
              return run_command(config, workers, "run");
          },
          py::arg("config_json"), py::arg("workers") = 1,
          "Full search for (w0*, s*); returns a JSON report.");
    m.def("evaluate",
          [](const std::string& config, const std::vector<double>& s, double w0,
             int workers) { return run_command(config, workers, "eval", &s, w0); },
          py::arg("config_json"), py::arg("s"), py::arg("w0") = 0.0,
          py::arg("workers") = 1,
          "rho_hat at a fixed parameter vector plus the plain-MC cross-check.");
    m.def("oracle_check",
          [](const std::string& config, int workers) {
              return run_command(config, workers, "oracle-check");
          },
          py::arg("config_json"), py::arg("workers") = 1,
          "Exhaustive verification on finite-tree configs.");

    m.def("halfspace_vc_dim", &acceptmc::halfspace_vc_dim, py::arg("m"));
    m.def("sauer_bound", &acceptmc::sauer_bound, py::arg("n"), py::arg("vc_dim"));
    m.def("deviation_bound",
          [](std::int64_t n, double eps, int vc_dim, const std::string& variant) {
              return acceptmc::deviation_bound(
                  n, eps, vc_dim, acceptmc::bound_variant_from_name(variant));
          },
          py::arg("n"), py::arg("eps"), py::arg("vc_dim"),
          py::arg("variant") = "devroye");
    m.def("minimal_kappa",
          [](double eps, double delta, int vc_dim, const std::string& variant) {
              return acceptmc::minimal_kappa(
                  eps, delta, vc_dim, acceptmc::bound_variant_from_name(variant));
          },
          py::arg("eps"), py::arg("delta"), py::arg("vc_dim"),
          py::arg("variant") = "devroye");

    m.attr("__version__") = "0.1.0";
}
