// Python bindings for the main operations: analytic coefficients, exact
// channel simulation, structure fits, model curves, the compiler, and sweeps.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "qreshape/channel.hpp"
#include "qreshape/circuit.hpp"
#include "qreshape/harness.hpp"
#include "qreshape/msgate.hpp"
#include "qreshape/propagate.hpp"
#include "qreshape/repcode.hpp"
#include "qreshape/version.hpp"

namespace py = pybind11;
using namespace qreshape;

namespace {

py::dict coeff_dict(const MSCoefficients& c) {
  py::dict d;
  d["r1"] = c.r1;
  d["r2"] = c.r2;
  d["a1"] = c.a1;
  d["a2"] = c.a2;
  d["a3"] = c.a3;
  d["a4"] = c.a4;
  d["k2"] = c.k2;
  d["residual"] = c.residual;
  return d;
}

MSParams params_from_kwargs(double eta, double omega, double nu, double delta,
                            int loops, double gamma_p, double gamma_h, double n_th) {
  MSParams p;
  p.eta = eta;
  p.omega = omega;
  p.nu = nu;
  p.delta = delta;
  p.loops = loops;
  p.gamma_p = gamma_p;
  p.gamma_h = gamma_h;
  p.n_th = n_th;
  return p;
}

}  // namespace

PYBIND11_MODULE(_qreshape, m) {
  m.doc() = "MS-gate noise channels and repetition-code noise reshaping";
  m.attr("__version__") = kVersion;

  m.def("solve_coefficients",
        [](double r1, double r2) { return coeff_dict(solve_coefficients(r1, r2)); },
        py::arg("r1"), py::arg("r2"),
        "Analytic channel coefficients a1..a4, k2 for given (r1, r2)");

  m.def("analytic_kraus",
        [](double r1, double r2, char axis) {
          return analytic_channel(solve_coefficients(r1, r2), axis).kraus;
        },
        py::arg("r1"), py::arg("r2"), py::arg("axis") = 'y',
        "Canonical Kraus operators of the analytic error channel");

  m.def("r_params",
        [](double eta, double omega, double nu, double delta, int loops,
           double gamma_p, double gamma_h, double n_th) {
          const RParams r = r_params(params_from_kwargs(eta, omega, nu, delta, loops,
                                                        gamma_p, gamma_h, n_th));
          return py::make_tuple(r.r1, r.r2);
        },
        py::arg("eta") = 0.1, py::arg("omega") = 0.1, py::arg("nu") = 1.0,
        py::arg("delta") = 0.9, py::arg("loops") = 25, py::arg("gamma_p") = 0.0,
        py::arg("gamma_h") = 0.0, py::arg("n_th") = 0.05,
        "(r1, r2) from the physical gate parameters");

  m.def("exact_error_channel",
        [](double eta, double omega, double nu, double delta, int loops,
           double gamma_p, double gamma_h, double n_th, int fock_dim,
           double dt_control, int initial_steps, int max_doublings) {
          const ExactChannelResult r =
              simulate_exact(params_from_kwargs(eta, omega, nu, delta, loops, gamma_p,
                                                gamma_h, n_th),
                             fock_dim, dt_control, initial_steps, max_doublings);
          py::dict d;
          d["kraus"] = r.error.kraus;
          d["target"] = r.target;
          d["chi"] = r.chi;
          d["steps"] = r.steps;
          d["choi_change"] = r.choi_change;
          const StructureFit fit = fit_structure(r.error, 'y');
          d["fit_residual"] = fit.residual;
          d["fit_ok"] = fit.ok;
          d["fit_coefficients"] = coeff_dict(fit.coeffs);
          return d;
        },
        py::arg("eta") = 0.1, py::arg("omega") = 0.1, py::arg("nu") = 1.0,
        py::arg("delta") = 0.9, py::arg("loops") = 25, py::arg("gamma_p") = 0.0,
        py::arg("gamma_h") = 0.0, py::arg("n_th") = 0.05, py::arg("fock_dim") = 30,
        py::arg("dt_control") = 1e-7, py::arg("initial_steps") = 20000,
        py::arg("max_doublings") = 6,
        "Exact Lindblad error channel (canonical Kraus) and structure fit");

  m.def("heating_kraus",
        [](double r, double n_bath, const std::string& mode, int fock_dim) {
          return heating_channel(r, n_bath, mode, fock_dim).kraus;
        },
        py::arg("r"), py::arg("n_bath"), py::arg("mode") = "analytic",
        py::arg("fock_dim") = 30, "Heating-channel canonical Kraus operators");

  m.def("model_curves",
        [](const std::vector<double>& p_grid, const std::vector<double>& theta0_grid,
           double phi) {
          py::list rows;
          for (const auto& r : model_curves(p_grid, theta0_grid, phi)) {
            py::dict d;
            d["p"] = r.p;
            d["theta0"] = r.theta0;
            d["rho00"] = r.rho00;
            d["re_rho01"] = r.re_rho01;
            d["im_rho01"] = r.im_rho01;
            rows.append(d);
          }
          return rows;
        },
        py::arg("p_grid"), py::arg("theta0_grid"), py::arg("phi"),
        "Analytic reshaped-channel model curves");

  m.def("circuit_agnostic_output",
        [](double p, double theta, double phi_u, double deltaA, double phi) {
          InsertedUnitary u;
          u.theta = theta;
          u.phi = phi_u;
          u.deltaA = deltaA;
          return circuit_agnostic_output(p, u, phi);
        },
        py::arg("p"), py::arg("theta"), py::arg("phi_u"), py::arg("deltaA"),
        py::arg("phi"), "Closed-form model output density matrix (8x8)");

  m.def("brute_force_output",
        [](double p, double theta, double phi_u, double deltaA, double phi) {
          InsertedUnitary u;
          u.theta = theta;
          u.phi = phi_u;
          u.deltaA = deltaA;
          return brute_force_output(p, u, phi);
        },
        py::arg("p"), py::arg("theta"), py::arg("phi_u"), py::arg("deltaA"),
        py::arg("phi"), "Enumerated flips + recovery oracle (8x8)");

  m.def("compile_circuit",
        [](const std::string& text, const std::string& backend) {
          std::istringstream in(text);
          const Circuit c = parse_circuit(in);
          const CompileResult res = compile_circuit(
              c, backend == "cz" ? Backend::CZB : Backend::Ion);
          py::dict d;
          d["circuit"] = format_circuit(res.circuit);
          d["pending_rz"] = res.pending_rz;
          d["noise_sites"] = res.circuit.noise_sites;
          d["phase_distance"] = res.phase_distance;
          return d;
        },
        py::arg("text"), py::arg("backend") = "ion",
        "Compile a circuit (text format) to native gates");

  m.def("circuit_unitary",
        [](const std::string& text) {
          std::istringstream in(text);
          return circuit_unitary(parse_circuit(in));
        },
        py::arg("text"), "Unitary of a circuit in the text format");

  m.def("run_sweep_csv",
        [](const std::string& config_json) {
          const ExperimentConfig cfg = config_from_json_text(config_json);
          std::ostringstream out;
          write_csv(out, run_sweep(cfg));
          return out.str();
        },
        py::arg("config_json"), "Run a sweep from a JSON config; returns CSV text");

  m.def("encoded_state_first_order", &encoded_state_first_order, py::arg("r1"),
        py::arg("n"), py::arg("phi"),
        "Unnormalized first-order propagated encoded state (8x8)");
}
