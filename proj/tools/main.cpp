// Command-line interface: analytic/exact MS channels, the native-gate
// compiler, repetition-code model curves, and sampled experiment sweeps.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "qreshape/channel.hpp"
#include "qreshape/circuit.hpp"
#include "qreshape/harness.hpp"
#include "qreshape/msgate.hpp"
#include "qreshape/repcode.hpp"
#include "qreshape/version.hpp"

namespace {

using nlohmann::json;
using namespace qreshape;

json complex_json(const Complex& z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json matrix_json(const CMat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

json coefficients_json(const MSCoefficients& c) {
  json j;
  j["r1"] = c.r1;
  j["r2"] = c.r2;
  j["a1"] = complex_json(c.a1);
  j["a2"] = complex_json(c.a2);
  j["a3"] = complex_json(c.a3);
  j["a4"] = complex_json(c.a4);
  j["k2"] = complex_json(c.k2);
  j["residual"] = c.residual;
  const auto res = coefficient_residuals(c);
  j["equation_residuals"] = {res[0], res[1], res[2], res[3]};
  return j;
}

json channel_json(const QuantumChannel& ch) {
  json j;
  j["dim_in"] = ch.dim_in;
  j["dim_out"] = ch.dim_out;
  j["cptp_defect"] = ch.cptp_defect();
  json kraus = json::array();
  for (const auto& k : ch.kraus) kraus.push_back(matrix_json(k));
  j["kraus"] = kraus;
  j["choi_spectrum"] = choi_spectrum(choi_of(ch));
  return j;
}

json fit_json(const StructureFit& fit) {
  json j;
  j["residual"] = fit.residual;
  j["ok"] = fit.ok;
  j["coefficients"] = coefficients_json(fit.coeffs);
  return j;
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw std::runtime_error("cannot open output file: " + out_path);
  f << text;
}

struct MsChannelOpts {
  MSParams params;
  std::string mode = "analytic";
  double r1 = -1.0, r2 = -1.0;  // direct overrides for analytic mode
  int fock_dim = 30;
  double dt_control = 1e-7;
  int initial_steps = 20000;
  int max_doublings = 6;
  double heat_r = 0.01;
  double heat_nbar = 0.0;
  std::string heat_mode = "analytic";
  std::string axis = "y";
  std::string out;
};

int run_ms_channel(const MsChannelOpts& o) {
  json j;
  j["version"] = kVersion;
  j["mode"] = o.mode;
  const char axis = o.axis.at(0);
  json pj;
  pj["eta"] = o.params.eta;
  pj["omega"] = o.params.omega;
  pj["nu"] = o.params.nu;
  pj["delta"] = o.params.delta;
  pj["loops"] = o.params.loops;
  pj["gamma_p"] = o.params.gamma_p;
  pj["gamma_h"] = o.params.gamma_h;
  pj["n_th"] = o.params.n_th;
  pj["mu"] = o.params.mu();
  pj["tau"] = o.params.tau();
  j["params"] = pj;
  j["closure_ok"] = closure_constraints(o.params).ok;

  if (o.mode == "analytic") {
    RParams r = r_params(o.params);
    if (o.r1 >= 0) r.r1 = o.r1;
    if (o.r2 >= 0) r.r2 = o.r2;
    const MSCoefficients c = solve_coefficients(r.r1, r.r2);
    j["coefficients"] = coefficients_json(c);
    j["channel"] = channel_json(analytic_channel(c, axis));
  } else if (o.mode == "exact") {
    const ExactChannelResult res = simulate_exact(o.params, o.fock_dim, o.dt_control,
                                                  o.initial_steps, o.max_doublings);
    j["steps"] = res.steps;
    j["choi_change"] = res.choi_change;
    j["target"] = matrix_json(res.target);
    j["channel"] = channel_json(res.error);
    j["fit"] = fit_json(fit_structure(res.error, 'y'));
    const RParams r = r_params(o.params);
    j["analytic"] = coefficients_json(solve_coefficients(r.r1, r.r2));
  } else if (o.mode == "heating") {
    const QuantumChannel ch =
        heating_channel(o.heat_r, o.heat_nbar, o.heat_mode, o.fock_dim, axis);
    j["channel"] = channel_json(ch);
    j["fit"] = fit_json(fit_structure(ch, axis));
  } else {
    throw std::invalid_argument("ms-channel: unknown mode " + o.mode);
  }
  emit(o.out, j.dump(2) + "\n");
  return 0;
}

struct CompileOpts {
  std::string in;
  std::string backend = "ion";
  int pairs = 0;
  bool json_out = false;
  std::string out;
};

int run_compile(const CompileOpts& o) {
  const Circuit input = parse_circuit_file(o.in);
  const Backend backend = o.backend == "ion" ? Backend::Ion
                          : o.backend == "cz" ? Backend::CZB
                          : throw std::invalid_argument("backend must be ion or cz");
  const CompileResult res = compile_circuit(input, backend);
  const VerifyReport rep = verify_compile(input, res);
  if (!rep.equivalent)
    throw std::runtime_error("compile verification failed: distance " +
                             std::to_string(rep.distance));
  Circuit out_circuit = res.circuit;
  if (o.pairs > 0) out_circuit = insert_redundant_pairs(out_circuit, o.pairs);

  if (o.json_out) {
    json j;
    j["version"] = kVersion;
    j["backend"] = o.backend;
    j["circuit"] = format_circuit(out_circuit);
    j["pending_rz"] = res.pending_rz;
    j["noise_sites"] = out_circuit.noise_sites;
    j["phase_distance"] = rep.distance;
    j["global_phase"] = rep.phase;
    emit(o.out, j.dump(2) + "\n");
    return 0;
  }
  std::ostringstream text;
  text << format_circuit(out_circuit);
  text << "# pending_rz";
  for (double a : res.pending_rz) text << " " << a;
  text << "\n# noise_sites";
  for (int s : out_circuit.noise_sites) text << " " << s;
  text << "\n# phase_distance " << rep.distance << "\n";
  emit(o.out, text.str());
  return 0;
}

struct ModelOpts {
  std::vector<double> p_list = {0.0, 0.05, 0.1, 0.15, 0.2};
  std::vector<double> theta0_list = {0.01 * kPi, 0.328 * kPi, 0.647 * kPi,
                                     0.965 * kPi};
  double phi = kPi / 9.0;
  std::string fmt = "csv";
  std::string out;
};

int run_model(const ModelOpts& o) {
  const auto rows = model_curves(o.p_list, o.theta0_list, o.phi);
  std::ostringstream text;
  if (o.fmt == "csv") {
    text << "p,theta0,rho00,re_rho01,im_rho01\n";
    char buf[160];
    for (const auto& r : rows) {
      std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g,%.10g,%.10g\n", r.p,
                    r.theta0, r.rho00, r.re_rho01, r.im_rho01);
      text << buf;
    }
  } else if (o.fmt == "json") {
    json j;
    j["version"] = kVersion;
    j["phi"] = o.phi;
    json jr = json::array();
    for (const auto& r : rows)
      jr.push_back({{"p", r.p},
                    {"theta0", r.theta0},
                    {"rho00", r.rho00},
                    {"re_rho01", r.re_rho01},
                    {"im_rho01", r.im_rho01}});
    j["rows"] = jr;
    text << j.dump(2) << "\n";
  } else {
    throw std::invalid_argument("repcode-model: emit must be csv or json");
  }
  emit(o.out, text.str());
  return 0;
}

struct SweepOpts {
  std::string config;
  std::string fmt = "csv";
  std::string out;
};

int run_sweep_cmd(const SweepOpts& o) {
  std::ifstream f(o.config);
  if (!f) throw std::runtime_error("cannot open config file: " + o.config);
  std::stringstream buf;
  buf << f.rdbuf();
  const ExperimentConfig cfg = config_from_json_text(buf.str());
  const auto rows = run_sweep(cfg);
  std::ostringstream text;
  if (o.fmt == "csv")
    write_csv(text, rows);
  else if (o.fmt == "json")
    write_json(text, cfg, rows);
  else
    throw std::invalid_argument("sweep: emit must be csv or json");
  emit(o.out, text.str());
  return 0;
}

struct SimOpts {
  std::string variant = "five_qubit";
  double phi = kPi / 9.0;
  double theta0 = 0.328 * kPi;
  std::string noise = "none";
  double rate = 0.0;
  int reps = 0;
  double ms_r1 = 0.0, ms_r2 = 0.0;
  long shots = 1000;
  std::uint64_t seed = 2024;
  std::string frame = "native";
  bool raw_filter = false;
  bool no_post_selection = false;
  std::string out;
};

int run_simulate(const SimOpts& o) {
  ExperimentConfig cfg;
  cfg.variant = variant_from_string(o.variant);
  cfg.phi = o.phi;
  cfg.theta0_list = {o.theta0};
  cfg.noise_kind = noise_kind_from_string(o.noise);
  cfg.ms_r1 = o.ms_r1;
  cfg.ms_r2 = o.ms_r2;
  cfg.shots = o.shots;
  cfg.seed = o.seed;
  cfg.frame = o.frame;
  cfg.raw_filter = o.raw_filter;
  cfg.post_selection = !o.no_post_selection;
  const double x = cfg.noise_kind == NoiseKind::MsFull
                       ? static_cast<double>(o.reps)
                       : o.rate;
  const SweepRow row = run_point(cfg, o.theta0, x, cfg.seed);
  json j;
  j["version"] = kVersion;
  j["config"] = json::parse(config_to_json_text(cfg));
  j["row"] = {{"variant", row.variant},   {"theta0", row.theta0},
              {"reps_or_rate", row.reps_or_rate}, {"value", row.value},
              {"lo", row.lo},             {"hi", row.hi},
              {"n_valid", row.n_valid},   {"exact", row.exact}};
  emit(o.out, j.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trapped-ion MS gate noise channels and repetition-code reshaping"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  MsChannelOpts mso;
  auto* ms = app.add_subcommand("ms-channel",
                                "Analytic or exact MS-gate noise channel");
  ms->add_option("--mode", mso.mode, "analytic | exact | heating")
      ->check(CLI::IsMember({"analytic", "exact", "heating"}));
  ms->add_option("--eta", mso.params.eta, "Lamb-Dicke parameter");
  ms->add_option("--omega", mso.params.omega, "Rabi frequency");
  ms->add_option("--nu", mso.params.nu, "trap frequency");
  ms->add_option("--delta", mso.params.delta, "drive detuning from carrier");
  ms->add_option("--loops", mso.params.loops, "phase-space loop count K");
  ms->add_option("--gamma-p", mso.params.gamma_p, "motional dephasing rate");
  ms->add_option("--gamma-h", mso.params.gamma_h, "heating (relaxation) rate");
  ms->add_option("--n-th", mso.params.n_th, "thermal occupation");
  ms->add_option("--r1", mso.r1, "direct r1 override (analytic mode)");
  ms->add_option("--r2", mso.r2, "direct r2 override (analytic mode)");
  ms->add_option("--fock-dim", mso.fock_dim, "oscillator truncation");
  ms->add_option("--dt-control", mso.dt_control, "Choi convergence target");
  ms->add_option("--initial-steps", mso.initial_steps, "starting RK4 step count");
  ms->add_option("--max-doublings", mso.max_doublings, "step-doubling limit");
  ms->add_option("--heat-r", mso.heat_r, "heating-channel r (heating mode)");
  ms->add_option("--heat-nbar", mso.heat_nbar, "bath occupation (heating mode)");
  ms->add_option("--heat-mode", mso.heat_mode, "analytic | exact (heating mode)")
      ->check(CLI::IsMember({"analytic", "exact"}));
  ms->add_option("--axis", mso.axis, "collective-spin axis: x | y")
      ->check(CLI::IsMember({"x", "y"}));
  ms->add_option("-o,--out", mso.out, "output file ('-' = stdout)");

  CompileOpts co;
  auto* cp = app.add_subcommand("compile", "Compile a circuit to native gates");
  cp->add_option("-i,--in", co.in, "input circuit file")->required();
  cp->add_option("--backend", co.backend, "ion | cz")
      ->check(CLI::IsMember({"ion", "cz"}));
  cp->add_option("--pairs", co.pairs, "redundant pairs per noise site");
  cp->add_flag("--json", co.json_out, "emit JSON instead of circuit text");
  cp->add_option("-o,--out", co.out, "output file ('-' = stdout)");

  ModelOpts mo;
  auto* md = app.add_subcommand("repcode-model", "Analytic model curves");
  md->add_option("--p-list", mo.p_list, "bit-flip probabilities")->delimiter(',');
  md->add_option("--theta0-list", mo.theta0_list, "inserted Ry angles")
      ->delimiter(',');
  md->add_option("--phi", mo.phi, "encoding angle");
  md->add_option("--emit", mo.fmt, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  md->add_option("-o,--out", mo.out, "output file ('-' = stdout)");

  SweepOpts so;
  auto* sw = app.add_subcommand("sweep", "Run a sampled experiment sweep");
  sw->add_option("-c,--config", so.config, "JSON config file")->required();
  sw->add_option("--emit", so.fmt, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  sw->add_option("-o,--out", so.out, "output file ('-' = stdout)");

  SimOpts io;
  auto* sim = app.add_subcommand("simulate", "Run a single experiment point");
  sim->add_option("--variant", io.variant,
                  "five_qubit | three_qubit_case1..three_qubit_case3");
  sim->add_option("--phi", io.phi, "encoding angle");
  sim->add_option("--theta0", io.theta0, "inserted Ry angle");
  sim->add_option("--noise", io.noise,
                  "none | bit_flip | phase_flip | depolarizing | ms_full");
  sim->add_option("--rate", io.rate, "stochastic noise rate");
  sim->add_option("--reps", io.reps, "redundant pairs (ms_full)");
  sim->add_option("--ms-r1", io.ms_r1, "ms_full channel r1");
  sim->add_option("--ms-r2", io.ms_r2, "ms_full channel r2");
  sim->add_option("--shots", io.shots, "measurement shots");
  sim->add_option("--seed", io.seed, "RNG seed");
  sim->add_option("--frame", io.frame, "native | cnot");
  sim->add_flag("--raw-filter", io.raw_filter, "filter raw data in {000,111}");
  sim->add_flag("--no-post-selection", io.no_post_selection,
                "keep invalid outcomes in the denominator");
  sim->add_option("-o,--out", io.out, "output file ('-' = stdout)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (ms->parsed()) return run_ms_channel(mso);
    if (cp->parsed()) return run_compile(co);
    if (md->parsed()) return run_model(mo);
    if (sw->parsed()) return run_sweep_cmd(so);
    if (sim->parsed()) return run_simulate(io);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
