// Standalone acceptance runner. Each numbered criterion prints exactly one
// PASS/FAIL line with its measured values; the exit code is the number of
// failed criteria. Tolerances are pinned here on purpose.
//
// Criterion 7 documents a known property of the linearized per-gate noise
// model: the aggregate first-order expressions and the composition of the
// full analytic channels differ at first order in r1 (the linearized unit
// keeps only the feed-through term), so the two-point scaling ratio measured
// against the exact channel composition sits near 2 rather than 4. The
// criterion is evaluated literally and is expected to report FAIL; the
// supplementary lines underneath show the internal-consistency ratios of the
// first-order algebra, which do scale quadratically.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "qreshape/channel.hpp"
#include "qreshape/circuit.hpp"
#include "qreshape/harness.hpp"
#include "qreshape/matrix.hpp"
#include "qreshape/msgate.hpp"
#include "qreshape/propagate.hpp"
#include "qreshape/repcode.hpp"

using namespace qreshape;

namespace {

int g_failures = 0;

void report(int idx, const char* name, bool pass, const std::string& detail) {
  std::printf("criterion %2d [%s] %s%s%s\n", idx, pass ? "PASS" : "FAIL", name,
              detail.empty() ? "" : ": ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return std::string(buf);
}

double trace_distance(const CMat& a, const CMat& b) {
  Eigen::JacobiSVD<CMat> svd(a - b);
  return 0.5 * svd.singularValues().sum();
}

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const clock::time_point t0 = clock::now();
  return std::chrono::duration<double>(clock::now() - t0).count();
}

// ---------------------------------------------------------------- criterion 1
void criterion_1() {
  const double t0 = now_seconds();
  MSParams p;
  p.gamma_p = 0.02;
  const RParams r = r_params(p);
  const MSCoefficients c = solve_coefficients(r.r1, r.r2);
  const double elapsed = now_seconds() - t0;

  const bool pass = std::abs(r.r1 - 0.3456) < 5e-4 &&
                    std::abs(r.r2 - 0.0094) < 5e-5 &&
                    std::abs(c.a1 - Complex(0.9837, 0)) < 1e-3 &&
                    std::abs(c.a2 - Complex(0.1797, 0)) < 1e-3 &&
                    std::abs(c.a3 - Complex(-0.2282, 0)) < 1e-3 &&
                    std::abs(c.a4 - Complex(-0.4136, 0)) < 1e-3 &&
                    std::abs(c.k2 - Complex(0.612, 0)) < 1e-3 && elapsed < 1.0;
  report(1, "analytic coefficients at the reference dephasing point", pass,
         fmt("r1=%.6f r2=%.6f a=(%.4f, %.4f, %.4f, %.4f) k2=%.4f in %.3fs",
             r.r1, r.r2, c.a1.real(), c.a2.real(), c.a3.real(), c.a4.real(),
             c.k2.real(), elapsed));
}

// ----------------------------------------------------------- criteria 2 and 3
struct ExactPoint {
  double gamma_p = 0.0;
  ExactChannelResult result;
  StructureFit fit;
};

std::vector<ExactPoint> run_exact_ladder() {
  std::vector<ExactPoint> pts;
  for (double gp : {0.0025, 0.005, 0.01, 0.02}) {
    MSParams p;
    p.gamma_p = gp;
    ExactPoint pt;
    pt.gamma_p = gp;
    pt.result = simulate_exact(p, 30);
    pt.fit = fit_structure(pt.result.error, 'y');
    std::printf("  exact gamma_p=%.4f: steps=%d choi_change=%.2e fit_residual=%.2e "
                "|k2|=%.5f\n",
                gp, pt.result.steps, pt.result.choi_change, pt.fit.residual,
                std::abs(pt.fit.coeffs.k2));
    std::fflush(stdout);
    pts.push_back(std::move(pt));
  }
  return pts;
}

void criterion_2(const ExactPoint& pt) {
  const MSCoefficients& c = pt.fit.coeffs;
  const Complex ref_a1(0.999, 0.00024), ref_a2(0.03647, 0.00063);
  const Complex ref_a3(-0.028, -0.00048), ref_a4(-0.074, -0.00126);
  const Complex ref_k2(0.24, 0.0);
  const double d1 = std::abs(c.a1 - ref_a1), d2 = std::abs(c.a2 - ref_a2);
  const double d3 = std::abs(c.a3 - ref_a3), d4 = std::abs(c.a4 - ref_a4);
  const double dk = std::abs(c.k2 - ref_k2);
  const bool pass = d1 < 2e-2 && d2 < 2e-2 && d3 < 2e-2 && d4 < 2e-2 &&
                    dk < 2e-2 && pt.fit.residual < 0.05 && pt.fit.ok;
  report(2, "exact simulation matches the reported channel coefficients", pass,
         fmt("|da|=(%.1e, %.1e, %.1e, %.1e) |dk2|=%.1e residual=%.2e", d1, d2,
             d3, d4, dk, pt.fit.residual));
}

void criterion_3(const std::vector<ExactPoint>& pts) {
  bool pass = true;
  std::string detail;
  double prev_k2 = -1.0;
  for (const auto& pt : pts) {
    const auto spec = choi_spectrum(choi_of(pt.result.error));
    const double fourth = spec.size() > 3 ? spec[3] : 0.0;
    const double k2 = std::abs(pt.fit.coeffs.k2);
    if (!(fourth < 1e-4)) pass = false;
    if (!pt.fit.ok) pass = false;
    if (!(k2 > prev_k2)) pass = false;
    prev_k2 = k2;
    detail +=
        fmt("%s[gp=%.4f: 4th=%.1e k2=%.4f]", detail.empty() ? "" : " ",
            pt.gamma_p, fourth, k2);
  }
  report(3, "three-Kraus structure with monotone k2", pass, detail);
}

// ---------------------------------------------------------------- criterion 4
void criterion_4() {
  const double ps[] = {0.0, 0.05, 0.12, 0.21, 0.33};
  const double thetas[] = {0.0, 0.3, 0.8, 1.4, 2.2};
  const double frames[][2] = {
      {0.0, 0.0}, {0.7, 0.0}, {0.0, 1.1}, {-0.9, 0.4}, {2.0, -2.0}};
  double worst = 0.0;
  for (double p : ps)
    for (double th : thetas)
      for (const auto& fr : frames) {
        InsertedUnitary u;
        u.theta = th;
        u.phi = fr[0];
        u.deltaA = fr[1];
        worst = std::max(worst,
                         trace_distance(circuit_agnostic_output(p, u, kPi / 9),
                                        brute_force_output(p, u, kPi / 9)));
      }
  double worst_sum = 0.0;
  for (int ip = 0; ip <= 49; ++ip)
    for (int it = 0; it <= 49; ++it) {
      const auto w = model_weights(ip / 49.0, 2.0 * kPi * it / 49.0);
      double s = 0.0;
      for (double v : w) s += v;
      worst_sum = std::max(worst_sum, std::abs(s - 1.0));
    }
  const bool pass = worst < 1e-10 && worst_sum < 1e-12;
  report(4, "circuit-agnostic model equals the brute-force oracle", pass,
         fmt("max trace distance=%.2e (125 points), max |sum w - 1|=%.2e",
             worst, worst_sum));
}

// ---------------------------------------------------------------- criterion 5
void criterion_5() {
  bool pass = true;
  double worst = 0.0;
  for (double p : {0.0, 0.014, 0.1, 0.3}) {
    const LogicalChannel flat = ry_logical_channel(p, 0.0);
    const double succ = std::pow(1 - p, 3) + 3 * std::pow(1 - p, 2) * p;
    worst = std::max(worst, std::abs(flat.w_i - succ));
    if (std::abs(flat.w_i - succ) > 1e-15) pass = false;
    const LogicalChannel pi = ry_logical_channel(p, kPi);
    if (pi.w_i > 1e-16 || pi.w_x > 1e-16) pass = false;
  }
  report(5, "Ry special case endpoints", pass,
         fmt("max |w_i - p_success|=%.1e at theta0=0; w_i,w_x < 1e-16 at "
             "theta0=pi",
             worst));
}

// ---------------------------------------------------------------- criterion 6
Circuit random_circuit(std::mt19937_64& rng) {
  static const GateKind kinds[] = {
      GateKind::I,  GateKind::X,    GateKind::Y,  GateKind::Z,  GateKind::H,
      GateKind::S,  GateKind::RX,   GateKind::RY, GateKind::RZ, GateKind::PRX,
      GateKind::CNOT, GateKind::CZ, GateKind::XX, GateKind::MS};
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  Circuit c;
  c.n_qubits = 2 + static_cast<int>(rng() % 4);  // 2..5
  const int n_gates = 6 + static_cast<int>(rng() % 9);
  for (int g = 0; g < n_gates; ++g) {
    Gate gate;
    gate.kind = kinds[rng() % (sizeof kinds / sizeof kinds[0])];
    const int arity = gate_arity(gate.kind);
    int q0 = static_cast<int>(rng() % c.n_qubits);
    gate.qubits.push_back(q0);
    if (arity == 2) {
      int q1 = q0;
      while (q1 == q0) q1 = static_cast<int>(rng() % c.n_qubits);
      gate.qubits.push_back(q1);
    }
    for (int k = 0; k < gate_param_count(gate.kind); ++k)
      gate.params.push_back(ang(rng));
    c.gates.push_back(gate);
  }
  return c;
}

void criterion_6() {
  std::mt19937_64 rng(20240817);
  double worst_compile = 0.0, worst_pairs = 0.0;
  bool pass = true;
  for (int trial = 0; trial < 200; ++trial) {
    const Circuit in = random_circuit(rng);
    for (Backend b : {Backend::Ion, Backend::CZB}) {
      const CompileResult res = compile_circuit(in, b);
      const VerifyReport rep = verify_compile(in, res);
      worst_compile = std::max(worst_compile, rep.distance);
      if (!rep.equivalent || rep.distance > 1e-9) pass = false;
      if (trial % 20 == 0 && !res.circuit.noise_sites.empty()) {
        for (int n : {1, 10}) {
          const Circuit padded = insert_redundant_pairs(res.circuit, n);
          const double d = phase_distance(circuit_unitary(res.circuit),
                                          circuit_unitary(padded));
          worst_pairs = std::max(worst_pairs, d);
          if (d > 1e-9) pass = false;
        }
      }
    }
  }
  report(6, "compiler equivalence and redundant-pair invariance", pass,
         fmt("200 circuits x 2 backends, max distance=%.2e; pairs max "
             "distance=%.2e",
             worst_compile, worst_pairs));
}

// ---------------------------------------------------------------- criterion 7
namespace c7 {

// Exact per-gate composition for the two-qubit unit: the ideal XX conjugation
// followed by the full analytic x-axis error channel, with the redundant-pair
// Z interleavings.
CMat exact_unit_output(double r, int n, const CMat& rho) {
  const QuantumChannel err = analytic_channel(solve_coefficients(r, 0.0), 'x');
  const CMat xx = gate_matrix(Gate{GateKind::XX, {0, 1}, {}});
  const CMat z0 = lift1(pauli_z(), 0, 2);
  auto noisy = [&](const CMat& s) { return apply_channel(err, xx * s * xx.adjoint()); };
  CMat out = noisy(rho);
  for (int k = 0; k < n; ++k) {
    out = noisy(out);
    out = z0 * out * z0;
    out = noisy(out);
    out = z0 * out * z0;
  }
  return out;
}

// First-order linearized composition of the same sequence (every gate is the
// per-gate linearized unit; products of error terms across gates retained by
// sequential application).
CMat linearized_unit_output(double r, int n, const CMat& rho) {
  const FirstOrderMap ms = first_order_ms(r, 0, 1, 2);
  const CMat z0 = lift1(pauli_z(), 0, 2);
  CMat out = ms.apply(rho);
  for (int k = 0; k < n; ++k) {
    out = ms.apply(out);
    out = z0 * out * z0;
    out = ms.apply(out);
    out = z0 * out * z0;
  }
  return out;
}

// Exact and linearized walks of the compiled encoder with n redundant pairs.
Circuit padded_encoder(int n) {
  Circuit c = compile_circuit(repcode_encode_circuit(kPi / 9), Backend::Ion).circuit;
  if (n > 0) c = insert_redundant_pairs(c, n);
  return c;
}

CMat lift_gate(const Gate& g, int nq) {
  const CMat m = gate_matrix(g);
  return g.qubits.size() == 1 ? lift1(m, g.qubits[0], nq)
                              : lift2(m, g.qubits[0], g.qubits[1], nq);
}

CMat exact_encoder_output(double r, int n) {
  const Circuit c = padded_encoder(n);
  const QuantumChannel err = analytic_channel(solve_coefficients(r, 0.0), 'x');
  CMat rho = CMat::Zero(8, 8);
  rho(0, 0) = 1.0;
  for (std::size_t g = 0; g < c.gates.size(); ++g) {
    const CMat u = lift_gate(c.gates[g], 3);
    rho = u * rho * u.adjoint();
    if (std::find(c.noise_sites.begin(), c.noise_sites.end(),
                  static_cast<int>(g)) != c.noise_sites.end())
      rho = apply_channel(lift_channel(err, c.gates[g].qubits, 3), rho);
  }
  return rho;
}

CMat linearized_encoder_output(double r, int n) {
  const Circuit c = padded_encoder(n);
  CMat rho = CMat::Zero(8, 8);
  rho(0, 0) = 1.0;
  for (std::size_t g = 0; g < c.gates.size(); ++g) {
    const bool noisy = std::find(c.noise_sites.begin(), c.noise_sites.end(),
                                 static_cast<int>(g)) != c.noise_sites.end();
    const FirstOrderMap m =
        noisy ? first_order_ms(r, c.gates[g].qubits[0], c.gates[g].qubits[1], 3)
              : unitary_map(lift_gate(c.gates[g], 3));
    rho = m.apply(rho);
  }
  return rho;
}

}  // namespace c7

void criterion_7() {
  std::mt19937_64 rng(3);
  CMat g = CMat::Zero(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      std::normal_distribution<double> nd;
      g(i, j) = Complex(nd(rng), nd(rng));
    }
  const CMat probe = [&] {
    CMat m = g * g.adjoint();
    return CMat(m / m.trace());
  }();

  struct Row {
    std::string label;
    double ratio_exact;   // against the exact channel composition
    double ratio_linear;  // against the linearized-unit composition
  };
  std::vector<Row> rows;

  auto two_point = [](const std::function<double(double)>& f) {
    return scaling_ratio(1e-3, f);
  };

  {  // Eq for a single gate (the n = 0 unit).
    auto f_exact = [&](double r) {
      return max_abs_diff(normalize(first_order_ms(r, 0, 1, 2).apply(probe)),
                          c7::exact_unit_output(r, 0, probe));
    };
    rows.push_back({"per-gate", two_point(f_exact), 0.0});
  }
  for (int n : {0, 3, 5}) {  // aggregate unit
    auto f_exact = [&](double r) {
      return max_abs_diff(normalize(redundant_unit(r, n, 0, 1, 2).apply(probe)),
                          c7::exact_unit_output(r, n, probe));
    };
    auto f_linear = [&](double r) {
      return max_abs_diff(normalize(redundant_unit(r, n, 0, 1, 2).apply(probe)),
                          normalize(c7::linearized_unit_output(r, n, probe)));
    };
    // At n = 0 the aggregate reduces to the per-gate map identically, so the
    // internal truncation defect vanishes and has no two-point ratio.
    rows.push_back({fmt("unit n=%d", n), two_point(f_exact),
                    n > 0 ? two_point(f_linear) : 0.0});
  }
  for (int n : {0, 3, 5}) {  // encoded state
    auto f_exact = [&](double r) {
      return max_abs_diff(normalize(encoded_state_first_order(r, n, kPi / 9)),
                          c7::exact_encoder_output(r, n));
    };
    auto f_linear = [&](double r) {
      return max_abs_diff(normalize(encoded_state_first_order(r, n, kPi / 9)),
                          normalize(c7::linearized_encoder_output(r, n)));
    };
    rows.push_back(
        {fmt("encoder n=%d", n), two_point(f_exact), two_point(f_linear)});
  }

  bool pass = true;
  std::string detail;
  for (const auto& row : rows) {
    if (!(row.ratio_exact >= 3.5 && row.ratio_exact <= 4.5)) pass = false;
    detail += fmt("%s%s=%.2f", detail.empty() ? "" : " ", row.label.c_str(),
                  row.ratio_exact);
  }
  report(7, "first-order two-point ratios against the exact composition", pass,
         detail);
  std::printf("  note: the linearized per-gate unit omits the -r1{J^2, rho} "
              "contraction of the\n"
              "  analytic channel, so its deviation from the exact composition "
              "is first order in\n"
              "  r1 (ratio ~2). The internal truncation defect of the same "
              "expressions does\n"
              "  scale quadratically:\n");
  for (const auto& row : rows)
    if (row.ratio_linear != 0.0)
      std::printf("    %-12s against linearized composition: %.3f\n",
                  row.label.c_str(), row.ratio_linear);
  std::fflush(stdout);
}

// ---------------------------------------------------------------- criterion 8
void criterion_8() {
  ExperimentConfig cfg;
  cfg.frame = "cnot";
  cfg.noise_kind = NoiseKind::BitFlip;
  cfg.shots = 100000;
  bool pass = true;
  std::string detail;
  const CircuitVariant variants[] = {
      CircuitVariant::FiveQubit, CircuitVariant::ThreeQubitCase1,
      CircuitVariant::ThreeQubitCase2, CircuitVariant::ThreeQubitCase3};
  int k = 0;
  for (CircuitVariant v : variants) {
    cfg.variant = v;
    const SweepRow row = run_point(cfg, 0.328 * kPi, 0.1, 101 + k++);
    const double dev = std::abs(row.value - row.exact);
    if (!(dev < 5e-3)) pass = false;
    detail += fmt("%s%s: |est-exact|=%.1e", detail.empty() ? "" : " ",
                  to_string(v).c_str(), dev);
  }

  cfg.variant = CircuitVariant::ThreeQubitCase2;
  double worst_re = 0.0;
  for (double p : {0.0, 0.05, 0.1, 0.2}) {
    const SweepRow row = run_point(cfg, 0.647 * kPi, p, 7);
    worst_re = std::max(worst_re, std::abs(row.exact));
  }
  if (!(worst_re < 1e-12)) pass = false;
  report(8, "estimators converge to their exact functionals", pass,
         detail + fmt("; max |Re rho01 exact|=%.1e", worst_re));
}

// ---------------------------------------------------------------- criterion 9
void criterion_9() {
  bool pass = true;
  std::string detail;

  // Monotone decrease of rho00 with theta0 under the full MS channel at a
  // fixed redundancy level (native frame).
  ExperimentConfig ms;
  ms.variant = CircuitVariant::ThreeQubitCase1;
  ms.noise_kind = NoiseKind::MsFull;
  ms.ms_r1 = 0.043197;
  ms.ms_r2 = 0.0011781;
  ms.shots = 100;  // only the exact column is used
  double prev = 2.0;
  std::string curve;
  for (double th : {0.01 * kPi, 0.328 * kPi, 0.647 * kPi, 0.965 * kPi}) {
    const SweepRow row = run_point(ms, th, 1.0, 5);
    if (!(row.exact < prev)) pass = false;
    prev = row.exact;
    curve += fmt("%s%.4f", curve.empty() ? "" : ",", row.exact);
  }
  detail += "ms_full rho00(theta0)=" + curve;

  // Same trend for bit flips injected after the encoding gates.
  ExperimentConfig bf;
  bf.variant = CircuitVariant::ThreeQubitCase1;
  bf.noise_kind = NoiseKind::BitFlip;
  bf.frame = "cnot";
  bf.shots = 100;
  prev = 2.0;
  for (double th : {0.01 * kPi, 0.328 * kPi, 0.647 * kPi, 0.965 * kPi}) {
    const SweepRow row = run_point(bf, th, 0.1, 5);
    if (!(row.exact < prev)) pass = false;
    prev = row.exact;
  }

  // The code corrects bit flips: at matched rates, bit-flip injection beats
  // depolarizing injection near theta0 = 0 (five-qubit readout, native frame).
  ExperimentConfig cmp;
  cmp.variant = CircuitVariant::FiveQubit;
  cmp.frame = "native";
  cmp.shots = 100;
  cmp.noise_kind = NoiseKind::BitFlip;
  const double v_bf = run_point(cmp, 0.01 * kPi, 0.014, 5).exact;
  cmp.noise_kind = NoiseKind::Depolarizing;
  const double v_dp = run_point(cmp, 0.01 * kPi, 0.014, 5).exact;
  if (!(v_bf > v_dp)) pass = false;
  detail += fmt("; bf(0)=%.4f > dpl(0)=%.4f", v_bf, v_dp);

  report(9, "model trends: monotone in theta0, bit-flip beats depolarizing",
         pass, detail);
}

// --------------------------------------------------------------- criterion 10
void criterion_10() {
  ExperimentConfig cfg;
  cfg.variant = CircuitVariant::FiveQubit;
  cfg.noise_kind = NoiseKind::MsFull;
  cfg.ms_r1 = 0.043197;
  cfg.ms_r2 = 0.0011781;
  cfg.theta0_list = {0.01 * kPi, 0.647 * kPi};
  cfg.repetitions_list = {0, 1};
  cfg.shots = 1000;
  cfg.seed = 424242;
  std::ostringstream a, b;
  write_csv(a, run_sweep(cfg));
  write_csv(b, run_sweep(cfg));
  const bool pass = !a.str().empty() && a.str() == b.str();
  report(10, "sweep determinism (byte-identical CSV)", pass,
         fmt("%zu bytes", a.str().size()));
}

}  // namespace

int main() {
  std::printf("acceptance run\n");
  criterion_1();
  const auto pts = run_exact_ladder();
  criterion_2(pts.front());
  criterion_3(pts);
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  std::printf("acceptance: %d/10 passed\n", 10 - g_failures);
  return g_failures;
}
