#include "qreshape/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>
#include <stdexcept>

#include "json.hpp"
#include "qreshape/repcode.hpp"
#include "qreshape/states.hpp"
#include "qreshape/version.hpp"

namespace qreshape {

namespace {

constexpr std::uint64_t kSeedStride = 0x9E3779B97F4A7C15ULL;

std::string bits_of(int index, int n_bits) {
  std::string s(n_bits, '0');
  for (int b = 0; b < n_bits; ++b)
    if (index & (1 << (n_bits - 1 - b))) s[b] = '1';  // q0 = most significant
  return s;
}

int index_of(const std::string& bits) {
  int idx = 0;
  for (char c : bits) idx = (idx << 1) | (c == '1' ? 1 : 0);
  return idx;
}

const std::vector<int>& accept_set(int pauli_case) {
  static const std::vector<int> c1 = {0, 1, 2, 7};
  static const std::vector<int> c2 = {0, 1, 2, 3};
  static const std::vector<int> c3 = {0, 1, 2, 7};
  switch (pauli_case) {
    case 1:
      return c1;
    case 2:
      return c2;
    case 3:
      return c3;
  }
  throw std::invalid_argument("pauli_case must be 1..3");
}

// Corrected data bits for a 5-bit outcome (q0..q4); returns data as 3 bits.
int corrected_data(int idx5) {
  int data = (idx5 >> 2) & 7;   // q0 q1 q2
  const int si = (idx5 >> 1) & 1;  // q3 = q0 xor q1
  const int sj = idx5 & 1;         // q4 = q1 xor q2
  if (si == 0 && sj == 1) data ^= 1;       // flip q2
  else if (si == 1 && sj == 0) data ^= 4;  // flip q0
  else if (si == 1 && sj == 1) data ^= 2;  // flip q1
  return data;
}

QuantumChannel injection_channel(const Circuit& c, const NoiseInjection& inj) {
  if (inj.after_gate < 0 || inj.after_gate >= static_cast<int>(c.gates.size()))
    throw std::invalid_argument("noise injection: gate index out of range");
  const Gate& g = c.gates[static_cast<std::size_t>(inj.after_gate)];
  switch (inj.kind) {
    case NoiseKind::BitFlip:
    case NoiseKind::PhaseFlip:
    case NoiseKind::Depolarizing: {
      if (inj.qubits.size() != 1)
        throw std::invalid_argument("stochastic injection needs exactly one qubit");
      const int q = inj.qubits[0];
      if (q < 0 || q >= c.n_qubits)
        throw std::invalid_argument("noise injection: qubit out of range");
      QuantumChannel ch = inj.kind == NoiseKind::BitFlip
                              ? bit_flip_channel(inj.rate)
                              : inj.kind == NoiseKind::PhaseFlip
                                    ? phase_flip_channel(inj.rate)
                                    : depolarizing_channel(inj.rate);
      return lift_channel(ch, {q}, c.n_qubits);
    }
    case NoiseKind::MsFull: {
      if (g.kind != GateKind::MS && g.kind != GateKind::XX)
        throw std::invalid_argument("ms_full injection must follow an MS gate");
      if (inj.qubits != g.qubits)
        throw std::invalid_argument("ms_full injection must target the gate qubits");
      QuantumChannel err = analytic_channel(inj.coeffs, 'x');
      if (g.kind == GateKind::MS && (g.params[0] != 0.0 || g.params[1] != 0.0)) {
        Gate rz1{GateKind::RZ, {0}, {g.params[0]}};
        Gate rz2{GateKind::RZ, {0}, {g.params[1]}};
        err = conjugate_channel(err, kron(gate_matrix(rz1), gate_matrix(rz2)));
      }
      return lift_channel(err, g.qubits, c.n_qubits);
    }
    case NoiseKind::None:
      break;
  }
  throw std::invalid_argument("noise injection with kind 'none'");
}

std::string format_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// post_selection = false: corrections still applied, but invalid outcomes
// stay in the denominator instead of being dropped.
Estimate estimate_five_qubit_unfiltered(const Counts& counts) {
  if (counts.shots <= 0)
    throw std::invalid_argument("estimate_five_qubit: empty counts");
  long zeros = 0;
  for (const auto& [bits, n] : counts.histogram)
    if (corrected_data(index_of(bits)) == 0) zeros += n;
  const auto [lo, hi] = wilson_interval(zeros, counts.shots);
  Estimate e;
  e.value = static_cast<double>(zeros) / static_cast<double>(counts.shots);
  e.lo = lo;
  e.hi = hi;
  e.n_valid = counts.shots;
  return e;
}

double exact_five_qubit_unfiltered(const DensityMatrix& rho) {
  double zeros = 0.0;
  for (int idx = 0; idx < 32; ++idx)
    if (corrected_data(idx) == 0) zeros += rho.m(idx, idx).real();
  return zeros;
}

// Split a built circuit into the encode prefix (RX + two CNOTs) and the
// ideal remainder, compile the prefix for the requested frame, optionally
// insert redundant pairs, and re-attach the remainder.
Circuit framed_circuit(const Circuit& built, const std::string& frame, int n_pairs) {
  if (built.gates.size() < 3) throw std::logic_error("framed_circuit: short circuit");
  Circuit encode_part;
  encode_part.n_qubits = built.n_qubits;
  encode_part.gates.assign(built.gates.begin(), built.gates.begin() + 3);
  encode_part.noise_sites = {1, 2};

  Circuit front;
  if (frame == "native") {
    const CompileResult cr = compile_circuit(encode_part, Backend::Ion);
    for (double a : cr.pending_rz)
      if (std::abs(a) > 1e-12)
        throw std::logic_error("framed_circuit: unexpected pending frame");
    front = cr.circuit;
  } else if (frame == "cnot") {
    front = encode_part;
  } else {
    throw std::invalid_argument("frame must be 'native' or 'cnot'");
  }
  if (n_pairs > 0) front = insert_redundant_pairs(front, n_pairs);

  Circuit full;
  full.n_qubits = built.n_qubits;
  full.gates = front.gates;
  full.noise_sites = front.noise_sites;
  full.gates.insert(full.gates.end(), built.gates.begin() + 3, built.gates.end());
  return full;
}

}  // namespace

NoiseKind noise_kind_from_string(const std::string& s) {
  if (s == "none") return NoiseKind::None;
  if (s == "bit_flip") return NoiseKind::BitFlip;
  if (s == "phase_flip") return NoiseKind::PhaseFlip;
  if (s == "depolarizing") return NoiseKind::Depolarizing;
  if (s == "ms_full") return NoiseKind::MsFull;
  throw std::invalid_argument("unknown noise kind: " + s);
}

std::string to_string(NoiseKind k) {
  switch (k) {
    case NoiseKind::None:
      return "none";
    case NoiseKind::BitFlip:
      return "bit_flip";
    case NoiseKind::PhaseFlip:
      return "phase_flip";
    case NoiseKind::Depolarizing:
      return "depolarizing";
    case NoiseKind::MsFull:
      return "ms_full";
  }
  throw std::logic_error("bad noise kind");
}

CircuitVariant variant_from_string(const std::string& s) {
  if (s == "five_qubit") return CircuitVariant::FiveQubit;
  if (s == "three_qubit_case1") return CircuitVariant::ThreeQubitCase1;
  if (s == "three_qubit_case2") return CircuitVariant::ThreeQubitCase2;
  if (s == "three_qubit_case3") return CircuitVariant::ThreeQubitCase3;
  throw std::invalid_argument("unknown circuit variant: " + s);
}

std::string to_string(CircuitVariant v) {
  switch (v) {
    case CircuitVariant::FiveQubit:
      return "five_qubit";
    case CircuitVariant::ThreeQubitCase1:
      return "three_qubit_case1";
    case CircuitVariant::ThreeQubitCase2:
      return "three_qubit_case2";
    case CircuitVariant::ThreeQubitCase3:
      return "three_qubit_case3";
  }
  throw std::logic_error("bad variant");
}

int variant_case(CircuitVariant v) {
  switch (v) {
    case CircuitVariant::ThreeQubitCase2:
      return 2;
    case CircuitVariant::ThreeQubitCase3:
      return 3;
    default:
      return 1;
  }
}

Circuit build_five_qubit(double phi, double theta0) {
  return repcode_5q_circuit(phi, theta0);
}

Circuit build_three_qubit(double phi, double theta0, int pauli_case) {
  return repcode_harness_circuit(phi, theta0, pauli_case);
}

DensityMatrix simulate_density(const Circuit& c,
                               const std::vector<NoiseInjection>& noise) {
  std::set<std::pair<int, std::vector<int>>> seen;
  for (const auto& inj : noise) {
    if (inj.after_gate < 0 ||
        inj.after_gate >= static_cast<int>(c.gates.size()))
      throw std::invalid_argument("noise injection: gate index out of range");
    std::vector<int> qs = inj.qubits;
    std::sort(qs.begin(), qs.end());
    if (!seen.insert({inj.after_gate, qs}).second)
      throw std::invalid_argument("two noise injections at an identical site");
  }

  const int dim = 1 << c.n_qubits;
  CMat rho = CMat::Zero(dim, dim);
  rho(0, 0) = 1.0;
  for (int gi = 0; gi < static_cast<int>(c.gates.size()); ++gi) {
    const Gate& g = c.gates[static_cast<std::size_t>(gi)];
    const CMat m = gate_matrix(g);
    const CMat u = gate_arity(g.kind) == 1
                       ? lift1(m, g.qubits[0], c.n_qubits)
                       : lift2(m, g.qubits[0], g.qubits[1], c.n_qubits);
    rho = u * rho * u.adjoint();
    for (const auto& inj : noise)
      if (inj.after_gate == gi) rho = apply_channel(injection_channel(c, inj), rho);
  }
  DensityMatrix out;
  out.dims.assign(static_cast<std::size_t>(c.n_qubits), 2);
  out.m = rho;
  return out;
}

std::vector<NoiseInjection> plan_injections(const Circuit& c, NoiseKind kind,
                                            double rate,
                                            const MSCoefficients& coeffs) {
  std::vector<NoiseInjection> out;
  if (kind == NoiseKind::None) return out;
  if (kind == NoiseKind::MsFull) {
    for (int site : c.noise_sites) {
      const Gate& g = c.gates.at(static_cast<std::size_t>(site));
      if (g.kind != GateKind::MS && g.kind != GateKind::XX)
        throw std::invalid_argument("ms_full noise needs MS-type noise sites");
      NoiseInjection inj;
      inj.kind = kind;
      inj.coeffs = coeffs;
      inj.after_gate = site;
      inj.qubits = g.qubits;
      out.push_back(inj);
    }
    return out;
  }
  if (c.noise_sites.size() < 2)
    throw std::invalid_argument("stochastic noise needs two encoding noise sites");
  for (int s = 0; s < 2; ++s) {
    const int site = c.noise_sites[static_cast<std::size_t>(s)];
    const Gate& g = c.gates.at(static_cast<std::size_t>(site));
    if (gate_arity(g.kind) != 2)
      throw std::invalid_argument("stochastic noise site is not an entangling gate");
    for (int q : g.qubits) {
      NoiseInjection inj;
      inj.kind = kind;
      inj.rate = rate;
      inj.after_gate = site;
      inj.qubits = {q};
      out.push_back(inj);
    }
  }
  return out;
}

Counts sample_counts(const DensityMatrix& rho, long shots, std::mt19937_64& rng) {
  if (shots < 0) throw std::invalid_argument("sample_counts: negative shots");
  const int dim = rho.dim();
  int n_bits = 0;
  while ((1 << n_bits) < dim) ++n_bits;

  std::vector<double> cdf(static_cast<std::size_t>(dim));
  double total = 0.0;
  for (int k = 0; k < dim; ++k) {
    total += std::max(0.0, rho.m(k, k).real());
    cdf[static_cast<std::size_t>(k)] = total;
  }
  if (total <= 0.0) throw std::invalid_argument("sample_counts: zero total probability");

  Counts counts;
  counts.n_bits = n_bits;
  counts.shots = shots;
  for (long s = 0; s < shots; ++s) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * total;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    int k = static_cast<int>(it - cdf.begin());
    if (k >= dim) k = dim - 1;
    ++counts.histogram[bits_of(k, n_bits)];
  }
  return counts;
}

Counts sample_counts(const DensityMatrix& rho, long shots, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_counts(rho, shots, rng);
}

std::pair<double, double> wilson_interval(long k, long n, double z) {
  if (n <= 0) throw std::invalid_argument("wilson_interval: n must be positive");
  if (k < 0 || k > n) throw std::invalid_argument("wilson_interval: k out of range");
  const double nn = static_cast<double>(n);
  const double phat = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (phat + z2 / (2.0 * nn)) / denom;
  const double half =
      z * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

Estimate estimate_case(const Counts& counts, int pauli_case) {
  if (counts.shots <= 0) throw std::invalid_argument("estimate_case: empty counts");
  if (counts.n_bits != 3)
    throw std::invalid_argument("estimate_case: expected three-qubit counts");
  const auto& accept = accept_set(pauli_case);
  long k = 0;
  for (const auto& [bits, n] : counts.histogram) {
    const int idx = index_of(bits);
    if (std::find(accept.begin(), accept.end(), idx) != accept.end()) k += n;
  }
  const auto [lo, hi] = wilson_interval(k, counts.shots);
  const double shift = pauli_case == 1 ? 0.0 : -0.5;
  Estimate e;
  e.value = static_cast<double>(k) / static_cast<double>(counts.shots) + shift;
  e.lo = lo + shift;
  e.hi = hi + shift;
  e.n_valid = counts.shots;
  return e;
}

Estimate estimate_five_qubit(const Counts& counts, bool raw_filter) {
  if (counts.shots <= 0)
    throw std::invalid_argument("estimate_five_qubit: empty counts");
  if (counts.n_bits != 5)
    throw std::invalid_argument("estimate_five_qubit: expected five-qubit counts");
  long kept = 0, zeros = 0;
  for (const auto& [bits, n] : counts.histogram) {
    const int idx = index_of(bits);
    const int data = raw_filter ? (idx >> 2) & 7 : corrected_data(idx);
    if (data == 0 || data == 7) {
      kept += n;
      if (data == 0) zeros += n;
    }
  }
  if (kept == 0)
    throw std::runtime_error("estimate_five_qubit: no shot survived post-selection");
  const auto [lo, hi] = wilson_interval(zeros, kept);
  Estimate e;
  e.value = static_cast<double>(zeros) / static_cast<double>(kept);
  e.lo = lo;
  e.hi = hi;
  e.n_valid = kept;
  return e;
}

double exact_case_value(const DensityMatrix& rho, int pauli_case) {
  if (rho.dim() != 8) throw std::invalid_argument("exact_case_value: need 3 qubits");
  double v = 0.0;
  for (int idx : accept_set(pauli_case)) v += rho.m(idx, idx).real();
  return pauli_case == 1 ? v : v - 0.5;
}

double exact_five_qubit_value(const DensityMatrix& rho, bool raw_filter) {
  if (rho.dim() != 32)
    throw std::invalid_argument("exact_five_qubit_value: need 5 qubits");
  double kept = 0.0, zeros = 0.0;
  for (int idx = 0; idx < 32; ++idx) {
    const double pr = rho.m(idx, idx).real();
    const int data = raw_filter ? (idx >> 2) & 7 : corrected_data(idx);
    if (data == 0 || data == 7) {
      kept += pr;
      if (data == 0) zeros += pr;
    }
  }
  if (kept <= 0.0)
    throw std::runtime_error("exact_five_qubit_value: zero post-selected mass");
  return zeros / kept;
}

SweepRow run_point(const ExperimentConfig& cfg, double theta0, double reps_or_rate,
                   std::uint64_t point_seed) {
  const int pauli_case = variant_case(cfg.variant);
  const Circuit built = cfg.variant == CircuitVariant::FiveQubit
                            ? build_five_qubit(cfg.phi, theta0)
                            : build_three_qubit(cfg.phi, theta0, pauli_case);

  const bool ms = cfg.noise_kind == NoiseKind::MsFull;
  const int n_pairs = ms ? static_cast<int>(std::lround(reps_or_rate)) : 0;
  const Circuit framed = framed_circuit(built, cfg.frame, n_pairs);

  MSCoefficients coeffs;
  if (ms) coeffs = solve_coefficients(cfg.ms_r1, cfg.ms_r2);
  const double rate = ms ? 0.0 : reps_or_rate;
  const auto injections = plan_injections(framed, cfg.noise_kind, rate, coeffs);

  const DensityMatrix rho = simulate_density(framed, injections);
  const Counts counts = sample_counts(rho, cfg.shots, point_seed);

  SweepRow row;
  row.variant = to_string(cfg.variant);
  row.theta0 = theta0;
  row.reps_or_rate = reps_or_rate;
  if (cfg.variant == CircuitVariant::FiveQubit) {
    const bool filter = cfg.post_selection || cfg.raw_filter;
    const Estimate e = filter ? estimate_five_qubit(counts, cfg.raw_filter)
                              : estimate_five_qubit_unfiltered(counts);
    row.value = e.value;
    row.lo = e.lo;
    row.hi = e.hi;
    row.n_valid = e.n_valid;
    row.exact = filter ? exact_five_qubit_value(rho, cfg.raw_filter)
                       : exact_five_qubit_unfiltered(rho);
  } else {
    const Estimate e = estimate_case(counts, pauli_case);
    row.value = e.value;
    row.lo = e.lo;
    row.hi = e.hi;
    row.n_valid = e.n_valid;
    row.exact = exact_case_value(rho, pauli_case);
  }
  return row;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg) {
  std::vector<double> xs;
  if (cfg.noise_kind == NoiseKind::MsFull) {
    for (int n : cfg.repetitions_list) xs.push_back(static_cast<double>(n));
    if (xs.empty()) xs.push_back(0.0);
  } else {
    xs = cfg.rate_list;
    if (xs.empty()) xs.push_back(0.0);
  }
  std::vector<SweepRow> rows;
  std::uint64_t i = 0;
  for (double theta0 : cfg.theta0_list) {
    for (double x : xs) {
      ++i;
      rows.push_back(run_point(cfg, theta0, x, cfg.seed ^ (kSeedStride * i)));
    }
  }
  return rows;
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "variant,theta0,reps_or_rate,value,lo,hi,n_valid,exact\n";
  for (const auto& r : rows) {
    out << r.variant << ',' << format_g(r.theta0) << ',' << format_g(r.reps_or_rate)
        << ',' << format_g(r.value) << ',' << format_g(r.lo) << ','
        << format_g(r.hi) << ',' << r.n_valid << ',' << format_g(r.exact) << '\n';
  }
}

void write_json(std::ostream& out, const ExperimentConfig& cfg,
                const std::vector<SweepRow>& rows) {
  nlohmann::json j;
  j["version"] = kVersion;
  j["config"] = nlohmann::json::parse(config_to_json_text(cfg));
  nlohmann::json jr = nlohmann::json::array();
  for (const auto& r : rows) {
    jr.push_back({{"variant", r.variant},
                  {"theta0", r.theta0},
                  {"reps_or_rate", r.reps_or_rate},
                  {"value", r.value},
                  {"lo", r.lo},
                  {"hi", r.hi},
                  {"n_valid", r.n_valid},
                  {"exact", r.exact}});
  }
  j["rows"] = jr;
  out << j.dump(2) << '\n';
}

ExperimentConfig config_from_json_text(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  ExperimentConfig cfg;
  if (j.contains("variant")) cfg.variant = variant_from_string(j.at("variant"));
  if (j.contains("phi")) cfg.phi = j.at("phi").get<double>();
  if (j.contains("theta0_list"))
    cfg.theta0_list = j.at("theta0_list").get<std::vector<double>>();
  if (j.contains("repetitions_list"))
    cfg.repetitions_list = j.at("repetitions_list").get<std::vector<int>>();
  if (j.contains("rate_list"))
    cfg.rate_list = j.at("rate_list").get<std::vector<double>>();
  if (j.contains("noise")) cfg.noise_kind = noise_kind_from_string(j.at("noise"));
  if (j.contains("ms_r1")) cfg.ms_r1 = j.at("ms_r1").get<double>();
  if (j.contains("ms_r2")) cfg.ms_r2 = j.at("ms_r2").get<double>();
  if (j.contains("shots")) cfg.shots = j.at("shots").get<long>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("post_selection"))
    cfg.post_selection = j.at("post_selection").get<bool>();
  if (j.contains("raw_filter")) cfg.raw_filter = j.at("raw_filter").get<bool>();
  if (j.contains("frame")) cfg.frame = j.at("frame").get<std::string>();
  if (cfg.shots <= 0) throw std::invalid_argument("config: shots must be positive");
  return cfg;
}

std::string config_to_json_text(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["variant"] = to_string(cfg.variant);
  j["phi"] = cfg.phi;
  j["theta0_list"] = cfg.theta0_list;
  j["repetitions_list"] = cfg.repetitions_list;
  j["rate_list"] = cfg.rate_list;
  j["noise"] = to_string(cfg.noise_kind);
  j["ms_r1"] = cfg.ms_r1;
  j["ms_r2"] = cfg.ms_r2;
  j["shots"] = cfg.shots;
  j["seed"] = cfg.seed;
  j["post_selection"] = cfg.post_selection;
  j["raw_filter"] = cfg.raw_filter;
  j["frame"] = cfg.frame;
  return j.dump(2);
}

}  // namespace qreshape
