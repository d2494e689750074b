#pragma once
// End-to-end experiment runner: builds the repetition-code circuits,
// simulates them with injected noise channels, samples measurement shots,
// applies the post-processing estimators, computes Wilson intervals, and
// emits sweep tables reproducing the model curves.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "qreshape/channel.hpp"
#include "qreshape/circuit.hpp"
#include "qreshape/msgate.hpp"

namespace qreshape {

enum class NoiseKind { None, BitFlip, PhaseFlip, Depolarizing, MsFull };

NoiseKind noise_kind_from_string(const std::string& s);
std::string to_string(NoiseKind k);

// One injected channel site: applied after gate `after_gate` on `qubits`.
// Stochastic kinds carry a rate; ms_full carries channel coefficients and
// must target an entangling gate (the injected channel follows the gate in
// the gate's own phase frame).
struct NoiseInjection {
  NoiseKind kind = NoiseKind::None;
  double rate = 0.0;
  MSCoefficients coeffs{};
  int after_gate = -1;
  std::vector<int> qubits;
};

enum class CircuitVariant { FiveQubit, ThreeQubitCase1, ThreeQubitCase2, ThreeQubitCase3 };

CircuitVariant variant_from_string(const std::string& s);
std::string to_string(CircuitVariant v);
int variant_case(CircuitVariant v);  // 1..3 (five-qubit reports case 1)

struct ExperimentConfig {
  CircuitVariant variant = CircuitVariant::FiveQubit;
  double phi = kPi / 9.0;
  std::vector<double> theta0_list = {0.01 * kPi, 0.328 * kPi, 0.647 * kPi,
                                     0.965 * kPi};
  std::vector<int> repetitions_list;  // redundant-pair counts (ms_full sweeps)
  std::vector<double> rate_list;      // rates (stochastic sweeps)
  NoiseKind noise_kind = NoiseKind::None;
  double ms_r1 = 0.0, ms_r2 = 0.0;    // ms_full channel parameters
  long shots = 1000;
  std::uint64_t seed = 2024;
  bool post_selection = true;   // five-qubit: correct-then-filter (default)
  bool raw_filter = false;      // alternative: filter raw data in {000,111}
  std::string frame = "native"; // "native": compile to MS gates and inject
                                // after the encoding MS; "cnot": inject after
                                // the uncompiled encoding CNOTs
};

struct Counts {
  int n_bits = 0;
  std::map<std::string, long> histogram;  // bitstring (q0 first) -> count
  long shots = 0;
};

struct Estimate {
  double value = 0.0;
  double lo = 0.0, hi = 0.0;  // 95% Wilson interval (shifted for cases 2-3)
  long n_valid = 0;           // post-selected shot count
};

// Fig. 2(a): Rx(phi) q0; CNOT(0,1), CNOT(0,2); Ry(theta0) q0; CNOT(0,3),
// CNOT(1,3), CNOT(1,4), CNOT(2,4); measure all five.
Circuit build_five_qubit(double phi, double theta0);

// Fig. 2(b): Rx(phi) q0; CNOT(0,1), CNOT(0,2); Ry(theta0) q0; CNOT(0,1),
// CNOT(0,2); U_rho q0; measure. U_rho: case 1 identity, case 2
// Ry(pi/2)Rz(-pi), case 3 Ry(pi/2)Rz(-pi/2) (Rz first in time).
Circuit build_three_qubit(double phi, double theta0, int pauli_case);

// Exact density-matrix simulation: unitary channels gate by gate, injected
// channels at their sites. Throws on an invalid site or on two injections at
// an identical site (same gate, same qubit set).
DensityMatrix simulate_density(const Circuit& c,
                               const std::vector<NoiseInjection>& noise);

// Expand a config-level noise choice into per-site injections for a built
// circuit: stochastic kinds get one single-qubit channel per involved qubit
// after each encoding entangling gate (noise_sites[0..1]); ms_full gets one
// two-qubit channel after every noise-eligible entangling gate.
std::vector<NoiseInjection> plan_injections(const Circuit& c, NoiseKind kind,
                                            double rate,
                                            const MSCoefficients& coeffs);

// Multinomial sampling from the computational-basis diagonal; deterministic
// for a fixed generator state (CDF inversion over a mt19937_64 stream).
Counts sample_counts(const DensityMatrix& rho, long shots, std::mt19937_64& rng);
Counts sample_counts(const DensityMatrix& rho, long shots, std::uint64_t seed);

// Wilson score interval for k successes in n trials. Throws if n == 0.
std::pair<double, double> wilson_interval(long k, long n, double z = 1.96);

// Cases 1-3 on three-qubit counts: value per the outcome tables; the
// interval is the Wilson interval of the underlying fraction, shifted by
// -1/2 for cases 2 and 3. Throws on empty counts.
Estimate estimate_case(const Counts& counts, int pauli_case);

// Five-qubit estimator: per shot read the ancilla syndrome, apply the
// lookup correction to the data bits, keep shots whose corrected data is in
// {000, 111}; value = corrected-000 count / kept count. raw_filter instead
// keeps shots whose raw data is in {000, 111} and ignores the ancillae.
// Throws if no shot survives.
Estimate estimate_five_qubit(const Counts& counts, bool raw_filter = false);

// Exact (infinite-shot) functionals of the final density matrix.
double exact_case_value(const DensityMatrix& rho, int pauli_case);
double exact_five_qubit_value(const DensityMatrix& rho, bool raw_filter = false);

struct SweepRow {
  std::string variant;
  double theta0 = 0.0;
  double reps_or_rate = 0.0;
  double value = 0.0, lo = 0.0, hi = 0.0;
  long n_valid = 0;
  double exact = 0.0;
};

// One sweep point: build (and, in the native frame, compile) the circuit,
// inject, simulate, sample, estimate.
SweepRow run_point(const ExperimentConfig& cfg, double theta0,
                   double reps_or_rate, std::uint64_t point_seed);

// Full sweep in deterministic config order. The x-grid is repetitions_list
// for ms_full noise and rate_list for stochastic noise; per-point seeds are
// derived from cfg.seed and the point index.
std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg);

// CSV: header variant,theta0,reps_or_rate,value,lo,hi,n_valid,exact.
void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);
// JSON: config echo (including seed), library version, and the rows.
void write_json(std::ostream& out, const ExperimentConfig& cfg,
                const std::vector<SweepRow>& rows);

ExperimentConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const ExperimentConfig& cfg);

}  // namespace qreshape
