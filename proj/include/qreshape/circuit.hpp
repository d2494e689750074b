#pragma once
// Circuit representation, text format, unitary evaluation, and the
// native-gate compiler (ion backend: PRX/MS; cz backend: PRX/CZ).
//
// Gate set conventions (|0> = (1,0)^T, qubit 1 leftmost / most significant):
//   RX(t) = exp(-i t X/2), RY(t) = exp(-i t Y/2), RZ(t) = exp(-i t Z/2)
//   PRX(t, phi) = RZ(phi) RX(t) RZ(-phi)                 (phased X rotation)
//   XX = exp(-i pi/4 X(x)X), CZ = diag(1,1,1,-1)
//   MS(p1, p2): cos(pi/4) on the diagonal; anti-diagonal entries
//     (0,3) = -i e^{-i(p1+p2)} s, (1,2) = -i e^{-i(p1-p2)} s,
//     (2,1) = -i e^{+i(p1-p2)} s, (3,0) = -i e^{+i(p1+p2)} s, s = sin(pi/4).
//   MS(0,0) = XX.

#include <iosfwd>
#include <string>
#include <vector>

#include "qreshape/matrix.hpp"

namespace qreshape {

enum class GateKind {
  I, X, Y, Z, H, S, RX, RY, RZ, PRX,  // single-qubit
  CNOT, CZ, XX, MS                    // two-qubit
};

struct Gate {
  GateKind kind = GateKind::I;
  std::vector<int> qubits;      // 1 or 2 targets; order matters for CNOT/MS
  std::vector<double> params;   // RX/RY/RZ: 1; PRX: 2; MS: 2; others: 0
};

struct Circuit {
  int n_qubits = 0;
  std::vector<Gate> gates;          // temporal order: gates[0] acts first
  std::vector<int> noise_sites;     // indices of entangling gates eligible
                                    // for per-gate noise injection
};

int gate_arity(GateKind k);
int gate_param_count(GateKind k);
std::string gate_name(GateKind k);

// 2x2 or 4x4 matrix of a gate (first tensor factor = first listed qubit).
CMat gate_matrix(const Gate& g);

// Full 2^n x 2^n unitary of the circuit (product in temporal order).
CMat circuit_unitary(const Circuit& c);

// Text format: first line "qubits N"; one gate per line, e.g.
//   rx 0 1.5707963
//   prx 2 3.14159 0.5
//   ms 0 1 0.0 0.0
//   cnot 0 1
// '#' starts a comment. Gate names are case-insensitive.
Circuit parse_circuit(std::istream& in);
Circuit parse_circuit_file(const std::string& path);
std::string format_circuit(const Circuit& c);

enum class Backend { Ion, CZB };

// CNOT(control, target) over a maximally entangling XX interaction:
//   RY(pi/2)_c, XX, RX(-pi/2)_c, RX(-pi/2)_t, RY(-pi/2)_c  (temporal order),
// equal to CNOT up to global phase.
std::vector<Gate> decompose_cnot_xx(int control, int target);
// CNOT over CZ: H_t, CZ, H_t.
std::vector<Gate> decompose_cnot_cz(int control, int target);

struct CompileResult {
  Circuit circuit;                 // native circuit, no trailing RZ
  std::vector<double> pending_rz;  // per-qubit angle of the virtual frame
  double phase_distance = 0.0;     // || U_in - e^{ia} D(pending) U_out ||_max
};

// Two-pass compile. Pass 1 lowers every gate to {RX, RY, RZ, entangler};
// pass 2 folds RZ into a pending per-qubit frame, turning RX/RY into PRX and
// adjusting MS phases (ion) or commuting through CZ (cz backend). Invariant
// maintained throughout: U_in = D(pending) * U_emitted up to global phase.
CompileResult compile_circuit(const Circuit& in, Backend backend);

// After each noise-eligible entangling gate (ion: MS; cz: CZ), insert n
// redundant pairs. Ion: [MS(same), Z(first qubit), MS(same), Z(first qubit)]
// per pair, which multiplies to identity; cz: [CZ, CZ]. Inserted entangling
// gates are appended to noise_sites.
Circuit insert_redundant_pairs(const Circuit& c, int n_pairs);

struct VerifyReport {
  bool equivalent = false;
  double distance = 0.0;   // phase-optimal max-abs deviation
  double phase = 0.0;      // optimal global phase
};

VerifyReport verify_compile(const Circuit& in, const CompileResult& out);

// Named example circuits used throughout the tests and the CLI.
Circuit repcode_encode_circuit(double phi);           // RX(phi), CNOT01, CNOT02
Circuit repcode_harness_circuit(double phi, double theta0, int pauli_case);
Circuit repcode_5q_circuit(double phi, double theta0);

}  // namespace qreshape
