#pragma once
// Quantum channels as Kraus lists, Choi matrices, canonical Kraus extraction.
//
// Choi convention (fixed): C = sum_ij E(|i><j|) (x) |i><j|, unnormalized, with
// the output factor on the left; for a CPTP map the partial trace of C over
// the output factor is the input-space identity.

#include <functional>
#include <vector>

#include "qreshape/matrix.hpp"
#include "qreshape/states.hpp"

namespace qreshape {

struct QuantumChannel {
  int dim_in = 0;
  int dim_out = 0;
  std::vector<CMat> kraus;
  bool canonical = false;  // pairwise trace-orthogonal Kraus operators

  // ||sum K_i^dag K_i - I||_max
  double cptp_defect() const;
  bool is_cptp(double tol = 1e-8) const;
};

struct ChoiMatrix {
  int dim_in = 0;
  int dim_out = 0;
  CMat matrix;
};

QuantumChannel identity_channel(int d);
QuantumChannel unitary_channel(const CMat& u);
// Single-qubit standard channels.
QuantumChannel bit_flip_channel(double p);
QuantumChannel phase_flip_channel(double p);
// E(rho) = (1-p) rho + p/3 (X rho X + Y rho Y + Z rho Z)
QuantumChannel depolarizing_channel(double p);

CMat apply_channel(const QuantumChannel& ch, const CMat& rho);
DensityMatrix apply_channel(const QuantumChannel& ch, const DensityMatrix& rho);

// compose(a, b)(rho) = a(b(rho))  (b acts first).
QuantumChannel compose(const QuantumChannel& a, const QuantumChannel& b);
QuantumChannel tensor(const QuantumChannel& a, const QuantumChannel& b);

// Channel conjugated into a rotated frame: rho -> U E(U^dag rho U) U^dag.
QuantumChannel conjugate_channel(const QuantumChannel& e, const CMat& u);

// Lift a channel on |qubits| qubits to an n-qubit register.
QuantumChannel lift_channel(const QuantumChannel& ch, const std::vector<int>& qubits,
                            int n_qubits);

ChoiMatrix choi_of(const std::function<CMat(const CMat&)>& map, int dim_in);
ChoiMatrix choi_of(const QuantumChannel& ch);

// Eigendecompose the Choi matrix; keep eigenvalues > cutoff; Kraus_i =
// sqrt(l_i) unvec(v_i) (row-major), ordered by descending eigenvalue, each
// phase-fixed so its largest-magnitude entry (lowest row-major index on ties)
// is real positive. Throws if the Choi is not PSD within psd_tol.
QuantumChannel canonical_kraus(const ChoiMatrix& choi, double cutoff = 1e-10,
                               double psd_tol = 1e-8);

// Sorted Choi eigenvalues, descending.
std::vector<double> choi_spectrum(const ChoiMatrix& choi);

double choi_distance(const QuantumChannel& a, const QuantumChannel& b);

}  // namespace qreshape
