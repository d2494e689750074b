#pragma once
// First-order error-propagation algebra: the linearized noisy-gate model,
// the redundant-pair aggregate, and the propagated encoded-state mixture.
//
// A FirstOrderMap is an ideal unitary followed by a list of first-order
// error terms:
//   E(rho) = U rho U^dag + sum_k c_k O_k (U rho U^dag) O_k^dag .
// These maps are NOT trace preserving; normalization is an explicit separate
// step so that O(r1^2) scaling tests stay meaningful.

#include <functional>
#include <string>
#include <vector>

#include "qreshape/channel.hpp"
#include "qreshape/circuit.hpp"
#include "qreshape/matrix.hpp"

namespace qreshape {

struct FirstOrderTerm {
  double coeff = 0.0;  // >= 0
  CMat op;
};

struct FirstOrderMap {
  CMat base;  // ideal unitary
  std::vector<FirstOrderTerm> terms;

  int dim() const { return static_cast<int>(base.rows()); }
  // U rho U^dag + sum c O (U rho U^dag) O^dag
  CMat apply(const CMat& rho) const;
  // apply, then divide by the trace
  CMat apply_normalized(const CMat& rho) const;
  // Row-stacked superoperator matrix (d^2 x d^2) acting on vec_rowmajor, for
  // exact map-level comparisons:
  //   S = (I + sum c kron(O, conj(O))) kron(U, conj(U)).
  CMat superoperator() const;
};

// rho / Tr(rho)
CMat normalize(const CMat& rho);

// Linearized noisy MS-type gate on qubits (i, j) of an n-qubit register:
// base = the ideal XX gate, one error term (r1/2, X_i + X_j). The error
// operator is symmetric under exchanging i and j.
FirstOrderMap first_order_ms(double r1, int i, int j, int n_qubits);

// Aggregate of one encoding gate followed by n redundant pairs
// [gate, Z_i, gate, Z_i]: base = the single ideal XX gate, error terms
// (r1 n/2, -X_i + X_j) and (r1 (n+1)/2, X_i + X_j).
FirstOrderMap redundant_unit(double r1, int n, int i, int j, int n_qubits);

// First-order (truncated) composition: base = later.base * earlier.base;
// earlier terms conjugated by later.base; cross products dropped.
FirstOrderMap compose_truncated(const FirstOrderMap& later,
                                const FirstOrderMap& earlier);

// Unitary step as a FirstOrderMap (no error terms).
FirstOrderMap unitary_map(const CMat& u);

// The propagated encoded-state mixture, unnormalized:
//   |psi><psi| + sum_k w_k O_k |psi><psi| O_k^dag,  psi = encode(phi),
// with weights/operators  r1(n+1)/2 on (Z1 + X2), r1(n+1)/2 on (Z1 + X3),
// r1 n/2 on (-Z1 + X2), r1 n/2 on (-Z1 + X3).
CMat encoded_state_first_order(double r1, int n, double phi);

// The same four (weight, operator) terms, exposed for structural tests.
std::vector<FirstOrderTerm> encoded_state_terms(double r1, int n);

// Two-point Richardson-style probe: f(2 r1) / f(r1). For a quantity
// quadratic in r1 the ratio approaches 4; linear gives 2.
double scaling_ratio(double r1, const std::function<double(double)>& f);

}  // namespace qreshape
