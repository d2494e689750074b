#pragma once
// Dense complex linear algebra helpers shared by every module.
//
// Conventions (fixed project-wide):
//   |0> = (1, 0)^T, |1> = (0, 1)^T; qubit 1 is the leftmost (most significant)
//   tensor factor, so a bitstring b0 b1 ... b_{n-1} indexes basis state
//   sum_k b_k 2^{n-1-k}.

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace qreshape {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;

CMat identity(int d);
CMat pauli_x();
CMat pauli_y();
CMat pauli_z();

// Kronecker product, a (x) b.
CMat kron(const CMat& a, const CMat& b);

// Embed a single-qubit operator on qubit q of an n-qubit register.
CMat lift1(const CMat& u, int q, int n_qubits);

// Embed a two-qubit operator on (q0, q1); the operator's first tensor factor
// acts on q0. q0 != q1, arbitrary order and adjacency.
CMat lift2(const CMat& u, int q0, int q1, int n_qubits);

CMat dagger(const CMat& m);

double max_abs(const CMat& m);
double max_abs_diff(const CMat& a, const CMat& b);

bool is_hermitian(const CMat& m, double tol = 1e-10);
bool is_unitary(const CMat& m, double tol = 1e-10);

// True iff ||u - e^{i a} v||_max < tol for the optimal global phase a,
// computed from the ratio of the largest-magnitude entry of v.
bool equivalent_up_to_phase(const CMat& u, const CMat& v, double tol = 1e-10);

// Max-norm deviation after removing the optimal global phase; also reports
// the phase used.
double phase_distance(const CMat& u, const CMat& v, double* phase_out = nullptr);

// Row-major vectorization: vec(K) = sum_ij K_ij |i>|j>, and its inverse.
CVec vec_rowmajor(const CMat& k);
CMat unvec_rowmajor(const CVec& v, int rows, int cols);

}  // namespace qreshape
