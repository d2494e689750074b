#include "qreshape/matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace qreshape {

CMat identity(int d) { return CMat::Identity(d, d); }

CMat pauli_x() {
  CMat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

CMat pauli_y() {
  CMat m(2, 2);
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return m;
}

CMat pauli_z() {
  CMat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMat lift1(const CMat& u, int q, int n_qubits) {
  if (u.rows() != 2 || u.cols() != 2) throw std::invalid_argument("lift1: 2x2 expected");
  if (q < 0 || q >= n_qubits) throw std::invalid_argument("lift1: qubit out of range");
  CMat out = CMat::Ones(1, 1);
  for (int k = 0; k < n_qubits; ++k)
    out = kron(out, k == q ? u : identity(2));
  return out;
}

CMat lift2(const CMat& u, int q0, int q1, int n_qubits) {
  if (u.rows() != 4 || u.cols() != 4) throw std::invalid_argument("lift2: 4x4 expected");
  if (q0 == q1 || q0 < 0 || q1 < 0 || q0 >= n_qubits || q1 >= n_qubits)
    throw std::invalid_argument("lift2: bad qubit indices");
  const int d = 1 << n_qubits;
  CMat out = CMat::Zero(d, d);
  const int s0 = n_qubits - 1 - q0;  // bit shift of q0 (q0 most significant first)
  const int s1 = n_qubits - 1 - q1;
  for (int col = 0; col < d; ++col) {
    const int b0 = (col >> s0) & 1;
    const int b1 = (col >> s1) & 1;
    const int sub_in = (b0 << 1) | b1;
    const int base = col & ~((1 << s0) | (1 << s1));
    for (int sub_out = 0; sub_out < 4; ++sub_out) {
      const Complex amp = u(sub_out, sub_in);
      if (amp == Complex(0, 0)) continue;
      const int row = base | (((sub_out >> 1) & 1) << s0) | ((sub_out & 1) << s1);
      out(row, col) += amp;
    }
  }
  return out;
}

CMat dagger(const CMat& m) { return m.adjoint(); }

double max_abs(const CMat& m) { return m.cwiseAbs().maxCoeff(); }

double max_abs_diff(const CMat& a, const CMat& b) { return max_abs(a - b); }

bool is_hermitian(const CMat& m, double tol) {
  return max_abs_diff(m, m.adjoint()) < tol;
}

bool is_unitary(const CMat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs_diff(m.adjoint() * m, identity(static_cast<int>(m.rows()))) < tol;
}

double phase_distance(const CMat& u, const CMat& v, double* phase_out) {
  if (u.rows() != v.rows() || u.cols() != v.cols())
    throw std::invalid_argument("phase_distance: shape mismatch");
  // Optimal phase from the largest-magnitude entry of v.
  int bi = 0, bj = 0;
  double best = -1.0;
  for (int i = 0; i < v.rows(); ++i)
    for (int j = 0; j < v.cols(); ++j)
      if (std::abs(v(i, j)) > best) {
        best = std::abs(v(i, j));
        bi = i;
        bj = j;
      }
  double a = 0.0;
  if (best > 0 && std::abs(u(bi, bj)) > 0) a = std::arg(u(bi, bj) / v(bi, bj));
  if (phase_out) *phase_out = a;
  return max_abs_diff(u, std::polar(1.0, a) * v);
}

bool equivalent_up_to_phase(const CMat& u, const CMat& v, double tol) {
  return phase_distance(u, v) < tol;
}

CVec vec_rowmajor(const CMat& k) {
  CVec v(k.rows() * k.cols());
  int idx = 0;
  for (int i = 0; i < k.rows(); ++i)
    for (int j = 0; j < k.cols(); ++j) v(idx++) = k(i, j);
  return v;
}

CMat unvec_rowmajor(const CVec& v, int rows, int cols) {
  if (v.size() != static_cast<long>(rows) * cols)
    throw std::invalid_argument("unvec_rowmajor: size mismatch");
  CMat m(rows, cols);
  int idx = 0;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = v(idx++);
  return m;
}

}  // namespace qreshape
