#include "qreshape/propagate.hpp"

#include <stdexcept>

#include "qreshape/repcode.hpp"

namespace qreshape {

CMat FirstOrderMap::apply(const CMat& rho) const {
  CMat out = base * rho * base.adjoint();
  const CMat ideal = out;
  for (const auto& t : terms) out += t.coeff * t.op * ideal * t.op.adjoint();
  return out;
}

CMat FirstOrderMap::apply_normalized(const CMat& rho) const {
  return normalize(apply(rho));
}

CMat FirstOrderMap::superoperator() const {
  const int d = dim();
  CMat s = CMat::Identity(d * d, d * d);
  for (const auto& t : terms) s += t.coeff * kron(t.op, t.op.conjugate());
  return s * kron(base, base.conjugate());
}

CMat normalize(const CMat& rho) {
  const Complex tr = rho.trace();
  if (std::abs(tr) < 1e-300) throw std::invalid_argument("normalize: zero trace");
  return rho / tr;
}

FirstOrderMap first_order_ms(double r1, int i, int j, int n_qubits) {
  Gate xx;
  xx.kind = GateKind::XX;
  xx.qubits = {i, j};
  FirstOrderMap m;
  m.base = lift2(gate_matrix(xx), i, j, n_qubits);
  FirstOrderTerm t;
  t.coeff = r1 / 2.0;
  t.op = lift1(pauli_x(), i, n_qubits) + lift1(pauli_x(), j, n_qubits);
  m.terms = {t};
  return m;
}

FirstOrderMap redundant_unit(double r1, int n, int i, int j, int n_qubits) {
  if (n < 0) throw std::invalid_argument("redundant_unit: n < 0");
  FirstOrderMap m = first_order_ms(r1, i, j, n_qubits);
  const CMat xi = lift1(pauli_x(), i, n_qubits);
  const CMat xj = lift1(pauli_x(), j, n_qubits);
  FirstOrderTerm minus, plus;
  minus.coeff = r1 * n / 2.0;
  minus.op = -xi + xj;
  plus.coeff = r1 * (n + 1) / 2.0;
  plus.op = xi + xj;
  m.terms = {minus, plus};
  return m;
}

FirstOrderMap compose_truncated(const FirstOrderMap& later,
                                const FirstOrderMap& earlier) {
  if (later.dim() != earlier.dim())
    throw std::invalid_argument("compose_truncated: dimension mismatch");
  FirstOrderMap m;
  m.base = later.base * earlier.base;
  // Later terms act in place; earlier terms are pushed through later.base.
  m.terms = later.terms;
  for (const auto& t : earlier.terms) {
    FirstOrderTerm moved;
    moved.coeff = t.coeff;
    moved.op = later.base * t.op * later.base.adjoint();
    m.terms.push_back(moved);
  }
  return m;
}

FirstOrderMap unitary_map(const CMat& u) {
  FirstOrderMap m;
  m.base = u;
  return m;
}

std::vector<FirstOrderTerm> encoded_state_terms(double r1, int n) {
  const CMat z1 = lift1(pauli_z(), 0, 3);
  const CMat x2 = lift1(pauli_x(), 1, 3);
  const CMat x3 = lift1(pauli_x(), 2, 3);
  std::vector<FirstOrderTerm> terms(4);
  terms[0].coeff = r1 * (n + 1) / 2.0;
  terms[0].op = z1 + x2;
  terms[1].coeff = r1 * (n + 1) / 2.0;
  terms[1].op = z1 + x3;
  terms[2].coeff = r1 * n / 2.0;
  terms[2].op = -z1 + x2;
  terms[3].coeff = r1 * n / 2.0;
  terms[3].op = -z1 + x3;
  return terms;
}

CMat encoded_state_first_order(double r1, int n, double phi) {
  const CVec psi = encode(phi);
  const CMat rho = psi * psi.adjoint();
  CMat out = rho;
  for (const auto& t : encoded_state_terms(r1, n))
    out += t.coeff * t.op * rho * t.op.adjoint();
  return out;
}

double scaling_ratio(double r1, const std::function<double(double)>& f) {
  if (r1 <= 0) throw std::invalid_argument("scaling_ratio: r1 <= 0");
  const double f1 = f(r1);
  if (f1 == 0.0) throw std::invalid_argument("scaling_ratio: f(r1) == 0");
  return f(2.0 * r1) / f1;
}

}  // namespace qreshape
