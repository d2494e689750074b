#include "qreshape/repcode.hpp"

#include <cmath>

namespace qreshape {

namespace {

Complex ei(double a) { return std::polar(1.0, a); }

CMat m2x2(Complex a, Complex b, Complex c, Complex d) {
  CMat m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

CMat InsertedUnitary::matrix() const {
  const double ct = std::cos(theta), st = std::sin(theta);
  return m2x2(ei(phi) * ct, -ei(-deltaA) * st, ei(deltaA) * st, ei(-phi) * ct);
}

CMat LogicalChannel::apply(const CMat& rho) const {
  const CMat x = pauli_x(), y = pauli_y(), z = pauli_z();
  return w_i * rho + w_x * x * rho * x + w_y * y * rho * y + w_z * z * rho * z;
}

CVec encode(double phi) {
  CVec psi = CVec::Zero(8);
  psi(0) = std::cos(phi / 2);
  psi(7) = Complex(0, -1) * std::sin(phi / 2);
  return psi;
}

CMat syndrome_projector(int i, int j) {
  if ((i != 0 && i != 1) || (j != 0 && j != 1))
    throw std::invalid_argument("syndrome_projector: bits must be 0 or 1");
  const CMat z1 = lift1(pauli_z(), 0, 3);
  const CMat z2 = lift1(pauli_z(), 1, 3);
  const CMat z3 = lift1(pauli_z(), 2, 3);
  const double si = i ? -1.0 : 1.0;
  const double sj = j ? -1.0 : 1.0;
  return 0.25 * (identity(8) + si * z1 * z2 + sj * z2 * z3 + si * sj * z1 * z3);
}

QuantumChannel recovery_channel() {
  const CMat corrections[4] = {identity(8), lift1(pauli_x(), 2, 3),
                               lift1(pauli_x(), 0, 3), lift1(pauli_x(), 1, 3)};
  QuantumChannel ch;
  ch.dim_in = ch.dim_out = 8;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      ch.kraus.push_back(corrections[2 * i + j] * syndrome_projector(i, j));
  return ch;
}

CMat logical_x() {
  return lift1(pauli_x(), 0, 3) * lift1(pauli_x(), 1, 3) * lift1(pauli_x(), 2, 3);
}

CMat logical_z() { return lift1(pauli_z(), 0, 3); }

CMat logical_y() { return Complex(0, -1) * logical_z() * logical_x(); }

CMat embed_logical(const CMat& m2) {
  CMat m = CMat::Zero(8, 8);
  m(0, 0) = m2(0, 0);
  m(0, 7) = m2(0, 1);
  m(7, 0) = m2(1, 0);
  m(7, 7) = m2(1, 1);
  return m;
}

LogicalState logical_elements(const CMat& rho_phys, double leak_tol) {
  double leak = 0.0;
  for (int k = 1; k < 7; ++k) leak += rho_phys(k, k).real();
  if (leak > leak_tol)
    throw std::runtime_error("logical_elements: population outside the code space");
  LogicalState s;
  s.rho00 = rho_phys(0, 0).real();
  s.rho01 = rho_phys(0, 7);
  return s;
}

std::array<double, 8> model_weights(double p, double theta) {
  const double c2 = std::pow(std::cos(theta), 2);
  const double s2 = std::pow(std::sin(theta), 2);
  const double q = 1.0 - p;
  return {(1.0 + p) * q * q * c2,  (2.0 - p) * q * p * s2,
          (2.0 - p) * p * p * c2,  p * (1.0 + p) * q * s2,
          q * q * q * s2,          p * p * q * c2,
          p * p * p * s2,          p * q * q * c2};
}

std::array<CMat, 8> model_operators(double phi_u, double deltaA) {
  const double f = phi_u, d = deltaA;
  const Complex z(0, 0);
  return {m2x2(ei(f), z, z, ei(-f)),
          m2x2(z, -ei(-d), ei(d), z),
          m2x2(z, ei(f), ei(-f), z),
          m2x2(-ei(-d), z, z, ei(d)),
          m2x2(ei(d), z, z, -ei(-d)),
          m2x2(z, ei(-f), ei(f), z),
          m2x2(z, ei(d), -ei(-d), z),
          m2x2(ei(-f), z, z, ei(f))};
}

CMat circuit_agnostic_output(double p, const InsertedUnitary& u, double phi) {
  const CVec psi = encode(phi);
  const CMat rho = psi * psi.adjoint();
  const auto w = model_weights(p, u.theta);
  const auto r = model_operators(u.phi, u.deltaA);
  CMat out = CMat::Zero(8, 8);
  for (int m = 0; m < 8; ++m) {
    const CMat rm = embed_logical(r[m]);
    out += w[m] * rm * rho * rm.adjoint();
  }
  return out;
}

CMat brute_force_output(double p, const InsertedUnitary& u, double phi) {
  const CVec psi = encode(phi);
  const CMat rho0 = psi * psi.adjoint();
  const CMat u1 = lift1(u.matrix(), 0, 3);
  const QuantumChannel rec = recovery_channel();
  CMat out = CMat::Zero(8, 8);
  for (int pat = 0; pat < 8; ++pat) {
    CMat flip = identity(8);
    int nf = 0;
    for (int q = 0; q < 3; ++q)
      if (pat & (1 << q)) {
        flip = lift1(pauli_x(), q, 3) * flip;
        ++nf;
      }
    const double prob = std::pow(p, nf) * std::pow(1.0 - p, 3 - nf);
    CMat state = flip * rho0 * flip.adjoint();
    state = u1 * state * u1.adjoint();
    out += prob * apply_channel(rec, state);
  }
  return out;
}

LogicalChannel ry_logical_channel(double p, double theta0) {
  const double c2 = std::pow(std::cos(theta0 / 2), 2);
  const double s2 = std::pow(std::sin(theta0 / 2), 2);
  LogicalChannel ch;
  ch.w_i = (1.0 - p) * (1.0 - p) * (1.0 + 2.0 * p) * c2;
  ch.w_x = (3.0 * p * p - 2.0 * p * p * p) * c2;
  ch.w_y = (2.0 * p - 3.0 * p * p + 2.0 * p * p * p) * s2;
  ch.w_z = (1.0 - 2.0 * p + 3.0 * p * p - 2.0 * p * p * p) * s2;
  return ch;
}

std::vector<ModelCurveRow> model_curves(const std::vector<double>& p_grid,
                                        const std::vector<double>& theta0_grid,
                                        double phi) {
  const double c = std::cos(phi / 2), s = std::sin(phi / 2);
  CMat rho_l(2, 2);
  rho_l << Complex(c * c, 0), Complex(0, c * s), Complex(0, -c * s), Complex(s * s, 0);
  std::vector<ModelCurveRow> rows;
  for (double theta0 : theta0_grid) {
    for (double p : p_grid) {
      const CMat out = ry_logical_channel(p, theta0).apply(rho_l);
      ModelCurveRow r;
      r.p = p;
      r.theta0 = theta0;
      r.rho00 = out(0, 0).real();
      r.re_rho01 = out(0, 1).real();
      r.im_rho01 = out(0, 1).imag();
      rows.push_back(r);
    }
  }
  return rows;
}

double model_rho00_ry(double p, double theta0, double rho00_encoded) {
  const LogicalChannel ch = ry_logical_channel(p, theta0);
  return (ch.w_i + ch.w_z) * rho00_encoded + (ch.w_x + ch.w_y) * (1.0 - rho00_encoded);
}

}  // namespace qreshape
