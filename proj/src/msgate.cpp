#include "qreshape/msgate.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "qreshape/lindblad.hpp"
#include "qreshape/states.hpp"

namespace qreshape {

namespace {

double a1_closed_form(double r1, double r2) {
  const double S = std::sqrt(16.0 * std::exp(6.0 * r1) +
                             std::exp(2.0 * r2) * std::pow(std::exp(4.0 * r1) - 1.0, 2));
  const double num = std::exp(-r2) * (4.0 * std::exp(2.0 * r1) - std::exp(2.0 * r2) +
                                      std::exp(4.0 * r1 + 2.0 * r2) + std::exp(r2) * S);
  return std::sqrt(num / (2.0 * S));
}

Eigen::Vector4d equation_residuals(double r1, double r2, const Eigen::Vector4d& a) {
  const double a1 = a(0), a2 = a(1), a3 = a(2), a4 = a(3);
  Eigen::Vector4d r;
  r(0) = a1 * a1 + a2 * a2 - 1.0;
  r(1) = a1 * a3 + a2 * a4 - (std::exp(-r1 - r2) - 1.0);
  r(2) = 2.0 * a1 * a3 + a3 * a3 + 2.0 * a2 * a4 + a4 * a4 -
         0.5 * (std::exp(-4.0 * r1) - 1.0);
  r(3) = 2.0 * a1 * a2 + a3 * a4 + a1 * a4 + a2 * a3;
  return r;
}

Eigen::Matrix4d equation_jacobian(const Eigen::Vector4d& a) {
  const double a1 = a(0), a2 = a(1), a3 = a(2), a4 = a(3);
  Eigen::Matrix4d j;
  j << 2 * a1, 2 * a2, 0, 0,
       a3, a4, a1, a2,
       2 * a3, 2 * a4, 2 * a1 + 2 * a3, 2 * a2 + 2 * a4,
       2 * a2 + a4, 2 * a1 + a3, a4 + a2, a3 + a1;
  return j;
}

// ---------------------------------------------------------------------------
// Oscillator-sector ODE. For H(t) = J_y (x) B(t) with dissipators acting on
// the oscillator alone, the (m, m') coherence sector of the J_y eigenbasis
// carries an oscillator operator s obeying
//   ds/dt = -i (m B(t) s - m' s B(t)) + D[s],
// and chi(m, m') = Tr s(tau) with s(0) the thermal state.
// ---------------------------------------------------------------------------

struct SectorSetup {
  double eta_omega = 0.0;
  double mu = 0.0;
  double gamma_p = 0.0;
  double gamma_h = 0.0;
  double n_th = 0.0;
};

void sector_rhs(const SectorSetup& sp, double m, double mp, double t, const CMat& s,
                CMat& out) {
  const int f = static_cast<int>(s.rows());
  const Complex ce = -sp.eta_omega * std::polar(1.0, -sp.mu * t);  // a coefficient
  const Complex cp = -sp.eta_omega * std::polar(1.0, sp.mu * t);   // a^dag coefficient
  const Complex mi(0.0, -1.0);
  for (int i = 0; i < f; ++i) {
    for (int j = 0; j < f; ++j) {
      // (B s)(i,j) = ce sqrt(i+1) s(i+1,j) + cp sqrt(i) s(i-1,j)
      Complex bs(0, 0);
      if (i + 1 < f) bs += ce * std::sqrt(double(i + 1)) * s(i + 1, j);
      if (i - 1 >= 0) bs += cp * std::sqrt(double(i)) * s(i - 1, j);
      // (s B)(i,j) = ce sqrt(j) s(i,j-1) + cp sqrt(j+1) s(i,j+1)
      Complex sb(0, 0);
      if (j - 1 >= 0) sb += ce * std::sqrt(double(j)) * s(i, j - 1);
      if (j + 1 < f) sb += cp * std::sqrt(double(j + 1)) * s(i, j + 1);
      Complex v = mi * (m * bs - mp * sb);
      if (sp.gamma_p > 0) {
        const double dij = double(i - j);
        v -= 0.5 * sp.gamma_p * dij * dij * s(i, j);
      }
      if (sp.gamma_h > 0) {
        const double gd = sp.gamma_h * (sp.n_th + 1.0);
        const double gu = sp.gamma_h * sp.n_th;
        Complex h(0, 0);
        if (i + 1 < f && j + 1 < f)
          h += gd * std::sqrt(double(i + 1) * double(j + 1)) * s(i + 1, j + 1);
        h -= 0.5 * gd * double(i + j) * s(i, j);
        if (i - 1 >= 0 && j - 1 >= 0)
          h += gu * std::sqrt(double(i) * double(j)) * s(i - 1, j - 1);
        h -= 0.5 * gu * double(i + j + 2) * s(i, j);
        v += h;
      }
      out(i, j) = v;
    }
  }
}

Complex integrate_sector(const SectorSetup& sp, double m, double mp, const CMat& s0,
                         double tau, int n_steps) {
  const int f = static_cast<int>(s0.rows());
  CMat s = s0, k1(f, f), k2(f, f), k3(f, f), k4(f, f), tmp(f, f);
  const double dt = tau / n_steps;
  for (int step = 0; step < n_steps; ++step) {
    const double t = step * dt;
    sector_rhs(sp, m, mp, t, s, k1);
    tmp = s + (dt / 2) * k1;
    sector_rhs(sp, m, mp, t + dt / 2, tmp, k2);
    tmp = s + (dt / 2) * k2;
    sector_rhs(sp, m, mp, t + dt / 2, tmp, k3);
    tmp = s + dt * k3;
    sector_rhs(sp, m, mp, t + dt, tmp, k4);
    s += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return s.trace();
}

const std::array<double, 4>& mvalues() {
  static const std::array<double, 4> m = {1.0, 0.0, 0.0, -1.0};
  return m;
}

// Columns kron(y_pm, y_pm) with y_+ = (1, i)/sqrt2, y_- = (1, -i)/sqrt2.
CMat jy_eigenvectors() {
  CVec yp(2), ym(2);
  yp << Complex(1, 0) / std::sqrt(2.0), Complex(0, 1) / std::sqrt(2.0);
  ym << Complex(1, 0) / std::sqrt(2.0), Complex(0, -1) / std::sqrt(2.0);
  CMat v(4, 4);
  const CVec* sel[2] = {&yp, &ym};
  int col = 0;
  for (int s0 = 0; s0 < 2; ++s0)
    for (int s1 = 0; s1 < 2; ++s1) {
      CVec c(4);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) c(2 * i + j) = (*sel[s0])(i) * (*sel[s1])(j);
      v.col(col++) = c;
    }
  return v;
}

std::function<CMat(const CMat&)> schur_channel(const CMat& chi4) {
  const CMat v = jy_eigenvectors();
  const CMat vd = v.adjoint();
  return [v, vd, chi4](const CMat& x) -> CMat {
    CMat y = vd * x * v;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) y(i, j) *= chi4(i, j);
    return v * y * vd;
  };
}

SectorSetup setup_from(const MSParams& p) {
  SectorSetup sp;
  sp.eta_omega = p.eta * p.omega;
  sp.mu = p.mu();
  sp.gamma_p = p.gamma_p;
  sp.gamma_h = p.gamma_h;
  sp.n_th = p.n_th;
  return sp;
}

}  // namespace

ClosureCheck closure_constraints(const MSParams& p) {
  if (p.mu() == 0.0) throw std::invalid_argument("closure: delta == nu");
  ClosureCheck c;
  c.tau = p.tau();
  c.ok = std::abs(p.eta * p.omega / p.mu() - 0.5 / std::sqrt(double(p.loops))) < 1e-9;
  return c;
}

RParams r_params(const MSParams& p) {
  const double tau = p.tau();
  RParams r;
  r.r1 = (2.0 * p.n_th + 1.0) * p.gamma_p * tau / (4.0 * p.loops);
  r.r2 = 3.0 * p.gamma_p * tau / (16.0 * double(p.loops) * p.loops);
  return r;
}

MSCoefficients solve_coefficients(double r1, double r2) {
  if (r1 < 0 || r2 < 0) throw std::invalid_argument("solve_coefficients: negative r");
  MSCoefficients c;
  c.r1 = r1;
  c.r2 = r2;
  if (r1 == 0.0 && r2 == 0.0) {
    c.a1 = 1.0;
    c.a2 = c.a3 = c.a4 = 0.0;
    c.k2 = 0.0;
    c.residual = 0.0;
    return c;
  }
  Eigen::Vector4d a;
  a(0) = std::min(1.0, a1_closed_form(r1, r2));
  a(1) = std::sqrt(std::max(0.0, 1.0 - a(0) * a(0)));
  // Seed (a3, a4) from the linear part of equations (ii) and (iv):
  //   a1 a3 + a2 a4 = e^{-r1-r2} - 1,   a1 a4 + a2 a3 = -2 a1 a2.
  {
    Eigen::Matrix2d m;
    m << a(0), a(1), a(1), a(0);
    Eigen::Vector2d rhs(std::exp(-r1 - r2) - 1.0, -2.0 * a(0) * a(1));
    Eigen::Vector2d s = m.fullPivLu().solve(rhs);
    a(2) = s(0);
    a(3) = s(1);
  }
  Eigen::Vector4d res = equation_residuals(r1, r2, a);
  for (int it = 0; it < 200 && res.cwiseAbs().maxCoeff() > 1e-13; ++it) {
    const Eigen::Matrix4d j = equation_jacobian(a);
    Eigen::Vector4d step = j.colPivHouseholderQr().solve(-res);
    double lambda = 1.0;
    Eigen::Vector4d best = a;
    Eigen::Vector4d best_res = res;
    for (int h = 0; h < 30; ++h) {
      Eigen::Vector4d trial = a + lambda * step;
      Eigen::Vector4d tr = equation_residuals(r1, r2, trial);
      if (tr.norm() < best_res.norm()) {
        best = trial;
        best_res = tr;
        break;
      }
      lambda *= 0.5;
    }
    if ((best - a).norm() == 0.0) break;
    a = best;
    res = best_res;
  }
  c.a1 = a(0);
  c.a2 = a(1);
  c.a3 = a(2);
  c.a4 = a(3);
  c.k2 = std::sqrt((1.0 - std::exp(-4.0 * r1)) / 2.0);
  c.residual = res.cwiseAbs().maxCoeff();
  return c;
}

std::array<double, 4> coefficient_residuals(const MSCoefficients& c) {
  const Complex a1 = c.a1, a2 = c.a2, a3 = c.a3, a4 = c.a4;
  const double r1 = c.r1, r2 = c.r2;
  std::array<double, 4> out;
  out[0] = std::abs(a1 * a1 + a2 * a2 - 1.0);
  out[1] = std::abs(a1 * a3 + a2 * a4 - (std::exp(-r1 - r2) - 1.0));
  out[2] = std::abs(2.0 * a1 * a3 + a3 * a3 + 2.0 * a2 * a4 + a4 * a4 -
                    0.5 * (std::exp(-4.0 * r1) - 1.0));
  out[3] = std::abs(2.0 * a1 * a2 + a3 * a4 + a1 * a4 + a2 * a3);
  return out;
}

CMat collective_spin(char axis) {
  CMat s;
  if (axis == 'x')
    s = pauli_x();
  else if (axis == 'y')
    s = pauli_y();
  else
    throw std::invalid_argument("collective_spin: axis must be x or y");
  return 0.5 * (kron(s, identity(2)) + kron(identity(2), s));
}

QuantumChannel analytic_channel(const MSCoefficients& c, char axis, double cptp_tol) {
  const CMat j = collective_spin(axis);
  const CMat j2 = j * j;
  const CMat id = identity(4);
  QuantumChannel ch;
  ch.dim_in = ch.dim_out = 4;
  ch.kraus = {c.a1 * id + c.a3 * j2, c.k2 * j, c.a2 * id + c.a4 * j2};
  ch.canonical = true;
  if (!ch.is_cptp(cptp_tol))
    throw std::invalid_argument("analytic_channel: not CPTP within tolerance");
  return ch;
}

CMat chi_matrix(const MSParams& p, int fock_dim, int n_steps) {
  const SectorSetup sp = setup_from(p);
  const double tau = p.tau();
  const CMat s0 = thermal_state(p.n_th, fock_dim).m;
  // Distinct (m, m') pairs among {1, 0, -1}; Hermitian fill for the rest.
  const double ms[3] = {1.0, 0.0, -1.0};
  Complex val[3][3];
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b)
      val[a][b] = integrate_sector(sp, ms[a], ms[b], s0, tau, n_steps);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < a; ++b) val[a][b] = std::conj(val[b][a]);

  auto slot = [](double m) { return m > 0.5 ? 0 : (m < -0.5 ? 2 : 1); };
  const auto& mv = mvalues();
  CMat chi(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) chi(i, j) = val[slot(mv[i])][slot(mv[j])];
  return chi;
}

QuantumChannel simulate_generic(const MSParams& p, int fock_dim, int n_steps) {
  const int dq = 4;
  const CMat jy = collective_spin('y');
  CMat a = CMat::Zero(fock_dim, fock_dim);
  for (int k = 1; k < fock_dim; ++k) a(k - 1, k) = std::sqrt(double(k));
  const CMat ad = a.adjoint();
  const CMat n_op = ad * a;
  const double eo = p.eta * p.omega;
  const double mu = p.mu();

  LindbladProblem prob;
  prob.dim = dq * fock_dim;
  prob.hamiltonian = [=](double t) {
    const CMat b = -eo * (std::polar(1.0, -mu * t) * a + std::polar(1.0, mu * t) * ad);
    return kron(jy, b);
  };
  if (p.gamma_p > 0)
    prob.collapse.push_back(std::sqrt(p.gamma_p) * kron(identity(dq), n_op));
  if (p.gamma_h > 0) {
    prob.collapse.push_back(std::sqrt(p.gamma_h * (p.n_th + 1.0)) * kron(identity(dq), a));
    if (p.n_th > 0)
      prob.collapse.push_back(std::sqrt(p.gamma_h * p.n_th) * kron(identity(dq), ad));
  }

  const CMat th = thermal_state(p.n_th, fock_dim).m;
  auto fn = [&](const CMat& x) -> CMat {
    const CMat joint0 = kron(x, th);
    const CMat joint = evolve_rk4(prob, joint0, p.tau(), n_steps);
    DensityMatrix dm;
    dm.dims = {dq, fock_dim};
    dm.m = joint;
    return partial_trace(dm, {0}).m;
  };
  return canonical_kraus(choi_of(fn, dq));
}

ExactChannelResult simulate_exact(const MSParams& p, int fock_dim, double dt_control,
                                  int initial_steps, int max_doublings) {
  if (fock_dim < 10) throw std::invalid_argument("simulate_exact: fock_dim < 10");
  if (thermal_tail(p.n_th, fock_dim - 2) >= 1e-8)
    throw std::invalid_argument("simulate_exact: thermal tail beyond fock_dim-2 too large");

  int steps = initial_steps;
  CMat chi = chi_matrix(p, fock_dim, steps);
  CMat prev_choi = choi_of(schur_channel(chi), 4).matrix;
  double change = 0.0;
  for (int d = 0; d < max_doublings; ++d) {
    steps *= 2;
    chi = chi_matrix(p, fock_dim, steps);
    const CMat cur = choi_of(schur_channel(chi), 4).matrix;
    change = max_abs_diff(cur, prev_choi);
    prev_choi = cur;
    if (change < dt_control) break;
  }

  ExactChannelResult res;
  res.chi = chi;
  res.steps = steps;
  res.choi_change = change;

  ChoiMatrix cm;
  cm.dim_in = cm.dim_out = 4;
  cm.matrix = prev_choi;
  res.total = canonical_kraus(cm);

  // Target: the noiseless integration at the accepted resolution.
  MSParams p0 = p;
  p0.gamma_p = 0.0;
  p0.gamma_h = 0.0;
  const CMat chi0 = chi_matrix(p0, fock_dim, steps);
  const QuantumChannel noiseless = canonical_kraus(choi_of(schur_channel(chi0), 4));
  CMat u = noiseless.kraus.at(0);
  Eigen::JacobiSVD<CMat> svd(u, Eigen::ComputeFullU | Eigen::ComputeFullV);
  res.target = svd.matrixU() * svd.matrixV().adjoint();

  // E_err(X) = E_tot(U^dag X U): noise after the ideal gate.
  QuantumChannel err;
  err.dim_in = err.dim_out = 4;
  const CMat ud = res.target.adjoint();
  for (const auto& k : res.total.kraus) err.kraus.push_back(k * ud);
  res.error = canonical_kraus(choi_of(err));
  return res;
}

StructureFit fit_structure(const QuantumChannel& error, char axis, double threshold) {
  const CMat j = collective_spin(axis);
  const CMat basis[3] = {identity(4), j, j * j};
  Eigen::Matrix3cd gram;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) gram(a, b) = (basis[a].adjoint() * basis[b]).trace();

  struct Fit {
    Eigen::Vector3cd c;
    double norm2 = 0.0;      // ||K||_F^2
    double resid2 = 0.0;     // ||K - proj||_F^2
    double j_share = 0.0;    // |c_J|^2 ||J||^2 / ||proj||^2
  };
  std::vector<Fit> fits;
  double total_norm2 = 0.0, total_resid2 = 0.0;
  for (const auto& k : error.kraus) {
    Fit f;
    Eigen::Vector3cd rhs;
    for (int a = 0; a < 3; ++a) rhs(a) = (basis[a].adjoint() * k).trace();
    f.c = gram.fullPivLu().solve(rhs);
    CMat proj = CMat::Zero(4, 4);
    for (int a = 0; a < 3; ++a) proj += f.c(a) * basis[a];
    f.norm2 = k.squaredNorm();
    f.resid2 = (k - proj).squaredNorm();
    const double pn2 = proj.squaredNorm();
    f.j_share = pn2 > 0 ? std::norm(f.c(1)) * basis[1].squaredNorm() / pn2 : 0.0;
    total_norm2 += f.norm2;
    total_resid2 += f.resid2;
    fits.push_back(f);
  }

  StructureFit out;
  out.residual = total_norm2 > 0 ? std::sqrt(total_resid2 / total_norm2) : 0.0;
  if (fits.empty()) return out;

  // Slot classification among the three largest-norm Kraus operators:
  // K2 = dominant J share; K1 = larger remaining; K3 = the other.
  std::vector<int> order(fits.size());
  for (std::size_t i = 0; i < fits.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return fits[x].norm2 > fits[y].norm2; });
  order.resize(std::min<std::size_t>(3, order.size()));
  int i2 = order[0];
  for (int idx : order)
    if (fits[idx].j_share > fits[i2].j_share) i2 = idx;
  std::vector<int> rest;
  for (int idx : order)
    if (idx != i2) rest.push_back(idx);
  int i1 = rest.empty() ? -1 : rest[0];
  int i3 = rest.size() > 1 ? rest[1] : -1;
  if (i1 >= 0 && i3 >= 0 && fits[i3].norm2 > fits[i1].norm2) std::swap(i1, i3);

  auto phase_fixed = [](Eigen::Vector3cd c, int anchor) {
    if (std::abs(c(anchor)) > 0) c *= std::polar(1.0, -std::arg(c(anchor)));
    return c;
  };
  if (i1 >= 0) {
    const auto c1 = phase_fixed(fits[i1].c, 0);
    out.coeffs.a1 = c1(0);
    out.coeffs.a3 = c1(2);
  }
  {
    const auto c2 = phase_fixed(fits[i2].c, 1);
    out.coeffs.k2 = c2(1);
  }
  if (i3 >= 0) {
    const auto c3 = phase_fixed(fits[i3].c, 0);
    out.coeffs.a2 = c3(0);
    out.coeffs.a4 = c3(2);
  }
  out.ok = out.residual < threshold && i1 >= 0;
  return out;
}

QuantumChannel heating_channel(double r, double n_bath, const std::string& mode,
                               int fock_dim, char axis) {
  if (r < 0) throw std::invalid_argument("heating_channel: r < 0");
  if (mode == "analytic") return analytic_channel(solve_coefficients(r, 0.0), axis);
  if (mode != "exact") throw std::invalid_argument("heating_channel: unknown mode");
  MSParams p;
  p.n_th = n_bath;
  p.gamma_p = 0.0;
  // Rate for which (2 n_bath + 1) Gamma tau / (4K) = r in the default geometry.
  p.gamma_h = 4.0 * p.loops * r / ((2.0 * n_bath + 1.0) * p.tau());
  ExactChannelResult res = simulate_exact(p, fock_dim);
  if (axis == 'y') return res.error;
  // Map the J_y-frame channel into the J_x frame: conjugate by the rotation
  // taking Y -> X on both qubits.
  const CMat s = [] {
    CMat m(2, 2);
    const double c = 1.0 / std::sqrt(2.0);
    m << Complex(c, 0), Complex(c, 0), Complex(0, -c), Complex(0, c);
    // m maps eigenvectors of Y to eigenvectors of X: m Y m^dag = X.
    return m;
  }();
  return conjugate_channel(res.error, kron(s, s));
}

double fock_tail(double nbar, int level) { return thermal_tail(nbar, level); }

}  // namespace qreshape
