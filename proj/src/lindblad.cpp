#include "qreshape/lindblad.hpp"

#include <stdexcept>

namespace qreshape {

namespace {

CMat rhs(const LindbladProblem& prob, double t, const CMat& rho,
         const std::vector<CMat>& ldag, const std::vector<CMat>& ldagl) {
  const CMat h = prob.hamiltonian(t);
  CMat out = Complex(0, -1) * (h * rho - rho * h);
  for (std::size_t k = 0; k < prob.collapse.size(); ++k) {
    out += prob.collapse[k] * rho * ldag[k];
    out -= 0.5 * (ldagl[k] * rho + rho * ldagl[k]);
  }
  return out;
}

}  // namespace

CMat evolve_rk4(const LindbladProblem& prob, const CMat& rho0, double t_final,
                int n_steps) {
  if (n_steps <= 0) throw std::invalid_argument("evolve_rk4: n_steps <= 0");
  std::vector<CMat> ldag, ldagl;
  for (const auto& l : prob.collapse) {
    ldag.push_back(l.adjoint());
    ldagl.push_back(l.adjoint() * l);
  }
  const double dt = t_final / n_steps;
  CMat rho = rho0;
  for (int s = 0; s < n_steps; ++s) {
    const double t = s * dt;
    const CMat k1 = rhs(prob, t, rho, ldag, ldagl);
    const CMat k2 = rhs(prob, t + dt / 2, rho + (dt / 2) * k1, ldag, ldagl);
    const CMat k3 = rhs(prob, t + dt / 2, rho + (dt / 2) * k2, ldag, ldagl);
    const CMat k4 = rhs(prob, t + dt, rho + dt * k3, ldag, ldagl);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return rho;
}

std::vector<CMat> evolve_process_rk4(const LindbladProblem& prob, double t_final,
                                     int n_steps) {
  std::vector<CMat> out;
  const int d = prob.dim;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      CMat eij = CMat::Zero(d, d);
      eij(i, j) = 1.0;
      out.push_back(evolve_rk4(prob, eij, t_final, n_steps));
    }
  return out;
}

}  // namespace qreshape
