#pragma once
// Dense Lindblad master-equation integration with classical RK4.
//
//   d rho/dt = -i [H(t), rho] + sum_k ( L_k rho L_k^dag - 1/2 {L_k^dag L_k, rho} )

#include <functional>
#include <vector>

#include "qreshape/matrix.hpp"

namespace qreshape {

struct LindbladProblem {
  std::function<CMat(double)> hamiltonian;  // H(t)
  std::vector<CMat> collapse;               // time-independent L_k
  int dim = 0;
};

// Integrate rho from t=0 to t=t_final with n_steps fixed RK4 steps.
CMat evolve_rk4(const LindbladProblem& prob, const CMat& rho0, double t_final,
                int n_steps);

// Evolve the full process: returns the list E(|i><j|) for all dim^2 matrix
// units, i.e. the columns of the process in the matrix-unit basis.
std::vector<CMat> evolve_process_rk4(const LindbladProblem& prob, double t_final,
                                     int n_steps);

}  // namespace qreshape
