#pragma once
// Two-qubit Molmer-Sorensen gate under oscillator dephasing / heating.
//
// Linearized model: H(t) = J_y (x) B(t), with J_y = (Y1 + Y2)/2 and
// B(t) = -eta*Omega*(a e^{-i mu t} + a^dag e^{+i mu t}), mu = nu - delta.
// Oscillator dephasing enters through the dissipator sqrt(Gamma_P) a^dag a;
// heating through sqrt(Gamma(nbar+1)) a and sqrt(Gamma nbar) a^dag.
// Gate time tau = 2 pi K / mu with the closure condition eta*Omega/mu = 1/(2 sqrt K).
//
// The analytic error channel has Kraus operators
//   K1 = a1 I + a3 J^2,  K2 = k2 J,  K3 = a2 I + a4 J^2,   J = J_y (or J_x),
// with k2 = sqrt((1 - e^{-4 r1})/2) and (a1..a4) solving
//   (i)   a1^2 + a2^2 = 1
//   (ii)  a1 a3 + a2 a4 = e^{-r1 - r2} - 1
//   (iii) 2 a1 a3 + a3^2 + 2 a2 a4 + a4^2 = (e^{-4 r1} - 1)/2
//   (iv)  2 a1 a2 + a3 a4 + a1 a4 + a2 a3 = 0
// where r1 = (2 nbar + 1) Gamma_P tau / (4K), r2 = 3 Gamma_P tau / (16 K^2).

#include <array>
#include <string>
#include <vector>

#include "qreshape/channel.hpp"
#include "qreshape/matrix.hpp"

namespace qreshape {

// Units: nu = 1; rates and frequencies in units of nu, durations in 1/nu.
struct MSParams {
  double eta = 0.1;      // Lamb-Dicke parameter
  double omega = 0.1;    // carrier Rabi frequency
  double nu = 1.0;       // trap frequency
  double delta = 0.9;    // laser detuning
  int loops = 25;        // K: phase-space loop count
  double gamma_p = 0.0;  // motional dephasing rate
  double gamma_h = 0.0;  // heating (relaxation) rate
  double n_th = 0.05;    // mean thermal phonon number

  double mu() const { return nu - delta; }
  double tau() const { return 2.0 * kPi * loops / mu(); }
};

struct RParams {
  double r1 = 0.0;
  double r2 = 0.0;
};

// Channel coefficients; complex because the exactly simulated channel has
// (small) imaginary parts. The analytic branch is real with a1, a2 > 0.
struct MSCoefficients {
  double r1 = 0.0, r2 = 0.0;
  Complex a1{1.0, 0.0}, a2{0.0, 0.0}, a3{0.0, 0.0}, a4{0.0, 0.0};
  Complex k2{0.0, 0.0};
  double residual = 0.0;  // max |eq (i)-(iv) violation| (analytic branch)
};

struct ClosureCheck {
  double tau = 0.0;
  bool ok = false;  // eta*omega/mu == 1/(2 sqrt K) within 1e-9
};

ClosureCheck closure_constraints(const MSParams& p);

RParams r_params(const MSParams& p);

// Closed-form a1; a2 = sqrt(1 - a1^2); (a3, a4) seeded from the linearized
// remaining equations and refined by damped Gauss-Newton until all four
// residuals are < 1e-9; k2 from its closed form.
MSCoefficients solve_coefficients(double r1, double r2);

// |eq (i)..(iv)| evaluated at the given coefficients.
std::array<double, 4> coefficient_residuals(const MSCoefficients& c);

// J = (axis_1 + axis_2)/2 on two qubits; axis in {'x','y'}.
CMat collective_spin(char axis);

// Three-Kraus channel K1 = a1 I + a3 J^2, K2 = k2 J, K3 = a2 I + a4 J^2.
// Throws if the result is not CPTP within cptp_tol.
QuantumChannel analytic_channel(const MSCoefficients& c, char axis = 'y',
                                double cptp_tol = 1e-8);

struct ExactChannelResult {
  QuantumChannel total;      // full two-qubit channel of the noisy gate
  QuantumChannel error;      // E_err(X) = E_tot(U_t^dag X U_t)
  CMat target;               // closest unitary to the noiseless gate
  CMat chi;                  // 4x4 Schur multiplier in the J_y eigenbasis
  int steps = 0;             // RK4 steps at the accepted resolution
  double choi_change = 0.0;  // max-norm Choi change at the last halving
};

// Exact Lindblad dynamics of the gate, traced over the oscillator: each
// two-qubit matrix unit evolved against the thermal oscillator state from 0
// to tau, assembled into a channel, composed with the inverse of the
// noiseless target on the left. Because H(t) = J_y (x) B(t) and the
// dissipators act on the oscillator alone, the channel is a Schur multiplier
// in the J_y eigenbasis, so only the 6 independent (m, m') oscillator-sector
// ODEs are integrated (an exact reduction; cross-checked against the dense
// generic path in the tests). Step count doubles until the Choi matrix moves
// by less than dt_control (max norm) between consecutive resolutions.
// Throws if the thermal tail beyond fock_dim - 2 exceeds 1e-8.
ExactChannelResult simulate_exact(const MSParams& p, int fock_dim = 30,
                                  double dt_control = 1e-7,
                                  int initial_steps = 20000,
                                  int max_doublings = 6);

// Schur-multiplier matrix at a fixed RK4 resolution (no convergence control).
// Uses the dephasing dissipator if gamma_p > 0 and the relaxation dissipators
// if gamma_h > 0.
CMat chi_matrix(const MSParams& p, int fock_dim, int n_steps);

// Dense reference path: same physics integrated on the full qubit x
// oscillator space with the generic Lindblad integrator, traced down.
// O(fock_dim^2) memory per matrix entry; use small fock_dim. Returns E_tot.
QuantumChannel simulate_generic(const MSParams& p, int fock_dim, int n_steps);

struct StructureFit {
  MSCoefficients coeffs;
  double residual = 0.0;  // relative Frobenius residual of the projection
  bool ok = false;        // residual below threshold and slots identified
};

// Least-squares projection of each canonical Kraus operator onto
// span{I, J, J^2}. The K2 slot is the operator whose projection is dominated
// by J; K1 is the larger-norm of the remaining two. Phases follow the
// canonical-Kraus convention of the input channel.
StructureFit fit_structure(const QuantumChannel& error, char axis = 'y',
                           double threshold = 0.05);

// Dephasing-or-heating equivalence: analytic mode returns
// analytic_channel(solve_coefficients(r, 0)); exact mode integrates with the
// relaxation dissipators at the rate Gamma for which (2 n_bath + 1) Gamma tau
// / (4K) = r in the default geometry, then extracts the error channel.
QuantumChannel heating_channel(double r, double n_bath, const std::string& mode,
                               int fock_dim = 30, char axis = 'y');

// Thermal-state population at levels >= level (diagnostic for fock_dim).
double fock_tail(double nbar, int level);

}  // namespace qreshape
