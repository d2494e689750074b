#pragma once
// Three-qubit bit-flip repetition code: encoding, recovery channel, the
// circuit-agnostic analytic model with a general inserted single-qubit
// unitary, and its Ry special case as a reshaped logical channel.
//
// Encoded state: |psi(phi)> = cos(phi/2)|000> - i sin(phi/2)|111>.
// Recovery: R(rho) = sum_{ij} R_{1+2i+j} P^{(ij)} rho P^{(ij)} R_{1+2i+j}
// with P^{(ij)} = (I + (-1)^i Z1 Z2 + (-1)^j Z2 Z3 + (-1)^{i+j} Z1 Z3)/4
// and corrections (R1..R4) = (I, X3, X1, X2).

#include <array>
#include <stdexcept>
#include <vector>

#include "qreshape/channel.hpp"
#include "qreshape/matrix.hpp"

namespace qreshape {

struct LogicalState {
  double rho00 = 1.0;
  Complex rho01{0.0, 0.0};
};

// General inserted single-qubit gate
//   U(theta, phi, deltaA) = [[ e^{i phi} cos th, -e^{-i deltaA} sin th],
//                            [ e^{i deltaA} sin th,  e^{-i phi} cos th]].
struct InsertedUnitary {
  double theta = 0.0;
  double phi = 0.0;
  double deltaA = 0.0;
  CMat matrix() const;
};

// Pauli-mixture logical channel (Ry special case): weights on I_L, X_L,
// Y_L, Z_L; weights sum to 1.
struct LogicalChannel {
  double w_i = 1.0, w_x = 0.0, w_y = 0.0, w_z = 0.0;
  double weight_sum() const { return w_i + w_x + w_y + w_z; }
  // Apply to a 2x2 logical density matrix.
  CMat apply(const CMat& rho) const;
};

// cos(phi/2)|000> - i sin(phi/2)|111>
CVec encode(double phi);

// Projector P^{(ij)} on the 8-dim space.
CMat syndrome_projector(int i, int j);

// The 4-outcome recovery as a 4-Kraus channel (R_{1+2i+j} P^{(ij)}).
QuantumChannel recovery_channel();

// Physical logical operators: X_L = X1X2X3, Z_L = Z1, Y_L = -i Z_L X_L (8x8).
CMat logical_x();
CMat logical_y();
CMat logical_z();

// Embed a 2x2 logical operator on span{|000>, |111>} (zero elsewhere).
CMat embed_logical(const CMat& m2);

// (rho00, rho01) = (<000|rho|000>, <000|rho|111>). Throws if population
// outside the code space exceeds leak_tol.
LogicalState logical_elements(const CMat& rho_phys, double leak_tol = 1e-8);

// Weights w1..w8 of the 8-term mixture (sum to 1 algebraically);
// theta is the inserted unitary's angle.
std::array<double, 8> model_weights(double p, double theta);

// The eight 2x2 logical unitaries R_1..R_8 of the model.
std::array<CMat, 8> model_operators(double phi_u, double deltaA);

// Closed-form three-qubit output of: encode(phi), i.i.d. bit-flip(p) on each
// qubit, u on qubit 1, recovery. Equals
//   sum_m w_m R_m |psi><psi| R_m^dag  (R_m embedded on the code space).
CMat circuit_agnostic_output(double p, const InsertedUnitary& u, double phi);

// Brute-force oracle: enumerate the 8 flip patterns with probabilities
// p^k (1-p)^{3-k}, apply the flips, apply u on qubit 1, apply the recovery
// channel, and sum.
CMat brute_force_output(double p, const InsertedUnitary& u, double phi);

// Ry special case, u = Ry(theta0) on qubit 1 = U(theta0/2, 0, 0):
//   w_i = (1-p)^2 (1+2p) cos^2(theta0/2)
//   w_x = (3p^2 - 2p^3)  cos^2(theta0/2)
//   w_y = (2p - 3p^2 + 2p^3) sin^2(theta0/2)
//   w_z = (1 - 2p + 3p^2 - 2p^3) sin^2(theta0/2)
LogicalChannel ry_logical_channel(double p, double theta0);

struct ModelCurveRow {
  double p = 0.0, theta0 = 0.0;
  double rho00 = 0.0, re_rho01 = 0.0, im_rho01 = 0.0;
};

// Evaluate ry_logical_channel on encode(phi) over the grids and extract the
// logical elements.
std::vector<ModelCurveRow> model_curves(const std::vector<double>& p_grid,
                                        const std::vector<double>& theta0_grid,
                                        double phi);

// rho00 of the Ry model output given the encoded rho00 = cos^2(phi/2):
//   (w_i + w_z) rho00 + (w_x + w_y)(1 - rho00).
double model_rho00_ry(double p, double theta0, double rho00_encoded);

}  // namespace qreshape
