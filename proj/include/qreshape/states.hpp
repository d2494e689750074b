#pragma once
// Density matrices over labeled tensor products, partial trace, thermal states.

#include <stdexcept>
#include <vector>

#include "qreshape/matrix.hpp"

namespace qreshape {

struct DensityMatrix {
  std::vector<int> dims;  // subsystem dimensions, leftmost factor first
  CMat m;

  int dim() const;
  // Throws if m is not Hermitian/unit-trace/PSD within tol.
  void validate(double tol = 1e-10) const;
};

DensityMatrix pure_density(const CVec& psi, std::vector<int> dims);

// Partial trace keeping the listed subsystem indices (in their original order).
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

// Truncated thermal oscillator state diag(p_n), p_n ~ nbar^n/(1+nbar)^{n+1},
// renormalized over the kept levels.
DensityMatrix thermal_state(double nbar, int fock_dim);

// Raw (untruncated) population of levels >= level for mean occupation nbar.
double thermal_tail(double nbar, int level);

}  // namespace qreshape
