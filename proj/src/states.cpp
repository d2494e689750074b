#include "qreshape/states.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numeric>

namespace qreshape {

int DensityMatrix::dim() const {
  int d = 1;
  for (int x : dims) d *= x;
  return d;
}

void DensityMatrix::validate(double tol) const {
  if (m.rows() != dim() || m.cols() != dim())
    throw std::invalid_argument("DensityMatrix: shape/dims mismatch");
  if (!is_hermitian(m, tol)) throw std::invalid_argument("DensityMatrix: not Hermitian");
  if (std::abs(m.trace().real() - 1.0) > tol || std::abs(m.trace().imag()) > tol)
    throw std::invalid_argument("DensityMatrix: trace != 1");
  Eigen::SelfAdjointEigenSolver<CMat> es(m);
  if (es.eigenvalues().minCoeff() < -tol)
    throw std::invalid_argument("DensityMatrix: not PSD");
}

DensityMatrix pure_density(const CVec& psi, std::vector<int> dims) {
  DensityMatrix rho;
  rho.dims = std::move(dims);
  rho.m = psi * psi.adjoint();
  if (rho.m.rows() != rho.dim())
    throw std::invalid_argument("pure_density: dims mismatch");
  return rho;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
  const int n = static_cast<int>(rho.dims.size());
  std::vector<bool> kept(n, false);
  for (int k : keep) {
    if (k < 0 || k >= n) throw std::invalid_argument("partial_trace: bad index");
    kept[k] = true;
  }
  std::vector<int> out_dims, traced;
  for (int k = 0; k < n; ++k)
    (kept[k] ? out_dims : traced).push_back(0);
  out_dims.clear();
  for (int k : keep) out_dims.push_back(rho.dims[k]);

  // strides (row-major over subsystem list)
  std::vector<long> stride(n, 1);
  for (int k = n - 2; k >= 0; --k) stride[k] = stride[k + 1] * rho.dims[k + 1];

  int dout = 1;
  for (int d : out_dims) dout *= d;
  DensityMatrix out;
  out.dims = out_dims;
  out.m = CMat::Zero(dout, dout);

  std::vector<int> trace_subs;
  for (int k = 0; k < n; ++k)
    if (!kept[k]) trace_subs.push_back(k);

  // Direct enumeration: accumulate all global (row, col) pairs whose traced
  // subsystem indices agree into the kept-index block.
  const int d = rho.dim();
  for (int row = 0; row < d; ++row) {
    // decode row into subsystem indices
    std::vector<int> ridx(n);
    {
      long r = row;
      for (int k = 0; k < n; ++k) {
        ridx[k] = static_cast<int>(r / stride[k]);
        r %= stride[k];
      }
    }
    for (int col = 0; col < d; ++col) {
      std::vector<int> cidx(n);
      long c = col;
      for (int k = 0; k < n; ++k) {
        cidx[k] = static_cast<int>(c / stride[k]);
        c %= stride[k];
      }
      bool diag = true;
      for (int k : trace_subs)
        if (ridx[k] != cidx[k]) { diag = false; break; }
      if (!diag) continue;
      long orow = 0, ocol = 0;
      for (int k : keep) {
        orow = orow * rho.dims[k] + ridx[k];
        ocol = ocol * rho.dims[k] + cidx[k];
      }
      out.m(orow, ocol) += rho.m(row, col);
    }
  }
  return out;
}

DensityMatrix thermal_state(double nbar, int fock_dim) {
  if (fock_dim < 1) throw std::invalid_argument("thermal_state: fock_dim < 1");
  Eigen::VectorXd p(fock_dim);
  if (nbar <= 0) {
    p.setZero();
    p(0) = 1.0;
  } else {
    const double ratio = nbar / (1.0 + nbar);
    double w = 1.0 / (1.0 + nbar);
    for (int k = 0; k < fock_dim; ++k) {
      p(k) = w;
      w *= ratio;
    }
    p /= p.sum();
  }
  DensityMatrix rho;
  rho.dims = {fock_dim};
  rho.m = CMat::Zero(fock_dim, fock_dim);
  for (int k = 0; k < fock_dim; ++k) rho.m(k, k) = p(k);
  return rho;
}

double thermal_tail(double nbar, int level) {
  if (nbar <= 0) return level <= 0 ? 1.0 : 0.0;
  // sum_{k>=level} nbar^k/(1+nbar)^{k+1} = (nbar/(1+nbar))^level
  return std::pow(nbar / (1.0 + nbar), level);
}

}  // namespace qreshape
