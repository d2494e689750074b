#include "qreshape/channel.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qreshape {

double QuantumChannel::cptp_defect() const {
  CMat sum = CMat::Zero(dim_in, dim_in);
  for (const auto& k : kraus) sum += k.adjoint() * k;
  return max_abs_diff(sum, identity(dim_in));
}

bool QuantumChannel::is_cptp(double tol) const { return cptp_defect() < tol; }

QuantumChannel identity_channel(int d) {
  QuantumChannel ch;
  ch.dim_in = ch.dim_out = d;
  ch.kraus = {identity(d)};
  ch.canonical = true;
  return ch;
}

QuantumChannel unitary_channel(const CMat& u) {
  QuantumChannel ch;
  ch.dim_in = static_cast<int>(u.cols());
  ch.dim_out = static_cast<int>(u.rows());
  ch.kraus = {u};
  ch.canonical = true;
  return ch;
}

QuantumChannel bit_flip_channel(double p) {
  QuantumChannel ch;
  ch.dim_in = ch.dim_out = 2;
  ch.kraus = {std::sqrt(1.0 - p) * identity(2), std::sqrt(p) * pauli_x()};
  ch.canonical = true;
  return ch;
}

QuantumChannel phase_flip_channel(double p) {
  QuantumChannel ch;
  ch.dim_in = ch.dim_out = 2;
  ch.kraus = {std::sqrt(1.0 - p) * identity(2), std::sqrt(p) * pauli_z()};
  ch.canonical = true;
  return ch;
}

QuantumChannel depolarizing_channel(double p) {
  QuantumChannel ch;
  ch.dim_in = ch.dim_out = 2;
  ch.kraus = {std::sqrt(1.0 - p) * identity(2), std::sqrt(p / 3.0) * pauli_x(),
              std::sqrt(p / 3.0) * pauli_y(), std::sqrt(p / 3.0) * pauli_z()};
  ch.canonical = true;
  return ch;
}

CMat apply_channel(const QuantumChannel& ch, const CMat& rho) {
  CMat out = CMat::Zero(ch.dim_out, ch.dim_out);
  for (const auto& k : ch.kraus) out += k * rho * k.adjoint();
  return out;
}

DensityMatrix apply_channel(const QuantumChannel& ch, const DensityMatrix& rho) {
  DensityMatrix out = rho;
  out.m = apply_channel(ch, rho.m);
  return out;
}

QuantumChannel compose(const QuantumChannel& a, const QuantumChannel& b) {
  if (a.dim_in != b.dim_out) throw std::invalid_argument("compose: dim mismatch");
  QuantumChannel ch;
  ch.dim_in = b.dim_in;
  ch.dim_out = a.dim_out;
  for (const auto& ka : a.kraus)
    for (const auto& kb : b.kraus) ch.kraus.push_back(ka * kb);
  ch.canonical = false;
  return ch;
}

QuantumChannel tensor(const QuantumChannel& a, const QuantumChannel& b) {
  QuantumChannel ch;
  ch.dim_in = a.dim_in * b.dim_in;
  ch.dim_out = a.dim_out * b.dim_out;
  for (const auto& ka : a.kraus)
    for (const auto& kb : b.kraus) ch.kraus.push_back(kron(ka, kb));
  ch.canonical = false;
  return ch;
}

QuantumChannel conjugate_channel(const QuantumChannel& e, const CMat& u) {
  QuantumChannel ch;
  ch.dim_in = e.dim_in;
  ch.dim_out = e.dim_out;
  const CMat ud = u.adjoint();
  for (const auto& k : e.kraus) ch.kraus.push_back(u * k * ud);
  ch.canonical = e.canonical;
  return ch;
}

QuantumChannel lift_channel(const QuantumChannel& ch, const std::vector<int>& qubits,
                            int n_qubits) {
  QuantumChannel out;
  out.dim_in = out.dim_out = 1 << n_qubits;
  for (const auto& k : ch.kraus) {
    if (qubits.size() == 1)
      out.kraus.push_back(lift1(k, qubits[0], n_qubits));
    else if (qubits.size() == 2)
      out.kraus.push_back(lift2(k, qubits[0], qubits[1], n_qubits));
    else
      throw std::invalid_argument("lift_channel: 1 or 2 qubits supported");
  }
  out.canonical = false;
  return out;
}

ChoiMatrix choi_of(const std::function<CMat(const CMat&)>& map, int dim_in) {
  ChoiMatrix c;
  c.dim_in = dim_in;
  CMat probe = CMat::Zero(dim_in, dim_in);
  probe(0, 0) = 1.0;
  CMat first = map(probe);
  probe(0, 0) = 0.0;
  c.dim_out = static_cast<int>(first.rows());
  c.matrix = CMat::Zero(c.dim_out * dim_in, c.dim_out * dim_in);
  for (int i = 0; i < dim_in; ++i)
    for (int j = 0; j < dim_in; ++j) {
      CMat eij = CMat::Zero(dim_in, dim_in);
      eij(i, j) = 1.0;
      const CMat img = (i == 0 && j == 0) ? first : map(eij);
      // C += E(|i><j|) (x) |i><j|  (output factor first)
      for (int a = 0; a < c.dim_out; ++a)
        for (int b = 0; b < c.dim_out; ++b)
          c.matrix(a * dim_in + i, b * dim_in + j) += img(a, b);
    }
  return c;
}

ChoiMatrix choi_of(const QuantumChannel& ch) {
  return choi_of([&ch](const CMat& x) { return apply_channel(ch, x); }, ch.dim_in);
}

QuantumChannel canonical_kraus(const ChoiMatrix& choi, double cutoff, double psd_tol) {
  const CMat& c = choi.matrix;
  if (!is_hermitian(c, 1e-8))
    throw std::invalid_argument("canonical_kraus: Choi not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMat> es(c);
  const auto& vals = es.eigenvalues();
  if (vals.minCoeff() < -psd_tol)
    throw std::invalid_argument("canonical_kraus: Choi not PSD (min eig " +
                                std::to_string(vals.minCoeff()) + ")");
  struct Pair {
    double val;
    CVec vec;
  };
  std::vector<Pair> pairs;
  for (int k = 0; k < vals.size(); ++k)
    if (vals(k) > cutoff) pairs.push_back({vals(k), es.eigenvectors().col(k)});
  std::sort(pairs.begin(), pairs.end(),
            [](const Pair& a, const Pair& b) { return a.val > b.val; });

  QuantumChannel ch;
  ch.dim_in = choi.dim_in;
  ch.dim_out = choi.dim_out;
  for (const auto& pr : pairs) {
    // Choi index (a, i): vec component (a*din + i) = K(a, i) under the
    // row-major unvec with rows = dim_out, cols = dim_in.
    CMat k = std::sqrt(pr.val) * unvec_rowmajor(pr.vec, choi.dim_out, choi.dim_in);
    // Phase fix: largest-magnitude entry (lowest row-major index on ties)
    // made real positive.
    int bi = 0, bj = 0;
    double best = -1.0;
    for (int i = 0; i < k.rows(); ++i)
      for (int j = 0; j < k.cols(); ++j)
        if (std::abs(k(i, j)) > best + 1e-15) {
          best = std::abs(k(i, j));
          bi = i;
          bj = j;
        }
    if (best > 0) k *= std::polar(1.0, -std::arg(k(bi, bj)));
    ch.kraus.push_back(std::move(k));
  }
  ch.canonical = true;
  return ch;
}

std::vector<double> choi_spectrum(const ChoiMatrix& choi) {
  Eigen::SelfAdjointEigenSolver<CMat> es(choi.matrix);
  std::vector<double> out(es.eigenvalues().data(),
                          es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(out.begin(), out.end(), std::greater<double>());
  return out;
}

double choi_distance(const QuantumChannel& a, const QuantumChannel& b) {
  return max_abs_diff(choi_of(a).matrix, choi_of(b).matrix);
}

}  // namespace qreshape
