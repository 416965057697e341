#include "cascade/state.hpp"

#include <cmath>

#include "cascade/error.hpp"

namespace cascade {

const char* frame_name(Frame f) { return f == Frame::Lab ? "lab" : "sw"; }

QuantumState QuantumState::from_vector(const FockBasis& basis,
                                       Eigen::VectorXcd v, Frame frame) {
  if (v.size() != static_cast<Eigen::Index>(basis.dim())) {
    fail(ErrorKind::InvalidArgument, "state vector size does not match basis");
  }
  QuantumState s;
  s.basis_id = basis.id();
  s.frame = frame;
  s.pure = true;
  s.psi = std::move(v);
  return s;
}

QuantumState QuantumState::from_density(const FockBasis& basis,
                                        Eigen::MatrixXcd r, Frame frame) {
  const auto n = static_cast<Eigen::Index>(basis.dim());
  if (r.rows() != n || r.cols() != n) {
    fail(ErrorKind::InvalidArgument, "density matrix size does not match basis");
  }
  QuantumState s;
  s.basis_id = basis.id();
  s.frame = frame;
  s.pure = false;
  s.rho = std::move(r);
  return s;
}

Eigen::MatrixXcd QuantumState::density() const {
  return pure ? Eigen::MatrixXcd(psi * psi.adjoint()) : rho;
}

double QuantumState::normalization_error() const {
  return pure ? std::abs(1.0 - psi.norm()) : std::abs(1.0 - rho.trace());
}

void QuantumState::check(double tol) const {
  if (normalization_error() > tol) {
    fail(ErrorKind::Numerical, "state normalization drifted beyond tolerance");
  }
  if (!pure && (rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) {
    fail(ErrorKind::Numerical, "density matrix is not Hermitian");
  }
}

cplx QuantumState::expectation(const Eigen::SparseMatrix<cplx>& op) const {
  if (pure) return psi.dot(op * psi);
  return (op * rho).trace();
}

cplx QuantumState::correlation(const Eigen::SparseMatrix<cplx>& left,
                               const Eigen::SparseMatrix<cplx>& right) const {
  if (pure) {
    const Eigen::VectorXcd l = left * psi;
    const Eigen::VectorXcd r = right * psi;
    return l.dot(r);
  }
  // Tr[right rho left^dagger]
  const Eigen::MatrixXcd rr = right * rho;
  const Eigen::SparseMatrix<cplx> ld = left.adjoint();
  return (rr * ld).trace();
}

QuantumState fock_state(const FockBasis& basis, const std::vector<int>& occ) {
  const auto i = basis.find_occupations(occ);
  if (i < 0) fail(ErrorKind::InvalidArgument, "Fock state not in basis");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(basis.dim());
  v(i) = 1.0;
  return QuantumState::from_vector(basis, std::move(v));
}

QuantumState coherent_state(const FockBasis& basis,
                            const std::vector<std::pair<int, cplx>>& amplitudes,
                            double* kept_weight) {
  std::vector<cplx> alpha(basis.grid().n_modes(), cplx(0.0, 0.0));
  double total = 0.0;
  for (const auto& [mode, a] : amplitudes) {
    if (mode < 0 || mode >= basis.grid().n_modes()) {
      fail(ErrorKind::InvalidArgument, "coherent amplitude on unknown mode");
    }
    alpha[mode] += a;
  }
  for (const auto& a : alpha) total += std::norm(a);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(basis.dim());
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    cplx amp = std::exp(-total / 2.0);
    const auto occ = basis.occupations(i);
    for (std::size_t m = 0; m < occ.size(); ++m) {
      if (occ[m] == 0) continue;
      amp *= std::pow(alpha[m], occ[m]) / std::sqrt(std::tgamma(occ[m] + 1.0));
    }
    v(i) = amp;
  }
  const double n = v.norm();
  if (kept_weight) *kept_weight = n * n;
  if (n == 0.0) fail(ErrorKind::InvalidArgument, "coherent state has no support");
  return QuantumState::from_vector(basis, v / n);
}

}  // namespace cascade
