#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "cascade/basis.hpp"
#include "cascade/params.hpp"

namespace cascade {

enum class Frame { Lab, SW };

const char* frame_name(Frame f);

// Pure vector or density matrix on a basis, tagged with its frame.
struct QuantumState {
  std::uint64_t basis_id = 0;
  Frame frame = Frame::Lab;
  bool pure = true;
  Eigen::VectorXcd psi;
  Eigen::MatrixXcd rho;

  static QuantumState from_vector(const FockBasis& basis, Eigen::VectorXcd v,
                                  Frame frame = Frame::Lab);
  static QuantumState from_density(const FockBasis& basis, Eigen::MatrixXcd r,
                                   Frame frame = Frame::Lab);

  Eigen::Index dim() const { return pure ? psi.size() : rho.rows(); }
  Eigen::MatrixXcd density() const;
  // |1 - norm| or |1 - trace|.
  double normalization_error() const;
  void check(double tol = 1e-9) const;
  cplx expectation(const Eigen::SparseMatrix<cplx>& op) const;
  // <left^dagger right>.
  cplx correlation(const Eigen::SparseMatrix<cplx>& left,
                   const Eigen::SparseMatrix<cplx>& right) const;
};

// Fock state from an occupation vector over grid modes.
QuantumState fock_state(const FockBasis& basis, const std::vector<int>& occ);

// Product of coherent states (amplitude per mode id) projected on the basis
// and renormalized. `kept_weight` receives the norm before renormalizing.
QuantumState coherent_state(const FockBasis& basis,
                            const std::vector<std::pair<int, cplx>>& amplitudes,
                            double* kept_weight = nullptr);

}  // namespace cascade
