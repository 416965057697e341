#include "cascade/linalg.hpp"

#include <cmath>

namespace cascade {

double one_norm(const Eigen::SparseMatrix<cplx>& A) {
  Eigen::VectorXd col = Eigen::VectorXd::Zero(A.cols());
  for (int k = 0; k < A.outerSize(); ++k) {
    for (Eigen::SparseMatrix<cplx>::InnerIterator it(A, k); it; ++it) {
      col(it.col()) += std::abs(it.value());
    }
  }
  return col.size() ? col.maxCoeff() : 0.0;
}

Eigen::MatrixXcd expm_action(const Eigen::SparseMatrix<cplx>& A,
                             const Eigen::MatrixXcd& X, cplx t) {
  const double norm = one_norm(A) * std::abs(t);
  const int steps = std::max(1, static_cast<int>(std::ceil(norm)));
  const cplx h = t / static_cast<double>(steps);
  Eigen::MatrixXcd y = X;
  for (int s = 0; s < steps; ++s) {
    Eigen::MatrixXcd term = y;
    Eigen::MatrixXcd sum = y;
    const double scale = std::max(y.norm(), 1e-300);
    for (int k = 1; k < 60; ++k) {
      term = (h / static_cast<double>(k)) * (A * term);
      sum += term;
      if (term.norm() < 1e-18 * scale) break;
    }
    y = std::move(sum);
  }
  return y;
}

}  // namespace cascade
