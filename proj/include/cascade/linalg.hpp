#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "cascade/params.hpp"

namespace cascade {

// exp(t A) applied to the columns of X by scaled truncated Taylor series.
Eigen::MatrixXcd expm_action(const Eigen::SparseMatrix<cplx>& A,
                             const Eigen::MatrixXcd& X, cplx t = 1.0);

double one_norm(const Eigen::SparseMatrix<cplx>& A);

}  // namespace cascade
