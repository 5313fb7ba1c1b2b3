#pragma once

#include <Eigen/Dense>

namespace isofield {

double min_eigenvalue(const Eigen::MatrixXd& C);

// A with C = A A^T. Eigenvalues in [-tol * max(1, lambda_max), 0) are clamped to zero; more
// negative ones raise a numerical error. Rows and columns of C that are exactly zero give exactly
// zero rows of A.
Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& C, double tol = 1e-9);

}  // namespace isofield
