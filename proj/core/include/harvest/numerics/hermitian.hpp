#pragma once

#include <Eigen/Dense>
#include <complex>

namespace harvest::numerics {

using MatrixXc = Eigen::MatrixXcd;

// Eigenvalues of the Hermitian part of m in ascending order.
Eigen::VectorXd hermitian_eigenvalues(const MatrixXc& m);

// max |m - m^dagger| entrywise.
double hermiticity_error(const MatrixXc& m);

// Principal square root of a positive semidefinite Hermitian matrix; negative
// eigenvalues (round-off) are clamped to zero.
MatrixXc psd_sqrt(const MatrixXc& m);

}  // namespace harvest::numerics
