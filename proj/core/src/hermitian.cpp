#include "harvest/numerics/hermitian.hpp"

#include <algorithm>

namespace harvest::numerics {

Eigen::VectorXd hermitian_eigenvalues(const MatrixXc& m) {
  const MatrixXc h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<MatrixXc> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double hermiticity_error(const MatrixXc& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

MatrixXc psd_sqrt(const MatrixXc& m) {
  const MatrixXc h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<MatrixXc> solver(h);
  Eigen::VectorXd ev = solver.eigenvalues();
  for (int i = 0; i < ev.size(); ++i) ev[i] = std::sqrt(std::max(0.0, ev[i]));
  return solver.eigenvectors() * ev.asDiagonal() * solver.eigenvectors().adjoint();
}

}  // namespace harvest::numerics
