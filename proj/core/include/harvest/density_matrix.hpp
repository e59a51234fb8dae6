#pragma once

#include <string>

#include "harvest/numerics/hermitian.hpp"

namespace harvest {

using numerics::MatrixXc;

// Basis conventions. Two-qubit AB states use |a b> with index 2a + b, i.e.
// rows (|00>, |01>, |10>, |11>) where 0 is the ground state. Three-qubit
// states append the control qubit: index 4a + 2b + c.
struct DensityMatrix {
  int dim = 4;
  MatrixXc entries = MatrixXc::Zero(4, 4);
  bool normalized = false;

  DensityMatrix() = default;
  DensityMatrix(MatrixXc m, bool is_normalized) : dim(static_cast<int>(m.rows())), entries(std::move(m)), normalized(is_normalized) {}

  std::complex<double> trace() const { return entries.trace(); }
  double hermiticity_error() const { return numerics::hermiticity_error(entries); }
  double min_eigenvalue() const { return numerics::hermitian_eigenvalues(entries).minCoeff(); }
  std::string basis_label() const;
};

}  // namespace harvest
