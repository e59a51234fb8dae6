#pragma once

#include <optional>

#include "harvest/density_matrix.hpp"
#include "harvest/numerics/quadrature.hpp"

namespace harvest::measures {

using numerics::cplx;

// Nonzero entries of an X-shaped two-qubit state (1-based labels, basis
// |00>, |01>, |10>, |11>).
struct XStateView {
  double r11 = 0, r22 = 0, r33 = 0, r44 = 0;
  cplx r14{}, r23{};

  // Returns nullopt unless every entry off the diagonal and anti-diagonal is
  // below tol in magnitude.
  static std::optional<XStateView> from(const DensityMatrix& rho, double tol = 1e-13);
};

// Throws NotAState unless rho is 4x4, Hermitian to 1e-12 and of unit trace to 1e-10.
void require_state(const DensityMatrix& rho);

// Wootters concurrence max(0, w1 - w2 - w3 - w4) from the spectrum of
// sqrt(rho) (sy x sy) rho* (sy x sy) sqrt(rho). On X-states the closed form is
// evaluated as well and the two must agree to 1e-10.
double concurrence(const DensityMatrix& rho);
// 2 max(0, |r14| - sqrt(r22 r33), |r23| - sqrt(r11 r44)).
double concurrence_x_state(const XStateView& x);

// Binary entropy h(x) in the given log base with 0 log 0 = 0.
double binary_entropy(double x, double base = 2.0);
double entanglement_of_formation_from_concurrence(double c, double base = 2.0);
double entanglement_of_formation(const DensityMatrix& rho, double base = 2.0);

// Mutual information of the perturbative state with local excitation
// probabilities P_A, P_B and coherence L:
//   I = L+ log L+ + L- log L- - P_A log P_A - P_B log P_B,
//   L+- = (P_A + P_B +- sqrt((P_A - P_B)^2 + 4|L|^2)) / 2.
// Throws DomainError if |L|^2 > P_A P_B beyond relative tolerance 1e-9.
double mutual_information(double P_A, double P_B, cplx L, double base = 2.0);
// S(rho_A) + S(rho_B) - S(rho) for any valid state (eigenvalues clamped at 0).
double mutual_information_exact(const DensityMatrix& rho, double base = 2.0);

// |M| - sqrt(P_A P_B); positive means the truncated state is entangled.
double nogo_margin(double P_A, double P_B, cplx M);
// Concurrence of the truncated perturbative state, 2 max(0, margin).
inline double concurrence_from_margin(double margin) { return margin > 0.0 ? 2.0 * margin : 0.0; }

}  // namespace harvest::measures
