#pragma once

#include <string>

#include "harvest/density_matrix.hpp"
#include "harvest/perturbative/elements.hpp"

namespace harvest::perturbative {

enum class Treatment { trace, project_plus, project_minus, double_switch };

std::string to_string(Treatment t);
Treatment treatment_from_string(const std::string& s);

// 8x8 rho_ABC = 1/2 sum_ij block(i,j) (x) |i><j| with
//   block(i,j) = [[1 + Y_ii + Y_jj*, 0, 0, M_jj*],
//                 [0, P_B,ij, L_ji*, 0],
//                 [0, L_ij, P_A,ij, 0],
//                 [M_ii, 0, 0, 0]]
// in the AB basis (|00>, |01>, |10>, |11>). Accurate to O(lambda^2).
DensityMatrix assemble_rho_ABC(const PerturbativeElements& e);

// Control reduction of an 8x8 state: partial trace, or projection onto |+>
// or |-> followed by renormalization. Throws ZeroProbability if the projected
// trace vanishes.
DensityMatrix reduce_control(const DensityMatrix& rho_abc, Treatment treatment);
// Probability of the projection outcome (1 for the partial trace).
double control_outcome_probability(const DensityMatrix& rho_abc, Treatment treatment);

// Effective two-detector elements after a control treatment:
//   trace:         P = (P00 + P11)/2,        L = (L00 + L11)/2,  M = (M00 + M11)/2
//   project_plus:  P = (P00+P01+P10+P11)/4,  L likewise,         M = (M00 + M11)/2
//   double_switch: P, L as project_plus,      M = (M00 + M11 + M01 + M10)/4
struct ReducedElements {
  Estimate P_A;
  Estimate P_B;
  Estimate L;
  Estimate M;
};
ReducedElements reduce_elements(const PerturbativeElements& e, Treatment treatment);

// The O(lambda^2) two-detector state
//   [[1 - P_A - P_B, 0, 0, M*], [0, P_B, L*, 0], [0, L, P_A, 0], [M, 0, 0, 0]]
// with unit trace by construction.
DensityMatrix rho_AB_truncated(const ReducedElements& r);

// Double switch: each detector couples in both windows with half strength.
// Requires elements computed with include_cross = true.
DensityMatrix assemble_rho_DS(const PerturbativeElements& e);
DensityMatrix assemble_rho_DS(const ScenarioConfig& c, const ElementOptions& opt);

}  // namespace harvest::perturbative
