#pragma once

#include <array>
#include <complex>
#include <utility>

#include "harvest/density_matrix.hpp"
#include "harvest/numerics/quadrature.hpp"
#include "harvest/scenario/scenario.hpp"

namespace harvest::nonperturbative {

using numerics::cplx;
using scenario::Detector;
using scenario::ScenarioConfig;

// Activation events are indexed e = 2 * detector + branch: A0, A1, B0, B1.
inline int event_index(Detector d, int branch) { return 2 * static_cast<int>(d) + branch; }

// Exact delta-window building blocks. With beta_e the coefficient of a_k^dagger
// in the kick generator of event e,
//   overlap[a][b] = <beta_a, beta_b> = lambda_a lambda_b eta_a eta_b K(T_a - T_b, r_ab)
//   Theta[a][b]   = -2 Im overlap[a][b]    (antisymmetric)
//   omega[a][b]   = -Re overlap[a][b]      (symmetric)
//   f[a]          = exp(-overlap[a][a] / 2)
// so that i Theta/2 + omega = -<beta_a, beta_b>.
struct NonPerturbativeElements {
  std::array<double, 4> f{};
  std::array<std::array<double, 4>, 4> Theta{};
  std::array<std::array<double, 4>, 4> omega{};
  std::array<std::array<cplx, 4>, 4> overlap{};
  std::array<double, 4> time{};
  std::array<double, 4> gap{};
  double max_error = 0.0;  // largest quadrature error over the overlaps
};

struct ExactOptions {
  numerics::QuadratureSpec spec;
  // Multiplies every Theta entering the printed sign lattice. Only the
  // verification mutation test sets this to -1.
  double theta_sign = 1.0;
};

// (Theta_{D,i;E,j}, omega_{D,i;E,j}) for one pair of events.
std::pair<double, double> overlap_integrals(const ScenarioConfig& c, Detector d, int i, Detector e, int j,
                                            const numerics::QuadratureSpec& spec);

NonPerturbativeElements compute_overlaps(const ScenarioConfig& c, const numerics::QuadratureSpec& spec);

// 8x8 rho_ABC from the explicit 2^4 x 2^4 sign lattice per control cell,
// evaluated in extended precision. PF requires T_A0 <= T_B0 <= T_A1 <= T_B1,
// CE requires T_A0 <= T_B1 <= T_A1 <= T_B0 (OrderingViolated otherwise).
DensityMatrix assemble_rho_PF(const ScenarioConfig& c, const ExactOptions& opt);
DensityMatrix assemble_rho_CE(const ScenarioConfig& c, const ExactOptions& opt);
DensityMatrix assemble_rho_PF(const NonPerturbativeElements& e, double theta_sign = 1.0);
DensityMatrix assemble_rho_CE(const NonPerturbativeElements& e, double theta_sign = 1.0);
// Dispatch on c.scenario (PF or CE).
DensityMatrix assemble_rho_exact(const ScenarioConfig& c, const ExactOptions& opt);

// Independent route: expand every kick as (1 + sigma mu)/2 e^{sigma X} and
// evaluate the vacuum expectation of the resulting product of displacement
// operators. Works for any time order within a branch.
DensityMatrix assemble_rho_weyl(const ScenarioConfig& c, const NonPerturbativeElements& e);
// Exact AB state with the control prepared in |branch> (no superposition).
DensityMatrix branch_state(const ScenarioConfig& c, const NonPerturbativeElements& e, int branch);

}  // namespace harvest::nonperturbative
