#pragma once

#include <array>
#include <complex>
#include <map>
#include <mutex>
#include <tuple>

#include "harvest/field/correlator.hpp"
#include "harvest/numerics/quadrature.hpp"
#include "harvest/scenario/scenario.hpp"

namespace harvest::perturbative {

using numerics::cplx;
using scenario::Detector;
using scenario::ScenarioConfig;

// A value with an absolute error bound inherited from quadrature.
struct Estimate {
  cplx value{};
  double error = 0.0;
};

struct ElementOptions {
  numerics::QuadratureSpec spec;
  // Base of the i-epsilon ladder for the cosine-window position-space
  // integrals, in units of eta.
  double epsilon = 1e-3;
};

// Second-order matrix elements, indexed by control branch.
struct PerturbativeElements {
  std::array<std::array<Estimate, 2>, 2> P_A{};
  std::array<std::array<Estimate, 2>, 2> P_B{};
  std::array<std::array<Estimate, 2>, 2> L{};
  std::array<Estimate, 2> Y{};
  std::array<Estimate, 2> M{};
  // M_01 and M_10: detector A in window i, B in window j, i != j. Needed by
  // the double switch only.
  std::array<Estimate, 2> M_cross{};
  bool has_cross = false;

  const std::array<std::array<Estimate, 2>, 2>& P(Detector d) const { return d == Detector::A ? P_A : P_B; }
};

// Memo of smeared Wightman kernels keyed by (profiles, tau, r); shared by the
// element functions of one configuration.
class KernelCache {
 public:
  Estimate kernel(int spatial_dim, const field::SmearingProfile& a, const field::SmearingProfile& b, double tau,
                  double r, const numerics::QuadratureSpec& spec);

 private:
  using Key = std::tuple<int, int, double, int, double, double, double>;
  std::map<Key, Estimate> memo_;
  std::mutex mutex_;
};

// P_{D,ij} = lambda^2 int dt dt' chi_i(t) chi_j(t') <phi(t') phi(t)> e^{i Omega (t - t')}
Estimate element_P(const ScenarioConfig& c, Detector d, int i, int j, const ElementOptions& opt,
                   KernelCache* cache = nullptr);
// L_{AB,ij} = lambda_A lambda_B int dt dt' chi_{A,i}(t) chi_{B,j}(t') <phi_B(t') phi_A(t)> e^{i Omega_A t - i Omega_B t'}
Estimate element_L(const ScenarioConfig& c, int i, int j, const ElementOptions& opt, KernelCache* cache = nullptr);
// Y_ii. For cosine windows the imaginary part is set to zero: it is UV
// divergent for pointlike detectors, equal in both branches for equal window
// shapes, and cancels in every control reduction.
Estimate element_Y(const ScenarioConfig& c, int i, const ElementOptions& opt, KernelCache* cache = nullptr);
// Time-ordered pair term with detector A in window i and B in window j;
// element_M(c, i) is the diagonal M_ii.
Estimate element_M_pair(const ScenarioConfig& c, int i, int j, const ElementOptions& opt,
                        KernelCache* cache = nullptr);
inline Estimate element_M(const ScenarioConfig& c, int i, const ElementOptions& opt, KernelCache* cache = nullptr) {
  return element_M_pair(c, i, i, opt, cache);
}

PerturbativeElements compute_elements(const ScenarioConfig& c, const ElementOptions& opt, bool include_cross = false);

// Cosine-window, pointlike, 3+1 position-space helpers (exposed for tests).
// Ordered double integral
//   int dt_A dt_B chi_A(t_A) chi_B(t_B) e^{i(Omega_A t_A + Omega_B t_B)} W(s, |t_A - t_B|; eps)
// at a single eps, reduced to one dimension in u = t_A - t_B.
Estimate cosine_ordered_pair(const scenario::WindowSpec& a, double gap_a, const scenario::WindowSpec& b,
                             double gap_b, double s, double eps, const numerics::QuadratureSpec& spec);
// The same at eps -> 0 by Richardson extrapolation over {eps, eps/2, eps/4}.
Estimate cosine_ordered_pair_limit(const scenario::WindowSpec& a, double gap_a, const scenario::WindowSpec& b,
                                   double gap_b, double s, double eps0, const numerics::QuadratureSpec& spec);
// Unordered int dt dt' chi_a(t) chi_b(t') e^{i Omega_a t - i Omega_b t'} W(s, t' - t; eps), Richardson-extrapolated.
Estimate cosine_unordered_pair_limit(const scenario::WindowSpec& a, double gap_a, const scenario::WindowSpec& b,
                                     double gap_b, double s, double eps0, const numerics::QuadratureSpec& spec);

}  // namespace harvest::perturbative
