#pragma once

#include <complex>
#include <variant>

#include "harvest/field/profile.hpp"
#include "harvest/numerics/quadrature.hpp"

namespace harvest::field {

using numerics::cplx;

// Mode expansion
//   phi(x,t) = int d^n k (2pi)^{-n/2} (2|k|)^{-1/2} (a_k e^{i k.x - i|k|t} + h.c.)
// so every smeared two-point integral carries (2pi)^{-n}.
struct FieldConvention {
  int spatial_dim = 3;
  // Base of the i-epsilon ladder {eps, eps/2, eps/4}, in units of the window width.
  double epsilon = 1e-3;

  double momentum_measure_normalization() const;
  // (2pi)^{-n} times the area of the unit (n-1)-sphere: the factor left after
  // the angular integral, c_3 = 1/(2 pi^2), c_2 = 1/(2 pi).
  double radial_prefactor() const;
  void validate() const;
};

// Weight catalog for the radial integral, as functions of |k|.
struct UnitWeight {};
// exp(-i |k| delay)
struct PlaneWaveWeight {
  double delay = 0.0;
};
// cos((|k| + gap) delay)
struct CosineShiftWeight {
  double gap = 0.0;
  double delay = 0.0;
};
// chi_a(|k| + gap_a) * conj(chi_b(|k| + gap_b)) for cosine windows, with
// chi(nu) = int dt chi(t) e^{i nu t}.
struct WindowSpectrumWeight {
  double gap_a = 0.0, center_a = 0.0, eta_a = 1.0;
  double gap_b = 0.0, center_b = 0.0, eta_b = 1.0;
};
using MomentumWeight = std::variant<UnitWeight, PlaneWaveWeight, CosineShiftWeight, WindowSpectrumWeight>;

struct MomentumIntegral {
  int spatial_dim = 3;
  SmearingProfile profile_a;
  SmearingProfile profile_b;
  double separation = 0.0;  // |x_a - x_b|
  MomentumWeight weight = UnitWeight{};
};

// int d^n k (2pi)^{-n} S_a(k) S_b(k) / (2|k|) e^{i k.(x_a - x_b)} w(|k|)
// The angular integral is done analytically (sinc for n = 3, J0 for n = 2)
// and the remaining radial integral is split into a body and, for slowly
// decaying integrands, oscillatory tail terms integrated by half-period
// partition with epsilon acceleration.
// Throws UVDivergent when the integrand does not decay (pointlike delta
// switching) and NonConvergence when the budget is exhausted.
numerics::QuadratureResult smeared_momentum_integral(const MomentumIntegral& request,
                                                     const numerics::QuadratureSpec& spec);

// Smeared Wightman kernel K(tau, r) = <phi_a(t + tau) phi_b(t)>, profiles a
// at distance r from b.
numerics::QuadratureResult wightman_kernel(int spatial_dim, const SmearingProfile& a, const SmearingProfile& b,
                                           double tau, double r, const numerics::QuadratureSpec& spec);

// Massless 3+1 vacuum two-point function (1/4pi^2) / (dx^2 - (dt - i eps)^2).
// Throws DomainError on the light cone with eps = 0.
cplx pointlike_wightman(double dx, double dt, double eps);

// Fourier transform int dt chi(t) e^{i nu t} of the cosine window of width eta
// centred at t = 0: 2b cos(nu a) / (b^2 - nu^2), b = 2/eta, a = pi eta / 4.
double cosine_window_transform(double eta, double nu);

}  // namespace harvest::field
