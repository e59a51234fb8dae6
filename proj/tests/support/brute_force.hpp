#pragma once

// Full-dimension momentum cubature of the smeared Wightman kernel, used as an
// oracle for the radial reduction. No angular integral is done analytically.

#include <cmath>
#include <complex>
#include <vector>

#include "harvest/field/profile.hpp"

namespace harvest::testing {

struct GaussLegendre {
  std::vector<double> x, w;
  GaussLegendre(int n, double a, double b) : x(n), w(n) {
    for (int i = 0; i < n; ++i) {
      double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        const double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      x[i] = 0.5 * (a + b) + 0.5 * (b - a) * z;
      w[i] = (b - a) / ((1.0 - z * z) * dp * dp);
    }
  }
};

// K(tau, r_vec) = int d^n k / (2 pi)^n  S_a(k) S_b(k) / (2|k|) e^{i k.r - i|k| tau}
// for Gaussian smearing, r_vec = (rx, ry, rz) (rz ignored in n = 2).
inline std::complex<double> brute_force_kernel(int n, double sigma, double tau, const double r[3], int nk = 160,
                                               int nang = 64) {
  const double cutoff = std::sqrt(2.0 * 40.0) / sigma;  // e^{-k^2 sigma^2 / 2} < e^{-40}
  // Split k into panels so that oscillations in tau and |r| stay resolved.
  const double rr = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
  const int panels = 1 + static_cast<int>(cutoff * (std::abs(tau) + rr) / M_PI);
  std::complex<double> total = 0.0;
  const auto prof = field::SmearingProfile::gaussian(sigma);
  GaussLegendre phi(nang, 0.0, 2.0 * M_PI);
  for (int p = 0; p < panels; ++p) {
    GaussLegendre kq(nk / panels + 24, cutoff * p / panels, cutoff * (p + 1) / panels);
    for (std::size_t ik = 0; ik < kq.x.size(); ++ik) {
      const double k = kq.x[ik];
      const double s = field::fourier_profile(prof, k);
      const std::complex<double> radial = kq.w[ik] * s * s / (2.0 * k) * std::exp(std::complex<double>(0.0, -k * tau));
      std::complex<double> ang = 0.0;
      if (n == 3) {
        GaussLegendre th(nang, 0.0, M_PI);
        for (std::size_t it = 0; it < th.x.size(); ++it) {
          const double st = std::sin(th.x[it]), ct = std::cos(th.x[it]);
          for (std::size_t ip = 0; ip < phi.x.size(); ++ip) {
            const double kx = k * st * std::cos(phi.x[ip]), ky = k * st * std::sin(phi.x[ip]), kz = k * ct;
            ang += th.w[it] * phi.w[ip] * st * std::exp(std::complex<double>(0.0, kx * r[0] + ky * r[1] + kz * r[2]));
          }
        }
        total += radial * k * k * ang / std::pow(2.0 * M_PI, 3);
      } else {
        for (std::size_t ip = 0; ip < phi.x.size(); ++ip) {
          const double kx = k * std::cos(phi.x[ip]), ky = k * std::sin(phi.x[ip]);
          ang += phi.w[ip] * std::exp(std::complex<double>(0.0, kx * r[0] + ky * r[1]));
        }
        total += radial * k * ang / std::pow(2.0 * M_PI, 2);
      }
    }
  }
  return total;
}

}  // namespace harvest::testing
