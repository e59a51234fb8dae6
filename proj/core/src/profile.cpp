#include "harvest/field/profile.hpp"

#include <cmath>
#include <limits>

#include "harvest/error.hpp"

namespace harvest::field {

double SmearingProfile::support_radius() const {
  switch (kind) {
    case ProfileKind::pointlike: return 0.0;
    case ProfileKind::gaussian: return std::numeric_limits<double>::infinity();
    default: return width;
  }
}

void SmearingProfile::validate(int spatial_dim) const {
  if (kind == ProfileKind::pointlike) return;
  if (!(width > 0.0) || !std::isfinite(width))
    throw DomainError(to_string(kind) + " profile needs a positive finite width");
  if (kind == ProfileKind::uniform_disk && spatial_dim != 2)
    throw DomainError("uniform_disk profile is only defined for n = 2");
  if (kind == ProfileKind::uniform_ball && spatial_dim != 3)
    throw DomainError("uniform_ball profile is only defined for n = 3");
}

double SmearingProfile::density(double r, int n) const {
  switch (kind) {
    case ProfileKind::pointlike: return 0.0;
    case ProfileKind::gaussian: return std::exp(-r * r / (width * width)) / std::pow(width * std::sqrt(M_PI), n);
    case ProfileKind::uniform_disk: return r <= width ? 1.0 / (M_PI * width * width) : 0.0;
    case ProfileKind::uniform_ball: return r <= width ? 3.0 / (4.0 * M_PI * width * width * width) : 0.0;
  }
  return 0.0;
}

std::string to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::pointlike: return "pointlike";
    case ProfileKind::gaussian: return "gaussian";
    case ProfileKind::uniform_disk: return "uniform_disk";
    case ProfileKind::uniform_ball: return "uniform_ball";
  }
  return "?";
}

ProfileKind profile_kind_from_string(const std::string& s) {
  if (s == "pointlike") return ProfileKind::pointlike;
  if (s == "gaussian") return ProfileKind::gaussian;
  if (s == "uniform_disk" || s == "disk") return ProfileKind::uniform_disk;
  if (s == "uniform_ball" || s == "ball") return ProfileKind::uniform_ball;
  throw DomainError("unknown profile kind '" + s + "'");
}

double fourier_profile(const SmearingProfile& p, double k) {
  const double x = std::abs(k) * p.width;
  switch (p.kind) {
    case ProfileKind::pointlike: return 1.0;
    case ProfileKind::gaussian: return std::exp(-0.25 * x * x);
    case ProfileKind::uniform_disk:
      if (x < 1e-4) return 1.0 - x * x / 8.0;
      return 2.0 * std::cyl_bessel_j(1.0, x) / x;
    case ProfileKind::uniform_ball: {
      if (x < 0.05) {
        const double x2 = x * x;
        return 1.0 - x2 / 10.0 + x2 * x2 / 280.0 - x2 * x2 * x2 / 15120.0;
      }
      return 3.0 * (std::sin(x) - x * std::cos(x)) / (x * x * x);
    }
  }
  return 0.0;
}

}  // namespace harvest::field
