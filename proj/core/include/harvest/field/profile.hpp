#pragma once

#include <string>

namespace harvest::field {

enum class ProfileKind { pointlike, gaussian, uniform_disk, uniform_ball };

// Spatial smearing S(x) of a detector, normalized so that its integral is 1.
// width is the Gaussian width sigma in S ~ exp(-(x/sigma)^2), or the radius of
// the disk/ball.
struct SmearingProfile {
  ProfileKind kind = ProfileKind::pointlike;
  double width = 0.0;

  static SmearingProfile pointlike() { return {ProfileKind::pointlike, 0.0}; }
  static SmearingProfile gaussian(double sigma) { return {ProfileKind::gaussian, sigma}; }
  static SmearingProfile uniform_disk(double radius) { return {ProfileKind::uniform_disk, radius}; }
  static SmearingProfile uniform_ball(double radius) { return {ProfileKind::uniform_ball, radius}; }

  bool compact() const { return kind != ProfileKind::gaussian; }
  // 0 for pointlike, the radius for disk/ball, +inf for Gaussian.
  double support_radius() const;
  // Throws DomainError for a non-positive width or a disk/ball in the wrong dimension.
  void validate(int spatial_dim) const;
  // Position-space density S(r) at distance r from the centre (pointlike: not defined, returns 0).
  double density(double r, int spatial_dim) const;

  bool operator==(const SmearingProfile&) const = default;
};

std::string to_string(ProfileKind kind);
ProfileKind profile_kind_from_string(const std::string& s);

// Fourier transform of S at wavenumber |k|: all supported profiles are
// radially symmetric, real and normalized to 1 at k = 0.
double fourier_profile(const SmearingProfile& profile, double k);

}  // namespace harvest::field
