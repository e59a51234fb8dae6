#pragma once

#include <random>

#include "harvest/scenario/scenario.hpp"

namespace harvest::testing {

inline scenario::ScenarioConfig delta_config(scenario::ScenarioKind kind, int n, field::SmearingProfile prof, double gap,
                                             double lambda, double s, double T, double delay = 0.0) {
  scenario::DetectorParams d;
  d.gap = gap;
  d.coupling = lambda;
  d.profile = prof;
  scenario::Geometry g;
  g.separation = s;
  g.branch_offset = T;
  g.delay = delay;
  return scenario::make_config(kind, n, d, scenario::WindowKind::delta, 1.0, g);
}

inline scenario::ScenarioConfig cosine_config(scenario::ScenarioKind kind, double gap, double eta, double s, double T,
                                              double delay = 0.0) {
  scenario::DetectorParams d;
  d.gap = gap;
  d.coupling = 1.0;
  d.profile = field::SmearingProfile::pointlike();
  scenario::Geometry g;
  g.separation = s;
  g.branch_offset = T;
  g.delay = delay;
  return scenario::make_config(kind, 3, d, scenario::WindowKind::cosine, eta, g);
}

struct Uniform {
  std::mt19937_64 rng;
  explicit Uniform(std::uint64_t seed) : rng(seed) {}
  double operator()(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
};

}  // namespace harvest::testing
