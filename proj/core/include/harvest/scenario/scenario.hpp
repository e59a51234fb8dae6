#pragma once

#include <array>
#include <string>
#include <vector>

#include "harvest/field/profile.hpp"

namespace harvest::scenario {

enum class Detector { A = 0, B = 1 };
enum class ScenarioKind { PF, CE, DS };
enum class WindowKind { delta, cosine };

struct DetectorParams {
  double gap = 1.0;        // Omega
  double coupling = 1.0;   // lambda
  field::SmearingProfile profile;
  std::array<double, 3> position{0.0, 0.0, 0.0};

  bool operator==(const DetectorParams&) const = default;
};

// delta: chi(t) = eta delta(t - center).
// cosine: chi(t) = cos(2 (t - center) / eta) for |t - center| <= pi eta / 4.
struct WindowSpec {
  WindowKind kind = WindowKind::delta;
  double eta = 1.0;
  double center = 0.0;

  double half_width() const;  // 0 for delta, pi eta / 4 for cosine
  bool operator==(const WindowSpec&) const = default;
};

struct ScenarioConfig {
  int spatial_dim = 3;
  ScenarioKind scenario = ScenarioKind::PF;
  DetectorParams A;
  DetectorParams B;
  // windows[D][i]: window of detector D in branch i.
  std::array<std::array<WindowSpec, 2>, 2> windows{};
  bool allow_unequal = false;

  const DetectorParams& detector(Detector d) const { return d == Detector::A ? A : B; }
  const WindowSpec& window(Detector d, int branch) const { return windows[static_cast<int>(d)][branch]; }
  double time(Detector d, int branch) const { return window(d, branch).center; }
  double separation() const;
  WindowKind window_kind() const { return windows[0][0].kind; }

  // Throws ConfigError/DomainError on inconsistent input (mixed window kinds,
  // unequal detectors without allow_unequal, bad dimension or profile).
  void validate() const;
  // The same four windows with detector B's branch labels exchanged. For a PF
  // time set this is the CE labelling and vice versa.
  ScenarioConfig with_b_branches_swapped() const;
};

// Offsets of the two-slice parametrization. PF: T_A0 = t0, T_B0 = t0 + delay,
// T_A1 = t0 + T, T_B1 = t0 + T + delay. CE pairs the slices crosswise:
// T_A0 = t0, T_B1 = t0 + delay, T_A1 = t0 + T, T_B0 = t0 + T + delay.
// DS uses the PF time set.
struct Geometry {
  double separation = 1.0;
  double delay = 0.0;          // delta
  double branch_offset = 1.0;  // T
  double start = 0.0;          // t0
};

ScenarioConfig make_config(ScenarioKind kind, int spatial_dim, const DetectorParams& detector, WindowKind window,
                           double eta, const Geometry& g);

enum class CausalRelation { spacelike_all_branches, timelike_some_branch, lightlike_touching, unclassifiable };

// Classifies every (A, i), (B, j) pair of activation regions using the
// profile support radii and window supports. Gaussian profiles have no
// compact support and give CausalRelation::unclassifiable.
CausalRelation causal_relation(const ScenarioConfig& config);

double window_value(const WindowSpec& w, double t);

struct ActivationEvent {
  Detector detector;
  int branch;
  double time;
  double coupling_scale;  // 1 for PF/CE branch events, 1/2 for the double switch
};

// Activation events per branch in time order. For PF/CE the result has two
// branches with two events each; for DS it has one branch holding all four
// events at half coupling.
std::vector<std::vector<ActivationEvent>> window_events(const ScenarioConfig& config);

// Checks T_A0 <= T_B0 <= T_A1 <= T_B1 (PF) or T_A0 <= T_B1 <= T_A1 <= T_B0
// (CE) and throws OrderingViolated naming the offending times.
void check_nonperturbative_ordering(const ScenarioConfig& config);

std::string to_string(ScenarioKind k);
std::string to_string(WindowKind k);
std::string to_string(CausalRelation c);
std::string to_string(Detector d);
ScenarioKind scenario_kind_from_string(const std::string& s);
WindowKind window_kind_from_string(const std::string& s);

}  // namespace harvest::scenario
