#include "harvest/scenario/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "harvest/error.hpp"

namespace harvest::scenario {

double WindowSpec::half_width() const { return kind == WindowKind::delta ? 0.0 : M_PI * eta / 4.0; }

double ScenarioConfig::separation() const {
  double s2 = 0.0;
  for (int k = 0; k < 3; ++k) s2 += (A.position[k] - B.position[k]) * (A.position[k] - B.position[k]);
  return std::sqrt(s2);
}

void ScenarioConfig::validate() const {
  if (spatial_dim != 2 && spatial_dim != 3) throw ConfigError("dimension must be 2 or 3");
  for (const DetectorParams* d : {&A, &B}) {
    d->profile.validate(spatial_dim);
    if (!(d->coupling >= 0.0) || !std::isfinite(d->coupling)) throw ConfigError("coupling must be finite and >= 0");
    if (!std::isfinite(d->gap)) throw ConfigError("gap must be finite");
    if (spatial_dim == 2 && d->position[2] != 0.0) throw ConfigError("n = 2 positions must have zero z component");
  }
  if (!allow_unequal && (A.gap != B.gap || A.coupling != B.coupling || !(A.profile == B.profile)))
    throw ConfigError("detectors A and B differ; set allow_unequal to permit this");
  const WindowKind kind = windows[0][0].kind;
  for (const auto& per_detector : windows) {
    for (const auto& w : per_detector) {
      if (w.kind != kind) throw ConfigError("all four windows must be of the same kind");
      if (!(w.eta > 0.0) || !std::isfinite(w.eta)) throw ConfigError("window eta must be finite and > 0");
      if (!std::isfinite(w.center)) throw ConfigError("window centre must be finite");
    }
  }
}

ScenarioConfig ScenarioConfig::with_b_branches_swapped() const {
  ScenarioConfig c = *this;
  std::swap(c.windows[1][0], c.windows[1][1]);
  if (c.scenario == ScenarioKind::PF) {
    c.scenario = ScenarioKind::CE;
  } else if (c.scenario == ScenarioKind::CE) {
    c.scenario = ScenarioKind::PF;
  }
  return c;
}

ScenarioConfig make_config(ScenarioKind kind, int spatial_dim, const DetectorParams& detector, WindowKind window,
                           double eta, const Geometry& g) {
  ScenarioConfig c;
  c.spatial_dim = spatial_dim;
  c.scenario = kind;
  c.A = detector;
  c.B = detector;
  c.A.position = {0.0, 0.0, 0.0};
  c.B.position = {g.separation, 0.0, 0.0};
  const double t0 = g.start, T = g.branch_offset, d = g.delay;
  auto w = [&](double t) { return WindowSpec{window, eta, t}; };
  c.windows[0] = {w(t0), w(t0 + T)};
  if (kind == ScenarioKind::CE) {
    c.windows[1] = {w(t0 + T + d), w(t0 + d)};
  } else {
    c.windows[1] = {w(t0 + d), w(t0 + T + d)};
  }
  return c;
}

CausalRelation causal_relation(const ScenarioConfig& c) {
  if (!c.A.profile.compact() || !c.B.profile.compact()) return CausalRelation::unclassifiable;
  const double gap = std::max(0.0, c.separation() - c.A.profile.support_radius() - c.B.profile.support_radius());
  bool touching = false;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const WindowSpec& a = c.window(Detector::A, i);
      const WindowSpec& b = c.window(Detector::B, j);
      const double reach = std::abs(a.center - b.center) + a.half_width() + b.half_width();
      const double scale = std::max({1.0, gap, reach});
      const double excess = reach - gap;
      if (excess > 1e-12 * scale) return CausalRelation::timelike_some_branch;
      if (excess >= -1e-12 * scale) touching = true;
    }
  }
  return touching ? CausalRelation::lightlike_touching : CausalRelation::spacelike_all_branches;
}

double window_value(const WindowSpec& w, double t) {
  if (w.kind == WindowKind::delta) return t == w.center ? std::numeric_limits<double>::infinity() : 0.0;
  const double x = t - w.center;
  if (std::abs(x) > w.half_width()) return 0.0;
  return std::cos(2.0 * x / w.eta);
}

std::vector<std::vector<ActivationEvent>> window_events(const ScenarioConfig& c) {
  auto by_time = [](const ActivationEvent& x, const ActivationEvent& y) { return x.time < y.time; };
  std::vector<std::vector<ActivationEvent>> out;
  if (c.scenario == ScenarioKind::DS) {
    std::vector<ActivationEvent> all;
    for (int i = 0; i < 2; ++i) {
      all.push_back({Detector::A, i, c.time(Detector::A, i), 0.5});
      all.push_back({Detector::B, i, c.time(Detector::B, i), 0.5});
    }
    std::stable_sort(all.begin(), all.end(), by_time);
    out.push_back(all);
    return out;
  }
  for (int i = 0; i < 2; ++i) {
    std::vector<ActivationEvent> branch{{Detector::A, i, c.time(Detector::A, i), 1.0},
                                        {Detector::B, i, c.time(Detector::B, i), 1.0}};
    std::stable_sort(branch.begin(), branch.end(), by_time);
    out.push_back(branch);
  }
  return out;
}

void check_nonperturbative_ordering(const ScenarioConfig& c) {
  const double a0 = c.time(Detector::A, 0), a1 = c.time(Detector::A, 1);
  const double b0 = c.time(Detector::B, 0), b1 = c.time(Detector::B, 1);
  std::array<double, 4> seq{};
  std::array<const char*, 4> names{};
  if (c.scenario == ScenarioKind::PF) {
    seq = {a0, b0, a1, b1};
    names = {"T_A0", "T_B0", "T_A1", "T_B1"};
  } else if (c.scenario == ScenarioKind::CE) {
    seq = {a0, b1, a1, b0};
    names = {"T_A0", "T_B1", "T_A1", "T_B0"};
  } else {
    throw Unsupported("the exact delta-window engine covers PF and CE only");
  }
  for (int k = 0; k + 1 < 4; ++k) {
    if (seq[k] > seq[k + 1]) {
      std::ostringstream os;
      os.precision(17);
      os << to_string(c.scenario) << " ordering violated: " << names[k] << " = " << seq[k] << " > " << names[k + 1]
         << " = " << seq[k + 1];
      throw OrderingViolated(os.str());
    }
  }
}

std::string to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::PF: return "PF";
    case ScenarioKind::CE: return "CE";
    case ScenarioKind::DS: return "DS";
  }
  return "?";
}

std::string to_string(WindowKind k) { return k == WindowKind::delta ? "delta" : "cosine"; }

std::string to_string(CausalRelation c) {
  switch (c) {
    case CausalRelation::spacelike_all_branches: return "spacelike";
    case CausalRelation::timelike_some_branch: return "timelike";
    case CausalRelation::lightlike_touching: return "lightlike";
    case CausalRelation::unclassifiable: return "unclassified";
  }
  return "?";
}

std::string to_string(Detector d) { return d == Detector::A ? "A" : "B"; }

ScenarioKind scenario_kind_from_string(const std::string& s) {
  if (s == "PF" || s == "pf") return ScenarioKind::PF;
  if (s == "CE" || s == "ce") return ScenarioKind::CE;
  if (s == "DS" || s == "ds") return ScenarioKind::DS;
  throw ConfigError("unknown scenario '" + s + "' (expected PF, CE or DS)");
}

WindowKind window_kind_from_string(const std::string& s) {
  if (s == "delta") return WindowKind::delta;
  if (s == "cosine") return WindowKind::cosine;
  throw ConfigError("unknown window kind '" + s + "' (expected delta or cosine)");
}

}  // namespace harvest::scenario
