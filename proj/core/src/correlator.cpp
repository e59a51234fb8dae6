#include "harvest/field/correlator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace harvest::field {

using numerics::QuadratureResult;
using numerics::QuadratureSpec;

double FieldConvention::momentum_measure_normalization() const { return std::pow(2.0 * M_PI, -spatial_dim); }

double FieldConvention::radial_prefactor() const {
  return spatial_dim == 3 ? 1.0 / (2.0 * M_PI * M_PI) : 1.0 / (2.0 * M_PI);
}

void FieldConvention::validate() const {
  if (spatial_dim != 2 && spatial_dim != 3) throw DomainError("spatial dimension must be 2 or 3");
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be > 0");
}

cplx pointlike_wightman(double dx, double dt, double eps) {
  const cplx t(dt, -eps);
  const cplx denom = dx * dx - t * t;
  if (denom == cplx(0.0)) throw DomainError("pointlike_wightman: light-cone singularity with eps = 0");
  return 1.0 / (4.0 * M_PI * M_PI) / denom;
}

double cosine_window_transform(double eta, double nu) {
  const double b = 2.0 / eta;
  const double a = M_PI * eta / 4.0;
  nu = std::abs(nu);
  const double d = nu - b;
  if (std::abs(d) < 0.1 * b) {
    // cos((b + d) a) = -sin(d a), b^2 - nu^2 = -d (2b + d)
    const double x = d * a;
    const double sinc = std::abs(x) < 1e-4 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
    return 2.0 * b * a * sinc / (2.0 * b + d);
  }
  return 2.0 * b * std::cos(nu * a) / (b * b - nu * nu);
}

namespace {

using Fn = std::function<cplx(double)>;

// value(k) = sum_m amplitude_m(k) e^{i frequency_m k} for k >= smooth_from,
// with amplitudes smooth and decaying like k^decay. An empty tail means the
// factor is itself smooth and non-oscillatory.
struct Term {
  double frequency;
  Fn amplitude;
};

struct Factor {
  Fn value;
  std::vector<Term> tail;
  double decay = 0.0;
  double smooth_from = 0.0;
  double gaussian_rate = 0.0;   // factor bounded by exp(-(rate k)^2)
  double body_frequency = 0.0;  // oscillation rate of value(k)
};

// Hankel amplitude (J_nu + i Y_nu)(x) e^{-ix}.
cplx hankel_amplitude(double nu, double x) {
  return cplx(std::cyl_bessel_j(nu, x), std::cyl_neumann(nu, x)) * std::exp(cplx(0.0, -x));
}

double sinc(double x) { return std::abs(x) < 1e-4 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

Factor profile_factor(const SmearingProfile& p) {
  Factor f;
  const double s = p.width;
  switch (p.kind) {
    case ProfileKind::pointlike:
      f.value = [](double) { return cplx(1.0); };
      break;
    case ProfileKind::gaussian:
      f.value = [p](double k) { return cplx(fourier_profile(p, k)); };
      f.gaussian_rate = 0.5 * s;
      break;
    case ProfileKind::uniform_disk:
      f.value = [p](double k) { return cplx(fourier_profile(p, k)); };
      f.decay = -1.5;
      f.smooth_from = 2.0 / s;
      f.body_frequency = s;
      f.tail = {{s, [s](double k) { return hankel_amplitude(1.0, k * s) / (k * s); }},
                {-s, [s](double k) { return std::conj(hankel_amplitude(1.0, k * s)) / (k * s); }}};
      break;
    case ProfileKind::uniform_ball:
      f.value = [p](double k) { return cplx(fourier_profile(p, k)); };
      f.decay = -2.0;
      f.smooth_from = 1.0 / s;
      f.body_frequency = s;
      f.tail = {{s, [s](double k) {
                   const double x = k * s;
                   return 3.0 * (cplx(0.0, -0.5) - 0.5 * x) / (x * x * x);
                 }},
                {-s, [s](double k) {
                   const double x = k * s;
                   return 3.0 * (cplx(0.0, 0.5) - 0.5 * x) / (x * x * x);
                 }}};
      break;
  }
  return f;
}

Factor angular_factor(int n, double r) {
  Factor f;
  if (r == 0.0) {
    f.value = [](double) { return cplx(1.0); };
    return f;
  }
  f.body_frequency = r;
  if (n == 3) {
    f.value = [r](double k) { return cplx(sinc(k * r)); };
    f.decay = -1.0;
    f.smooth_from = 1.0 / r;
    f.tail = {{r, [r](double k) { return cplx(0.0, -0.5) / (k * r); }},
              {-r, [r](double k) { return cplx(0.0, 0.5) / (k * r); }}};
  } else {
    f.value = [r](double k) { return cplx(std::cyl_bessel_j(0.0, k * r)); };
    f.decay = -0.5;
    f.smooth_from = 2.0 / r;
    f.tail = {{r, [r](double k) { return 0.5 * hankel_amplitude(0.0, k * r); }},
              {-r, [r](double k) { return 0.5 * std::conj(hankel_amplitude(0.0, k * r)); }}};
  }
  return f;
}

Factor weight_factor(const MomentumWeight& w) {
  Factor f;
  if (std::holds_alternative<UnitWeight>(w)) {
    f.value = [](double) { return cplx(1.0); };
  } else if (auto* pw = std::get_if<PlaneWaveWeight>(&w)) {
    const double tau = pw->delay;
    f.value = [tau](double k) { return std::exp(cplx(0.0, -k * tau)); };
    f.body_frequency = std::abs(tau);
    if (tau != 0.0) f.tail = {{-tau, [](double) { return cplx(1.0); }}};
  } else if (auto* cw = std::get_if<CosineShiftWeight>(&w)) {
    const double gap = cw->gap, T = cw->delay;
    f.value = [gap, T](double k) { return cplx(std::cos((k + gap) * T)); };
    f.body_frequency = std::abs(T);
    if (T != 0.0) {
      const cplx up = 0.5 * std::exp(cplx(0.0, gap * T));
      f.tail = {{T, [up](double) { return up; }}, {-T, [up](double) { return std::conj(up); }}};
    }
  } else {
    const auto ws = std::get<WindowSpectrumWeight>(w);
    f.value = [ws](double k) {
      const double na = k + ws.gap_a, nb = k + ws.gap_b;
      return std::exp(cplx(0.0, na * ws.center_a - nb * ws.center_b)) * cosine_window_transform(ws.eta_a, na) *
             cosine_window_transform(ws.eta_b, nb);
    };
    const double ba = 2.0 / ws.eta_a, bb = 2.0 / ws.eta_b;
    const double aa = M_PI * ws.eta_a / 4.0, ab = M_PI * ws.eta_b / 4.0;
    f.decay = -4.0;
    f.body_frequency = std::abs(ws.center_a - ws.center_b) + aa + ab;
    const double poles = std::max({ba - ws.gap_a, -ba - ws.gap_a, bb - ws.gap_b, -bb - ws.gap_b});
    f.smooth_from = std::max(0.0, poles + 2.0 * std::max(ba, bb));
    for (int sa : {1, -1}) {
      for (int sb : {1, -1}) {
        const double freq = ws.center_a - ws.center_b + sa * aa + sb * ab;
        const cplx phase = std::exp(cplx(0.0, ws.gap_a * (ws.center_a + sa * aa) - ws.gap_b * (ws.center_b - sb * ab)));
        f.tail.push_back({freq, [=](double k) {
                            const double na = k + ws.gap_a, nb = k + ws.gap_b;
                            return phase * (ba / (ba * ba - na * na)) * (bb / (bb * bb - nb * nb));
                          }});
      }
    }
  }
  return f;
}

struct Plan {
  std::vector<Factor> factors;
  double decay = 0.0;
  double gaussian_rate = 0.0;
  double body_frequency = 0.0;
  double smooth_from = 0.0;
};

cplx body_value(const std::vector<Factor>& fs, double k) {
  cplx v(1.0);
  for (const auto& f : fs) v *= f.value(k);
  return v;
}

std::vector<double> half_period_breaks(double lo, double hi, double frequency, int budget, const char* what) {
  std::vector<double> b;
  if (frequency <= 0.0 || hi <= lo) return b;
  const double h = M_PI / frequency;
  const double count = std::ceil((hi - lo) / h);
  if (count > budget)
    throw NonConvergence(std::string(what) + ": integrand needs " + std::to_string(static_cast<long>(count)) +
                         " half-period panels, budget is " + std::to_string(budget));
  for (int i = 1; i < static_cast<int>(count); ++i) b.push_back(lo + i * (hi - lo) / count);
  return b;
}

// Expand the product of tail decompositions into grouped frequency terms.
std::vector<Term> expand_tail(const std::vector<Factor>& fs) {
  struct Partial {
    double frequency;
    std::vector<const Fn*> amps;
  };
  std::vector<Partial> acc{{0.0, {}}};
  for (const auto& f : fs) {
    std::vector<Partial> next;
    if (f.tail.empty()) {
      for (auto p : acc) {
        p.amps.push_back(&f.value);
        next.push_back(std::move(p));
      }
    } else {
      for (const auto& p : acc) {
        for (const auto& t : f.tail) {
          Partial q = p;
          q.frequency += t.frequency;
          q.amps.push_back(&t.amplitude);
          next.push_back(std::move(q));
        }
      }
    }
    acc = std::move(next);
  }
  double scale = 1.0;
  for (const auto& p : acc) scale = std::max(scale, std::abs(p.frequency));
  std::map<long long, std::vector<std::vector<const Fn*>>> groups;
  std::map<long long, double> freq_of;
  for (const auto& p : acc) {
    const long long key = std::llround(p.frequency / (1e-11 * scale));
    groups[key].push_back(p.amps);
    freq_of.emplace(key, p.frequency);
  }
  std::vector<Term> out;
  for (auto& [key, list] : groups) {
    const double freq = std::abs(freq_of[key]) < 1e-11 * scale ? 0.0 : freq_of[key];
    out.push_back({freq, [list](double k) {
                     cplx total(0.0);
                     for (const auto& amps : list) {
                       cplx v(1.0);
                       for (const Fn* a : amps) v *= (*a)(k);
                       total += v;
                     }
                     return total;
                   }});
  }
  return out;
}

QuadratureResult integrate_term(const Term& t, double K, double decay, const QuadratureSpec& spec) {
  QuadratureSpec s = spec;
  const double alpha = t.frequency;
  if (alpha == 0.0) {
    if (decay >= -1.0) throw UVDivergent("smeared_momentum_integral: non-oscillating tail decays too slowly");
    s.tail_strategy = numerics::TailStrategy::none;
    return numerics::try_integrate_1d(t.amplitude, K, std::numeric_limits<double>::infinity(), s);
  }
  auto g = [&t, alpha](double k) { return t.amplitude(k) * std::exp(cplx(0.0, alpha * k)); };
  const double K2 = 10.0 / std::abs(alpha);
  if (decay <= -2.5 && K2 > K) {
    // k = K/u folds the slowly oscillating stretch [K, K2] onto [K/K2, 1];
    // beyond K2 there are enough oscillations for the partitioned tail.
    auto mapped = [&](double u) -> cplx {
      const double k = K / u;
      return g(k) * (K / (u * u));
    };
    QuadratureResult r = numerics::try_integrate_1d(mapped, K / K2, 1.0, s);
    r += numerics::integrate_tail_partitioned(g, K2, alpha, s);
    return r;
  }
  return numerics::integrate_tail_partitioned(g, K, alpha, s);
}

}  // namespace

QuadratureResult smeared_momentum_integral(const MomentumIntegral& req, const QuadratureSpec& spec) {
  spec.validate();
  FieldConvention conv{req.spatial_dim};
  conv.validate();
  req.profile_a.validate(req.spatial_dim);
  req.profile_b.validate(req.spatial_dim);
  if (req.separation < 0.0) throw DomainError("separation must be >= 0");

  Plan plan;
  const int n = req.spatial_dim;
  const double pref = 0.5 * conv.radial_prefactor();
  Factor measure;
  if (n == 3) {
    measure.value = [pref](double k) { return cplx(pref * k); };
    measure.decay = 1.0;
  } else {
    measure.value = [pref](double) { return cplx(pref); };
  }
  plan.factors.push_back(measure);
  plan.factors.push_back(profile_factor(req.profile_a));
  plan.factors.push_back(profile_factor(req.profile_b));
  plan.factors.push_back(angular_factor(n, req.separation));
  plan.factors.push_back(weight_factor(req.weight));
  double g2 = 0.0;
  for (const auto& f : plan.factors) {
    plan.decay += f.decay;
    g2 += f.gaussian_rate * f.gaussian_rate;
    plan.body_frequency += f.body_frequency;
    plan.smooth_from = std::max(plan.smooth_from, f.smooth_from);
  }
  plan.gaussian_rate = std::sqrt(g2);

  auto body = [&plan](double k) { return body_value(plan.factors, k); };
  const int budget = spec.max_subdivisions;

  if (plan.gaussian_rate > 0.0) {
    const double cutoff = std::sqrt(45.0) / plan.gaussian_rate;
    const double panels = cutoff * plan.body_frequency / M_PI;
    if (panels <= 0.25 * budget || plan.decay >= 0.0) {
      auto breaks = half_period_breaks(0.0, cutoff, plan.body_frequency, budget / 4, "smeared_momentum_integral");
      QuadratureResult r = numerics::try_integrate_1d(body, 0.0, cutoff, spec, breaks);
      if (!r.converged)
        throw NonConvergence("smeared_momentum_integral: radial integral did not converge", std::abs(r.value),
                             r.error_estimate);
      return r;
    }
    // The Gaussian is only a regulator here: fold it into the tail amplitudes.
    for (auto& f : plan.factors) {
      if (f.gaussian_rate > 0.0) f.smooth_from = 0.0;
    }
  } else if (plan.decay >= 0.0) {
    throw UVDivergent("smeared_momentum_integral: integrand does not decay (pointlike detector with delta switching)");
  }

  double K = plan.smooth_from;
  if (K <= 0.0) K = plan.body_frequency > 0.0 ? M_PI / plan.body_frequency : 1.0;
  QuadratureResult total;
  {
    auto breaks = half_period_breaks(0.0, K, plan.body_frequency, budget / 4, "smeared_momentum_integral");
    total = numerics::try_integrate_1d(body, 0.0, K, spec, breaks);
  }
  for (const Term& t : expand_tail(plan.factors)) total += integrate_term(t, K, plan.decay, spec);
  if (!total.converged)
    throw NonConvergence("smeared_momentum_integral: radial integral did not converge", std::abs(total.value),
                         total.error_estimate);
  return total;
}

QuadratureResult wightman_kernel(int n, const SmearingProfile& a, const SmearingProfile& b, double tau, double r,
                                 const QuadratureSpec& spec) {
  return smeared_momentum_integral({n, a, b, r, PlaneWaveWeight{tau}}, spec);
}

}  // namespace harvest::field
