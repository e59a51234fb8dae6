#include "harvest/perturbative/elements.hpp"

#include <algorithm>
#include <cmath>

#include "harvest/error.hpp"

namespace harvest::perturbative {

using field::SmearingProfile;
using numerics::QuadratureSpec;
using scenario::WindowKind;
using scenario::WindowSpec;

namespace {

constexpr double kInvFourPiSq = 1.0 / (4.0 * M_PI * M_PI);

cplx expi(double x) { return std::exp(cplx(0.0, x)); }

Estimate scaled(const Estimate& e, cplx factor) { return {e.value * factor, e.error * std::abs(factor)}; }

Estimate kernel_of(const ScenarioConfig& c, const SmearingProfile& a, const SmearingProfile& b, double tau, double r,
                   const ElementOptions& opt, KernelCache* cache) {
  if (cache) return cache->kernel(c.spatial_dim, a, b, tau, r, opt.spec);
  auto q = field::wightman_kernel(c.spatial_dim, a, b, tau, r, opt.spec);
  return {q.value, q.error_estimate};
}

Estimate spectrum_integral(const ScenarioConfig& c, const SmearingProfile& pa, const SmearingProfile& pb, double r,
                           const WindowSpec& wa, double gap_a, const WindowSpec& wb, double gap_b,
                           const ElementOptions& opt) {
  field::WindowSpectrumWeight w{gap_a, wa.center, wa.eta, gap_b, wb.center, wb.eta};
  auto q = field::smeared_momentum_integral({c.spatial_dim, pa, pb, r, w}, opt.spec);
  return {q.value, q.error_estimate};
}

void require_position_space_support(const ScenarioConfig& c, const char* what) {
  if (c.spatial_dim != 3 || c.A.profile.kind != field::ProfileKind::pointlike ||
      c.B.profile.kind != field::ProfileKind::pointlike)
    throw Unsupported(std::string(what) + " with cosine windows is implemented for pointlike detectors in 3+1 only");
}

// int_lo^hi e^{i g v} dv
cplx exp_integral(double g, double lo, double hi) {
  const double len = hi - lo;
  const double x = 0.5 * g * len;
  const double sinc = std::abs(x) < 1e-4 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
  return len * sinc * expi(0.5 * g * (hi + lo));
}

// H(u) = 1/2 int dv chi_a((v+u)/2) chi_b((v-u)/2) e^{i kappa v / 2}, in closed form.
cplx overlap_profile(const WindowSpec& a, const WindowSpec& b, double kappa, double u) {
  const double wa = a.half_width(), wb = b.half_width();
  const double lo = std::max(2.0 * (a.center - wa) - u, 2.0 * (b.center - wb) + u);
  const double hi = std::min(2.0 * (a.center + wa) - u, 2.0 * (b.center + wb) + u);
  if (hi <= lo) return 0.0;
  const double alpha_a = 1.0 / a.eta, alpha_b = 1.0 / b.eta;
  const double phi_a = (u - 2.0 * a.center) / a.eta;
  const double phi_b = (-u - 2.0 * b.center) / b.eta;
  cplx total(0.0);
  for (int sa : {1, -1}) {
    for (int sb : {1, -1}) {
      const double g = sa * alpha_a + sb * alpha_b + 0.5 * kappa;
      total += expi(sa * phi_a + sb * phi_b) * exp_integral(g, lo, hi);
    }
  }
  return 0.125 * total;
}

Estimate cosine_pair(const WindowSpec& a, double gap_a, const WindowSpec& b, double gap_b, double s, double eps,
                     bool ordered, const QuadratureSpec& spec) {
  // ordered:   phase Omega_a t_a + Omega_b t_b, kernel W(s, |u|)
  // unordered: phase Omega_a t - Omega_b t',    kernel W(s, -u)
  const double kappa = ordered ? gap_a + gap_b : gap_a - gap_b;
  const double rho = ordered ? 0.5 * (gap_a - gap_b) : 0.5 * (gap_a + gap_b);
  const double reach = a.half_width() + b.half_width();
  const double centre = a.center - b.center;
  const double lo = centre - reach, hi = centre + reach;
  auto integrand = [&](double u) -> cplx {
    const cplx h = overlap_profile(a, b, kappa, u);
    if (h == cplx(0.0)) return 0.0;
    const cplx t = ordered ? cplx(std::abs(u), -eps) : cplx(-u, -eps);
    return h * expi(rho * u) * kInvFourPiSq / (s * s - t * t);
  };
  std::vector<double> breaks{s, -s, 0.0, centre - (a.half_width() - b.half_width()),
                             centre + (a.half_width() - b.half_width())};
  // Resolve the eps-wide peaks next to the poles.
  for (double p : {s, -s}) {
    for (double d : {eps, 10 * eps, 100 * eps}) {
      breaks.push_back(p - d);
      breaks.push_back(p + d);
    }
  }
  QuadratureSpec sp = spec;
  sp.max_subdivisions = std::max(spec.max_subdivisions, 4000);
  auto q = numerics::integrate_1d(integrand, lo, hi, sp, breaks);
  return {q.value, q.error_estimate};
}

Estimate richardson(const Estimate& e1, const Estimate& e2, const Estimate& e4) {
  // f(eps) = f0 + c1 eps + c2 eps^2 + ...
  const cplx r3 = (8.0 * e4.value - 6.0 * e2.value + e1.value) / 3.0;
  const cplx r2 = 2.0 * e4.value - e2.value;
  const double quad = (8.0 * e4.error + 6.0 * e2.error + e1.error) / 3.0;
  return {r3, std::abs(r3 - r2) + quad};
}

}  // namespace

Estimate KernelCache::kernel(int n, const SmearingProfile& a, const SmearingProfile& b, double tau, double r,
                             const QuadratureSpec& spec) {
  const SmearingProfile* p = &a;
  const SmearingProfile* q = &b;
  if (std::make_pair(static_cast<int>(q->kind), q->width) < std::make_pair(static_cast<int>(p->kind), p->width))
    std::swap(p, q);
  const Key key{n, static_cast<int>(p->kind), p->width, static_cast<int>(q->kind), q->width, tau, r};
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
  }
  auto res = field::wightman_kernel(n, *p, *q, tau, r, spec);
  Estimate e{res.value, res.error_estimate};
  std::lock_guard<std::mutex> lock(mutex_);
  memo_.emplace(key, e);
  return e;
}

Estimate cosine_ordered_pair(const WindowSpec& a, double gap_a, const WindowSpec& b, double gap_b, double s,
                             double eps, const QuadratureSpec& spec) {
  return cosine_pair(a, gap_a, b, gap_b, s, eps, true, spec);
}

Estimate cosine_ordered_pair_limit(const WindowSpec& a, double gap_a, const WindowSpec& b, double gap_b, double s,
                                   double eps0, const QuadratureSpec& spec) {
  const double eps = eps0 * std::min(a.eta, b.eta);
  return richardson(cosine_pair(a, gap_a, b, gap_b, s, eps, true, spec),
                    cosine_pair(a, gap_a, b, gap_b, s, 0.5 * eps, true, spec),
                    cosine_pair(a, gap_a, b, gap_b, s, 0.25 * eps, true, spec));
}

Estimate cosine_unordered_pair_limit(const WindowSpec& a, double gap_a, const WindowSpec& b, double gap_b, double s,
                                     double eps0, const QuadratureSpec& spec) {
  const double eps = eps0 * std::min(a.eta, b.eta);
  return richardson(cosine_pair(a, gap_a, b, gap_b, s, eps, false, spec),
                    cosine_pair(a, gap_a, b, gap_b, s, 0.5 * eps, false, spec),
                    cosine_pair(a, gap_a, b, gap_b, s, 0.25 * eps, false, spec));
}

Estimate element_P(const ScenarioConfig& c, Detector d, int i, int j, const ElementOptions& opt, KernelCache* cache) {
  const auto& det = c.detector(d);
  const WindowSpec& wi = c.window(d, i);
  const WindowSpec& wj = c.window(d, j);
  const double lam2 = det.coupling * det.coupling;
  if (lam2 == 0.0) return {};
  if (c.window_kind() == WindowKind::delta) {
    Estimate k = kernel_of(c, det.profile, det.profile, wj.center - wi.center, 0.0, opt, cache);
    return scaled(k, lam2 * wi.eta * wj.eta * expi(det.gap * (wi.center - wj.center)));
  }
  return scaled(spectrum_integral(c, det.profile, det.profile, 0.0, wi, det.gap, wj, det.gap, opt), lam2);
}

Estimate element_L(const ScenarioConfig& c, int i, int j, const ElementOptions& opt, KernelCache* cache) {
  const WindowSpec& wa = c.window(Detector::A, i);
  const WindowSpec& wb = c.window(Detector::B, j);
  const double lam = c.A.coupling * c.B.coupling;
  if (lam == 0.0) return {};
  const double s = c.separation();
  if (c.window_kind() == WindowKind::delta) {
    Estimate k = kernel_of(c, c.B.profile, c.A.profile, wb.center - wa.center, s, opt, cache);
    return scaled(k, lam * wa.eta * wb.eta * expi(c.A.gap * wa.center - c.B.gap * wb.center));
  }
  return scaled(spectrum_integral(c, c.A.profile, c.B.profile, s, wa, c.A.gap, wb, c.B.gap, opt), lam);
}

Estimate element_Y(const ScenarioConfig& c, int i, const ElementOptions& opt, KernelCache* cache) {
  Estimate total;
  for (Detector d : {Detector::A, Detector::B}) {
    Estimate p = element_P(c, d, i, i, opt, cache);
    total.value += -0.5 * cplx(p.value.real(), 0.0);
    total.error += 0.5 * p.error;
  }
  return total;
}

Estimate element_M_pair(const ScenarioConfig& c, int i, int j, const ElementOptions& opt, KernelCache* cache) {
  const WindowSpec& wa = c.window(Detector::A, i);
  const WindowSpec& wb = c.window(Detector::B, j);
  const double lam = c.A.coupling * c.B.coupling;
  if (lam == 0.0) return {};
  const double s = c.separation();
  if (c.window_kind() == WindowKind::delta) {
    // theta(0) = 1/2 makes the coincident case the average of both orderings.
    Estimate k = kernel_of(c, c.A.profile, c.B.profile, std::abs(wa.center - wb.center), s, opt, cache);
    return scaled(k, -lam * wa.eta * wb.eta * expi(c.A.gap * wa.center + c.B.gap * wb.center));
  }
  require_position_space_support(c, "M");
  return scaled(cosine_ordered_pair_limit(wa, c.A.gap, wb, c.B.gap, s, opt.epsilon, opt.spec), -lam);
}

namespace {

// Re-raise numerical failures with the name of the element being computed.
template <typename F>
Estimate named(const std::string& name, F&& f) {
  try {
    return f();
  } catch (const UVDivergent& e) {
    throw UVDivergent("element " + name + ": " + e.what());
  } catch (const NonConvergence& e) {
    throw NonConvergence("element " + name + ": " + e.what(), e.value_estimate(), e.error_estimate());
  }
}

std::string idx(int i, int j) { return std::to_string(i) + std::to_string(j); }

}  // namespace

PerturbativeElements compute_elements(const ScenarioConfig& c, const ElementOptions& opt, bool include_cross) {
  c.validate();
  KernelCache cache;
  PerturbativeElements e;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (j < i) continue;
      for (Detector d : {Detector::A, Detector::B}) {
        auto& P = d == Detector::A ? e.P_A : e.P_B;
        P[i][j] = named("P_" + scenario::to_string(d) + "," + idx(i, j),
                        [&] { return element_P(c, d, i, j, opt, &cache); });
        if (i == j) {
          P[i][i].value = cplx(P[i][i].value.real(), 0.0);
        } else {
          P[j][i] = {std::conj(P[i][j].value), P[i][j].error};
        }
      }
    }
  }
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) e.L[i][j] = named("L_" + idx(i, j), [&] { return element_L(c, i, j, opt, &cache); });
  for (int i = 0; i < 2; ++i) {
    e.Y[i] = {-0.5 * (e.P_A[i][i].value + e.P_B[i][i].value), 0.5 * (e.P_A[i][i].error + e.P_B[i][i].error)};
    e.M[i] = named("M_" + idx(i, i), [&] { return element_M_pair(c, i, i, opt, &cache); });
  }
  if (include_cross) {
    e.M_cross[0] = named("M_01", [&] { return element_M_pair(c, 0, 1, opt, &cache); });
    e.M_cross[1] = named("M_10", [&] { return element_M_pair(c, 1, 0, opt, &cache); });
    e.has_cross = true;
  }
  return e;
}

}  // namespace harvest::perturbative
