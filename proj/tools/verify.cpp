#include "verify.hpp"

#include <cmath>
#include <functional>
#include <random>

#include "harvest/error.hpp"
#include "harvest/field/correlator.hpp"
#include "harvest/measures/measures.hpp"
#include "harvest/nonperturbative/exact.hpp"
#include "harvest/perturbative/state.hpp"

namespace harvest::verify {

using field::SmearingProfile;
using numerics::cplx;
using perturbative::Treatment;
using scenario::Detector;
using scenario::ScenarioConfig;
using scenario::ScenarioKind;

namespace {

struct Battery {
  std::vector<CheckResult> out;

  void check(const std::string& name, double tol, const std::function<double(std::string&)>& f) {
    CheckResult r;
    r.name = name;
    r.tolerance = tol;
    try {
      r.value = f(r.detail);
      r.pass = std::isfinite(r.value) && r.value <= tol;
    } catch (const std::exception& e) {
      r.pass = false;
      r.value = std::nan("");
      r.detail = e.what();
    }
    out.push_back(std::move(r));
  }
};

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

ScenarioConfig delta_config(ScenarioKind kind, int n, SmearingProfile prof, double gap, double lambda, double s,
                            double T, double delay) {
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

// Entrywise comparison of an exact reduced state with its O(lambda^2)
// counterpart: relative deviation where the perturbative entry is nonzero,
// |exact| / P elsewhere. Returns the worst of the two.
double cross_engine_deviation(const MatrixXc& exact, const MatrixXc& pert, double p_scale) {
  double worst = 0.0;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      const cplx pv = pert(r, c), ev = exact(r, c);
      if (pv == cplx(0.0)) worst = std::max(worst, std::abs(ev) / p_scale);
      else worst = std::max(worst, std::abs(ev - pv) / std::abs(pv));
    }
  }
  return worst;
}

}  // namespace

std::vector<CheckResult> run_verification(const VerifyOptions& opt) {
  Battery b;
  numerics::QuadratureSpec spec;
  perturbative::ElementOptions popt;
  std::mt19937_64 rng(opt.seed);
  auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };

  // Quadrature and field oracles.
  b.check("quadrature.sine_integral", 1e-10, [&](std::string& d) {
    numerics::QuadratureSpec s;
    s.tail_strategy = numerics::TailStrategy::half_period_partition_with_acceleration;
    s.tail_frequency = 1.0;
    auto r = numerics::integrate_1d([](double x) { return cplx(x == 0.0 ? 1.0 : std::sin(x) / x); }, 0.0, INFINITY, s);
    d = "int_0^inf sin(x)/x dx";
    return rel(r.value.real(), M_PI / 2);
  });
  for (double sigma : {0.5, 1.0, 9.0}) {
    b.check("field.gaussian_P_closed_form.sigma=" + std::to_string(sigma), 1e-8, [&, sigma](std::string& d) {
      auto k = field::wightman_kernel(3, SmearingProfile::gaussian(sigma), SmearingProfile::gaussian(sigma), 0, 0, spec);
      d = "K(0,0) = 1/(4 pi^2 sigma^2)";
      return rel(k.value.real(), 1.0 / (4 * M_PI * M_PI * sigma * sigma));
    });
  }
  b.check("field.disk_P_closed_form", 1e-8, [&](std::string& d) {
    auto k = field::wightman_kernel(2, SmearingProfile::uniform_disk(1.0), SmearingProfile::uniform_disk(1.0), 0, 0, spec);
    d = "K(0,0) = 4/(3 pi^2 R)";
    return rel(k.value.real(), 4.0 / (3 * M_PI * M_PI));
  });
  b.check("field.ball_P_closed_form", 1e-8, [&](std::string& d) {
    auto k = field::wightman_kernel(3, SmearingProfile::uniform_ball(1.0), SmearingProfile::uniform_ball(1.0), 0, 0, spec);
    d = "K(0,0) = 9/(16 pi^2 R^2)";
    return rel(k.value.real(), 9.0 / (16 * M_PI * M_PI));
  });
  b.check("field.gaussian_kernel_imaginary_part", 1e-8, [&](std::string& d) {
    // With alpha = sigma^2/2,
    // Im K(tau, r) = -(1/(16 pi^2 r)) sqrt(pi/alpha) (e^{-(tau-r)^2/(4 alpha)} - e^{-(tau+r)^2/(4 alpha)}).
    const double sg = 1.0, tau = 0.7, r = 0.4, alpha = 0.5 * sg * sg;
    auto k = field::wightman_kernel(3, SmearingProfile::gaussian(sg), SmearingProfile::gaussian(sg), tau, r, spec);
    const double expect = -std::sqrt(M_PI / alpha) / (16 * M_PI * M_PI * r) *
                          (std::exp(-(tau - r) * (tau - r) / (4 * alpha)) - std::exp(-(tau + r) * (tau + r) / (4 * alpha)));
    d = "Gaussian smearing, sigma = 1, tau = 0.7, r = 0.4";
    return rel(k.value.imag(), expect);
  });

  // Non-perturbative building blocks.
  const auto gauss_cfg = delta_config(ScenarioKind::PF, 3, SmearingProfile::gaussian(9.0), 1.0, 1.0, 3.0, 2.0, 0.0);
  b.check("nonperturbative.omega_diag_is_2lnf", 1e-12, [&](std::string&) {
    auto e = nonperturbative::compute_overlaps(gauss_cfg, spec);
    double worst = 0.0;
    for (int a = 0; a < 4; ++a) worst = std::max(worst, rel(e.omega[a][a], 2.0 * std::log(e.f[a])));
    return worst;
  });
  b.check("nonperturbative.omega_diag_closed_form", 1e-8, [&](std::string& d) {
    auto e = nonperturbative::compute_overlaps(gauss_cfg, spec);
    d = "omega_aa = -lambda^2 eta^2/(4 pi^2 sigma^2), sigma = 9";
    return rel(e.omega[0][0], -1.0 / (4 * M_PI * M_PI * 81));
  });
  b.check("nonperturbative.theta_antisymmetric_omega_symmetric", 0.0, [&](std::string&) {
    auto e = nonperturbative::compute_overlaps(gauss_cfg, spec);
    double worst = 0.0;
    for (int a = 0; a < 4; ++a)
      for (int c = 0; c < 4; ++c)
        worst = std::max({worst, std::abs(e.Theta[a][c] + e.Theta[c][a]), std::abs(e.omega[a][c] - e.omega[c][a])});
    return worst;
  });
  b.check("nonperturbative.lambda_zero_state", 1e-15, [&](std::string& d) {
    auto c = delta_config(ScenarioKind::PF, 3, SmearingProfile::gaussian(1.0), 1.0, 0.0, 1.0, 1.0, 0.0);
    nonperturbative::ExactOptions eo{spec, opt.theta_sign};
    auto rho = nonperturbative::assemble_rho_PF(c, eo);
    MatrixXc expect = MatrixXc::Zero(8, 8);
    expect.block(0, 0, 2, 2).setConstant(0.5);
    d = "|00><00| (x) |+><+|";
    return (rho.entries - expect).cwiseAbs().maxCoeff();
  });
  for (auto kind : {ScenarioKind::PF, ScenarioKind::CE}) {
    const std::string tag = scenario::to_string(kind);
    for (int trial = 0; trial < 3; ++trial) {
      const double s = uni(0.2, 3.0), T = uni(0.4, 3.0), delay = uni(0.0, 0.3);
      const double lambda = uni(0.3, 2.0);
      const auto c = trial == 0 ? delta_config(kind, 3, SmearingProfile::gaussian(uni(0.5, 2.0)), uni(0.5, 3.0), lambda, s, T, delay)
                                : delta_config(kind, 2, SmearingProfile::uniform_disk(1.0), uni(0.5, 3.0), lambda, s, T, delay);
      const std::string name = tag + ".trial" + std::to_string(trial);
      b.check("nonperturbative.lattice_equals_weyl." + name, 1e-12, [&](std::string& d) {
        auto e = nonperturbative::compute_overlaps(c, spec);
        auto lat = kind == ScenarioKind::PF ? nonperturbative::assemble_rho_PF(e, opt.theta_sign)
                                            : nonperturbative::assemble_rho_CE(e, opt.theta_sign);
        auto wey = nonperturbative::assemble_rho_weyl(c, e);
        d = "printed sign lattice vs displacement-operator expansion";
        return (lat.entries - wey.entries).cwiseAbs().maxCoeff();
      });
      b.check("nonperturbative.state_sanity." + name, 1e-10, [&](std::string& d) {
        nonperturbative::ExactOptions eo{spec, opt.theta_sign};
        auto rho = nonperturbative::assemble_rho_exact(c, eo);
        const double tr = std::abs(rho.trace() - 1.0);
        const double herm = rho.hermiticity_error();
        const double neg = std::max(0.0, -rho.min_eigenvalue());
        d = "trace, Hermiticity, min eigenvalue";
        return std::max({tr, herm * 100.0, neg});
      });
      b.check("nonperturbative.trace_is_branch_mixture." + name, 1e-12, [&](std::string&) {
        auto e = nonperturbative::compute_overlaps(c, spec);
        auto rho = kind == ScenarioKind::PF ? nonperturbative::assemble_rho_PF(e, opt.theta_sign)
                                            : nonperturbative::assemble_rho_CE(e, opt.theta_sign);
        auto tr = perturbative::reduce_control(rho, Treatment::trace);
        MatrixXc mix = 0.5 * (nonperturbative::branch_state(c, e, 0).entries + nonperturbative::branch_state(c, e, 1).entries);
        return (tr.entries - mix).cwiseAbs().maxCoeff();
      });
    }
  }

  // Cross-engine: lambda eta = 1e-3, both control treatments.
  for (auto kind : {ScenarioKind::PF, ScenarioKind::CE}) {
    for (int trial = 0; trial < 2; ++trial) {
      const double sigma = trial == 0 ? 9.0 : 1.0;
      const double s = uni(0.1, 1.0) * sigma, T = uni(0.3, 1.0) * sigma;
      const auto c = delta_config(kind, 3, SmearingProfile::gaussian(sigma), uni(0.5, 1.5) / sigma, 1e-3, s, T,
                                  uni(0.0, 0.2) * sigma);
      for (auto t : {Treatment::trace, Treatment::project_plus}) {
        b.check("crossengine." + scenario::to_string(kind) + "." + perturbative::to_string(t) + ".trial" + std::to_string(trial),
                1e-4, [&, t](std::string& d) {
                  nonperturbative::ExactOptions eo{spec, opt.theta_sign};
                  auto exact = perturbative::reduce_control(nonperturbative::assemble_rho_exact(c, eo), t);
                  auto pe = perturbative::compute_elements(c, popt);
                  auto pert = perturbative::reduce_control(perturbative::assemble_rho_ABC(pe), t);
                  const double p = pe.P_A[0][0].value.real();
                  d = "entrywise relative deviation, exact vs O(lambda^2)";
                  return cross_engine_deviation(exact.entries, pert.entries, p);
                });
      }
    }
  }

  // Perturbative identities.
  for (int trial = 0; trial < 4; ++trial) {
    const bool gauss = trial % 2 == 0;
    const auto c = gauss ? delta_config(ScenarioKind::PF, 3, SmearingProfile::gaussian(uni(0.5, 2.0)), uni(0.5, 3.0), 1.0,
                                        uni(0.1, 4.0), uni(0.1, 4.0), uni(0.0, 0.5))
                         : delta_config(ScenarioKind::PF, 2, SmearingProfile::uniform_disk(1.0), uni(0.5, 3.0), 1.0,
                                        uni(0.1, 4.0), uni(0.1, 4.0), uni(0.0, 0.5));
    const std::string name = ".trial" + std::to_string(trial);
    auto pe = perturbative::compute_elements(c, popt, true);
    b.check("perturbative.Y_identity" + name, 1e-10, [&](std::string&) {
      double worst = 0.0;
      for (int i = 0; i < 2; ++i) {
        const cplx y = pe.Y[i].value + std::conj(pe.Y[i].value);
        const cplx p = pe.P_A[i][i].value + pe.P_B[i][i].value;
        worst = std::max(worst, std::abs(y + p) / std::abs(p));
      }
      return worst;
    });
    b.check("perturbative.M_trace_equals_M_plus" + name, 1e-14, [&](std::string& d) {
      auto tr = perturbative::reduce_elements(pe, Treatment::trace);
      auto pl = perturbative::reduce_elements(pe, Treatment::project_plus);
      auto rho = perturbative::assemble_rho_ABC(pe);
      MatrixXc mt = MatrixXc::Zero(4, 4), mp = MatrixXc::Zero(4, 4);
      for (int c1 = 0; c1 < 2; ++c1)
        for (int c2 = 0; c2 < 2; ++c2) {
          mp(3, 0) += 0.5 * rho.entries(6 + c1, c2);
          if (c1 == c2) mt(3, 0) += rho.entries(6 + c1, c2);
        }
      d = "relative to |M|; element level is exact, the 8x8 route differs by summation order";
      return std::max(std::abs(tr.M.value - pl.M.value), std::abs(mt(3, 0) - mp(3, 0))) / std::abs(tr.M.value);
    });
    b.check("perturbative.DS_decomposition" + name, 1e-10, [&](std::string& d) {
      auto ds = perturbative::assemble_rho_DS(pe);
      auto ce_cfg = c.with_b_branches_swapped();
      ce_cfg.scenario = ScenarioKind::CE;
      auto pe_ce = perturbative::compute_elements(ce_cfg, popt);
      auto pf = perturbative::rho_AB_truncated(perturbative::reduce_elements(pe, Treatment::project_plus));
      auto ce = perturbative::rho_AB_truncated(perturbative::reduce_elements(pe_ce, Treatment::project_plus));
      MatrixXc half = 0.5 * (pf.entries + ce.entries);
      d = "rho_DS = (rho_PF+ + rho_CE+)/2";
      return (ds.entries - half).cwiseAbs().maxCoeff() / pe.P_A[0][0].value.real();
    });
  }

  // No-go theorem on random delta configurations.
  b.check("nogo.trace_margin_nonpositive", 1e-12, [&](std::string& d) {
    double worst = -INFINITY;
    for (int trial = 0; trial < 8; ++trial) {
      const auto kind = trial % 2 ? ScenarioKind::CE : ScenarioKind::PF;
      const auto c = trial % 4 < 2 ? delta_config(kind, 3, SmearingProfile::gaussian(uni(0.5, 2.0)), uni(0.1, 4.0), 1.0,
                                                  uni(0.0, 5.0), uni(0.1, 5.0), uni(0.0, 1.0))
                                   : delta_config(kind, 2, SmearingProfile::uniform_disk(1.0), uni(0.1, 4.0), 1.0,
                                                  uni(0.0, 5.0), uni(0.1, 5.0), uni(0.0, 1.0));
      auto pe = perturbative::compute_elements(c, popt);
      auto r = perturbative::reduce_elements(pe, Treatment::trace);
      const double m = measures::nogo_margin(r.P_A.value.real(), r.P_B.value.real(), r.M.value);
      worst = std::max(worst, m / r.P_A.value.real());
    }
    d = "max (|M| - sqrt(P_A P_B)) / P over 8 configurations";
    return worst;
  });

  // Measures.
  b.check("measures.bell_state", 1e-12, [&](std::string&) {
    MatrixXc m = MatrixXc::Zero(4, 4);
    m(0, 0) = m(0, 3) = m(3, 0) = m(3, 3) = 0.5;
    DensityMatrix rho(m, true);
    return std::max(std::abs(measures::concurrence(rho) - 1.0), std::abs(measures::entanglement_of_formation(rho) - 1.0));
  });
  b.check("measures.product_state", 1e-12, [&](std::string&) {
    MatrixXc m = MatrixXc::Zero(4, 4);
    m(0, 0) = 1.0;
    DensityMatrix rho(m, true);
    return std::max({measures::concurrence(rho), measures::entanglement_of_formation(rho),
                     std::abs(measures::mutual_information_exact(rho))});
  });
  b.check("measures.x_state_example", 1e-12, [&](std::string&) {
    MatrixXc m = MatrixXc::Zero(4, 4);
    m(0, 0) = 0.85;
    m(1, 1) = m(2, 2) = m(3, 3) = 0.05;
    m(0, 3) = m(3, 0) = 0.10;
    return std::abs(measures::concurrence(DensityMatrix(m, true)) - 0.10);
  });
  b.check("measures.eof_at_half", 1e-5, [&](std::string&) {
    return std::abs(measures::entanglement_of_formation_from_concurrence(0.5) - 0.35458);
  });
  b.check("measures.mutual_information_example", 1e-14, [&](std::string&) {
    return std::abs(measures::mutual_information(0.01, 0.01, 0.01) - 0.02);
  });
  b.check("measures.random_x_states_closed_form", 1e-10, [&](std::string&) {
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      double d[4];
      double sum = 0.0;
      for (double& x : d) sum += (x = uni(0.01, 1.0));
      for (double& x : d) x /= sum;
      MatrixXc m = MatrixXc::Zero(4, 4);
      for (int i = 0; i < 4; ++i) m(i, i) = d[i];
      const cplx r14 = std::polar(uni(0.0, 1.0) * std::sqrt(d[0] * d[3]), uni(0, 2 * M_PI));
      const cplx r23 = std::polar(uni(0.0, 1.0) * std::sqrt(d[1] * d[2]), uni(0, 2 * M_PI));
      m(0, 3) = r14;
      m(3, 0) = std::conj(r14);
      m(1, 2) = r23;
      m(2, 1) = std::conj(r23);
      DensityMatrix rho(m, true);
      worst = std::max(worst, std::abs(measures::concurrence(rho) - measures::concurrence_x_state(*measures::XStateView::from(rho))));
    }
    return worst;
  });
  return b.out;
}

}  // namespace harvest::verify
