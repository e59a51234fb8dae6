// Acceptance battery: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (capped at 1).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <tuple>

#include "harvest/field/correlator.hpp"
#include "harvest/measures/measures.hpp"
#include "harvest/nonperturbative/exact.hpp"
#include "harvest/perturbative/state.hpp"
#include "harvest/scan/scan.hpp"
#include "support/brute_force.hpp"
#include "support/configs.hpp"

using namespace harvest;
using field::SmearingProfile;
using harvest::testing::delta_config;
using numerics::cplx;
using perturbative::Treatment;
using scenario::ScenarioKind;

namespace {

constexpr std::uint64_t kSeed = 20190611;

// Pinned tolerances.
constexpr double kNoGoScale = 1e-12;
constexpr double kMarginErrorFactor = 10.0;
constexpr double kIdentityRel = 1e-10;
constexpr double kCrossEngineRel = 1e-4;
constexpr double kClosedFormRel = 1e-8;
constexpr double kBruteForceRel = 1e-6;
constexpr double kHermiticity = 1e-12;
constexpr double kTrace = 1e-10;
constexpr double kExactPsd = 1e-10;
constexpr double kPerturbativePsdFactor = 10.0;
constexpr double kMeasures = 1e-10;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int number, const std::string& title, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s criterion %d (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", number, title.c_str(), o.detail.c_str(),
              secs);
  std::fflush(stdout);
}

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

ModelSpec delta_model(ScenarioKind kind, int n, SmearingProfile prof, double gap, double lambda, double delay) {
  ModelSpec m;
  m.scenario = kind;
  m.spatial_dim = n;
  m.detector.gap = gap;
  m.detector.coupling = lambda;
  m.detector.profile = prof;
  m.window = scenario::WindowKind::delta;
  m.eta = 1.0;
  m.geometry.delay = delay;
  return m;
}

scan::ScanResult run(const ModelSpec& m, Engine engine, Range s, Range T, std::vector<Treatment> treatments) {
  scan::ScanGrid g;
  g.s = s;
  g.T = T;
  g.model = m;
  g.engine = engine;
  g.treatments = std::move(treatments);
  return scan::run_scan(g);
}

int count_failed(const scan::ScanResult& r) {
  int n = 0;
  for (const auto& p : r.points) n += p.status == scan::PointStatus::failed;
  return n;
}

// Entrywise deviation of an exact reduced state from its O(lambda^2)
// counterpart: relative where the perturbative entry is nonzero, |exact| / P
// elsewhere.
double cross_engine_deviation(const MatrixXc& exact, const MatrixXc& pert, double p_scale) {
  double worst = 0.0;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      const cplx pv = pert(r, c), ev = exact(r, c);
      worst = std::max(worst, pv == cplx(0.0) ? std::abs(ev) / p_scale : std::abs(ev - pv) / std::abs(pv));
    }
  }
  return worst;
}

}  // namespace

int main() {
  std::printf("acceptance battery, seed %llu\n", static_cast<unsigned long long>(kSeed));

  criterion(1, "no-go theorem under trace-out, 200 random delta configurations", [] {
    harvest::testing::Uniform u(kSeed);
    double worst = -INFINITY, worst_c = 0.0;
    for (int k = 0; k < 200; ++k) {
      const auto kind = k % 2 ? ScenarioKind::CE : ScenarioKind::PF;
      const auto c = k % 4 < 2 ? delta_config(kind, 2, SmearingProfile::uniform_disk(u(0.5, 2.0)), u(0.1, 5.0), 1.0,
                                              u(0.0, 6.0), u(0.05, 6.0), u(0.0, 1.0))
                               : delta_config(kind, 3, SmearingProfile::gaussian(u(0.5, 2.0)), u(0.1, 5.0), 1.0,
                                              u(0.0, 6.0), u(0.05, 6.0), u(0.0, 1.0));
      const auto e = perturbative::compute_elements(c, {});
      const auto r = perturbative::reduce_elements(e, Treatment::trace);
      const double pa = r.P_A.value.real(), pb = r.P_B.value.real();
      const double margin = measures::nogo_margin(pa, pb, r.M.value);
      worst = std::max(worst, margin / std::sqrt(pa * pb));
      worst_c = std::max(worst_c, measures::concurrence_from_margin(margin));
    }
    return Outcome{worst <= kNoGoScale && worst_c == 0.0,
                   fmt("max margin/sqrt(P_A P_B) = %.3e (tol %.0e), max concurrence = %g", worst, kNoGoScale, worst_c)};
  });

  criterion(2, "perturbative violation under project_plus, disk n=2, 40x40", [] {
    const auto m = delta_model(ScenarioKind::PF, 2, SmearingProfile::uniform_disk(1.0), 3.0, 1.0, 1e-5);
    const double sigma = 1.0, delta = 1e-5;
    auto r = run(m, Engine::perturbative, {0.1, 8.0, 40}, {0.05, 8.0, 40}, {Treatment::trace, Treatment::project_plus});
    int positive = 0, spacelike_positive = 0, trace_positive = 0;
    for (const auto& p : r.points) {
      if (p.status != scan::PointStatus::ok) continue;
      const auto& tr = p.treatments[0];
      const auto& pl = p.treatments[1];
      if (tr.margin > 0.0) ++trace_positive;
      if (pl.margin > kMarginErrorFactor * pl.margin_error) {
        ++positive;
        if (p.s > 2 * sigma && p.T < p.s - 2 * sigma - delta) ++spacelike_positive;
      }
    }
    const int failed = count_failed(r);
    return Outcome{positive > 0 && spacelike_positive > 0 && trace_positive == 0 && failed == 0,
                   fmt("project_plus positive %d (strict spacelike %d), trace positive %d, failed points %d",
                       positive, spacelike_positive, trace_positive, failed)};
  });

  criterion(3, "non-perturbative violation, Gaussian sigma=9, PF and CE 30x30", [] {
    std::string detail;
    bool ok = true;
    for (auto kind : {ScenarioKind::PF, ScenarioKind::CE}) {
      const auto m = delta_model(kind, 3, SmearingProfile::gaussian(9.0), 1.0, 1.0, 0.0);
      auto r = run(m, Engine::nonperturbative, {0.5, 40.0, 30}, {0.1, 10.0, 30}, {Treatment::project_plus});
      int pos = 0, zero = 0;
      for (const auto& p : r.points) {
        if (p.status != scan::PointStatus::ok) continue;
        (p.treatments[0].concurrence > 0.0 ? pos : zero)++;
      }
      const int failed = count_failed(r);
      ok = ok && pos > 0 && zero > 0 && failed == 0;
      detail += fmt("%s: C>0 at %d, C=0 at %d, failed %d; ", scenario::to_string(kind).c_str(), pos, zero, failed);
    }
    return Outcome{ok, detail};
  });

  criterion(4, "CE spacelike harvesting beyond the classical mixture, cosine windows, Omega eta = 3", [] {
    ModelSpec m;
    m.scenario = ScenarioKind::CE;
    m.spatial_dim = 3;
    m.detector.gap = 3.0;
    m.detector.coupling = 1.0;
    m.detector.profile = SmearingProfile::pointlike();
    m.window = scenario::WindowKind::cosine;
    m.eta = 1.0;
    // trace: classical mixture of the two orders; project_plus: superposed orders.
    auto r = run(m, Engine::perturbative, {0.2, 4.0, 20}, {0.1, 3.0, 20}, {Treatment::trace, Treatment::project_plus});
    int spacelike_only_plus = 0, both = 0, enhanced = 0;
    for (const auto& p : r.points) {
      if (p.status != scan::PointStatus::ok) continue;
      const auto& mix = p.treatments[0];
      const auto& plus = p.treatments[1];
      const bool plus_pos = plus.margin > kMarginErrorFactor * plus.margin_error;
      const bool mix_pos = mix.margin > kMarginErrorFactor * mix.margin_error;
      if (p.causal == scenario::CausalRelation::spacelike_all_branches && plus_pos && mix.concurrence == 0.0)
        ++spacelike_only_plus;
      if (p.causal == scenario::CausalRelation::timelike_some_branch && plus_pos && mix_pos) {
        ++both;
        const double err = kMarginErrorFactor * 2 * (plus.margin_error + mix.margin_error);
        if (plus.concurrence >= mix.concurrence - err) ++enhanced;
      }
    }
    const int failed = count_failed(r);
    return Outcome{spacelike_only_plus > 0 && enhanced == both && failed == 0,
                   fmt("spacelike C+>0 with C_mix=0 at %d points; timelike both-positive %d, C+ >= C_mix at %d; failed %d",
                       spacelike_only_plus, both, enhanced, failed)};
  });

  criterion(5, "exact perturbative identities on 20 random configurations", [] {
    harvest::testing::Uniform u(kSeed + 5);
    double y_worst = 0, m_worst = 0, ds_worst = 0;
    for (int k = 0; k < 20; ++k) {
      const auto c = k % 2 ? delta_config(ScenarioKind::PF, 2, SmearingProfile::uniform_disk(1.0), u(0.1, 4.0), 1.0,
                                          u(0.0, 5.0), u(0.05, 5.0), u(0.0, 1.0))
                           : delta_config(ScenarioKind::PF, 3, SmearingProfile::gaussian(u(0.5, 2.0)), u(0.1, 4.0), 1.0,
                                          u(0.0, 5.0), u(0.05, 5.0), u(0.0, 1.0));
      const auto e = perturbative::compute_elements(c, {}, true);
      for (int i = 0; i < 2; ++i) {
        const cplx y = e.Y[i].value + std::conj(e.Y[i].value);
        const cplx p = e.P_A[i][i].value + e.P_B[i][i].value;
        y_worst = std::max(y_worst, std::abs(y + p) / std::abs(p));
      }
      const auto tr = perturbative::reduce_elements(e, Treatment::trace);
      const auto pl = perturbative::reduce_elements(e, Treatment::project_plus);
      m_worst = std::max(m_worst, std::abs(tr.M.value - pl.M.value));
      const auto ds = perturbative::assemble_rho_DS(e);
      const auto pf = perturbative::rho_AB_truncated(pl);
      const auto ce = perturbative::rho_AB_truncated(
          perturbative::reduce_elements(perturbative::compute_elements(c.with_b_branches_swapped(), {}), Treatment::project_plus));
      const MatrixXc diff = ds.entries - 0.5 * (pf.entries + ce.entries);
      for (int r = 0; r < 4; ++r)
        for (int q = 0; q < 4; ++q) {
          const double scale = std::max(std::abs(ds.entries(r, q)), 1e-300);
          if (std::abs(diff(r, q)) > 0) ds_worst = std::max(ds_worst, std::abs(diff(r, q)) / scale);
        }
    }
    return Outcome{y_worst <= kIdentityRel && m_worst == 0.0 && ds_worst <= kIdentityRel,
                   fmt("Y rel %.2e, |M_tr - M_plus| = %g, DS entrywise rel %.2e (tol %.0e)", y_worst, m_worst, ds_worst,
                       kIdentityRel)};
  });

  criterion(6, "cross-engine agreement at lambda eta = 1e-3 on 10 configurations", [] {
    harvest::testing::Uniform u(kSeed + 6);
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
      const auto kind = k % 2 ? ScenarioKind::CE : ScenarioKind::PF;
      const double sigma = k % 4 < 2 ? 1.0 : 9.0;
      const auto c = delta_config(kind, 3, SmearingProfile::gaussian(sigma), u(0.5, 1.5) / sigma, 1e-3,
                                  u(0.1, 1.0) * sigma, u(0.3, 1.0) * sigma, u(0.0, 0.2) * sigma);
      const auto exact = nonperturbative::assemble_rho_exact(c, {});
      const auto pe = perturbative::compute_elements(c, {});
      const auto pert = perturbative::assemble_rho_ABC(pe);
      for (auto t : {Treatment::trace, Treatment::project_plus})
        worst = std::max(worst, cross_engine_deviation(perturbative::reduce_control(exact, t).entries,
                                                       perturbative::reduce_control(pert, t).entries,
                                                       pe.P_A[0][0].value.real()));
    }
    return Outcome{worst <= kCrossEngineRel, fmt("max entrywise relative deviation %.2e (tol %.0e)", worst, kCrossEngineRel)};
  });

  criterion(7, "quadrature oracles: closed forms and full-dimension cubature", [] {
    numerics::QuadratureSpec spec;
    double closed = 0.0;
    for (double sigma : {0.3, 1.0, 9.0}) {
      auto k = field::wightman_kernel(3, SmearingProfile::gaussian(sigma), SmearingProfile::gaussian(sigma), 0, 0, spec);
      closed = std::max(closed, rel(k.value.real(), 1.0 / (4 * M_PI * M_PI * sigma * sigma)));
    }
    closed = std::max(closed, rel(field::wightman_kernel(2, SmearingProfile::uniform_disk(1), SmearingProfile::uniform_disk(1),
                                                         0, 0, spec).value.real(),
                                  4.0 / (3 * M_PI * M_PI)));
    closed = std::max(closed, rel(field::wightman_kernel(3, SmearingProfile::uniform_ball(1), SmearingProfile::uniform_ball(1),
                                                         0, 0, spec).value.real(),
                                  9.0 / (16 * M_PI * M_PI)));
    harvest::testing::Uniform u(kSeed + 7);
    double brute = 0.0;
    for (int k = 0; k < 20; ++k) {
      const int n = k % 2 ? 2 : 3;
      const double sigma = u(0.5, 2.0), tau = u(-2.0, 2.0), th = u(0, M_PI), ph = u(0, 2 * M_PI), r = u(0, 3);
      double rv[3] = {r * std::sin(th) * std::cos(ph), r * std::sin(th) * std::sin(ph), n == 3 ? r * std::cos(th) : 0.0};
      const double rr = std::sqrt(rv[0] * rv[0] + rv[1] * rv[1] + rv[2] * rv[2]);
      const auto b = harvest::testing::brute_force_kernel(n, sigma, tau, rv);
      const auto k2 = field::wightman_kernel(n, SmearingProfile::gaussian(sigma), SmearingProfile::gaussian(sigma), tau, rr, spec);
      brute = std::max(brute, std::abs(b - k2.value) / std::abs(k2.value));
    }
    return Outcome{closed <= kClosedFormRel && brute <= kBruteForceRel,
                   fmt("closed forms rel %.2e (tol %.0e), brute force rel %.2e (tol %.0e)", closed, kClosedFormRel, brute,
                       kBruteForceRel)};
  });

  criterion(8, "state sanity of produced states", [] {
    harvest::testing::Uniform u(kSeed + 8);
    double herm = 0, tr = 0, exact_neg = 0, pert_ratio = 0;
    int states = 0;
    for (int k = 0; k < 24; ++k) {
      const auto kind = k % 2 ? ScenarioKind::CE : ScenarioKind::PF;
      const double s = u(0.2, 4.0), T = u(0.5, 4.0), delay = u(0.0, 0.4);
      const auto c = k % 4 < 2 ? delta_config(kind, 2, SmearingProfile::uniform_disk(1.0), u(0.5, 4.0), u(0.2, 2.0), s, T, delay)
                               : delta_config(kind, 3, SmearingProfile::gaussian(u(0.5, 2.0)), u(0.5, 4.0), u(0.2, 2.0), s, T,
                                              delay);
      // Exact engine: 8x8 and both reductions.
      const auto exact = nonperturbative::assemble_rho_exact(c, {});
      for (const auto& rho : {exact, perturbative::reduce_control(exact, Treatment::trace),
                              perturbative::reduce_control(exact, Treatment::project_plus)}) {
        herm = std::max(herm, rho.hermiticity_error());
        tr = std::max(tr, std::abs(rho.trace() - 1.0));
        exact_neg = std::max(exact_neg, -rho.min_eigenvalue());
        ++states;
      }
      // Perturbative engine: tolerance scales with the square of the largest
      // entry outside the vacuum population.
      const auto e = perturbative::compute_elements(c, {}, true);
      std::vector<DensityMatrix> pert{perturbative::assemble_rho_ABC(e), perturbative::assemble_rho_DS(e)};
      for (auto t : {Treatment::trace, Treatment::project_plus})
        pert.push_back(perturbative::rho_AB_truncated(perturbative::reduce_elements(e, t)));
      for (const auto& rho : pert) {
        herm = std::max(herm, rho.hermiticity_error());
        tr = std::max(tr, std::abs(rho.trace() - 1.0));
        // Rows below dim/4 belong to the detector vacuum |00> (times the control).
        const int vac = rho.dim / 4;
        double big = 0.0;
        for (int r = 0; r < rho.dim; ++r)
          for (int q = 0; q < rho.dim; ++q)
            if (r >= vac || q >= vac) big = std::max(big, std::abs(rho.entries(r, q)));
        pert_ratio = std::max(pert_ratio, -rho.min_eigenvalue() / (kPerturbativePsdFactor * big * big));
        ++states;
      }
    }
    const bool ok = herm <= kHermiticity && tr <= kTrace && exact_neg <= kExactPsd && pert_ratio <= 1.0;
    return Outcome{ok, fmt("%d states: hermiticity %.1e, trace %.1e, exact min eig %.1e, perturbative neg/(10 max^2) %.2f",
                           states, herm, tr, -exact_neg, pert_ratio)};
  });

  criterion(9, "measures unit suite", [] {
    auto state = [](std::initializer_list<std::tuple<int, int, cplx>> entries) {
      MatrixXc m = MatrixXc::Zero(4, 4);
      for (auto [r, c, v] : entries) m(r, c) = v;
      return DensityMatrix(m, true);
    };
    const auto bell = state({{0, 0, 0.5}, {0, 3, 0.5}, {3, 0, 0.5}, {3, 3, 0.5}});
    double worst = std::max(std::abs(measures::concurrence(bell) - 1.0), std::abs(measures::entanglement_of_formation(bell) - 1.0));
    const auto prod = state({{0, 0, 1.0}});
    worst = std::max({worst, measures::concurrence(prod), measures::entanglement_of_formation(prod),
                      std::abs(measures::mutual_information_exact(prod))});
    harvest::testing::Uniform u(kSeed + 9);
    double x_worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      double d[4], sum = 0;
      for (double& x : d) sum += (x = u(0.01, 1.0));
      for (double& x : d) x /= sum;
      const cplx r14 = std::polar(u(0, 1) * std::sqrt(d[0] * d[3]), u(0, 2 * M_PI));
      const cplx r23 = std::polar(u(0, 1) * std::sqrt(d[1] * d[2]), u(0, 2 * M_PI));
      const auto rho = state({{0, 0, d[0]}, {1, 1, d[1]}, {2, 2, d[2]}, {3, 3, d[3]}, {0, 3, r14}, {3, 0, std::conj(r14)},
                              {1, 2, r23}, {2, 1, std::conj(r23)}});
      x_worst = std::max(x_worst, std::abs(measures::concurrence(rho) -
                                           measures::concurrence_x_state(*measures::XStateView::from(rho))));
    }
    bool mi_ok = true;
    for (int k = 0; k < 200; ++k) {
      const double pa = u(1e-6, 0.1), pb = u(1e-6, 0.1);
      const cplx L = k % 10 == 0 ? cplx(0.0) : std::polar(u(0.01, 1.0) * std::sqrt(pa * pb), u(0, 2 * M_PI));
      const double i = measures::mutual_information(pa, pb, L);
      mi_ok = mi_ok && i >= 0.0 && ((L == cplx(0.0)) == (i == 0.0));
    }
    return Outcome{worst <= kMeasures && x_worst <= kMeasures && mi_ok,
                   fmt("Bell/product %.1e, X-state vs Wootters %.1e (tol %.0e), MI >= 0 and zero iff L = 0: %s", worst,
                       x_worst, kMeasures, mi_ok ? "yes" : "no")};
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
