#include <gtest/gtest.h>

#include "harvest/error.hpp"
#include "harvest/measures/measures.hpp"
#include "harvest/perturbative/state.hpp"
#include "support/configs.hpp"

using namespace harvest;
using namespace harvest::perturbative;
using field::SmearingProfile;
using scenario::ScenarioKind;
using harvest::testing::delta_config;

namespace {

ScenarioConfig random_config(harvest::testing::Uniform& u, int trial, ScenarioKind kind = ScenarioKind::PF) {
  if (trial % 2 == 0)
    return delta_config(kind, 3, SmearingProfile::gaussian(u(0.5, 2.0)), u(0.1, 4.0), 1.0, u(0.0, 5.0), u(0.1, 5.0),
                        u(0.0, 1.0));
  return delta_config(kind, 2, SmearingProfile::uniform_disk(1.0), u(0.1, 4.0), 1.0, u(0.0, 5.0), u(0.1, 5.0),
                      u(0.0, 1.0));
}

double max_abs(const MatrixXc& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Elements, LambdaZeroGivesGroundState) {
  auto c = delta_config(ScenarioKind::PF, 3, SmearingProfile::gaussian(1), 1, 0.0, 1, 1);
  auto rho = assemble_rho_ABC(compute_elements(c, {}));
  MatrixXc expect = MatrixXc::Zero(8, 8);
  expect.block(0, 0, 2, 2).setConstant(0.5);
  EXPECT_EQ(max_abs(rho.entries - expect), 0.0);
  for (auto t : {Treatment::trace, Treatment::project_plus}) {
    auto r = reduce_control(rho, t);
    EXPECT_NEAR(r.entries(0, 0).real(), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(r.entries.sum()), 1.0, 1e-15);
  }
}

TEST(Elements, RandomConfigsSatisfyIdentities) {
  harvest::testing::Uniform u(20190611);
  for (int trial = 0; trial < 20; ++trial) {
    const auto kind = trial % 4 < 2 ? ScenarioKind::PF : ScenarioKind::CE;
    const auto c = random_config(u, trial, kind);
    const auto e = compute_elements(c, {}, true);
    SCOPED_TRACE(trial);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        // P is a Gram matrix over branches.
        EXPECT_LT(std::abs(e.P_A[i][j].value - std::conj(e.P_A[j][i].value)), 1e-14);
        EXPECT_LE(std::abs(e.P_A[i][j].value), e.P_A[0][0].value.real() * (1 + 1e-10));
      }
      EXPECT_EQ(e.P_A[i][i].value.imag(), 0.0);
      const cplx y = e.Y[i].value + std::conj(e.Y[i].value);
      EXPECT_LT(std::abs(y + e.P_A[i][i].value + e.P_B[i][i].value), 1e-14);
    }
    auto rho = assemble_rho_ABC(e);
    EXPECT_LT(rho.hermiticity_error(), 1e-15);
    EXPECT_LT(std::abs(rho.trace() - 1.0), 1e-15);

    auto tr = reduce_elements(e, Treatment::trace);
    auto pl = reduce_elements(e, Treatment::project_plus);
    EXPECT_EQ(tr.M.value, pl.M.value);
    // Partial trace cannot beat the no-go bound at second order.
    EXPECT_LE(measures::nogo_margin(tr.P_A.value.real(), tr.P_B.value.real(), tr.M.value),
              1e-12 * tr.P_A.value.real());
    // The truncated reduction matches the 8x8 reduction: exactly for the
    // partial trace, up to the O(P^2) renormalization after projection.
    EXPECT_LT(max_abs(reduce_control(rho, Treatment::trace).entries -
                      rho_AB_truncated(reduce_elements(e, Treatment::trace)).entries),
              1e-14);
    const double p = std::max(e.P_A[0][0].value.real(), e.P_A[1][1].value.real());
    auto plus = reduce_control(rho, Treatment::project_plus);
    auto plus_trunc = rho_AB_truncated(reduce_elements(e, Treatment::project_plus));
    EXPECT_LT(max_abs(plus.entries - plus_trunc.entries), 10 * p * p);
    const double prob = control_outcome_probability(rho, Treatment::project_plus);
    MatrixXc unnorm = plus.entries * prob;
    unnorm(0, 0) -= prob - 1.0;
    EXPECT_LT(max_abs(unnorm - plus_trunc.entries), 1e-14);
  }
}

TEST(Elements, CEIsPFWithBBranchesRelabelled) {
  auto pf = delta_config(ScenarioKind::PF, 2, SmearingProfile::uniform_disk(1.0), 2.0, 1.0, 3.0, 1.2, 0.3);
  auto ce = pf.with_b_branches_swapped();
  auto a = compute_elements(pf, {});
  auto b = compute_elements(ce, {});
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      EXPECT_EQ(a.P_A[i][j].value, b.P_A[i][j].value);
      EXPECT_EQ(a.P_B[i][j].value, b.P_B[1 - i][1 - j].value);
      EXPECT_EQ(a.L[i][j].value, b.L[i][1 - j].value);
    }
  }
}

TEST(Elements, ScaleWithCouplingSquared) {
  auto c = delta_config(ScenarioKind::PF, 3, SmearingProfile::gaussian(1), 1.5, 1.0, 1.0, 1.0, 0.1);
  auto c3 = c;
  c3.A.coupling = c3.B.coupling = 3.0;
  auto e1 = compute_elements(c, {}), e3 = compute_elements(c3, {});
  EXPECT_LT(std::abs(e3.L[0][1].value - 9.0 * e1.L[0][1].value), 1e-14 * std::abs(e3.L[0][1].value));
  EXPECT_LT(std::abs(e3.M[1].value - 9.0 * e1.M[1].value), 1e-14 * std::abs(e3.M[1].value));
}

TEST(DoubleSwitch, IsAverageOfPFAndCEProjections) {
  harvest::testing::Uniform u(7);
  for (int trial = 0; trial < 4; ++trial) {
    auto c = random_config(u, trial);
    auto e = compute_elements(c, {}, true);
    auto ds = assemble_rho_DS(e);
    auto ce = c.with_b_branches_swapped();
    auto pf_plus = rho_AB_truncated(reduce_elements(e, Treatment::project_plus));
    auto ce_plus = rho_AB_truncated(reduce_elements(compute_elements(ce, {}), Treatment::project_plus));
    EXPECT_LT(max_abs(ds.entries - 0.5 * (pf_plus.entries + ce_plus.entries)), 1e-12 * e.P_A[0][0].value.real());
    EXPECT_LT(std::abs(ds.trace() - 1.0), 1e-15);
  }
  auto c = random_config(u, 0);
  EXPECT_THROW(assemble_rho_DS(compute_elements(c, {}, false)), Error);
}

TEST(Control, ProjectMinusAndProbabilities) {
  auto c = delta_config(ScenarioKind::PF, 3, SmearingProfile::gaussian(1), 1, 0.0, 1, 1);
  auto rho = assemble_rho_ABC(compute_elements(c, {}));
  EXPECT_NEAR(control_outcome_probability(rho, Treatment::project_plus), 1.0, 1e-15);
  EXPECT_NEAR(control_outcome_probability(rho, Treatment::trace), 1.0, 1e-15);
  EXPECT_THROW(reduce_control(rho, Treatment::project_minus), ZeroProbability);
}

TEST(Cosine, MomentumAndPositionRoutesAgree) {
  // Pointlike detectors, cosine windows: L in momentum space (window spectra)
  // against the Richardson-extrapolated position-space double integral.
  for (double s : {0.5, 2.0, 4.0}) {
    auto c = harvest::testing::cosine_config(ScenarioKind::PF, 3.0, 1.0, s, 1.3);
    ElementOptions opt;
    auto L = element_L(c, 0, 1, opt);
    auto pos = cosine_unordered_pair_limit(c.window(Detector::A, 0), 3.0, c.window(Detector::B, 1), 3.0, s,
                                           opt.epsilon, opt.spec);
    EXPECT_LT(std::abs(L.value - pos.value), 1e-6 * std::abs(L.value)) << s;
  }
}

TEST(Cosine, PointlikeDeltaDiverges) {
  auto c = delta_config(ScenarioKind::PF, 3, SmearingProfile::pointlike(), 1, 1, 1, 1);
  EXPECT_THROW(compute_elements(c, {}), UVDivergent);
}

TEST(Cosine, OrderedPairConvergesInEpsilon) {
  scenario::WindowSpec a{scenario::WindowKind::cosine, 1.0, 0.0}, b{scenario::WindowKind::cosine, 1.0, 0.4};
  numerics::QuadratureSpec spec;
  auto l1 = cosine_ordered_pair_limit(a, 3.0, b, 3.0, 1.0, 1e-3, spec);
  auto l2 = cosine_ordered_pair_limit(a, 3.0, b, 3.0, 1.0, 5e-4, spec);
  EXPECT_LT(std::abs(l1.value - l2.value), 1e-6 * std::abs(l1.value));
}
