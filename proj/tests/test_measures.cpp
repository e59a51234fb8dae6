#include <gtest/gtest.h>

#include "harvest/error.hpp"
#include "harvest/measures/measures.hpp"
#include "harvest/nonperturbative/exact.hpp"
#include "harvest/perturbative/state.hpp"
#include "support/configs.hpp"

using namespace harvest;
using namespace harvest::measures;
using field::SmearingProfile;
using perturbative::Treatment;
using scenario::ScenarioKind;

namespace {

DensityMatrix x_state(double r11, double r22, double r33, double r44, cplx r14, cplx r23) {
  MatrixXc m = MatrixXc::Zero(4, 4);
  m(0, 0) = r11;
  m(1, 1) = r22;
  m(2, 2) = r33;
  m(3, 3) = r44;
  m(0, 3) = r14;
  m(3, 0) = std::conj(r14);
  m(1, 2) = r23;
  m(2, 1) = std::conj(r23);
  return DensityMatrix(m, true);
}

}  // namespace

TEST(Concurrence, Examples) {
  EXPECT_NEAR(concurrence(x_state(0.5, 0, 0, 0.5, 0.5, 0)), 1.0, 1e-12);
  EXPECT_NEAR(concurrence(x_state(0, 0.5, 0.5, 0, 0, cplx(0, 0.5))), 1.0, 1e-12);
  EXPECT_NEAR(concurrence(x_state(1, 0, 0, 0, 0, 0)), 0.0, 1e-12);
  EXPECT_NEAR(concurrence(x_state(0.85, 0.05, 0.05, 0.05, 0.10, 0)), 0.10, 1e-12);
  // Werner state p|Bell> + (1-p) I/4 is entangled iff p > 1/3, C = (3p - 1)/2.
  for (double p : {0.2, 0.5, 0.9}) {
    const double d = (1 - p) / 4;
    auto w = x_state(p / 2 + d, d, d, p / 2 + d, p / 2, 0);
    EXPECT_NEAR(concurrence(w), std::max(0.0, (3 * p - 1) / 2), 1e-12) << p;
  }
}

TEST(Concurrence, GeneralMatchesXStateFormOnRandomStates) {
  harvest::testing::Uniform u(20190611);
  for (int trial = 0; trial < 200; ++trial) {
    double d[4], sum = 0;
    for (double& x : d) sum += (x = u(0.01, 1.0));
    for (double& x : d) x /= sum;
    auto rho = x_state(d[0], d[1], d[2], d[3], std::polar(u(0, 1) * std::sqrt(d[0] * d[3]), u(0, 2 * M_PI)),
                       std::polar(u(0, 1) * std::sqrt(d[1] * d[2]), u(0, 2 * M_PI)));
    auto view = XStateView::from(rho);
    ASSERT_TRUE(view);
    EXPECT_NEAR(concurrence(rho), concurrence_x_state(*view), 1e-10);
  }
}

TEST(Concurrence, NonXStateHasNoView) {
  MatrixXc m = MatrixXc::Identity(4, 4) * 0.25;
  m(0, 1) = m(1, 0) = 0.1;
  EXPECT_FALSE(XStateView::from(DensityMatrix(m, true)));
  EXPECT_NEAR(concurrence(DensityMatrix(m, true)), 0.0, 1e-12);
}

TEST(Concurrence, LocalUnitaryInvariant) {
  auto rho = x_state(0.4, 0.1, 0.1, 0.4, 0.3, 0.05);
  MatrixXc h(2, 2);
  const double th = 0.7;
  h << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  MatrixXc U = MatrixXc::Zero(4, 4);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) U(2 * a + b, 2 * c + d) = h(a, c) * (b == d ? 1.0 : 0.0);
  DensityMatrix rot(U * rho.entries * U.adjoint(), true);
  EXPECT_NEAR(concurrence(rot), concurrence(rho), 1e-10);
}

TEST(Concurrence, RejectsNonStates) {
  MatrixXc m = MatrixXc::Identity(4, 4) * 0.3;
  EXPECT_THROW(concurrence(DensityMatrix(m, true)), NotAState);
  MatrixXc h = MatrixXc::Identity(4, 4) * 0.25;
  h(0, 1) = 0.1;
  EXPECT_THROW(concurrence(DensityMatrix(h, true)), NotAState);
  EXPECT_THROW(concurrence(DensityMatrix(MatrixXc::Identity(8, 8) / 8.0, true)), NotAState);
}

TEST(EntanglementOfFormation, ValuesAndMonotone) {
  EXPECT_NEAR(entanglement_of_formation_from_concurrence(0.5), 0.35458, 1e-5);
  EXPECT_EQ(entanglement_of_formation_from_concurrence(0.0), 0.0);
  EXPECT_NEAR(entanglement_of_formation_from_concurrence(1.0), 1.0, 1e-15);
  double prev = -1;
  for (int k = 0; k <= 100; ++k) {
    const double e = entanglement_of_formation_from_concurrence(k / 100.0);
    EXPECT_GT(e, prev);
    prev = e;
  }
  EXPECT_NEAR(entanglement_of_formation_from_concurrence(1.0, M_E), std::log(2.0), 1e-15);
  EXPECT_THROW(entanglement_of_formation_from_concurrence(1.5), DomainError);
  EXPECT_NEAR(binary_entropy(0.5), 1.0, 1e-15);
  EXPECT_EQ(binary_entropy(0.0), 0.0);
}

TEST(MutualInformation, ExampleAndProperties) {
  EXPECT_NEAR(mutual_information(0.01, 0.01, 0.01), 0.02, 1e-14);
  EXPECT_EQ(mutual_information(0.01, 0.02, 0.0), 0.0);
  harvest::testing::Uniform u(3);
  for (int trial = 0; trial < 100; ++trial) {
    const double pa = u(1e-6, 0.1), pb = u(1e-6, 0.1);
    const cplx L = std::polar(u(0, 1) * std::sqrt(pa * pb), u(0, 2 * M_PI));
    const double i = mutual_information(pa, pb, L);
    EXPECT_GE(i, 0.0);
    EXPECT_NEAR(i, mutual_information(pb, pa, std::conj(L)), 1e-15);
    EXPECT_NEAR(mutual_information(pa, pb, L, M_E), i * std::log(2.0), 1e-14);
  }
  EXPECT_THROW(mutual_information(0.01, 0.01, 0.0101), DomainError);
  EXPECT_NO_THROW(mutual_information(0.01, 0.01, 0.01 * (1 + 1e-12)));
}

TEST(MutualInformation, AgreesWithExactStateAtSmallCoupling) {
  // The closed form is the leading term of the exact von Neumann value for the
  // truncated state; differences are higher order in the probabilities.
  auto c = harvest::testing::delta_config(ScenarioKind::PF, 3, SmearingProfile::gaussian(1.0), 1.0, 0.05, 0.5, 0.7, 0.1);
  auto exact = nonperturbative::assemble_rho_exact(c, {});
  auto pe = perturbative::compute_elements(c, {});
  for (auto t : {Treatment::trace, Treatment::project_plus}) {
    auto r = perturbative::reduce_elements(pe, t);
    const double ip = mutual_information(r.P_A.value.real(), r.P_B.value.real(), r.L.value);
    const double ie = mutual_information_exact(perturbative::reduce_control(exact, t));
    EXPECT_LT(std::abs(ip - ie), 0.05 * ip) << perturbative::to_string(t);
  }
}

TEST(MutualInformation, DoubleSwitchEqualsProjectPlus) {
  // P and L of the double switch are those of the |+> projection.
  auto c = harvest::testing::delta_config(ScenarioKind::PF, 2, SmearingProfile::uniform_disk(1.0), 2.0, 1.0, 3.0, 1.0, 0.2);
  auto e = perturbative::compute_elements(c, {}, true);
  auto ds = perturbative::reduce_elements(e, Treatment::double_switch);
  auto pl = perturbative::reduce_elements(e, Treatment::project_plus);
  EXPECT_EQ(mutual_information(ds.P_A.value.real(), ds.P_B.value.real(), ds.L.value),
            mutual_information(pl.P_A.value.real(), pl.P_B.value.real(), pl.L.value));
}

TEST(NoGo, MarginAndConcurrence) {
  EXPECT_NEAR(nogo_margin(0.01, 0.04, cplx(0.03, 0.04)), 0.03, 1e-15);
  EXPECT_EQ(concurrence_from_margin(-0.1), 0.0);
  EXPECT_EQ(concurrence_from_margin(0.03), 0.06);
  // Concurrence of the truncated state from its X-state form equals 2 max(0, margin).
  const double pa = 0.01, pb = 0.01;
  const cplx M(0.015, 0.0);
  auto rho = x_state(1 - pa - pb, pb, pa, 0, std::conj(M), 0.0);
  EXPECT_NEAR(concurrence_x_state(*XStateView::from(rho)), concurrence_from_margin(nogo_margin(pa, pb, M)), 1e-15);
}
