#include "harvest/measures/measures.hpp"

#include <algorithm>
#include <cmath>

#include "harvest/error.hpp"

namespace harvest::measures {

namespace {

double xlogx(double x, double base) { return x > 0.0 ? x * std::log(x) / std::log(base) : 0.0; }

double entropy(const Eigen::VectorXd& eig, double base) {
  double s = 0.0;
  for (int i = 0; i < eig.size(); ++i) s -= xlogx(std::max(0.0, eig[i]), base);
  return s;
}

}  // namespace

std::optional<XStateView> XStateView::from(const DensityMatrix& rho, double tol) {
  if (rho.dim != 4) return std::nullopt;
  const auto& m = rho.entries;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      if (r != c && r + c != 3 && std::abs(m(r, c)) > tol) return std::nullopt;
  XStateView x;
  x.r11 = m(0, 0).real();
  x.r22 = m(1, 1).real();
  x.r33 = m(2, 2).real();
  x.r44 = m(3, 3).real();
  x.r14 = m(0, 3);
  x.r23 = m(1, 2);
  return x;
}

void require_state(const DensityMatrix& rho) {
  if (rho.dim != 4 || rho.entries.rows() != 4 || rho.entries.cols() != 4)
    throw NotAState("expected a 4x4 two-qubit state, got dimension " + std::to_string(rho.entries.rows()));
  const double herm = rho.hermiticity_error();
  if (herm > 1e-12) throw NotAState("state is not Hermitian (deviation " + std::to_string(herm) + ")");
  const double tr = rho.trace().real();
  if (std::abs(tr - 1.0) > 1e-10 || std::abs(rho.trace().imag()) > 1e-10)
    throw NotAState("state trace is " + std::to_string(tr) + ", expected 1");
}

double concurrence_x_state(const XStateView& x) {
  const double a = std::abs(x.r14) - std::sqrt(std::max(0.0, x.r22 * x.r33));
  const double b = std::abs(x.r23) - std::sqrt(std::max(0.0, x.r11 * x.r44));
  return 2.0 * std::max({0.0, a, b});
}

double concurrence(const DensityMatrix& rho) {
  require_state(rho);
  const MatrixXc& m = rho.entries;
  MatrixXc flip = MatrixXc::Zero(4, 4);
  // sy x sy in the |00>, |01>, |10>, |11> basis
  flip(0, 3) = -1.0;
  flip(1, 2) = 1.0;
  flip(2, 1) = 1.0;
  flip(3, 0) = -1.0;
  const MatrixXc tilde = flip * m.conjugate() * flip;
  const MatrixXc root = numerics::psd_sqrt(m);
  const MatrixXc r = root * tilde * root;
  Eigen::VectorXd ev = numerics::hermitian_eigenvalues(r);
  std::array<double, 4> w{};
  for (int i = 0; i < 4; ++i) w[i] = std::sqrt(std::max(0.0, ev[i]));
  std::sort(w.begin(), w.end(), std::greater<>());
  const double general = std::max(0.0, w[0] - w[1] - w[2] - w[3]);

  if (auto x = XStateView::from(rho)) {
    if (rho.min_eigenvalue() >= -1e-12) {
      const double closed = concurrence_x_state(*x);
      if (std::abs(closed - general) > 1e-10)
        throw NonConvergence("concurrence: eigenvalue and X-state forms disagree", general, std::abs(closed - general));
    }
  }
  return general;
}

double binary_entropy(double x, double base) {
  if (x < 0.0 || x > 1.0) throw DomainError("binary_entropy: argument outside [0, 1]");
  return -xlogx(x, base) - xlogx(1.0 - x, base);
}

double entanglement_of_formation_from_concurrence(double c, double base) {
  if (c < 0.0 || c > 1.0 + 1e-12) throw DomainError("entanglement_of_formation: concurrence outside [0, 1]");
  c = std::min(c, 1.0);
  return binary_entropy(0.5 * (1.0 + std::sqrt(1.0 - c * c)), base);
}

double entanglement_of_formation(const DensityMatrix& rho, double base) {
  return entanglement_of_formation_from_concurrence(concurrence(rho), base);
}

double mutual_information(double P_A, double P_B, cplx L, double base) {
  if (P_A < 0.0 || P_B < 0.0) throw DomainError("mutual_information: negative excitation probability");
  const double l2 = std::norm(L);
  const double bound = P_A * P_B;
  if (l2 > bound * (1.0 + 1e-9) + 1e-300)
    throw DomainError("mutual_information: |L|^2 = " + std::to_string(l2) + " exceeds P_A P_B = " +
                      std::to_string(bound));
  // Eigenvalues x + d and y - d with x >= y; d is formed without cancellation
  // so that I = 0 exactly when L = 0.
  const double x = std::max(P_A, P_B), y = std::min(P_A, P_B);
  const double root = std::sqrt((x - y) * (x - y) + 4.0 * std::min(l2, bound));
  const double d = (root + (x - y)) > 0.0 ? std::min(y, 2.0 * std::min(l2, bound) / (root + (x - y))) : 0.0;
  if (d == 0.0) return 0.0;
  if (y - d <= 0.0) return xlogx(x + d, base) - xlogx(x, base) - xlogx(y, base);
  // log1p(u) - u, accurate for small u.
  auto g = [](double u) {
    if (std::abs(u) < 1e-4) return u * u * (-0.5 + u * (1.0 / 3.0 + u * (-0.25 + u * 0.2)));
    return std::log1p(u) - u;
  };
  const double nats = x * g(d / x) + y * g(-d / y) + d * std::log((x + d) / (y - d));
  return nats / std::log(base);
}

double mutual_information_exact(const DensityMatrix& rho, double base) {
  require_state(rho);
  const MatrixXc& m = rho.entries;
  MatrixXc ra = MatrixXc::Zero(2, 2), rb = MatrixXc::Zero(2, 2);
  for (int a = 0; a < 2; ++a)
    for (int ap = 0; ap < 2; ++ap)
      for (int b = 0; b < 2; ++b) {
        ra(a, ap) += m(2 * a + b, 2 * ap + b);
        rb(a, ap) += m(2 * b + a, 2 * b + ap);
      }
  return entropy(numerics::hermitian_eigenvalues(ra), base) + entropy(numerics::hermitian_eigenvalues(rb), base) -
         entropy(numerics::hermitian_eigenvalues(m), base);
}

double nogo_margin(double P_A, double P_B, cplx M) { return std::abs(M) - std::sqrt(std::max(0.0, P_A * P_B)); }

}  // namespace harvest::measures
