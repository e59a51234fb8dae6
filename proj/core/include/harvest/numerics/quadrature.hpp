#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "harvest/error.hpp"

namespace harvest::numerics {

using cplx = std::complex<double>;

enum class TailStrategy { none, half_period_partition_with_acceleration };

enum class Rule { gauss_kronrod_21, gauss_kronrod_15 };

struct QuadratureSpec {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_subdivisions = 2000;
  TailStrategy tail_strategy = TailStrategy::none;
  Rule rule = Rule::gauss_kronrod_21;
  // Angular rate of the dominant oscillation on [a, +inf). Only read when
  // b = +inf and tail_strategy asks for half-period partitioning.
  double tail_frequency = 0.0;
  int max_tail_periods = 4000;

  void validate() const;
  double tolerance(double magnitude) const { return std::max(abs_tol, rel_tol * magnitude); }
};

struct QuadratureResult {
  cplx value{};
  double error_estimate = 0.0;
  long evaluations = 0;
  bool converged = true;

  QuadratureResult& operator+=(const QuadratureResult& o) {
    value += o.value;
    error_estimate += o.error_estimate;
    evaluations += o.evaluations;
    converged = converged && o.converged;
    return *this;
  }
};

// Result of one Kronrod panel.
struct Panel {
  double a = 0.0;
  double b = 0.0;
  cplx value{};
  double error = 0.0;
};

namespace detail {

struct KronrodTable {
  const double* xk;   // Kronrod abscissae in (0,1], last entry is 0
  const double* wk;   // Kronrod weights
  const double* wg;   // Gauss weights for the odd-indexed abscissae
  int half;           // number of abscissae (including the centre)
};

const KronrodTable& table(Rule rule);

}  // namespace detail

template <class F>
Panel kronrod_panel(F& f, double a, double b, Rule rule) {
  const auto& t = detail::table(rule);
  const double centre = 0.5 * (a + b);
  const double half_length = 0.5 * (b - a);
  const double abs_half = std::abs(half_length);
  const cplx fc = f(centre);
  const int n = t.half - 1;
  // The 7-point Gauss rule inside GK15 uses the centre; the 10-point one does not.
  cplx result_gauss = (n % 2 == 1) ? fc * t.wg[n / 2] : cplx(0.0);
  cplx result_kronrod = fc * t.wk[n];
  double result_abs = std::abs(result_kronrod);
  cplx f1[16], f2[16];
  for (int j = 0; j < n; ++j) {
    const double dx = half_length * t.xk[j];
    f1[j] = f(centre - dx);
    f2[j] = f(centre + dx);
    const cplx sum = f1[j] + f2[j];
    result_kronrod += t.wk[j] * sum;
    result_abs += t.wk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) result_gauss += t.wg[j / 2] * sum;
  }
  const cplx mean = 0.5 * result_kronrod;
  double result_asc = t.wk[n] * std::abs(fc - mean);
  for (int j = 0; j < n; ++j) result_asc += t.wk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  result_asc *= abs_half;
  result_abs *= abs_half;
  double err = std::abs((result_kronrod - result_gauss) * half_length);
  if (result_asc != 0.0 && err != 0.0) err = result_asc * std::min(1.0, std::pow(200.0 * err / result_asc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (result_abs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * result_abs, err);
  return Panel{a, b, result_kronrod * half_length, err};
}

inline int panel_evaluations(Rule rule) { return rule == Rule::gauss_kronrod_21 ? 21 : 15; }

// Wynn epsilon extrapolation of a sequence of partial sums. Returns the best
// even-column estimate and the spread of that column as its error.
struct Extrapolation {
  cplx value{};
  double error = std::numeric_limits<double>::infinity();
};
Extrapolation wynn_epsilon(const std::vector<cplx>& partial_sums);

// Adaptive Gauss-Kronrod over [a,b] with optional interior breakpoints. Each
// breakpoint interval starts as one panel; panels are bisected in order of
// decreasing error until the global estimate meets the tolerance.
template <class F>
QuadratureResult integrate_adaptive(F&& f, const std::vector<double>& points, const QuadratureSpec& spec) {
  struct ByError {
    bool operator()(const Panel& x, const Panel& y) const {
      if (x.error != y.error) return x.error < y.error;
      return x.a > y.a;
    }
  };
  std::priority_queue<Panel, std::vector<Panel>, ByError> heap;
  std::vector<Panel> finished;  // panels too narrow to split further
  QuadratureResult out;
  const int per_panel = panel_evaluations(spec.rule);
  cplx total{};
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (points[i + 1] == points[i]) continue;
    Panel p = kronrod_panel(f, points[i], points[i + 1], spec.rule);
    out.evaluations += per_panel;
    total += p.value;
    total_err += p.error;
    heap.push(p);
  }
  int panels = static_cast<int>(heap.size());
  while (!heap.empty()) {
    if (total_err <= spec.tolerance(std::abs(total))) break;
    if (panels >= spec.max_subdivisions) break;
    Panel p = heap.top();
    heap.pop();
    const double mid = 0.5 * (p.a + p.b);
    if (!(mid > p.a && mid < p.b) || std::abs(p.b - p.a) < 1e-14 * (std::abs(p.a) + std::abs(p.b))) {
      finished.push_back(p);
      continue;
    }
    Panel left = kronrod_panel(f, p.a, mid, spec.rule);
    Panel right = kronrod_panel(f, mid, p.b, spec.rule);
    out.evaluations += 2 * per_panel;
    total += left.value + right.value - p.value;
    total_err += left.error + right.error - p.error;
    heap.push(left);
    heap.push(right);
    ++panels;
  }
  // Re-sum in left-to-right order so the value does not carry the update history.
  std::vector<Panel> all = std::move(finished);
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  out.value = 0.0;
  out.error_estimate = 0.0;
  for (const auto& p : all) {
    out.value += p.value;
    out.error_estimate += p.error;
  }
  out.converged = out.error_estimate <= spec.tolerance(std::abs(out.value));
  return out;
}

// Oscillatory tail on [a, +inf): integrate consecutive half periods of the
// declared frequency and accelerate the partial sums.
template <class F>
QuadratureResult integrate_tail_partitioned(F&& f, double a, double frequency, const QuadratureSpec& spec) {
  const double h = M_PI / std::abs(frequency);
  QuadratureSpec chunk = spec;
  chunk.abs_tol = 0.1 * spec.abs_tol;
  chunk.rel_tol = 0.1 * spec.rel_tol;
  chunk.tail_strategy = TailStrategy::none;
  QuadratureResult out;
  std::vector<cplx> sums;
  cplx running{};
  double chunk_err = 0.0;
  cplx last_estimate{};
  int stable = 0;
  constexpr std::size_t window = 24;
  for (int m = 0; m < spec.max_tail_periods; ++m) {
    const double lo = a + m * h;
    const double hi = a + (m + 1) * h;
    QuadratureResult piece = integrate_adaptive(f, {lo, hi}, chunk);
    out.evaluations += piece.evaluations;
    out.converged = out.converged && piece.converged;
    chunk_err += piece.error_estimate;
    running += piece.value;
    sums.push_back(running);
    const double tol = spec.tolerance(std::abs(running));
    // Terms already below tolerance: the series has effectively terminated.
    if (m >= 2 && std::abs(piece.value) + piece.error_estimate < 0.01 * tol) {
      out.value = running;
      out.error_estimate = chunk_err + std::abs(piece.value);
      return out;
    }
    if (m < 3) continue;
    std::vector<cplx> tail(sums.end() - std::min(window, sums.size()), sums.end());
    Extrapolation e = wynn_epsilon(tail);
    const double change = std::abs(e.value - last_estimate);
    last_estimate = e.value;
    if (std::max(e.error, change) <= 0.5 * tol) {
      if (++stable >= 2) {
        out.value = e.value;
        out.error_estimate = std::max(e.error, change) + chunk_err;
        return out;
      }
    } else {
      stable = 0;
    }
  }
  out.value = last_estimate;
  out.error_estimate = std::abs(sums.back() - last_estimate) + chunk_err;
  out.converged = false;
  return out;
}

// Integrate f over [a,b]. b may be +infinity: with TailStrategy::none the
// half line is mapped onto (0,1]; with half-period partitioning the declared
// tail_frequency sets the partition. Throws NonConvergence if the budget is
// exhausted before the tolerance is met.
template <class F>
QuadratureResult integrate_1d(F&& f, double a, double b, const QuadratureSpec& spec,
                              const std::vector<double>& breakpoints = {}) {
  spec.validate();
  QuadratureResult r;
  if (std::isinf(b)) {
    if (spec.tail_strategy == TailStrategy::half_period_partition_with_acceleration && spec.tail_frequency != 0.0) {
      r = integrate_tail_partitioned(f, a, spec.tail_frequency, spec);
    } else {
      auto mapped = [&](double t) -> cplx {
        if (t <= 0.0) return 0.0;
        const double x = a + (1.0 - t) / t;
        return f(x) / (t * t);
      };
      r = integrate_adaptive(mapped, {0.0, 1.0}, spec);
    }
  } else {
    std::vector<double> pts{a};
    for (double x : breakpoints)
      if (x > std::min(a, b) && x < std::max(a, b)) pts.push_back(x);
    pts.push_back(b);
    if (b < a) {
      std::sort(pts.begin() + 1, pts.end() - 1, std::greater<>());
    } else {
      std::sort(pts.begin() + 1, pts.end() - 1);
    }
    r = integrate_adaptive(f, pts, spec);
  }
  if (!r.converged)
    throw NonConvergence("integrate_1d: budget exhausted (error " + std::to_string(r.error_estimate) + ")",
                         std::abs(r.value), r.error_estimate);
  return r;
}

// Non-throwing variant for callers that aggregate failures themselves.
template <class F>
QuadratureResult try_integrate_1d(F&& f, double a, double b, const QuadratureSpec& spec,
                                  const std::vector<double>& breakpoints = {}) {
  try {
    return integrate_1d(std::forward<F>(f), a, b, spec, breakpoints);
  } catch (const NonConvergence& e) {
    QuadratureResult r;
    r.value = e.value_estimate();
    r.error_estimate = e.error_estimate();
    r.converged = false;
    return r;
  }
}

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

// Double integral of f(t, t') with t over x_range and t' over y_range. With
// ordered = true the domain is restricted to t' <= t (the Dyson simplex).
// Nested adaptive 1D quadrature; the inner tolerance is a tenth of the outer.
template <class F>
QuadratureResult integrate_2d_triangle(F&& f, Range x_range, Range y_range, bool ordered, const QuadratureSpec& spec) {
  QuadratureSpec inner = spec;
  inner.abs_tol = 0.1 * spec.abs_tol / std::max(1.0, x_range.hi - x_range.lo);
  inner.rel_tol = 0.1 * spec.rel_tol;
  long inner_evals = 0;
  double inner_err = 0.0;
  bool inner_ok = true;
  auto row = [&](double t) -> cplx {
    const double top = ordered ? std::min(t, y_range.hi) : y_range.hi;
    if (top <= y_range.lo) return 0.0;
    QuadratureResult r = try_integrate_1d([&](double tp) { return f(t, tp); }, y_range.lo, top, inner);
    inner_evals += r.evaluations;
    inner_err = std::max(inner_err, r.error_estimate);
    inner_ok = inner_ok && r.converged;
    return r.value;
  };
  std::vector<double> breaks;
  if (ordered) breaks = {y_range.lo, y_range.hi};
  QuadratureResult r = try_integrate_1d(row, x_range.lo, x_range.hi, spec, breaks);
  r.evaluations += inner_evals;
  r.error_estimate += inner_err * (x_range.hi - x_range.lo);
  r.converged = r.converged && inner_ok;
  if (!r.converged)
    throw NonConvergence("integrate_2d_triangle: budget exhausted", std::abs(r.value), r.error_estimate);
  return r;
}

template <class F>
QuadratureResult integrate_2d_triangle(F&& f, Range t_range, bool ordered, const QuadratureSpec& spec) {
  return integrate_2d_triangle(std::forward<F>(f), t_range, t_range, ordered, spec);
}

}  // namespace harvest::numerics
