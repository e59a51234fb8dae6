#include "harvest/numerics/quadrature.hpp"

namespace harvest::numerics {

namespace {

// Abscissae and weights from QUADPACK qk21 / qk15.
constexpr double xgk21[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr double wgk21[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208175894568, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr double wg10[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr double xgk15[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double wgk15[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg7[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

const detail::KronrodTable k21{xgk21, wgk21, wg10, 11};
const detail::KronrodTable k15{xgk15, wgk15, wg7, 8};

}  // namespace

const detail::KronrodTable& detail::table(Rule rule) { return rule == Rule::gauss_kronrod_21 ? k21 : k15; }

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0)) throw DomainError("QuadratureSpec: abs_tol must be > 0");
  if (!(rel_tol > 0.0)) throw DomainError("QuadratureSpec: rel_tol must be > 0");
  if (max_subdivisions < 1) throw DomainError("QuadratureSpec: max_subdivisions must be >= 1");
  if (max_tail_periods < 1) throw DomainError("QuadratureSpec: max_tail_periods must be >= 1");
}

Extrapolation wynn_epsilon(const std::vector<cplx>& s) {
  Extrapolation best;
  const std::size_t n = s.size();
  if (n == 0) return best;
  best.value = s.back();
  if (n >= 2) best.error = std::abs(s[n - 1] - s[n - 2]);
  if (n < 3) return best;
  std::vector<cplx> prev(n + 1, cplx(0.0));  // column k-1
  std::vector<cplx> cur(s);                 // column k
  for (std::size_t k = 1; k < n; ++k) {
    const std::size_t len = cur.size() - 1;
    std::vector<cplx> next(len);
    for (std::size_t i = 0; i < len; ++i) {
      const cplx diff = cur[i + 1] - cur[i];
      if (diff == cplx(0.0)) {
        // Exact repetition: the sequence has converged at this column.
        if (k % 2 == 1) best = {cur[i + 1], 0.0};
        return best;
      }
      next[i] = prev[i + 1] + 1.0 / diff;
    }
    if (k % 2 == 0 && len >= 2) {
      const double err = std::abs(next[len - 1] - next[len - 2]);
      if (std::isfinite(err) && err < best.error) best = {next[len - 1], err};
    }
    prev = std::move(cur);
    cur = std::move(next);
    if (cur.size() < 2) break;
  }
  return best;
}

}  // namespace harvest::numerics
