#include "harvest/nonperturbative/exact.hpp"

#include <cmath>
#include <vector>

#include "harvest/error.hpp"
#include "harvest/field/correlator.hpp"

namespace harvest::nonperturbative {

using scenario::ScenarioKind;
using scenario::WindowKind;
using lcplx = std::complex<long double>;

namespace {

const Detector kDet[2] = {Detector::A, Detector::B};

void require_delta(const ScenarioConfig& c) {
  if (c.window_kind() != WindowKind::delta) throw Unsupported("the exact engine requires delta windows");
}

// x^{(1 +/- p)/2} for x, p in {+1, -1}
long double sign_power(int x, int exponent) { return exponent == 0 ? 1.0L : static_cast<long double>(x); }

int level(int sign) { return (1 - sign) / 2; }  // +1 -> ground (0), -1 -> excited (1)

struct Lattice {
  const NonPerturbativeElements& e;
  long double theta_sign;
  // i Theta_{a;b}/2 + omega_{a;b}
  lcplx c(int a, int b) const {
    return lcplx(static_cast<long double>(e.omega[a][b]), theta_sign * 0.5L * static_cast<long double>(e.Theta[a][b]));
  }
  // i Theta_{a;b}/2 - omega_{a;b}
  lcplx cm(int a, int b) const {
    return lcplx(-static_cast<long double>(e.omega[a][b]), theta_sign * 0.5L * static_cast<long double>(e.Theta[a][b]));
  }
  lcplx phase(double gap, int sign_ket, double t_ket, int sign_bra, double t_bra) const {
    const long double arg = 0.5L * gap * ((1 - sign_ket) * static_cast<long double>(t_ket) - (1 - sign_bra) * static_cast<long double>(t_bra));
    return std::exp(lcplx(0.0L, arg));
  }
};

int idx8(int a, int b, int ctrl) { return 4 * a + 2 * b + ctrl; }

DensityMatrix to_density(const std::vector<lcplx>& acc) {
  MatrixXc m(8, 8);
  for (int r = 0; r < 8; ++r)
    for (int col = 0; col < 8; ++col) {
      const lcplx v = acc[8 * r + col];
      m(r, col) = cplx(static_cast<double>(v.real()), static_cast<double>(v.imag()));
    }
  return DensityMatrix(m, true);
}

}  // namespace

std::pair<double, double> overlap_integrals(const ScenarioConfig& c, Detector d, int i, Detector e, int j,
                                            const numerics::QuadratureSpec& spec) {
  require_delta(c);
  const auto& dd = c.detector(d);
  const auto& de = c.detector(e);
  const double r = d == e ? 0.0 : c.separation();
  const double tau = c.time(d, i) - c.time(e, j);
  auto k = field::wightman_kernel(c.spatial_dim, dd.profile, de.profile, tau, r, spec);
  const cplx ov = dd.coupling * de.coupling * c.window(d, i).eta * c.window(e, j).eta * k.value;
  if (d == e && i == j) return {0.0, -ov.real()};
  return {-2.0 * ov.imag(), -ov.real()};
}

NonPerturbativeElements compute_overlaps(const ScenarioConfig& c, const numerics::QuadratureSpec& spec) {
  c.validate();
  require_delta(c);
  NonPerturbativeElements out;
  for (Detector d : kDet) {
    for (int i = 0; i < 2; ++i) {
      const int a = event_index(d, i);
      out.time[a] = c.time(d, i);
      out.gap[a] = c.detector(d).gap;
    }
  }
  for (Detector d : kDet) {
    for (int i = 0; i < 2; ++i) {
      for (Detector e : kDet) {
        for (int j = 0; j < 2; ++j) {
          const int a = event_index(d, i), b = event_index(e, j);
          if (b < a) continue;
          const auto& dd = c.detector(d);
          const auto& de = c.detector(e);
          const double r = d == e ? 0.0 : c.separation();
          auto k = field::wightman_kernel(c.spatial_dim, dd.profile, de.profile, out.time[a] - out.time[b], r, spec);
          const double scale = dd.coupling * de.coupling * c.window(d, i).eta * c.window(e, j).eta;
          cplx ov = scale * k.value;
          if (a == b) ov = cplx(ov.real(), 0.0);
          out.overlap[a][b] = ov;
          out.overlap[b][a] = std::conj(ov);
          out.max_error = std::max(out.max_error, scale * k.error_estimate);
        }
      }
    }
  }
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      out.Theta[a][b] = a == b ? 0.0 : -2.0 * out.overlap[a][b].imag();
      out.omega[a][b] = -out.overlap[a][b].real();
    }
    out.f[a] = std::exp(-0.5 * out.overlap[a][a].real());
  }
  return out;
}

DensityMatrix assemble_rho_PF(const NonPerturbativeElements& e, double theta_sign) {
  const Lattice L{e, theta_sign};
  std::vector<lcplx> acc(64, lcplx(0.0L));
  const int signs[2] = {1, -1};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const int Ai = event_index(Detector::A, i), Aj = event_index(Detector::A, j);
      const int Bi = event_index(Detector::B, i), Bj = event_index(Detector::B, j);
      const long double fprod = static_cast<long double>(e.f[Ai]) * e.f[Aj] * e.f[Bi] * e.f[Bj];
      for (int w : signs) for (int x : signs) for (int y : signs) for (int z : signs) {
        const lcplx pre = L.phase(e.gap[Ai], z, e.time[Ai], x, e.time[Aj]) *
                          L.phase(e.gap[Bi], y, e.time[Bi], w, e.time[Bj]) * fprod;
        lcplx inner(0.0L);
        for (int p : signs) for (int q : signs) for (int r : signs) for (int s : signs) {
          const long double sf = sign_power(x, (1 + p) / 2) * sign_power(w, (1 + q) / 2) *
                                 sign_power(y, (1 - r) / 2) * sign_power(z, (1 - s) / 2);
          const lcplx ex = static_cast<long double>(p * q) * L.c(Aj, Bj) + static_cast<long double>(p * r) * L.c(Aj, Bi) +
                           static_cast<long double>(p * s) * L.c(Aj, Ai) + static_cast<long double>(q * r) * L.c(Bj, Bi) -
                           static_cast<long double>(q * s) * L.cm(Ai, Bj) - static_cast<long double>(r * s) * L.cm(Ai, Bi);
          inner += sf * std::exp(ex);
        }
        const int row = idx8(level(z), level(y), i);
        const int col = idx8(level(x), level(w), j);
        acc[8 * row + col] += pre * inner / 32.0L;
      }
    }
  }
  return to_density(acc);
}

DensityMatrix assemble_rho_CE(const NonPerturbativeElements& e, double theta_sign) {
  const Lattice L{e, theta_sign};
  std::vector<lcplx> acc(64, lcplx(0.0L));
  const int signs[2] = {1, -1};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      // Label table: in branch 0 A acts first, in branch 1 B acts first.
      const Detector D = j == 0 ? Detector::B : Detector::A;
      const Detector E = j == 0 ? Detector::A : Detector::B;
      const Detector F = i == 0 ? Detector::B : Detector::A;
      const Detector G = i == 0 ? Detector::A : Detector::B;
      const int Dj = event_index(D, j), Ej = event_index(E, j), Fi = event_index(F, i), Gi = event_index(G, i);
      const int Ai = event_index(Detector::A, i), Aj = event_index(Detector::A, j);
      const int Bi = event_index(Detector::B, i), Bj = event_index(Detector::B, j);
      const long double fprod = static_cast<long double>(e.f[Dj]) * e.f[Ej] * e.f[Fi] * e.f[Gi];
      for (int w : signs) for (int x : signs) for (int y : signs) for (int z : signs) {
        // Ket/bra sign variables of A and B in this control cell.
        const int ketA = i == 1 ? y : z;
        const int braA = j == 1 ? w : x;
        const int ketB = i == 1 ? z : y;
        const int braB = j == 1 ? x : w;
        const lcplx pre = L.phase(e.gap[Ai], ketA, e.time[Ai], braA, e.time[Aj]) *
                          L.phase(e.gap[Bi], ketB, e.time[Bi], braB, e.time[Bj]) * fprod;
        lcplx inner(0.0L);
        for (int p : signs) for (int q : signs) for (int r : signs) for (int s : signs) {
          const long double sf = sign_power(x, (1 + p) / 2) * sign_power(w, (1 + q) / 2) *
                                 sign_power(y, (1 - r) / 2) * sign_power(z, (1 - s) / 2);
          const lcplx ex = static_cast<long double>(p * q) * L.c(Ej, Dj) + static_cast<long double>(p * r) * L.c(Ej, Fi) +
                           static_cast<long double>(p * s) * L.c(Ej, Gi) + static_cast<long double>(q * r) * L.c(Dj, Fi) +
                           static_cast<long double>(q * s) * L.c(Dj, Gi) + static_cast<long double>(r * s) * L.c(Fi, Gi);
          inner += sf * std::exp(ex);
        }
        const int row = idx8(level(ketA), level(ketB), i);
        const int col = idx8(level(braA), level(braB), j);
        acc[8 * row + col] += pre * inner / 32.0L;
      }
    }
  }
  return to_density(acc);
}

DensityMatrix assemble_rho_PF(const ScenarioConfig& c, const ExactOptions& opt) {
  if (c.scenario != ScenarioKind::PF) throw DomainError("assemble_rho_PF needs a PF configuration");
  scenario::check_nonperturbative_ordering(c);
  return assemble_rho_PF(compute_overlaps(c, opt.spec), opt.theta_sign);
}

DensityMatrix assemble_rho_CE(const ScenarioConfig& c, const ExactOptions& opt) {
  if (c.scenario != ScenarioKind::CE) throw DomainError("assemble_rho_CE needs a CE configuration");
  scenario::check_nonperturbative_ordering(c);
  return assemble_rho_CE(compute_overlaps(c, opt.spec), opt.theta_sign);
}

DensityMatrix assemble_rho_exact(const ScenarioConfig& c, const ExactOptions& opt) {
  switch (c.scenario) {
    case ScenarioKind::PF: return assemble_rho_PF(c, opt);
    case ScenarioKind::CE: return assemble_rho_CE(c, opt);
    default: throw Unsupported("the exact engine covers PF and CE; DS is perturbative only");
  }
}

namespace {

using Vec4 = std::array<lcplx, 4>;

// Apply (1 + sigma mu_D(T))/2 to an AB vector; mu = e^{i Omega T} sigma_+ + h.c.
Vec4 kick(const Vec4& v, Detector d, int sigma, double gap, double t) {
  const lcplx up = std::exp(lcplx(0.0L, static_cast<long double>(gap) * t));
  const lcplx down = std::conj(up);
  Vec4 out{};
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const int k = 2 * a + b;
      out[k] += 0.5L * v[k];
      // flip the addressed qubit
      const int lvl = d == Detector::A ? a : b;
      const int target = d == Detector::A ? 2 * (1 - a) + b : 2 * a + (1 - b);
      out[target] += 0.5L * static_cast<long double>(sigma) * (lvl == 0 ? up : down) * v[k];
    }
  }
  return out;
}

struct Kick {
  int event;
  Detector det;
  double scale;
};

std::vector<Kick> branch_kicks(const ScenarioConfig& c, int branch) {
  auto events = scenario::window_events(c);
  std::vector<Kick> out;
  for (const auto& ev : events.at(branch)) out.push_back({event_index(ev.detector, ev.branch), ev.detector, ev.coupling_scale});
  return out;
}

// <0| D(v_1) ... D(v_m) |0> for v_a = sign_a scale_a beta_{event_a}.
lcplx weyl_expectation(const NonPerturbativeElements& e, const std::vector<Kick>& ks, const std::vector<int>& sg) {
  lcplx ex(0.0L);
  for (std::size_t a = 0; a < ks.size(); ++a) {
    const long double sa = sg[a] * ks[a].scale;
    ex -= 0.5L * sa * sa * static_cast<long double>(e.overlap[ks[a].event][ks[a].event].real());
    for (std::size_t b = a + 1; b < ks.size(); ++b) {
      const long double sb = sg[b] * ks[b].scale;
      const cplx ov = e.overlap[ks[a].event][ks[b].event];
      ex -= sa * sb * lcplx(ov.real(), ov.imag());
    }
  }
  return std::exp(ex);
}

// Accumulate the (i, j) control cell of the exact state (without the 1/2 of the control).
void accumulate_cell(const ScenarioConfig& c, const NonPerturbativeElements& e, const std::vector<Kick>& ket,
                     const std::vector<Kick>& bra, std::array<std::array<lcplx, 4>, 4>& cell) {
  const std::size_t nk = ket.size(), nb = bra.size();
  for (unsigned ms = 0; ms < (1u << nk); ++ms) {
    std::vector<int> s(nk);
    Vec4 kv{1.0L, 0.0L, 0.0L, 0.0L};
    for (std::size_t a = 0; a < nk; ++a) {
      s[a] = (ms >> a) & 1u ? -1 : 1;
      kv = kick(kv, ket[a].det, s[a], c.detector(ket[a].det).gap, e.time[ket[a].event]);
    }
    for (unsigned mp = 0; mp < (1u << nb); ++mp) {
      std::vector<int> p(nb);
      Vec4 bv{1.0L, 0.0L, 0.0L, 0.0L};
      for (std::size_t a = 0; a < nb; ++a) {
        p[a] = (mp >> a) & 1u ? -1 : 1;
        bv = kick(bv, bra[a].det, p[a], c.detector(bra[a].det).gap, e.time[bra[a].event]);
      }
      // Operator order: bra kicks in time order (sign -p), then ket kicks in reverse time order.
      std::vector<Kick> seq;
      std::vector<int> sg;
      for (std::size_t a = 0; a < nb; ++a) {
        seq.push_back(bra[a]);
        sg.push_back(-p[a]);
      }
      for (std::size_t a = nk; a-- > 0;) {
        seq.push_back(ket[a]);
        sg.push_back(s[a]);
      }
      const lcplx field = weyl_expectation(e, seq, sg);
      for (int r = 0; r < 4; ++r)
        for (int col = 0; col < 4; ++col) cell[r][col] += kv[r] * std::conj(bv[col]) * field;
    }
  }
}

}  // namespace

DensityMatrix assemble_rho_weyl(const ScenarioConfig& c, const NonPerturbativeElements& e) {
  require_delta(c);
  if (c.scenario == ScenarioKind::DS) throw Unsupported("assemble_rho_weyl: DS has no control qubit");
  MatrixXc m = MatrixXc::Zero(8, 8);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      std::array<std::array<lcplx, 4>, 4> cell{};
      accumulate_cell(c, e, branch_kicks(c, i), branch_kicks(c, j), cell);
      for (int r = 0; r < 4; ++r)
        for (int col = 0; col < 4; ++col) {
          const lcplx v = 0.5L * cell[r][col];
          m(2 * r + i, 2 * col + j) = cplx(static_cast<double>(v.real()), static_cast<double>(v.imag()));
        }
    }
  }
  return DensityMatrix(m, true);
}

DensityMatrix branch_state(const ScenarioConfig& c, const NonPerturbativeElements& e, int branch) {
  require_delta(c);
  std::array<std::array<lcplx, 4>, 4> cell{};
  auto ks = branch_kicks(c, c.scenario == ScenarioKind::DS ? 0 : branch);
  accumulate_cell(c, e, ks, ks, cell);
  MatrixXc m(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int col = 0; col < 4; ++col)
      m(r, col) = cplx(static_cast<double>(cell[r][col].real()), static_cast<double>(cell[r][col].imag()));
  return DensityMatrix(m, true);
}

}  // namespace harvest::nonperturbative
