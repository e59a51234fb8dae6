#include "harvest/perturbative/state.hpp"

#include <cmath>

#include "harvest/error.hpp"

namespace harvest::perturbative {

std::string to_string(Treatment t) {
  switch (t) {
    case Treatment::trace: return "trace";
    case Treatment::project_plus: return "project_plus";
    case Treatment::project_minus: return "project_minus";
    case Treatment::double_switch: return "DS";
  }
  return "?";
}

Treatment treatment_from_string(const std::string& s) {
  if (s == "trace" || s == "tr") return Treatment::trace;
  if (s == "project_plus" || s == "plus" || s == "+") return Treatment::project_plus;
  if (s == "project_minus" || s == "minus" || s == "-") return Treatment::project_minus;
  if (s == "DS" || s == "ds" || s == "double_switch") return Treatment::double_switch;
  throw ConfigError("unknown treatment '" + s + "' (expected trace, project_plus, project_minus or DS)");
}

DensityMatrix assemble_rho_ABC(const PerturbativeElements& e) {
  MatrixXc rho = MatrixXc::Zero(8, 8);
  auto at = [&](int ab_row, int i, int ab_col, int j) -> cplx& { return rho(2 * ab_row + i, 2 * ab_col + j); };
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      at(0, i, 0, j) = 0.5 * (1.0 + e.Y[i].value + std::conj(e.Y[j].value));
      at(0, i, 3, j) = 0.5 * std::conj(e.M[j].value);
      at(1, i, 1, j) = 0.5 * e.P_B[i][j].value;
      at(1, i, 2, j) = 0.5 * std::conj(e.L[j][i].value);
      at(2, i, 1, j) = 0.5 * e.L[i][j].value;
      at(2, i, 2, j) = 0.5 * e.P_A[i][j].value;
      at(3, i, 0, j) = 0.5 * e.M[i].value;
    }
  }
  return DensityMatrix(rho, false);
}

namespace {

MatrixXc project(const DensityMatrix& rho_abc, Treatment t) {
  if (rho_abc.dim != 8) throw DomainError("reduce_control expects an 8x8 state");
  MatrixXc out = MatrixXc::Zero(4, 4);
  for (int x = 0; x < 4; ++x) {
    for (int y = 0; y < 4; ++y) {
      cplx v(0.0);
      for (int c = 0; c < 2; ++c) {
        for (int cp = 0; cp < 2; ++cp) {
          const cplx r = rho_abc.entries(2 * x + c, 2 * y + cp);
          switch (t) {
            case Treatment::trace:
              if (c == cp) v += r;
              break;
            case Treatment::project_plus: v += 0.5 * r; break;
            case Treatment::project_minus: v += (c == cp ? 0.5 : -0.5) * r; break;
            case Treatment::double_switch: throw DomainError("DS is not a control reduction");
          }
        }
      }
      out(x, y) = v;
    }
  }
  return out;
}

}  // namespace

double control_outcome_probability(const DensityMatrix& rho_abc, Treatment t) {
  return project(rho_abc, t).trace().real();
}

DensityMatrix reduce_control(const DensityMatrix& rho_abc, Treatment t) {
  MatrixXc m = project(rho_abc, t);
  const double p = m.trace().real();
  if (!(p > 1e-300)) throw ZeroProbability("control outcome " + to_string(t) + " has zero probability");
  m /= p;
  return DensityMatrix(m, true);
}

ReducedElements reduce_elements(const PerturbativeElements& e, Treatment t) {
  ReducedElements r;
  auto avg = [](std::initializer_list<Estimate> xs, double w) {
    Estimate out;
    for (const auto& x : xs) {
      out.value += w * x.value;
      out.error += w * x.error;
    }
    return out;
  };
  switch (t) {
    case Treatment::trace:
      r.P_A = avg({e.P_A[0][0], e.P_A[1][1]}, 0.5);
      r.P_B = avg({e.P_B[0][0], e.P_B[1][1]}, 0.5);
      r.L = avg({e.L[0][0], e.L[1][1]}, 0.5);
      r.M = avg({e.M[0], e.M[1]}, 0.5);
      break;
    case Treatment::project_plus:
    case Treatment::double_switch:
      r.P_A = avg({e.P_A[0][0], e.P_A[0][1], e.P_A[1][0], e.P_A[1][1]}, 0.25);
      r.P_B = avg({e.P_B[0][0], e.P_B[0][1], e.P_B[1][0], e.P_B[1][1]}, 0.25);
      r.L = avg({e.L[0][0], e.L[0][1], e.L[1][0], e.L[1][1]}, 0.25);
      if (t == Treatment::project_plus) {
        r.M = avg({e.M[0], e.M[1]}, 0.5);
      } else {
        if (!e.has_cross) throw DomainError("double switch needs the cross M terms (include_cross)");
        r.M = avg({e.M[0], e.M[1], e.M_cross[0], e.M_cross[1]}, 0.25);
      }
      break;
    case Treatment::project_minus:
      throw Unsupported("project_minus has O(lambda^2) probability; use reduce_control on rho_ABC");
  }
  // P sums of Hermitian 2x2 blocks are real up to rounding.
  r.P_A.value = cplx(r.P_A.value.real(), 0.0);
  r.P_B.value = cplx(r.P_B.value.real(), 0.0);
  return r;
}

DensityMatrix rho_AB_truncated(const ReducedElements& r) {
  MatrixXc m = MatrixXc::Zero(4, 4);
  m(0, 0) = 1.0 - r.P_A.value - r.P_B.value;
  m(0, 3) = std::conj(r.M.value);
  m(1, 1) = r.P_B.value;
  m(1, 2) = std::conj(r.L.value);
  m(2, 1) = r.L.value;
  m(2, 2) = r.P_A.value;
  m(3, 0) = r.M.value;
  return DensityMatrix(m, true);
}

DensityMatrix assemble_rho_DS(const PerturbativeElements& e) {
  return rho_AB_truncated(reduce_elements(e, Treatment::double_switch));
}

DensityMatrix assemble_rho_DS(const ScenarioConfig& c, const ElementOptions& opt) {
  return assemble_rho_DS(compute_elements(c, opt, true));
}

}  // namespace harvest::perturbative
