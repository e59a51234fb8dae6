#include "harvest/scan/scan.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include "harvest/error.hpp"
#include "harvest/measures/measures.hpp"
#include "harvest/nonperturbative/exact.hpp"

namespace harvest::scan {

using perturbative::PerturbativeElements;
using scenario::ScenarioConfig;
using scenario::ScenarioKind;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool needs_branches(Treatment t) { return t == Treatment::trace || t == Treatment::project_plus; }

void fill_unavailable(TreatmentResult& r, const std::string& note) {
  r = TreatmentResult{};
  r.note = note;
  r.P_A = r.P_B = r.abs_L = r.abs_M = r.margin = r.margin_error = kNaN;
  r.concurrence = r.eof = r.mutual_information = r.min_eigenvalue = kNaN;
}

double eof_or_nan(double c, double base, std::string& note) {
  try {
    return measures::entanglement_of_formation_from_concurrence(c, base);
  } catch (const DomainError& e) {
    note += std::string(note.empty() ? "" : "; ") + e.what();
    return kNaN;
  }
}

PointState perturbative_state(const PerturbativeElements& pe, Treatment t, double base) {
  PointState ps;
  auto& r = ps.measures;
  const auto red = perturbative::reduce_elements(pe, t);
  r.available = true;
  r.P_A = red.P_A.value.real();
  r.P_B = red.P_B.value.real();
  r.abs_L = std::abs(red.L.value);
  r.abs_M = std::abs(red.M.value);
  r.margin = measures::nogo_margin(r.P_A, r.P_B, red.M.value);
  const double root = std::sqrt(std::max(0.0, r.P_A * r.P_B));
  const double sqrt_err = root > 0.0 ? 0.5 * (red.P_A.error * r.P_B + red.P_B.error * r.P_A) / root
                                     : std::sqrt(red.P_A.error * red.P_B.error);
  r.margin_error = red.M.error + sqrt_err;
  r.concurrence = measures::concurrence_from_margin(r.margin);
  r.eof = eof_or_nan(r.concurrence, base, r.note);
  try {
    r.mutual_information = measures::mutual_information(r.P_A, r.P_B, red.L.value, base);
  } catch (const DomainError& e) {
    r.mutual_information = kNaN;
    r.note += std::string(r.note.empty() ? "" : "; ") + e.what();
  }
  ps.rho_ab = perturbative::rho_AB_truncated(red);
  r.min_eigenvalue = ps.rho_ab.min_eigenvalue();
  if (t != Treatment::double_switch) ps.rho_abc = perturbative::assemble_rho_ABC(pe);
  return ps;
}

PointState exact_measures(DensityMatrix rho, double quad_error, double base) {
  PointState ps;
  auto& r = ps.measures;
  const auto& m = rho.entries;
  r.available = true;
  r.P_A = (m(2, 2) + m(3, 3)).real();
  r.P_B = (m(1, 1) + m(3, 3)).real();
  r.abs_L = std::abs(m(2, 1));
  r.abs_M = std::abs(m(3, 0));
  r.margin = std::abs(m(0, 3)) - std::sqrt(std::max(0.0, m(1, 1).real() * m(2, 2).real()));
  r.margin_error = 4.0 * quad_error;
  r.concurrence = measures::concurrence(rho);
  r.eof = eof_or_nan(r.concurrence, base, r.note);
  r.mutual_information = measures::mutual_information_exact(rho, base);
  r.min_eigenvalue = rho.min_eigenvalue();
  ps.rho_ab = std::move(rho);
  return ps;
}

// Shared per-configuration work so that several treatments reuse elements.
class Evaluator {
 public:
  Evaluator(const ScenarioConfig& c, Engine engine, const perturbative::ElementOptions& opt, double base)
      : c_(c), engine_(engine), opt_(opt), base_(base) {}

  PointState state(Treatment t, bool want_cross) {
    if (engine_ == Engine::perturbative) {
      if (!pe_ || (want_cross && !pe_->has_cross)) pe_ = perturbative::compute_elements(c_, opt_, want_cross);
      return perturbative_state(*pe_, t, base_);
    }
    if (!ne_) ne_ = nonperturbative::compute_overlaps(c_, opt_.spec);
    if (t == Treatment::double_switch) {
      ScenarioConfig ds = c_;
      ds.scenario = ScenarioKind::DS;
      return exact_measures(nonperturbative::branch_state(ds, *ne_, 0), ne_->max_error, base_);
    }
    if (c_.scenario == ScenarioKind::DS) throw Unsupported("the exact double switch has no control to reduce");
    if (!rho8_) {
      rho8_ = c_.scenario == ScenarioKind::PF ? nonperturbative::assemble_rho_PF(*ne_)
                                              : nonperturbative::assemble_rho_CE(*ne_);
    }
    auto ps = exact_measures(perturbative::reduce_control(*rho8_, t), ne_->max_error, base_);
    ps.rho_abc = *rho8_;
    return ps;
  }

  double max_error() const {
    double m = 0.0;
    if (pe_) {
      auto upd = [&](const perturbative::Estimate& e) { m = std::max(m, e.error); };
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          upd(pe_->P_A[i][j]);
          upd(pe_->P_B[i][j]);
          upd(pe_->L[i][j]);
        }
        upd(pe_->M[i]);
        if (pe_->has_cross) upd(pe_->M_cross[i]);
      }
    }
    if (ne_) m = std::max(m, ne_->max_error);
    return m;
  }

 private:
  ScenarioConfig c_;
  Engine engine_;
  perturbative::ElementOptions opt_;
  double base_;
  std::optional<PerturbativeElements> pe_;
  std::optional<nonperturbative::NonPerturbativeElements> ne_;
  std::optional<DensityMatrix> rho8_;
};

std::string treatment_tag(Treatment t) { return perturbative::to_string(t); }

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch == '\n' ? ' ' : ch;
  }
  return out + "\"";
}

const char* const kPerTreatment[] = {"P_A", "P_B", "absL", "absM", "margin", "margin_err", "C", "EoF", "MI", "min_eig"};

double field_of(const TreatmentResult& r, int k) {
  switch (k) {
    case 0: return r.P_A;
    case 1: return r.P_B;
    case 2: return r.abs_L;
    case 3: return r.abs_M;
    case 4: return r.margin;
    case 5: return r.margin_error;
    case 6: return r.concurrence;
    case 7: return r.eof;
    case 8: return r.mutual_information;
    default: return r.min_eigenvalue;
  }
}

}  // namespace

std::string to_string(PointStatus s) {
  switch (s) {
    case PointStatus::ok: return "ok";
    case PointStatus::skipped: return "skipped";
    case PointStatus::failed: return "failed";
  }
  return "?";
}

void ScanGrid::validate() const {
  if (s.count < 2 || T.count < 2) throw ConfigError("scan ranges need at least 2 points each");
  if (!(s.max > s.min) || !(T.max > T.min)) throw ConfigError("scan ranges need max > min");
  if (s.min < 0.0) throw ConfigError("scan separations must be non-negative");
  if (treatments.empty()) throw ConfigError("scan needs at least one treatment");
  for (auto t : treatments)
    if (t == Treatment::project_minus) throw ConfigError("project_minus is not a scan treatment");
  if (threads < 0) throw ConfigError("threads must be >= 0");
  if (engine == Engine::nonperturbative && model.window != scenario::WindowKind::delta)
    throw ConfigError("the nonperturbative engine requires delta windows");
}

ScanGrid make_grid(const RunConfig& rc) {
  if (!rc.scan) throw ConfigError("configuration has no 'scan' section");
  ScanGrid g;
  g.s = rc.scan->s;
  g.T = rc.scan->T;
  g.model = rc.model;
  g.treatments = rc.treatments;
  g.engine = rc.engine;
  g.elements = rc.elements;
  g.log_base = rc.log_base;
  g.threads = rc.scan->threads;
  g.validate();
  return g;
}

PointState evaluate_state(const ScenarioConfig& config, Engine engine, Treatment treatment,
                          const perturbative::ElementOptions& opt, double log_base) {
  config.validate();
  if (engine == Engine::nonperturbative && needs_branches(treatment)) scenario::check_nonperturbative_ordering(config);
  Evaluator ev(config, engine, opt, log_base);
  return ev.state(treatment, treatment == Treatment::double_switch);
}

PointResult evaluate_point(const ScanGrid& grid, int is, int iT) {
  PointResult p;
  p.is = is;
  p.iT = iT;
  p.s = grid.s.at(is);
  p.T = grid.T.at(iT);
  p.treatments.resize(grid.treatments.size());
  try {
    const ScenarioConfig c = grid.model.build(p.s, p.T);
    c.validate();
    p.causal = scenario::causal_relation(c);
    bool branches = false, cross = false;
    for (auto t : grid.treatments) {
      branches = branches || needs_branches(t);
      cross = cross || t == Treatment::double_switch;
    }
    if (grid.engine == Engine::nonperturbative && branches && c.scenario != ScenarioKind::DS)
      scenario::check_nonperturbative_ordering(c);
    Evaluator ev(c, grid.engine, grid.elements, grid.log_base);
    for (std::size_t k = 0; k < grid.treatments.size(); ++k) {
      try {
        p.treatments[k] = ev.state(grid.treatments[k], cross).measures;
      } catch (const Unsupported& e) {
        fill_unavailable(p.treatments[k], e.what());
      }
    }
    p.max_quadrature_error = ev.max_error();
  } catch (const OrderingViolated& e) {
    p.status = PointStatus::skipped;
    p.message = e.what();
  } catch (const std::exception& e) {
    p.status = PointStatus::failed;
    p.message = e.what();
  }
  if (p.status != PointStatus::ok) {
    for (auto& t : p.treatments) fill_unavailable(t, p.message);
    p.max_quadrature_error = kNaN;
  }
  return p;
}

ScanResult run_scan(const ScanGrid& grid) {
  grid.validate();
  const auto start = std::chrono::steady_clock::now();
  ScanResult out;
  out.grid = grid;
  out.points.resize(grid.size());
  const std::size_t n = grid.size();
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < n; k = next++) {
      const int is = static_cast<int>(k / grid.T.count);
      const int iT = static_cast<int>(k % grid.T.count);
      out.points[k] = evaluate_point(grid, is, iT);
    }
  };
  unsigned threads = grid.threads > 0 ? static_cast<unsigned>(grid.threads) : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::vector<std::string> csv_header(const ScanGrid& grid) {
  std::vector<std::string> h{"is", "iT", "s", "T", "status", "causal", "max_quad_error"};
  for (auto t : grid.treatments)
    for (const char* f : kPerTreatment) h.push_back(std::string(f) + "_" + treatment_tag(t));
  h.push_back("message");
  return h;
}

std::string format_csv(const ScanResult& result) {
  std::string out;
  const auto header = csv_header(result.grid);
  for (std::size_t k = 0; k < header.size(); ++k) out += (k ? "," : "") + header[k];
  out += "\n";
  for (const auto& p : result.points) {
    out += std::to_string(p.is) + "," + std::to_string(p.iT) + "," + fmt(p.s) + "," + fmt(p.T) + "," +
           to_string(p.status) + "," + scenario::to_string(p.causal) + "," + fmt(p.max_quadrature_error);
    for (const auto& t : p.treatments)
      for (int k = 0; k < 10; ++k) out += "," + fmt(field_of(t, k));
    out += "," + csv_quote(p.message) + "\n";
  }
  return out;
}

double column_value(const ScanResult& result, const PointResult& p, const std::string& column) {
  if (column == "s") return p.s;
  if (column == "T") return p.T;
  if (column == "max_quad_error") return p.max_quadrature_error;
  for (std::size_t ti = 0; ti < result.grid.treatments.size(); ++ti) {
    for (int k = 0; k < 10; ++k) {
      if (column == std::string(kPerTreatment[k]) + "_" + treatment_tag(result.grid.treatments[ti]))
        return field_of(p.treatments[ti], k);
    }
  }
  throw ConfigError("unknown scan column '" + column + "'");
}

}  // namespace harvest::scan
