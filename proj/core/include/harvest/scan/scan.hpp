#pragma once

#include <optional>
#include <string>
#include <vector>

#include "harvest/config.hpp"
#include "harvest/density_matrix.hpp"

namespace harvest::scan {

using perturbative::Treatment;

struct ScanGrid {
  Range s;
  Range T;
  ModelSpec model;
  std::vector<Treatment> treatments;
  Engine engine = Engine::perturbative;
  perturbative::ElementOptions elements;
  double log_base = 2.0;
  int threads = 0;

  void validate() const;
  std::size_t size() const { return static_cast<std::size_t>(s.count) * T.count; }
};

ScanGrid make_grid(const RunConfig& rc);

// Measures of the reduced two-detector state for one control treatment.
// margin is |M| - sqrt(P_A P_B) (perturbative) or |rho_14| - sqrt(rho_22 rho_33)
// (exact state); concurrence is 2 max(0, margin) and the Wootters value
// respectively.
struct TreatmentResult {
  bool available = false;
  std::string note;
  double P_A = 0, P_B = 0, abs_L = 0, abs_M = 0;
  double margin = 0, margin_error = 0;
  double concurrence = 0, eof = 0, mutual_information = 0;
  double min_eigenvalue = 0;
};

enum class PointStatus { ok, skipped, failed };
std::string to_string(PointStatus s);

struct PointResult {
  int is = 0, iT = 0;
  double s = 0, T = 0;
  PointStatus status = PointStatus::ok;
  std::string message;
  scenario::CausalRelation causal = scenario::CausalRelation::unclassifiable;
  std::vector<TreatmentResult> treatments;
  double max_quadrature_error = 0;
};

struct ScanResult {
  ScanGrid grid;
  // Position-indexed: point (is, iT) lives at is * T.count + iT.
  std::vector<PointResult> points;
  double wall_seconds = 0;

  const PointResult& at(int is, int iT) const { return points.at(static_cast<std::size_t>(is) * grid.T.count + iT); }
};

// Evaluates one grid point. Ordering violations of the exact engine give a
// skipped point, numerical failures a failed point; neither throws.
PointResult evaluate_point(const ScanGrid& grid, int is, int iT);

// Evaluates every point on grid.threads workers. Output does not depend on
// the evaluation order. Throws ConfigError for an invalid grid only.
ScanResult run_scan(const ScanGrid& grid);

// Reduced two-detector state for one treatment at a single configuration,
// together with its measures. Used by the state command and by run_scan.
struct PointState {
  std::optional<DensityMatrix> rho_abc;  // 8x8 (perturbative or exact) when defined
  DensityMatrix rho_ab;                  // reduced 4x4
  TreatmentResult measures;
};
PointState evaluate_state(const scenario::ScenarioConfig& config, Engine engine, Treatment treatment,
                          const perturbative::ElementOptions& opt, double log_base);

// Column names of the CSV, in order.
std::vector<std::string> csv_header(const ScanGrid& grid);
std::string format_csv(const ScanResult& result);
// Value of a named per-treatment column (e.g. "C_project_plus") at a point; NaN if unavailable.
double column_value(const ScanResult& result, const PointResult& p, const std::string& column);

}  // namespace harvest::scan
