#pragma once

#include <string>

#include "harvest/config.hpp"
#include "harvest/density_matrix.hpp"
#include "harvest/scan/scan.hpp"

namespace harvest::scan {

// Writes content to path through a temporary file in the same directory and
// an atomic rename; creates missing parent directories. Throws Error with the
// path on failure.
void write_file_atomic(const std::string& path, const std::string& content);

// Run provenance stored with every state dump and manifest.
struct Provenance {
  std::string config_hash;
  std::string source;
  numerics::QuadratureSpec spec;
  double epsilon = 0.0;
};
Provenance provenance_of(const RunConfig& rc);

// State dump, a JSON document:
//   {"format": "harvest-statedump/1", "label": ..., "dim": n, "normalized": bool,
//    "basis": ["|000>", ...], "entries": [[[re, im], ...], ...],
//    "provenance": {"config_hash", "source", "tolerances": {...}}}
// Doubles are written with round-trip precision.
std::string format_statedump(const DensityMatrix& rho, const std::string& label, const Provenance& prov);
DensityMatrix parse_statedump(const std::string& text);

// Binary PPM (P6), one pixel per grid point: s grows to the right, T grows
// upwards. Linear diverging scale symmetric about zero (blue negative, red
// positive), black on positive points bordering a non-positive neighbour
// (zero-level contour), grey for skipped or failed points.
std::string format_heatmap_ppm(const ScanResult& result, const std::string& column);

// JSON run manifest: configuration text and hash, tolerances, grid, build
// version (git describe), wall time, status counts.
std::string format_manifest(const ScanResult& result, const RunConfig& rc);

// Output of `git describe` at configure time.
std::string build_version();

}  // namespace harvest::scan
