#include "harvest/scan/output.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "harvest/error.hpp"
#include "json.hpp"

#ifndef HARVEST_GIT_DESCRIBE
#define HARVEST_GIT_DESCRIBE "unknown"
#endif

namespace harvest::scan {

namespace fs = std::filesystem;
using nlohmann::json;

std::string build_version() { return HARVEST_GIT_DESCRIBE; }

void write_file_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  std::error_code ec;
  if (target.has_parent_path()) {
    fs::create_directories(target.parent_path(), ec);
    if (ec) throw IoError("cannot create directory '" + target.parent_path().string() + "': " + ec.message());
  }
  std::random_device rd;
  const fs::path tmp = target.string() + ".tmp." + std::to_string(rd());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp, ec);
      throw IoError("write to '" + tmp.string() + "' failed");
    }
  }
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ignore;
    fs::remove(tmp, ignore);
    throw IoError("cannot rename '" + tmp.string() + "' to '" + path + "': " + ec.message());
  }
}

Provenance provenance_of(const RunConfig& rc) {
  return {content_hash(rc.source_text), rc.source_name, rc.elements.spec, rc.elements.epsilon};
}

namespace {

json tolerances_json(const numerics::QuadratureSpec& s, double epsilon) {
  return {{"abs_tol", s.abs_tol}, {"rel_tol", s.rel_tol}, {"max_subdivisions", s.max_subdivisions}, {"epsilon", epsilon}};
}

std::string basis_label(int index, int dim) {
  const int bits = dim == 8 ? 3 : 2;
  std::string s = "|";
  for (int b = bits - 1; b >= 0; --b) s += ((index >> b) & 1) ? '1' : '0';
  return s + ">";
}

}  // namespace

std::string format_statedump(const DensityMatrix& rho, const std::string& label, const Provenance& prov) {
  json j;
  j["format"] = "harvest-statedump/1";
  j["label"] = label;
  j["dim"] = rho.dim;
  j["normalized"] = rho.normalized;
  j["basis_order"] = rho.basis_label();
  json basis = json::array();
  for (int i = 0; i < rho.dim; ++i) basis.push_back(basis_label(i, rho.dim));
  j["basis"] = basis;
  json rows = json::array();
  for (int r = 0; r < rho.dim; ++r) {
    json row = json::array();
    for (int c = 0; c < rho.dim; ++c) row.push_back({rho.entries(r, c).real(), rho.entries(r, c).imag()});
    rows.push_back(row);
  }
  j["entries"] = rows;
  j["provenance"] = {{"config_hash", prov.config_hash},
                     {"source", prov.source},
                     {"tolerances", tolerances_json(prov.spec, prov.epsilon)},
                     {"version", build_version()}};
  return j.dump(2) + "\n";
}

DensityMatrix parse_statedump(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("state dump: ") + e.what());
  }
  if (j.value("format", "") != "harvest-statedump/1") throw ConfigError("state dump: unknown format");
  const int dim = j.at("dim").get<int>();
  MatrixXc m(dim, dim);
  const auto& rows = j.at("entries");
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) m(r, c) = {rows.at(r).at(c).at(0).get<double>(), rows.at(r).at(c).at(1).get<double>()};
  return DensityMatrix(m, j.value("normalized", true));
}

std::string format_heatmap_ppm(const ScanResult& result, const std::string& column) {
  const int w = result.grid.s.count, h = result.grid.T.count;
  std::vector<double> v(static_cast<std::size_t>(w) * h);
  double vmax = 0.0;
  for (const auto& p : result.points) {
    const double x = p.status == PointStatus::ok ? column_value(result, p, column) : std::nan("");
    v[static_cast<std::size_t>(p.is) * h + p.iT] = x;
    if (std::isfinite(x)) vmax = std::max(vmax, std::abs(x));
  }
  auto val = [&](int is, int iT) { return v[static_cast<std::size_t>(is) * h + iT]; };
  std::string out = "P6\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
  for (int row = 0; row < h; ++row) {
    const int iT = h - 1 - row;
    for (int is = 0; is < w; ++is) {
      const double x = val(is, iT);
      unsigned char rgb[3];
      if (!std::isfinite(x)) {
        rgb[0] = rgb[1] = rgb[2] = 128;
      } else {
        bool contour = false;
        if (x > 0.0) {
          const int nb[4][2] = {{is - 1, iT}, {is + 1, iT}, {is, iT - 1}, {is, iT + 1}};
          for (const auto& n : nb) {
            if (n[0] < 0 || n[0] >= w || n[1] < 0 || n[1] >= h) continue;
            const double y = val(n[0], n[1]);
            if (std::isfinite(y) && y <= 0.0) contour = true;
          }
        }
        if (contour) {
          rgb[0] = rgb[1] = rgb[2] = 0;
        } else {
          const double t = vmax > 0.0 ? x / vmax : 0.0;  // in [-1, 1]
          const auto fade = static_cast<unsigned char>(std::lround(255.0 * (1.0 - std::abs(t))));
          if (t >= 0.0) {
            rgb[0] = 255;
            rgb[1] = fade;
            rgb[2] = fade;
          } else {
            rgb[0] = fade;
            rgb[1] = fade;
            rgb[2] = 255;
          }
        }
      }
      out.append(reinterpret_cast<const char*>(rgb), 3);
    }
  }
  return out;
}

std::string format_manifest(const ScanResult& result, const RunConfig& rc) {
  const auto& g = result.grid;
  json j;
  j["format"] = "harvest-manifest/1";
  j["version"] = build_version();
  j["config"] = {{"source", rc.source_name}, {"hash", content_hash(rc.source_text)}, {"text", rc.source_text}};
  j["engine"] = to_string(g.engine);
  j["scenario"] = scenario::to_string(g.model.scenario);
  json tr = json::array();
  for (auto t : g.treatments) tr.push_back(perturbative::to_string(t));
  j["treatments"] = tr;
  j["tolerances"] = tolerances_json(g.elements.spec, g.elements.epsilon);
  j["grid"] = {{"s", {{"min", g.s.min}, {"max", g.s.max}, {"count", g.s.count}}},
               {"T", {{"min", g.T.min}, {"max", g.T.max}, {"count", g.T.count}}}};
  j["threads"] = g.threads;
  j["wall_seconds"] = result.wall_seconds;
  int ok = 0, skipped = 0, failed = 0;
  for (const auto& p : result.points) {
    if (p.status == PointStatus::ok) ++ok;
    else if (p.status == PointStatus::skipped) ++skipped;
    else ++failed;
  }
  j["points"] = {{"ok", ok}, {"skipped", skipped}, {"failed", failed}};
  return j.dump(2) + "\n";
}

}  // namespace harvest::scan
