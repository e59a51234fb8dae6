#include "harvest/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "harvest/error.hpp"

namespace harvest {

using scenario::Geometry;
using scenario::ScenarioConfig;

std::string to_string(Engine e) { return e == Engine::perturbative ? "perturbative" : "nonperturbative"; }

Engine engine_from_string(const std::string& s) {
  if (s == "perturbative") return Engine::perturbative;
  if (s == "nonperturbative" || s == "exact") return Engine::nonperturbative;
  throw ConfigError("unknown engine '" + s + "' (expected perturbative or nonperturbative)");
}

ScenarioConfig ModelSpec::build() const {
  return scenario::make_config(scenario, spatial_dim, detector, window, eta, geometry);
}

ScenarioConfig ModelSpec::build(double separation, double branch_offset) const {
  Geometry g = geometry;
  g.separation = separation;
  g.branch_offset = branch_offset;
  return scenario::make_config(scenario, spatial_dim, detector, window, eta, g);
}

std::string content_hash(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

namespace {

int line_of(const YAML::Node& n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : -1; }

void require_map(const YAML::Node& n, const std::string& what) {
  if (!n.IsMap()) throw ConfigError(what + " must be a mapping", line_of(n));
}

void check_keys(const YAML::Node& n, const std::string& what, const std::set<std::string>& allowed) {
  require_map(n, what);
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) {
      std::string list;
      for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
      throw ConfigError("unknown key '" + key + "' in " + what + " (allowed: " + list + ")", line_of(kv.first));
    }
  }
}

template <typename T>
T scalar(const YAML::Node& n, const std::string& what) {
  if (!n.IsScalar()) throw ConfigError(what + " must be a scalar", line_of(n));
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("cannot parse " + what + " from '" + n.Scalar() + "'", line_of(n));
  }
}

template <typename F>
auto with_line(const YAML::Node& n, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError& e) {
    if (e.line() >= 0) throw;
    throw ConfigError(e.what(), line_of(n));
  } catch (const DomainError& e) {
    throw ConfigError(e.what(), line_of(n));
  }
}

double positive(const YAML::Node& n, const std::string& what) {
  const double v = scalar<double>(n, what);
  if (!(v > 0.0)) throw ConfigError(what + " must be positive", line_of(n));
  return v;
}

field::SmearingProfile parse_profile(const YAML::Node& n) {
  if (n.IsScalar()) {
    const auto kind = with_line(n, [&] { return field::profile_kind_from_string(n.Scalar()); });
    if (kind != field::ProfileKind::pointlike) throw ConfigError("profile '" + n.Scalar() + "' needs a width", line_of(n));
    return field::SmearingProfile::pointlike();
  }
  check_keys(n, "detector.profile", {"kind", "width"});
  if (!n["kind"]) throw ConfigError("detector.profile needs 'kind'", line_of(n));
  field::SmearingProfile p;
  p.kind = with_line(n["kind"], [&] { return field::profile_kind_from_string(scalar<std::string>(n["kind"], "profile kind")); });
  if (p.kind != field::ProfileKind::pointlike) {
    if (!n["width"]) throw ConfigError("detector.profile needs 'width'", line_of(n));
    p.width = positive(n["width"], "detector.profile.width");
  }
  return p;
}

Range parse_range(const YAML::Node& n, const std::string& what) {
  check_keys(n, what, {"min", "max", "count"});
  for (const char* k : {"min", "max", "count"})
    if (!n[k]) throw ConfigError(what + " needs '" + k + "'", line_of(n));
  Range r;
  r.min = scalar<double>(n["min"], what + ".min");
  r.max = scalar<double>(n["max"], what + ".max");
  r.count = scalar<int>(n["count"], what + ".count");
  if (r.count < 2) throw ConfigError(what + ".count must be at least 2", line_of(n["count"]));
  if (!(r.max > r.min)) throw ConfigError(what + ": max must exceed min", line_of(n));
  return r;
}

std::vector<std::string> string_list(const YAML::Node& n, const std::string& what) {
  std::vector<std::string> out;
  if (n.IsScalar()) return {n.Scalar()};
  if (!n.IsSequence()) throw ConfigError(what + " must be a list", line_of(n));
  for (const auto& x : n) out.push_back(scalar<std::string>(x, what + " entry"));
  return out;
}

}  // namespace

RunConfig parse_run_config(const std::string& text, const std::string& source_name) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(e.msg, e.mark.line >= 0 ? e.mark.line + 1 : -1);
  }
  if (!root || root.IsNull()) throw ConfigError("empty configuration");
  check_keys(root, "configuration",
             {"scenario", "engine", "spatial_dim", "treatments", "detector", "window", "geometry", "scan", "quadrature",
              "measures", "output"});

  RunConfig rc;
  rc.source_name = source_name;
  rc.source_text = text;
  ModelSpec& m = rc.model;

  if (root["scenario"])
    m.scenario = with_line(root["scenario"], [&] { return scenario::scenario_kind_from_string(scalar<std::string>(root["scenario"], "scenario")); });
  if (root["engine"])
    rc.engine = with_line(root["engine"], [&] { return engine_from_string(scalar<std::string>(root["engine"], "engine")); });
  if (root["spatial_dim"]) {
    m.spatial_dim = scalar<int>(root["spatial_dim"], "spatial_dim");
    if (m.spatial_dim != 2 && m.spatial_dim != 3) throw ConfigError("spatial_dim must be 2 or 3", line_of(root["spatial_dim"]));
  }
  if (root["treatments"]) {
    rc.treatments.clear();
    for (const auto& t : root["treatments"]) {
      const auto name = scalar<std::string>(t, "treatment");
      const auto tr = with_line(t, [&] { return perturbative::treatment_from_string(name); });
      if (tr == perturbative::Treatment::project_minus)
        throw ConfigError("treatment project_minus is not available in reports", line_of(t));
      rc.treatments.push_back(tr);
    }
    if (!root["treatments"].IsSequence() || rc.treatments.empty())
      throw ConfigError("treatments must be a non-empty list", line_of(root["treatments"]));
  }

  if (const auto d = root["detector"]) {
    check_keys(d, "detector", {"gap", "coupling", "profile"});
    if (d["gap"]) m.detector.gap = scalar<double>(d["gap"], "detector.gap");
    if (d["coupling"]) {
      m.detector.coupling = scalar<double>(d["coupling"], "detector.coupling");
      if (m.detector.coupling < 0.0) throw ConfigError("detector.coupling must be non-negative", line_of(d["coupling"]));
    }
    if (d["profile"]) m.detector.profile = parse_profile(d["profile"]);
  }
  if (const auto w = root["window"]) {
    check_keys(w, "window", {"kind", "eta"});
    if (w["kind"]) m.window = with_line(w["kind"], [&] { return scenario::window_kind_from_string(scalar<std::string>(w["kind"], "window.kind")); });
    if (w["eta"]) m.eta = positive(w["eta"], "window.eta");
  }
  if (const auto g = root["geometry"]) {
    check_keys(g, "geometry", {"separation", "branch_offset", "delay", "start"});
    if (g["separation"]) m.geometry.separation = scalar<double>(g["separation"], "geometry.separation");
    if (g["branch_offset"]) m.geometry.branch_offset = scalar<double>(g["branch_offset"], "geometry.branch_offset");
    if (g["delay"]) m.geometry.delay = scalar<double>(g["delay"], "geometry.delay");
    if (g["start"]) m.geometry.start = scalar<double>(g["start"], "geometry.start");
    if (m.geometry.separation < 0.0) throw ConfigError("geometry.separation must be non-negative", line_of(g["separation"]));
  }
  if (const auto s = root["scan"]) {
    check_keys(s, "scan", {"s", "T", "threads"});
    if (!s["s"] || !s["T"]) throw ConfigError("scan needs both 's' and 'T' ranges", line_of(s));
    ScanSpec sc;
    sc.s = parse_range(s["s"], "scan.s");
    sc.T = parse_range(s["T"], "scan.T");
    if (sc.s.min < 0.0) throw ConfigError("scan.s.min must be non-negative", line_of(s["s"]));
    if (s["threads"]) {
      sc.threads = scalar<int>(s["threads"], "scan.threads");
      if (sc.threads < 0) throw ConfigError("scan.threads must be >= 0", line_of(s["threads"]));
    }
    rc.scan = sc;
  }
  if (const auto q = root["quadrature"]) {
    check_keys(q, "quadrature", {"abs_tol", "rel_tol", "max_subdivisions", "epsilon"});
    auto& sp = rc.elements.spec;
    if (q["abs_tol"]) sp.abs_tol = positive(q["abs_tol"], "quadrature.abs_tol");
    if (q["rel_tol"]) sp.rel_tol = positive(q["rel_tol"], "quadrature.rel_tol");
    if (q["max_subdivisions"]) sp.max_subdivisions = scalar<int>(q["max_subdivisions"], "quadrature.max_subdivisions");
    if (q["epsilon"]) rc.elements.epsilon = positive(q["epsilon"], "quadrature.epsilon");
    with_line(q, [&] {
      sp.validate();
      return 0;
    });
  }
  if (const auto me = root["measures"]) {
    check_keys(me, "measures", {"log_base"});
    if (me["log_base"]) {
      rc.log_base = positive(me["log_base"], "measures.log_base");
      if (rc.log_base == 1.0) throw ConfigError("measures.log_base must not be 1", line_of(me["log_base"]));
    }
  }
  if (const auto o = root["output"]) {
    check_keys(o, "output", {"directory", "prefix", "formats", "heatmap"});
    if (o["directory"]) rc.output.directory = scalar<std::string>(o["directory"], "output.directory");
    if (o["prefix"]) rc.output.prefix = scalar<std::string>(o["prefix"], "output.prefix");
    if (o["formats"]) {
      rc.output.formats = string_list(o["formats"], "output.formats");
      for (const auto& f : rc.output.formats)
        if (f != "csv" && f != "heatmap" && f != "manifest" && f != "statedump")
          throw ConfigError("unknown output format '" + f + "' (csv, heatmap, manifest, statedump)", line_of(o["formats"]));
    }
    if (o["heatmap"]) rc.output.heatmap = scalar<std::string>(o["heatmap"], "output.heatmap");
  }

  // Validate the model at the configured point before any computation.
  with_line(root, [&] {
    m.build().validate();
    return 0;
  });
  if (rc.engine == Engine::nonperturbative && m.window != scenario::WindowKind::delta)
    throw ConfigError("the nonperturbative engine requires delta windows", root["window"] ? line_of(root["window"]) : -1);
  return rc;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_run_config(ss.str(), path);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace harvest
