#pragma once

#include <optional>
#include <string>
#include <vector>

#include "harvest/perturbative/elements.hpp"
#include "harvest/perturbative/state.hpp"
#include "harvest/scenario/scenario.hpp"

namespace harvest {

enum class Engine { perturbative, nonperturbative };
std::string to_string(Engine e);
Engine engine_from_string(const std::string& s);

// Inclusive linear range with count >= 2 samples (count 1 gives min).
struct Range {
  double min = 0.0;
  double max = 1.0;
  int count = 2;
  double at(int k) const { return count == 1 ? min : min + (max - min) * k / (count - 1); }
};

// Everything needed to build a ScenarioConfig at a given (s, T).
struct ModelSpec {
  scenario::ScenarioKind scenario = scenario::ScenarioKind::PF;
  int spatial_dim = 3;
  scenario::DetectorParams detector;
  scenario::WindowKind window = scenario::WindowKind::delta;
  double eta = 1.0;
  scenario::Geometry geometry;

  scenario::ScenarioConfig build() const;
  scenario::ScenarioConfig build(double separation, double branch_offset) const;
};

struct OutputSpec {
  std::string directory = "out";
  std::string prefix = "run";
  std::vector<std::string> formats{"csv", "heatmap", "manifest"};
  std::string heatmap;  // column name; empty selects C_<first treatment>
};

struct ScanSpec {
  Range s;
  Range T;
  int threads = 0;  // 0: hardware concurrency
};

struct RunConfig {
  ModelSpec model;
  Engine engine = Engine::perturbative;
  std::vector<perturbative::Treatment> treatments{perturbative::Treatment::trace,
                                                  perturbative::Treatment::project_plus};
  perturbative::ElementOptions elements;
  double log_base = 2.0;
  std::optional<ScanSpec> scan;
  OutputSpec output;
  std::string source_name;
  std::string source_text;
};

// Parses the YAML run configuration. Unknown keys, wrong types and invalid
// values raise ConfigError carrying the 1-based line of the offending node.
RunConfig parse_run_config(const std::string& text, const std::string& source_name = "<string>");
RunConfig load_run_config(const std::string& path);

// Stable 64-bit FNV-1a hash as 16 hex digits.
std::string content_hash(const std::string& text);

}  // namespace harvest
