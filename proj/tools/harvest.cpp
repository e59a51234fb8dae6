// harvest: command-line front end (state, scan, verify, correlators).

#include <cstdio>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "exit_codes.hpp"
#include "harvest/config.hpp"
#include "harvest/error.hpp"
#include "harvest/nonperturbative/exact.hpp"
#include "harvest/scan/output.hpp"
#include "harvest/scan/scan.hpp"
#include "json.hpp"
#include "verify.hpp"

using namespace harvest;
using nlohmann::json;
namespace cli = harvest::cli;

namespace {

std::string join_path(const std::string& dir, const std::string& file) {
  if (dir.empty()) return file;
  return dir.back() == '/' ? dir + file : dir + "/" + file;
}

json estimate_json(const perturbative::Estimate& e) {
  return {{"re", e.value.real()}, {"im", e.value.imag()}, {"err", e.error}};
}

json measures_json(const scan::TreatmentResult& r) {
  return {{"P_A", r.P_A},
          {"P_B", r.P_B},
          {"abs_L", r.abs_L},
          {"abs_M", r.abs_M},
          {"nogo_margin", r.margin},
          {"margin_error", r.margin_error},
          {"concurrence", r.concurrence},
          {"entanglement_of_formation", r.eof},
          {"mutual_information", r.mutual_information},
          {"min_eigenvalue", r.min_eigenvalue},
          {"note", r.note}};
}

int cmd_state(const std::string& config_path, const std::string& out_dir) {
  RunConfig rc = load_run_config(config_path);
  if (!out_dir.empty()) rc.output.directory = out_dir;
  const auto c = rc.model.build();
  const auto prov = scan::provenance_of(rc);
  json report;
  report["config"] = {{"source", rc.source_name}, {"hash", prov.config_hash}};
  report["engine"] = to_string(rc.engine);
  report["scenario"] = scenario::to_string(c.scenario);
  report["causal_relation"] = scenario::to_string(scenario::causal_relation(c));
  bool abc_written = false;
  std::vector<std::pair<std::string, std::string>> files;
  for (auto t : rc.treatments) {
    auto ps = scan::evaluate_state(c, rc.engine, t, rc.elements, rc.log_base);
    const std::string tag = perturbative::to_string(t);
    report["treatments"][tag] = measures_json(ps.measures);
    report["treatments"][tag]["trace"] = ps.rho_ab.trace().real();
    if (ps.rho_abc && !abc_written) {
      files.emplace_back(join_path(rc.output.directory, rc.output.prefix + "_rho_ABC.json"),
                         scan::format_statedump(*ps.rho_abc, "rho_ABC", prov));
      report["rho_ABC_trace"] = ps.rho_abc->trace().real();
      abc_written = true;
    }
    files.emplace_back(join_path(rc.output.directory, rc.output.prefix + "_rho_AB_" + tag + ".json"),
                       scan::format_statedump(ps.rho_ab, "rho_AB " + tag, prov));
  }
  files.emplace_back(join_path(rc.output.directory, rc.output.prefix + "_report.json"), report.dump(2) + "\n");
  for (const auto& [path, content] : files) scan::write_file_atomic(path, content);
  std::cout << report.dump(2) << "\n";
  return cli::kOk;
}

int cmd_scan(const std::string& config_path, const std::string& out_dir, int threads, int resolution) {
  RunConfig rc = load_run_config(config_path);
  if (!out_dir.empty()) rc.output.directory = out_dir;
  auto grid = scan::make_grid(rc);
  if (threads >= 0) grid.threads = threads;
  if (resolution > 0) grid.s.count = grid.T.count = resolution;
  grid.validate();
  const auto result = scan::run_scan(grid);

  std::string column = rc.output.heatmap;
  if (column.empty()) column = "C_" + perturbative::to_string(grid.treatments.front());
  (void)scan::column_value(result, result.points.front(), column);  // reject unknown columns before writing

  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& f : rc.output.formats) {
    const std::string base = join_path(rc.output.directory, rc.output.prefix);
    if (f == "csv") files.emplace_back(base + ".csv", scan::format_csv(result));
    else if (f == "heatmap") files.emplace_back(base + "_" + column + ".ppm", scan::format_heatmap_ppm(result, column));
    else if (f == "manifest") files.emplace_back(base + "_manifest.json", scan::format_manifest(result, rc));
  }
  for (const auto& [path, content] : files) scan::write_file_atomic(path, content);

  int ok = 0, skipped = 0, failed = 0;
  for (const auto& p : result.points) {
    if (p.status == scan::PointStatus::ok) ++ok;
    else if (p.status == scan::PointStatus::skipped) ++skipped;
    else ++failed;
  }
  std::printf("scan: %zu points (%d ok, %d skipped, %d failed) in %.2f s\n", result.points.size(), ok, skipped, failed,
              result.wall_seconds);
  for (const auto& [path, content] : files) std::printf("wrote %s\n", path.c_str());
  return cli::kOk;
}

int cmd_verify(bool mutate_theta, std::uint64_t seed, const std::string& json_path) {
  verify::VerifyOptions opt;
  opt.seed = seed;
  if (mutate_theta) opt.theta_sign = -1.0;
  const auto results = verify::run_verification(opt);
  int passed = 0, failed = 0;
  json j = json::array();
  for (const auto& r : results) {
    (r.pass ? passed : failed)++;
    std::printf("%s %s value=%.3e tol=%.1e%s%s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.value, r.tolerance,
                r.detail.empty() ? "" : " | ", r.detail.c_str());
    j.push_back({{"name", r.name}, {"pass", r.pass}, {"value", r.value}, {"tolerance", r.tolerance}, {"detail", r.detail}});
  }
  json summary = {{"passed", passed}, {"failed", failed}, {"seed", seed}, {"theta_mutation", mutate_theta}};
  std::printf("%s\n", summary.dump().c_str());
  if (!json_path.empty()) scan::write_file_atomic(json_path, json{{"summary", summary}, {"checks", j}}.dump(2) + "\n");
  return failed == 0 ? cli::kOk : cli::kVerification;
}

int cmd_correlators(const std::string& config_path, const std::string& out_path) {
  const RunConfig rc = load_run_config(config_path);
  const auto c = rc.model.build();
  json j;
  j["engine"] = to_string(rc.engine);
  j["scenario"] = scenario::to_string(c.scenario);
  if (rc.engine == Engine::perturbative) {
    const auto e = perturbative::compute_elements(c, rc.elements, true);
    for (int i = 0; i < 2; ++i) {
      for (int k = 0; k < 2; ++k) {
        const std::string ij = std::to_string(i) + std::to_string(k);
        j["P_A"][ij] = estimate_json(e.P_A[i][k]);
        j["P_B"][ij] = estimate_json(e.P_B[i][k]);
        j["L"][ij] = estimate_json(e.L[i][k]);
      }
      j["Y"][std::to_string(i)] = estimate_json(e.Y[i]);
      j["M"][std::to_string(i) + std::to_string(i)] = estimate_json(e.M[i]);
    }
    j["M"]["01"] = estimate_json(e.M_cross[0]);
    j["M"]["10"] = estimate_json(e.M_cross[1]);
  } else {
    const auto e = nonperturbative::compute_overlaps(c, rc.elements.spec);
    const char* names[4] = {"A0", "A1", "B0", "B1"};
    for (int a = 0; a < 4; ++a) {
      j["f"][names[a]] = e.f[a];
      j["time"][names[a]] = e.time[a];
      for (int b = 0; b < 4; ++b) {
        j["Theta"][names[a]][names[b]] = e.Theta[a][b];
        j["omega"][names[a]][names[b]] = e.omega[a][b];
      }
    }
    j["max_quadrature_error"] = e.max_error;
  }
  const std::string text = j.dump(2) + "\n";
  if (out_path.empty()) std::cout << text;
  else scan::write_file_atomic(out_path, text);
  return cli::kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement harvesting with superposed detector activation times"};
  app.require_subcommand(1);

  std::string config, out_dir, out_path, json_path;
  int threads = -1, resolution = 0;
  bool fine = false, mutate = false;
  std::uint64_t seed = 20190611;

  auto* state = app.add_subcommand("state", "Evaluate a single configuration and dump its states and measures");
  state->add_option("-c,--config", config, "YAML run configuration")->required()->check(CLI::ExistingFile);
  state->add_option("-o,--out", out_dir, "Output directory (overrides output.directory)");

  auto* scan_cmd = app.add_subcommand("scan", "Sweep the (s, T) grid of a configuration");
  scan_cmd->add_option("-c,--config", config, "YAML run configuration")->required()->check(CLI::ExistingFile);
  scan_cmd->add_option("-o,--out", out_dir, "Output directory (overrides output.directory)");
  scan_cmd->add_option("-j,--threads", threads, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
  scan_cmd->add_option("-r,--resolution", resolution, "Override both grid counts")->check(CLI::Range(2, 2000));
  scan_cmd->add_flag("--fine", fine, "Use a 200 x 200 grid");

  auto* verify_cmd = app.add_subcommand("verify", "Run the oracle, identity and cross-engine battery");
  verify_cmd->add_flag("--mutate-theta", mutate, "Flip the sign of Theta in the exact lattices (must fail)");
  verify_cmd->add_option("--seed", seed, "Seed of the randomized configurations");
  verify_cmd->add_option("--json", json_path, "Also write the results as JSON");

  auto* corr = app.add_subcommand("correlators", "Dump P/L/Y/M or f/Theta/omega tables for a configuration");
  corr->add_option("-c,--config", config, "YAML run configuration")->required()->check(CLI::ExistingFile);
  corr->add_option("-o,--out", out_path, "Write to this file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kOk : cli::kUsage;
  }

  try {
    if (*state) return cmd_state(config, out_dir);
    if (*scan_cmd) return cmd_scan(config, out_dir, threads, fine ? 200 : resolution);
    if (*verify_cmd) return cmd_verify(mutate, seed, json_path);
    if (*corr) return cmd_correlators(config, out_path);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return cli::kConfig;
  } catch (const OrderingViolated& e) {
    std::fprintf(stderr, "ordering violated: %s\n", e.what());
    return cli::kConfig;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "domain error: %s\n", e.what());
    return cli::kConfig;
  } catch (const Unsupported& e) {
    std::fprintf(stderr, "unsupported: %s\n", e.what());
    return cli::kConfig;
  } catch (const IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return cli::kIo;
  } catch (const NonConvergence& e) {
    std::fprintf(stderr, "numerical error: %s (estimate %.6g, error %.3g)\n", e.what(), e.value_estimate(),
                 e.error_estimate());
    return cli::kNumerical;
  } catch (const Error& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return cli::kNumerical;
  }
  return cli::kUsage;
}
