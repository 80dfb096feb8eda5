#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>

#include "lieswarm/deformation.hpp"
#include "lieswarm/embedding.hpp"
#include "lieswarm/errors.hpp"
#include "lieswarm/harness.hpp"
#include "lieswarm/metrics.hpp"
#include "lieswarm/scenario.hpp"
#include "lieswarm/telemetry.hpp"

namespace fs = std::filesystem;
using namespace lieswarm;

namespace {

enum ExitCode { kOk = 0, kConfigError = 1, kIoError = 2, kCheckFailed = 3 };

Scenario resolve_scenario(const std::string& arg) {
  if (fs::exists(arg)) return load_scenario(arg);
  for (const auto& b : bundled_scenarios()) {
    if (b.name == arg) return bundled_scenario(arg);
  }
  throw IoError(fmt::format("no scenario file or bundled preset named '{}'", arg));
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError(fmt::format("cannot create output directory '{}'", dir.string()));
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
  out << text;
  if (!out.flush()) throw IoError(fmt::format("error while writing '{}'", path.string()));
}

std::string fmt_opt(std::optional<double> v, const char* unit) {
  return v ? fmt::format("{:.3f} {}", *v, unit) : std::string("not reached");
}

void print_summary(const MetricsSummary& m) {
  for (std::size_t i = 0; i < m.segments.size(); ++i) {
    const auto& s = m.segments[i];
    fmt::print("segment {}: t=[{:.1f}, {:.1f}] n={} band={}deg settle={} oscillation={} "
               "min_distance={:.3f} m\n",
               i, s.t_start, s.t_end, s.n, s.band_deg, fmt_opt(s.settle_s, "s"),
               fmt_opt(s.steady_oscillation_deg, "deg"), s.min_distance_m);
  }
  fmt::print("distance range: [{:.3f}, {:.3f}] m, final V = {:.3g}\n", m.min_distance_m,
             m.max_distance_m, m.lyapunov_final);
}

// Bounds file: {"<key or /json/pointer>": {"min": a, "max": b}, ...}
std::vector<std::string> check_bounds(const nlohmann::json& metrics, const fs::path& spec_path) {
  std::ifstream in(spec_path);
  if (!in) throw IoError(fmt::format("cannot read check file '{}'", spec_path.string()));
  nlohmann::json spec;
  try {
    in >> spec;
  } catch (const nlohmann::json::exception& e) {
    throw ScenarioError(fmt::format("{}: {}", spec_path.string(), e.what()));
  }
  if (!spec.is_object()) throw ScenarioError("check file must hold a JSON object");
  std::vector<std::string> failures;
  for (const auto& [key, bound] : spec.items()) {
    const auto ptr = nlohmann::json::json_pointer(key.starts_with('/') ? key : "/" + key);
    if (!metrics.contains(ptr) || !metrics.at(ptr).is_number()) {
      failures.push_back(fmt::format("{}: no numeric value", key));
      continue;
    }
    const double v = metrics.at(ptr).get<double>();
    if (bound.contains("min") && v < bound["min"].get<double>()) {
      failures.push_back(fmt::format("{} = {} < min {}", key, v, bound["min"].get<double>()));
    }
    if (bound.contains("max") && v > bound["max"].get<double>()) {
      failures.push_back(fmt::format("{} = {} > max {}", key, v, bound["max"].get<double>()));
    }
  }
  return failures;
}

int report_check(const std::string& metrics_json, const std::string& check_path) {
  const auto failures = check_bounds(nlohmann::json::parse(metrics_json), check_path);
  for (const auto& f : failures) fmt::print(stderr, "check failed: {}\n", f);
  if (!failures.empty()) return kCheckFailed;
  fmt::print("check passed\n");
  return kOk;
}

struct RunArgs {
  std::string scenario;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<double> duration;
  std::string check;
};

int cmd_run(const RunArgs& a) {
  Scenario sc = resolve_scenario(a.scenario);
  if (a.seed) sc.seed = *a.seed;
  if (a.duration) sc.duration = *a.duration;
  sc.validate();
  const fs::path out(a.out);
  ensure_dir(out);

  TelemetryWriter telemetry(out / "telemetry.csv");
  RunOptions opts;
  if (a.threads) opts.threads = *a.threads;
  const auto start = std::chrono::steady_clock::now();
  const RunResult result = run(sc, opts, [&](const TickFrame& f) { telemetry.write(f); });
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  telemetry.close();

  MetricsOptions mo;
  mo.band_deg = sc.convergence_band_deg;
  mo.hold_s = sc.convergence_hold_s;
  const MetricsSummary m = summarize(result.frames, mo);
  const SeriesPaths paths = write_series(m.series, out);
  const std::string json = to_json(m, paths);
  write_text(out / "metrics.json", json);

  fmt::print("{}: {} agents, {} ticks, seed {}, {:.2f} s wall\n",
             sc.name.empty() ? a.scenario : sc.name, sc.n_agents, sc.ticks(), sc.seed, wall);
  print_summary(m);
  fmt::print("wrote {}\n", (out / "telemetry.csv").string());
  return a.check.empty() ? kOk : report_check(json, a.check);
}

struct ShapeArgs {
  std::string preset_name;
  std::string omega_x;
  std::string omega_y;
  std::optional<double> s;
  double r_d = 1.0;
  std::vector<double> center{0.0, 0.0, 0.0};
  int samples = 512;
  std::string out;
};

int cmd_shape(const ShapeArgs& a) {
  EmbeddingConfig cfg;
  if (!a.preset_name.empty()) {
    if (!a.omega_x.empty() || !a.omega_y.empty()) {
      throw ScenarioError("give either --preset or --omega-x/--omega-y");
    }
    cfg.deformation = preset(a.preset_name).deformation;
  } else {
    cfg.deformation = DeformationSpec::from_text(a.omega_x.empty() ? "0" : a.omega_x,
                                                 a.omega_y.empty() ? "0" : a.omega_y, 0.0);
  }
  if (a.s) cfg.deformation.s = *a.s;
  cfg.r_d = a.r_d;
  cfg.center = {a.center[0], a.center[1], a.center[2]};
  cfg.validate();
  validate_deformation(cfg.deformation);
  if (a.samples < 3) throw ScenarioError("--samples must be >= 3");

  std::ostringstream csv;
  csv << "phi,x,y,z\n";
  for (int k = 0; k < a.samples; ++k) {
    const double phi = 2.0 * std::numbers::pi * k / a.samples;
    const Vec3 p = curve_point(phi, cfg);
    csv << fmt::format("{:.9g},{:.9g},{:.9g},{:.9g}\n", phi, p.x, p.y, p.z);
  }
  if (a.out.empty() || a.out == "-") {
    std::cout << csv.str();
  } else {
    write_text(a.out, csv.str());
  }
  return kOk;
}

int cmd_presets(bool as_json) {
  const auto scenarios = bundled_scenarios();
  const auto shapes = shape_presets();
  if (as_json) {
    nlohmann::json j;
    j["scenarios"] = nlohmann::json::array();
    for (const auto& s : scenarios) {
      j["scenarios"].push_back({{"name", s.name}, {"description", s.description}});
    }
    j["shapes"] = nlohmann::json::array();
    for (const auto& s : shapes) {
      j["shapes"].push_back({{"name", s.name},
                             {"description", s.description},
                             {"omega_x", s.deformation.omega_x.source()},
                             {"omega_y", s.deformation.omega_y.source()},
                             {"s", s.deformation.s},
                             {"omega_zd", s.omega_zd}});
    }
    std::cout << j.dump(2) << '\n';
    return kOk;
  }
  fmt::print("scenarios:\n");
  for (const auto& s : scenarios) fmt::print("  {:<10} {}\n", s.name, s.description);
  fmt::print("shapes:\n");
  for (const auto& s : shapes) fmt::print("  {:<10} {}\n", s.name, s.description);
  return kOk;
}

struct MetricsArgs {
  std::string telemetry;
  std::optional<double> band;
  double hold = 2.0;
  std::string out;
  std::string check;
};

int cmd_metrics(const MetricsArgs& a) {
  const auto frames = read_telemetry_csv(a.telemetry);
  MetricsOptions mo;
  mo.band_deg = a.band;
  mo.hold_s = a.hold;
  const MetricsSummary m = summarize(frames, mo);
  const std::string json = to_json(m);
  if (a.out.empty()) {
    std::cout << json;
  } else {
    write_text(a.out, json);
    print_summary(m);
  }
  return a.check.empty() ? kOk : report_check(json, a.check);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Swarm simulator on deformed circular embeddings", "lieswarm"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario file or bundled preset");
  run_cmd->add_option("scenario", run_args.scenario, "Scenario JSON path or preset name")
      ->required();
  run_cmd->add_option("-o,--out", run_args.out, "Output directory")->capture_default_str();
  run_cmd->add_option("--seed", run_args.seed, "Override the scenario seed");
  run_cmd->add_option("--threads", run_args.threads, "Worker threads per round");
  run_cmd->add_option("--duration", run_args.duration, "Override the simulated duration (s)");
  run_cmd->add_option("--check", run_args.check, "JSON file of metric bounds; exit 3 on violation");

  ShapeArgs shape_args;
  auto* shape_cmd = app.add_subcommand("shape", "Sample a deformed curve as CSV (phi,x,y,z)");
  shape_cmd->add_option("--preset", shape_args.preset_name, "Shape preset name");
  shape_cmd->add_option("--omega-x", shape_args.omega_x, "Expression for omega_x(phi)");
  shape_cmd->add_option("--omega-y", shape_args.omega_y, "Expression for omega_y(phi)");
  shape_cmd->add_option("-s", shape_args.s, "Distortion factor");
  shape_cmd->add_option("--r-d", shape_args.r_d, "Circle radius (m)")->capture_default_str();
  shape_cmd->add_option("--center", shape_args.center, "Center x y z (m)")->expected(3);
  shape_cmd->add_option("--samples", shape_args.samples, "Number of samples")
      ->capture_default_str();
  shape_cmd->add_option("-o,--out", shape_args.out, "Output CSV (stdout when omitted)");

  bool presets_json = false;
  auto* presets_cmd = app.add_subcommand("presets", "List bundled scenarios and shapes");
  presets_cmd->add_flag("--json", presets_json, "Machine-readable output");

  MetricsArgs metrics_args;
  auto* metrics_cmd = app.add_subcommand("metrics", "Summarize an existing telemetry.csv");
  metrics_cmd->add_option("telemetry", metrics_args.telemetry, "telemetry.csv")->required();
  metrics_cmd->add_option("--band", metrics_args.band, "Convergence band (deg)");
  metrics_cmd->add_option("--hold", metrics_args.hold, "Convergence hold (s)")
      ->capture_default_str();
  metrics_cmd->add_option("-o,--out", metrics_args.out, "Write metrics JSON here");
  metrics_cmd->add_option("--check", metrics_args.check, "JSON file of metric bounds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*run_cmd) return cmd_run(run_args);
    if (*shape_cmd) return cmd_shape(shape_args);
    if (*presets_cmd) return cmd_presets(presets_json);
    if (*metrics_cmd) return cmd_metrics(metrics_args);
  } catch (const IoError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kIoError;
  } catch (const Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kConfigError;
  }
  return kConfigError;
}
