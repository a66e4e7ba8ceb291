// SPDX-License-Identifier: Apache-2.0
//
// lensmimo: uplink interference analysis for lens antenna arrays
// Copyright (C) 2026 The lensmimo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "lensmimo/array_model.hpp"
#include "lensmimo/harness.hpp"
#include "lensmimo/interference.hpp"
#include "lensmimo/parallel.hpp"
#include "lensmimo/selfcheck.hpp"
#include "lensmimo/stochastic.hpp"

namespace lensmimo::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

fs::path resolve_out(const std::string& flag, const std::string& default_name) {
  if (!flag.empty()) return fs::path(flag);
  const char* env = std::getenv(kOutputDirEnv);
  return fs::path(env != nullptr && *env != '\0' ? env : ".") / default_name;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw UsageError("cannot open " + path.string() + " for writing");
  f << content;
  if (!f.flush()) throw UsageError("failed writing " + path.string());
}

fs::path manifest_path(const fs::path& output) {
  return fs::path(output.string() + ".manifest.json");
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Everything needed to reproduce an output, plus timing. Timing makes the
// manifest itself non-reproducible; the data files it describes are.
Json manifest(const std::string& command, Json parameters, std::optional<std::uint64_t> seed,
              const std::vector<fs::path>& outputs, unsigned threads) {
  Json m;
  m["command"] = command;
  m["parameters"] = std::move(parameters);
  m["seed"] = seed ? Json(*seed) : Json(nullptr);
  m["tool_version"] = kToolVersion;
  m["threads"] = threads;
  Json files = Json::array();
  for (const auto& p : outputs) files.push_back(p.string());
  m["outputs"] = files;
  return m;
}

void finish_manifest(Json m, const Stopwatch& clock, const fs::path& primary) {
  m["wall_clock_seconds"] = clock.seconds();
  write_file(manifest_path(primary), m.dump(2) + "\n");
}

SincConvention parse_convention(const std::string& name) {
  if (name == "normalized") return SincConvention::Normalized;
  if (name == "unnormalized") return SincConvention::Unnormalized;
  throw UsageError("unknown sinc convention " + name);
}

struct ArrayFlags {
  double d_tilde = 10.0;
  double a_z = 1.0;
  double phi0 = 0.0;
  int elements = 0;  // 0: derive from d_tilde
  std::string convention = "normalized";

  void attach(CLI::App& app) {
    app.add_option("--d-tilde", d_tilde, "Azimuth lens dimension over wavelength")
        ->capture_default_str();
    app.add_option("--a-z", a_z, "Vertical lens dimension over wavelength")->capture_default_str();
    app.add_option("--phi0", phi0, "Common phase shift in radians")->capture_default_str();
    app.add_option("--elements", elements, "Element count override (odd)");
    app.add_option("--convention", convention, "Sinc convention")
        ->check(CLI::IsMember({"normalized", "unnormalized"}))
        ->capture_default_str();
  }

  LensArrayConfig build() const {
    LensArrayConfig config = LensArrayConfig::from_normalized(d_tilde, a_z);
    if (elements != 0) config.element_count = elements;
    config.phi0 = phi0;
    config.sinc_convention = parse_convention(convention);
    config.validate();
    return config;
  }

  Json to_json() const {
    Json j;
    j["d_tilde"] = d_tilde;
    j["a_z"] = a_z;
    j["phi0"] = phi0;
    j["elements"] = elements;
    j["convention"] = convention;
    return j;
  }
};

struct PatternFlags {
  ArrayFlags array{20.0};
  std::optional<double> phi_l_deg;
  std::optional<double> phi_l;
  double delta_min = -0.5;
  double delta_max = 0.5;
  int steps = 2001;
  std::string out;
};

int cmd_pattern(const PatternFlags& f, unsigned threads, std::ostream& out) {
  const Stopwatch clock;
  if (f.steps < 2) throw UsageError("--steps must be at least 2");
  if (!(f.delta_max > f.delta_min)) throw UsageError("--delta-max must exceed --delta-min");
  const LensArrayConfig config = f.array.build();
  double phi_l = 0.0;
  if (f.phi_l) phi_l = *f.phi_l;
  if (f.phi_l_deg) phi_l = std::sin(*f.phi_l_deg * std::numbers::pi / 180.0);

  std::vector<double> grid(static_cast<std::size_t>(f.steps));
  for (int i = 0; i < f.steps; ++i) {
    grid[static_cast<std::size_t>(i)] =
        f.delta_min + (f.delta_max - f.delta_min) * i / (f.steps - 1);
  }
  const PatternSeries series = sweep_pattern(config, phi_l, grid, threads);

  std::string csv = "delta,theta_norm,power_linear,power_db,effective\n";
  for (const auto& p : series.points) {
    csv += num(p.delta) + ',' + num(p.theta_norm) + ',' + num(p.power_linear) + ',' +
           num(p.power_db) + ',' + (p.effective ? "1" : "0") + '\n';
  }
  const fs::path path = resolve_out(f.out, "pattern.csv");
  write_file(path, csv);

  Json params = f.array.to_json();
  params["phi_tilde_l"] = phi_l;
  params["delta_min"] = f.delta_min;
  params["delta_max"] = f.delta_max;
  params["steps"] = f.steps;
  Json m = manifest("pattern", params, std::nullopt, {path}, threads);
  m["element_count"] = config.element_count;
  m["skipped_points"] = series.skipped;
  finish_manifest(std::move(m), clock, path);
  out << "wrote " << series.points.size() << " rows to " << path.string() << " ("
      << series.skipped << " skipped)\n";
  return kExitOk;
}

struct ProbFlags {
  double d_tilde = 10.0;
  std::string method = "closed";
  std::optional<std::uint64_t> samples;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int cmd_prob(const ProbFlags& f, unsigned threads, std::ostream& out) {
  const Stopwatch clock;
  Json record;
  record["d_tilde"] = f.d_tilde;
  record["method"] = f.method;
  if (f.method == "closed") {
    record["value"] = effective_prob_closed(f.d_tilde);
  } else if (f.method == "quadrature") {
    record["value"] = effective_prob_quadrature(f.d_tilde);
  } else {
    if (!f.samples || !f.seed) throw UsageError("--method mc needs --samples and --seed");
    if (*f.samples == 0) throw UsageError("--samples must be positive");
    const ProbEstimate est = effective_prob_mc(f.d_tilde, *f.samples, *f.seed, threads);
    record["value"] = est.value;
    record["std_error"] = est.std_error;
    record["sample_count"] = est.sample_count;
  }
  const std::string text = record.dump(2) + "\n";
  const fs::path path = resolve_out(f.out, "prob.json");
  write_file(path, text);

  Json params;
  params["d_tilde"] = f.d_tilde;
  params["method"] = f.method;
  if (f.samples) params["samples"] = *f.samples;
  finish_manifest(manifest("prob", params, f.method == "mc" ? f.seed : std::nullopt, {path},
                           threads),
                  clock, path);
  out << text;
  return kExitOk;
}

struct DensityFlags {
  double d_tilde = 10.0;
  std::optional<double> z_min;
  std::optional<double> z_max;
  int steps = 2001;
  std::string out;
};

int cmd_density(const DensityFlags& f, unsigned threads, std::ostream& out) {
  const Stopwatch clock;
  if (f.steps < 2) throw UsageError("--steps must be at least 2");
  if (!(f.d_tilde > 0.0)) throw std::invalid_argument("d_tilde must be positive");
  const double support = std::sqrt(3.0) * f.d_tilde;
  const double z_lo = f.z_min.value_or(-support);
  const double z_hi = f.z_max.value_or(support);
  if (!(z_hi > z_lo)) throw UsageError("--z-max must exceed --z-min");

  std::vector<double> z(static_cast<std::size_t>(f.steps));
  std::vector<double> pdf(z.size());
  for (int i = 0; i < f.steps; ++i) {
    z[static_cast<std::size_t>(i)] = z_lo + (z_hi - z_lo) * i / (f.steps - 1);
  }
  parallel_for(z.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) pdf[i] = theta_pdf(z[i], f.d_tilde);
  });

  std::string csv = "z,f_theta\n";
  double trapezoid = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    csv += num(z[i]) + ',' + num(pdf[i]) + '\n';
    if (i > 0) trapezoid += 0.5 * (pdf[i] + pdf[i - 1]) * (z[i] - z[i - 1]);
  }
  const fs::path path = resolve_out(f.out, "density.csv");
  write_file(path, csv);

  Json params;
  params["d_tilde"] = f.d_tilde;
  params["z_min"] = z_lo;
  params["z_max"] = z_hi;
  params["steps"] = f.steps;
  Json m = manifest("density", params, std::nullopt, {path}, threads);
  m["trapezoid_integral"] = trapezoid;
  finish_manifest(std::move(m), clock, path);
  out << "wrote " << z.size() << " rows to " << path.string() << ", trapezoidal integral "
      << num(trapezoid) << "\n";
  return kExitOk;
}

struct ScenarioFlags {
  ArrayFlags array{10.0};
  int users = 10;
  int trials = 1000;
  std::uint64_t seed = 0;
  std::string out;
  std::string cdf_out;
};

Json stats_json(const SummaryStats& s) {
  Json j;
  j["mean"] = s.mean;
  j["median"] = s.median;
  j["p01"] = s.p01;
  j["p05"] = s.p05;
  j["p25"] = s.p25;
  j["p75"] = s.p75;
  j["p95"] = s.p95;
  j["p99"] = s.p99;
  return j;
}

int cmd_scenario(const ScenarioFlags& f, unsigned threads, std::ostream& out) {
  const Stopwatch clock;
  if (f.users < 1) throw UsageError("--users must be at least 1");
  if (f.trials < 1) throw UsageError("--trials must be at least 1");
  ScenarioConfig config;
  config.array = f.array.build();
  config.user_count = f.users;
  config.trial_count = f.trials;
  config.seed = f.seed;
  config.threads = threads;
  const ScenarioResult r = run_scenario(config);

  Json s;
  s["d_tilde"] = config.array.d_tilde;
  s["a_z"] = config.array.a_z;
  s["element_count"] = config.array.element_count;
  s["users"] = f.users;
  s["trials"] = f.trials;
  s["seed"] = f.seed;
  s["mean_exact"] = r.mean_exact;
  s["mean_effective"] = r.mean_effective;
  s["captured_fraction"] = r.captured_fraction;
  s["mean_effective_count"] = r.mean_effective_count;
  s["effective_count_std_error"] = r.effective_count_std_error;
  s["expected_effective_count_closed"] =
      config.array.d_tilde >= 2.0
          ? Json((f.users - 1) * effective_prob_closed(config.array.d_tilde))
          : Json(nullptr);
  s["expected_effective_count_quadrature"] =
      (f.users - 1) * effective_prob_quadrature(config.array.d_tilde);
  s["exact"] = stats_json(r.exact_stats);
  s["effective"] = stats_json(r.effective_stats);
  s["audit"] = {{"trials", r.audited_trials}, {"max_rel_error", r.audit_max_rel_error}};
  const std::string summary = s.dump(2) + "\n";

  const fs::path path = resolve_out(f.out, "scenario.json");
  fs::path cdf_path;
  if (!f.cdf_out.empty()) {
    cdf_path = f.cdf_out;
  } else {
    cdf_path = path;
    cdf_path.replace_extension();
    cdf_path += "_cdf.csv";
  }
  std::string csv = "power_linear,cdf\n";
  for (const auto& p : r.exact_cdf) csv += num(p.power) + ',' + num(p.probability) + '\n';
  write_file(path, summary);
  write_file(cdf_path, csv);

  Json params = f.array.to_json();
  params["users"] = f.users;
  params["trials"] = f.trials;
  finish_manifest(manifest("scenario", params, f.seed, {path, cdf_path}, threads), clock, path);
  out << summary;
  return kExitOk;
}

int cmd_selfcheck(const std::string& fault, unsigned threads, std::ostream& out,
                  std::ostream& err) {
  SelfCheckOptions options;
  options.threads = threads;
  options.corrupt_closed_form = fault == "closed-form";
  const Stopwatch clock;
  bool all = true;
  for (const auto& c : run_selfcheck(options)) {
    out << (c.passed ? "PASS  " : "FAIL  ") << c.name << "  [" << c.detail << "]\n";
    all = all && c.passed;
  }
  out << (all ? "all checks passed" : "some checks FAILED") << "\n";
  err << "selfcheck took " << clock.seconds() << " s\n";
  return all ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Uplink interference analysis for lens antenna arrays", "lensmimo"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  unsigned threads = 1;
  app.add_option("--threads", threads, "Worker cap (0 = all cores); never changes results")
      ->capture_default_str();

  PatternFlags pattern;
  auto* pattern_cmd = app.add_subcommand("pattern", "Interference pattern versus separation");
  pattern_cmd->fallthrough();
  pattern.array.attach(*pattern_cmd);
  auto* deg = pattern_cmd->add_option("--phi-l-deg", pattern.phi_l_deg,
                                      "Desired user DOA in degrees");
  auto* freq = pattern_cmd->add_option("--phi-l", pattern.phi_l,
                                       "Desired user spatial frequency sin(phi)");
  deg->excludes(freq);
  pattern_cmd->add_option("--delta-min", pattern.delta_min)->capture_default_str();
  pattern_cmd->add_option("--delta-max", pattern.delta_max)->capture_default_str();
  pattern_cmd->add_option("--steps", pattern.steps)->capture_default_str();
  pattern_cmd->add_option("--out", pattern.out, "Output CSV path");

  ProbFlags prob;
  auto* prob_cmd = app.add_subcommand("prob", "Effective-interferer probability");
  prob_cmd->fallthrough();
  prob_cmd->add_option("--d-tilde", prob.d_tilde)->capture_default_str();
  prob_cmd->add_option("--method", prob.method)
      ->check(CLI::IsMember({"closed", "quadrature", "mc"}))
      ->capture_default_str();
  prob_cmd->add_option("--samples", prob.samples, "Monte Carlo sample count");
  prob_cmd->add_option("--seed", prob.seed, "Monte Carlo seed");
  prob_cmd->add_option("--out", prob.out, "Output JSON path");

  DensityFlags density;
  auto* density_cmd = app.add_subcommand("density", "Tabulate the Theta density");
  density_cmd->fallthrough();
  density_cmd->add_option("--d-tilde", density.d_tilde)->capture_default_str();
  density_cmd->add_option("--z-min", density.z_min, "Default: lower support edge");
  density_cmd->add_option("--z-max", density.z_max, "Default: upper support edge");
  density_cmd->add_option("--steps", density.steps)->capture_default_str();
  density_cmd->add_option("--out", density.out, "Output CSV path");

  ScenarioFlags scenario;
  auto* scenario_cmd = app.add_subcommand("scenario", "Multiuser drop ensemble");
  scenario_cmd->fallthrough();
  scenario.array.attach(*scenario_cmd);
  scenario_cmd->add_option("--users", scenario.users)->capture_default_str();
  scenario_cmd->add_option("--trials", scenario.trials)->capture_default_str();
  scenario_cmd->add_option("--seed", scenario.seed)->capture_default_str();
  scenario_cmd->add_option("--out", scenario.out, "Output JSON summary path");
  scenario_cmd->add_option("--cdf-out", scenario.cdf_out, "Output CDF CSV path");

  std::string fault;
  auto* selfcheck_cmd = app.add_subcommand("selfcheck", "Run the oracle and invariant checks");
  selfcheck_cmd->fallthrough();
  selfcheck_cmd->add_option("--inject-fault", fault)
      ->check(CLI::IsMember({"closed-form"}))
      ->group("");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (pattern_cmd->parsed()) return cmd_pattern(pattern, threads, out);
    if (prob_cmd->parsed()) return cmd_prob(prob, threads, out);
    if (density_cmd->parsed()) return cmd_density(density, threads, out);
    if (scenario_cmd->parsed()) return cmd_scenario(scenario, threads, out);
    if (selfcheck_cmd->parsed()) return cmd_selfcheck(fault, threads, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitUsage;
}

}  // namespace lensmimo::cli
