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

// Acceptance suite: one line per criterion, nonzero exit if any selected
// criterion fails. Tolerances and runtime budgets are fixed here.
//
//   lensmimo_acceptance [--criterion N] --cli <path to lensmimo> --workdir <dir>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lensmimo/harness.hpp"
#include "lensmimo/interference.hpp"
#include "lensmimo/rng.hpp"
#include "lensmimo/stochastic.hpp"

using namespace lensmimo;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;
  std::function<Verdict()> run;
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

std::string g_cli;
fs::path g_workdir;

// ---------------------------------------------------------------------------

Verdict closed_form_fidelity() {
  const double edge = std::sqrt(3.0) / 2.0;
  const CounterRng rng(20261018, 0);
  int failures = 0;
  double worst_rel = 0.0;
  double worst_abs_small = 0.0;
  std::uint64_t index = 0;
  for (double d : {5.0, 10.0, 20.0}) {
    const auto config = LensArrayConfig::from_normalized(d, 1.0);
    for (int i = 0; i < 10000; ++i) {
      const auto [u, v] = rng.uniform_pair(index++);
      const double l = edge * (2.0 * u - 1.0);
      const double k = edge * (2.0 * v - 1.0);
      const double direct = pairwise_interference_direct(config, l, k);
      const double closed = pairwise_interference_closed(config, l, k);
      const double diff = std::abs(direct - closed);
      if (std::min(direct, closed) < 1e-6) {
        worst_abs_small = std::max(worst_abs_small, diff);
        failures += diff > 1e-12;
      } else {
        const double rel = diff / std::max(direct, closed);
        worst_rel = std::max(worst_rel, rel);
        failures += rel > 1e-9;
      }
    }
  }
  return {failures == 0, fmt("30000 pairs, worst relative error %.3g (limit 1e-9), worst absolute "
                             "error on near-zero values %.3g (limit 1e-12)",
                             worst_rel, worst_abs_small)};
}

Verdict pattern_shape() {
  const auto config = LensArrayConfig::from_normalized(20.0, 1.0);
  std::vector<double> grid(2001);
  for (int i = 0; i < 2001; ++i) grid[static_cast<std::size_t>(i)] = -0.5 + 1.0 * i / 2000;
  const PatternSeries s = sweep_pattern(config, 0.0, grid);
  const auto& pts = s.points;

  std::size_t argmax = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].power_linear > pts[argmax].power_linear) argmax = i;
  }
  int left = 0;
  int right = 0;
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    if (pts[i].power_linear > pts[i - 1].power_linear &&
        pts[i].power_linear > pts[i + 1].power_linear && i != argmax) {
      (pts[i].delta < 0.0 ? left : right) += 1;
    }
  }
  // First null from the sweep: first right-side point that is a local minimum.
  double sweep_null = -1.0;
  for (std::size_t i = argmax + 1; i + 1 < pts.size(); ++i) {
    if (pts[i].power_linear <= pts[i + 1].power_linear) {
      sweep_null = pts[i].delta;
      break;
    }
  }
  const double null = first_null(config, 0.0);
  const bool ok = pts.size() == 2001 && pts[argmax].delta == 0.0 && left >= 5 && right >= 5 &&
                  std::abs(null - 0.05) <= 0.005 && std::abs(sweep_null - 0.05) <= 0.005;
  return {ok, fmt("argmax delta %.3g, local maxima left %d right %d (need >= 5), first null "
                  "%.6g (bisection) / %.6g (sweep), target 0.05 +- 10%%",
                  pts[argmax].delta, left, right, null, sweep_null)};
}

Verdict sidelobe_ratio() {
  const double r = sidelobe_ratio_db(LensArrayConfig::from_normalized(20.0, 1.0));
  return {r >= 12.5 && r <= 14.0, fmt("peak / first sidelobe = %.4f dB, window [12.5, 14.0]", r)};
}

Verdict three_way_agreement() {
  bool ok = true;
  std::string detail;
  for (double d : {5.0, 10.0, 20.0}) {
    const double quad = effective_prob_quadrature(d);
    const double closed = effective_prob_closed(d);
    const ProbEstimate mc = effective_prob_mc(d, 1000000, 7);
    const double rel = std::abs(quad - closed) / quad;
    const double z_closed = std::abs(mc.value - closed) / mc.std_error;
    const double z_quad = std::abs(mc.value - quad) / mc.std_error;
    const bool row = rel <= 0.02 && z_closed <= 3.0;
    ok = ok && row;
    detail += fmt("\n      d=%-4g quadrature %.6f closed %.6f |q-c|/q %.2f%% (limit 2%%); "
                  "MC %.6f +- %.2g, %.1f SE from closed (limit 3) [%.1f SE from quadrature]",
                  d, quad, closed, 100.0 * rel, mc.value, mc.std_error, z_closed, z_quad);
  }
  const double ref = effective_prob_closed(10.0);
  const bool ref_ok = std::abs(ref - 0.120089) <= 1e-5;
  ok = ok && ref_ok;
  detail += fmt("\n      closed form at d=10: %.7f vs reference 0.120089 (+-1e-5)", ref);
  return {ok, detail};
}

Verdict density_validity() {
  bool ok = true;
  std::string detail;
  for (double d : {2.0, 10.0, 50.0}) {
    const double s = std::sqrt(3.0) * d;
    const double total = theta_probability(-s, s, d);
    ok = ok && std::abs(total - 1.0) <= 1e-6;
    detail += fmt("integral(d=%g) = %.10f; ", d, total);
  }
  const ChiSquareResult chi = theta_histogram_test(10.0, 1000000, 12, 50);
  ok = ok && chi.p_value > 0.01;
  detail += fmt("chi2(d=10, 50 bins, 1e6 draws) = %.2f on %d dof, p = %.4f (need > 0.01)",
                chi.statistic, chi.dof, chi.p_value);
  return {ok, detail};
}

const ScenarioResult& ensemble(double d_tilde) {
  static std::optional<ScenarioResult> d20;
  static std::optional<ScenarioResult> d5;
  auto& slot = d_tilde == 20.0 ? d20 : d5;
  if (!slot) {
    ScenarioConfig c;
    c.array = LensArrayConfig::from_normalized(d_tilde, 1.0);
    c.user_count = 10;
    c.trial_count = 10000;
    c.seed = 1;
    slot = run_scenario(c);
  }
  return *slot;
}

Verdict mainlobe_capture() {
  const double f20 = approximation_quality(ensemble(20.0)).captured_fraction;
  const double f5 = approximation_quality(ensemble(5.0)).captured_fraction;
  const bool in_window = f20 >= 0.85 && f20 <= 0.98;
  return {in_window && f20 > f5,
          fmt("captured fraction d=20: %.4f (window [0.85, 0.98]: %s); d=5: %.4f; "
              "d=20 exceeds d=5: %s",
              f20, in_window ? "yes" : "no", f5, f20 > f5 ? "yes" : "no")};
}

Verdict effective_count() {
  const ScenarioResult& r = ensemble(20.0);
  const double expected = 9.0 * effective_prob_closed(20.0);
  const double z = std::abs(r.mean_effective_count - expected) / r.effective_count_std_error;
  const double quad = 9.0 * effective_prob_quadrature(20.0);
  const double z_quad = std::abs(r.mean_effective_count - quad) / r.effective_count_std_error;
  return {z <= 3.0, fmt("mean count %.5f +- %.2g vs (L-1) p_closed = %.5f: %.1f SE (limit 3) "
                        "[vs (L-1) p_quadrature = %.5f: %.1f SE]",
                        r.mean_effective_count, r.effective_count_std_error, expected, z, quad,
                        z_quad)};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

Verdict cli_determinism() {
  if (g_cli.empty()) return {false, "no --cli path given"};
  fs::create_directories(g_workdir);
  struct Command {
    std::string name;
    std::string args;
    std::vector<std::string> files;  // relative to the run directory
  };
  const std::vector<Command> commands = {
      {"pattern", "pattern --d-tilde 20 --phi-l-deg 0 --delta-min -0.5 --delta-max 0.5 "
                  "--steps 2001 --out {}/pattern.csv",
       {"pattern.csv"}},
      {"prob closed", "prob --d-tilde 10 --method closed --out {}/closed.json", {"closed.json"}},
      {"prob quadrature", "prob --d-tilde 10 --method quadrature --out {}/quad.json",
       {"quad.json"}},
      {"prob mc", "prob --d-tilde 10 --method mc --samples 1000000 --seed 7 --out {}/mc.json",
       {"mc.json"}},
      {"density", "density --d-tilde 10 --steps 501 --out {}/density.csv", {"density.csv"}},
      {"scenario", "scenario --d-tilde 10 --users 10 --trials 2000 --seed 1 --out {}/s.json",
       {"s.json", "s_cdf.csv"}},
      {"selfcheck", "selfcheck", {}},
  };
  bool ok = true;
  std::string detail;
  for (const auto& cmd : commands) {
    std::vector<std::string> contents;
    bool ran = true;
    const std::vector<std::string> thread_counts = {"1", "1", "4"};
    for (std::size_t run = 0; run < thread_counts.size(); ++run) {
      const std::string& threads = thread_counts[run];
      std::string tag = cmd.name;
      for (char& ch : tag) ch = ch == ' ' ? '_' : ch;
      const fs::path dir = g_workdir / (tag + "_run" + std::to_string(run) + "_t" + threads);
      fs::remove_all(dir);
      fs::create_directories(dir);
      std::string args = cmd.args;
      for (auto pos = args.find("{}"); pos != std::string::npos; pos = args.find("{}")) {
        args.replace(pos, 2, ".");
      }
      const std::string line = "cd \"" + dir.string() + "\" && \"" + g_cli + "\" --threads " +
                               threads + " " + args + " > stdout.txt 2> /dev/null";
      if (std::system(line.c_str()) != 0) ran = false;
      std::string blob = slurp(dir / "stdout.txt");
      for (const auto& f : cmd.files) blob += "\n--" + f + "--\n" + slurp(dir / f);
      contents.push_back(blob);
    }
    const bool same = ran && contents[0] == contents[1] && contents[0] == contents[2];
    ok = ok && same;
    detail += fmt("%s%s %s", detail.empty() ? "" : "; ", cmd.name.c_str(),
                  same ? "identical" : (ran ? "DIFFERS" : "FAILED TO RUN"));
  }
  return {ok, detail + " (runs: threads 1, 1, 4)"};
}

}  // namespace

int main(int argc, char** argv) {
  std::optional<int> only;
  g_workdir = fs::temp_directory_path() / "lensmimo_acceptance";
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--criterion" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else if (a == "--cli" && i + 1 < argc) {
      g_cli = argv[++i];
    } else if (a == "--workdir" && i + 1 < argc) {
      g_workdir = argv[++i];
    } else {
      std::cerr << "usage: lensmimo_acceptance [--criterion N] [--cli PATH] [--workdir DIR]\n";
      return 2;
    }
  }

  const std::vector<Criterion> criteria = {
      {1, "closed form matches direct inner product", 5.0, closed_form_fidelity},
      {2, "interference pattern shape at d=20", 5.0, pattern_shape},
      {3, "peak to first sidelobe ratio", 2.0, sidelobe_ratio},
      {4, "effective-interferer probability three-way agreement", 30.0, three_way_agreement},
      {5, "Theta density normalization and chi-square fit", 30.0, density_validity},
      {6, "mainlobe capture of the ensemble interference", 60.0, mainlobe_capture},
      {7, "effective-interferer count vs (L-1) p_k", 60.0, effective_count},
      {8, "CLI outputs byte-identical across reruns and thread counts", 600.0, cli_determinism},
  };

  int failed = 0;
  int ran = 0;
  for (const auto& c : criteria) {
    if (only && *only != c.id) continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.budget_seconds;
    const bool pass = v.pass && in_time;
    failed += !pass;
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << "criterion " << c.id << ": " << c.title
              << fmt(" (%.2f s, budget %.0f s%s)", secs, c.budget_seconds,
                     in_time ? "" : ", OVER BUDGET")
              << "\n       " << v.detail << "\n";
  }
  if (ran == 0) {
    std::cerr << "no such criterion\n";
    return 2;
  }
  std::cout << (failed == 0 ? "all selected criteria passed" : fmt("%d criteria failed", failed))
            << "\n";
  return failed == 0 ? 0 : 1;
}
