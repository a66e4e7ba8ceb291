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

#include "lensmimo/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>

#include "lensmimo/harness.hpp"
#include "lensmimo/interference.hpp"
#include "lensmimo/rng.hpp"
#include "lensmimo/stochastic.hpp"

namespace lensmimo {
namespace {

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

// Relative error with an absolute floor for values that are essentially zero.
bool close_enough(double x, double y, double rel, double abs_floor, double small) {
  if (std::min(std::abs(x), std::abs(y)) < small) return std::abs(x - y) <= abs_floor;
  return std::abs(x - y) <= rel * std::max(std::abs(x), std::abs(y));
}

CheckOutcome closed_vs_direct(const SelfCheckOptions& opt) {
  const double factor = opt.corrupt_closed_form ? 0.5 * (1.0 + 1e-6) : 0.5;
  const double edge = std::sqrt(3.0) / 2.0;
  const CounterRng rng(2024, 1);
  double worst = 0.0;
  int failures = 0;
  std::uint64_t index = 0;
  for (double d : {5.0, 10.0, 20.0}) {
    const auto config = LensArrayConfig::from_normalized(d, 1.0);
    for (int i = 0; i < 2000; ++i) {
      const auto [u, v] = rng.uniform_pair(index++);
      const double l = edge * (2.0 * u - 1.0);
      const double k = edge * (2.0 * v - 1.0);
      const double direct = pairwise_interference_direct(config, l, k);
      const double closed = detail::closed_form_interference(config, l, k, factor);
      if (!close_enough(direct, closed, 1e-9, 1e-12, 1e-6)) ++failures;
      if (direct > 1e-6) worst = std::max(worst, std::abs(direct - closed) / direct);
    }
  }
  return {"closed form equals direct inner product (6000 pairs)", failures == 0,
          fmt("worst relative error %.3g, failures %.0f", worst, failures)};
}

CheckOutcome grid_orthogonality() {
  const auto config = LensArrayConfig::from_normalized(10.0, 10.0);
  double worst = 0.0;
  for (int p = -config.max_index(); p <= config.max_index(); ++p) {
    for (int q = -config.max_index(); q <= config.max_index(); ++q) {
      if (p == q) continue;
      worst = std::max(worst, pairwise_interference_direct(config, p / config.d_tilde,
                                                           q / config.d_tilde));
    }
  }
  return {"distinct grid points are orthogonal", worst == 0.0, fmt("max power %.3g", worst)};
}

CheckOutcome symmetry() {
  const auto config = LensArrayConfig::from_normalized(10.0, 2.0);
  const CounterRng rng(7, 2);
  int failures = 0;
  for (std::uint64_t i = 0; i < 500; ++i) {
    const auto [u, v] = rng.uniform_pair(i);
    const double l = 2.0 * u - 1.0;
    const double k = 2.0 * v - 1.0;
    const double base = pairwise_interference_direct(config, l, k);
    const double swapped = pairwise_interference_direct(config, k, l);
    const double negated = pairwise_interference_direct(config, -l, -k);
    if (!close_enough(base, swapped, 1e-12, 1e-12, 1e-6) ||
        !close_enough(base, negated, 1e-12, 1e-12, 1e-6)) {
      ++failures;
    }
  }
  return {"swap and joint-negation symmetry", failures == 0, fmt("failures %.0f of 500", failures)};
}

CheckOutcome null_and_sidelobe() {
  const auto config = LensArrayConfig::from_normalized(20.0, 1.0);
  const double null = first_null(config, 0.0);
  const double ratio = sidelobe_ratio_db(config);
  const bool ok = std::abs(null - 0.05) <= 0.005 && ratio >= 12.5 && ratio <= 14.0;
  return {"first null near 1/d and ~13 dB sidelobe (d = 20)", ok,
          fmt("null %.6g, sidelobe ratio %.4g dB", null, ratio)};
}

CheckOutcome density_normalization() {
  const double d = 10.0;
  const double total = theta_probability(-std::sqrt(3.0) * d, std::sqrt(3.0) * d, d);
  return {"Theta density integrates to one (d = 10)", std::abs(total - 1.0) <= 1e-6,
          fmt("integral %.12g", total)};
}

CheckOutcome mc_vs_quadrature(const SelfCheckOptions& opt) {
  const double d = 10.0;
  const double quad = effective_prob_quadrature(d);
  const ProbEstimate mc = effective_prob_mc(d, 200000, 11, opt.threads);
  const double z = std::abs(mc.value - quad) / mc.std_error;
  return {"Monte Carlo agrees with quadrature within 3 sigma (d = 10)", z <= 3.0,
          fmt("quadrature %.6g, z-score %.3g", quad, z)};
}

CheckOutcome mc_thread_invariance(const SelfCheckOptions& opt) {
  const ProbEstimate a = effective_prob_mc(10.0, 50000, 3, 1);
  const ProbEstimate b = effective_prob_mc(10.0, 50000, 3, std::max(2u, opt.threads + 1));
  return {"Monte Carlo independent of worker count", a.value == b.value,
          fmt("values %.10g vs %.10g", a.value, b.value)};
}

CheckOutcome scenario_additivity(const SelfCheckOptions& opt) {
  ScenarioConfig config;
  config.array = LensArrayConfig::from_normalized(10.0, 1.0);
  config.user_count = 6;
  config.trial_count = 500;
  config.seed = 5;
  config.threads = opt.threads;
  const ScenarioResult r = run_scenario(config);
  const bool bounded = (r.effective.array() <= r.exact.array()).all();
  return {"scenario totals additive and effective <= exact",
          r.audit_max_rel_error <= 1e-9 && bounded,
          fmt("audit max relative error %.3g over %.0f trials", r.audit_max_rel_error,
              r.audited_trials)};
}

}  // namespace

std::vector<CheckOutcome> run_selfcheck(const SelfCheckOptions& options) {
  const std::vector<std::function<CheckOutcome()>> checks = {
      [&] { return closed_vs_direct(options); },
      grid_orthogonality,
      symmetry,
      null_and_sidelobe,
      density_normalization,
      [&] { return mc_vs_quadrature(options); },
      [&] { return mc_thread_invariance(options); },
      [&] { return scenario_additivity(options); },
  };
  std::vector<CheckOutcome> out;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    try {
      out.push_back(checks[i]());
    } catch (const std::exception& e) {
      out.push_back({"check " + std::to_string(i + 1), false, std::string("threw: ") + e.what()});
    }
  }
  return out;
}

}  // namespace lensmimo
