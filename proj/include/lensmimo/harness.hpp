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

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lensmimo/array_model.hpp"
#include "lensmimo/stochastic.hpp"

namespace lensmimo {

struct ScenarioConfig {
  LensArrayConfig array;
  int user_count = 1;
  int trial_count = 1;
  std::uint64_t seed = 0;
  unsigned threads = 1;  // 0 means hardware concurrency; never changes results
  SectorModel sector;

  void validate() const;
};

/// Per-user interference for one drop of users.
struct DropResult {
  Eigen::VectorXd exact;            // sum over k != l of the pairwise interference
  Eigen::VectorXd effective;        // same sum restricted to |Theta| <= 1
  Eigen::VectorXi effective_count;  // interferers inside the mainlobe
};

struct SummaryStats {
  double mean = 0.0;
  double median = 0.0;
  double p01 = 0.0;
  double p05 = 0.0;
  double p25 = 0.0;
  double p75 = 0.0;
  double p95 = 0.0;
  double p99 = 0.0;
};

struct CdfPoint {
  double power = 0.0;
  double probability = 0.0;
};

struct ScenarioResult {
  ScenarioConfig config;
  // trial_count x user_count
  Eigen::MatrixXd exact;
  Eigen::MatrixXd effective;
  Eigen::MatrixXi effective_count;

  SummaryStats exact_stats;
  SummaryStats effective_stats;
  std::vector<CdfPoint> exact_cdf;

  double mean_exact = 0.0;
  double mean_effective = 0.0;
  double captured_fraction = 1.0;
  double mean_effective_count = 0.0;
  double effective_count_std_error = 0.0;  // from per-trial means

  int audited_trials = 0;
  double audit_max_rel_error = 0.0;
};

struct ApproximationReport {
  double mean_exact = 0.0;
  double mean_effective = 0.0;
  double captured_fraction = 1.0;
};

/// Exact and mainlobe-only totals for every user of one drop. Users at the
/// same DOA are kept; a user never interferes with itself.
DropResult evaluate_drop(const LensArrayConfig& array, std::span<const double> spatial_freqs);

/// Monte Carlo ensemble. Trial t draws its DOAs from stream t of the seed,
/// so results are identical for any thread count. Every 100th trial is
/// re-evaluated pair by pair to audit additivity.
ScenarioResult run_scenario(const ScenarioConfig& config);

/// Share of the ensemble-mean interference that the mainlobe captures.
ApproximationReport approximation_quality(const ScenarioConfig& config);
ApproximationReport approximation_quality(const ScenarioResult& result);
ApproximationReport approximation_quality(const LensArrayConfig& array,
                                          std::span<const std::vector<double>> drops);

/// Type-7 (linear interpolation) quantile of unsorted values.
double quantile(std::vector<double> values, double q);

}  // namespace lensmimo
