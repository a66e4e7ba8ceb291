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

#include "lensmimo/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "lensmimo/interference.hpp"
#include "lensmimo/parallel.hpp"

namespace lensmimo {
namespace {

constexpr int kAuditEvery = 100;
constexpr int kCdfPoints = 200;

double ratio_or_one(double num, double den) { return den > 0.0 ? num / den : 1.0; }

double sorted_quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  const std::size_t j = std::min(i + 1, sorted.size() - 1);
  return sorted[i] + (pos - static_cast<double>(i)) * (sorted[j] - sorted[i]);
}

SummaryStats summarize(const Eigen::MatrixXd& values) {
  std::vector<double> flat(values.data(), values.data() + values.size());
  std::sort(flat.begin(), flat.end());
  const auto q = [&flat](double p) { return sorted_quantile(flat, p); };
  SummaryStats s;
  s.mean = values.mean();
  s.median = q(0.5);
  s.p01 = q(0.01);
  s.p05 = q(0.05);
  s.p25 = q(0.25);
  s.p75 = q(0.75);
  s.p95 = q(0.95);
  s.p99 = q(0.99);
  return s;
}

// Log-spaced grid between the 0.1% and 99.9% quantiles.
std::vector<CdfPoint> empirical_cdf(const Eigen::MatrixXd& values) {
  std::vector<double> flat(values.data(), values.data() + values.size());
  std::sort(flat.begin(), flat.end());
  double lo = sorted_quantile(flat, 0.001);
  const double hi = sorted_quantile(flat, 0.999);
  if (!(lo > 0.0)) {
    const auto first_pos = std::upper_bound(flat.begin(), flat.end(), 0.0);
    lo = first_pos == flat.end() ? 0.0 : std::min(*first_pos, hi);
  }
  std::vector<CdfPoint> cdf(kCdfPoints);
  const double n = static_cast<double>(flat.size());
  for (int i = 0; i < kCdfPoints; ++i) {
    double x = hi;
    if (lo > 0.0 && hi > lo) {
      x = i + 1 == kCdfPoints ? hi
                              : lo * std::pow(hi / lo, static_cast<double>(i) / (kCdfPoints - 1));
    }
    const auto below = std::upper_bound(flat.begin(), flat.end(), x) - flat.begin();
    cdf[static_cast<std::size_t>(i)] = {x, static_cast<double>(below) / n};
  }
  return cdf;
}

}  // namespace

void ScenarioConfig::validate() const {
  array.validate();
  sector.validate();
  if (user_count < 1) throw std::invalid_argument("user_count must be >= 1");
  if (trial_count < 1) throw std::invalid_argument("trial_count must be >= 1");
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of empty set");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile level must be in [0, 1]");
  std::sort(values.begin(), values.end());
  return sorted_quantile(values, q);
}

DropResult evaluate_drop(const LensArrayConfig& array, std::span<const double> spatial_freqs) {
  if (spatial_freqs.empty()) throw std::invalid_argument("user list is empty");
  const auto users = static_cast<Eigen::Index>(spatial_freqs.size());
  const Eigen::MatrixXcd h = channel_matrix<double>(array, spatial_freqs);
  const Eigen::MatrixXd power = (h.adjoint() * h).cwiseAbs2() / array.element_count;

  DropResult r;
  r.exact = Eigen::VectorXd::Zero(users);
  r.effective = Eigen::VectorXd::Zero(users);
  r.effective_count = Eigen::VectorXi::Zero(users);
  for (Eigen::Index l = 0; l < users; ++l) {
    for (Eigen::Index k = 0; k < users; ++k) {
      if (k == l) continue;
      r.exact(l) += power(l, k);
      const auto pair = AngularPair::make(array.d_tilde, spatial_freqs[static_cast<std::size_t>(l)],
                                          spatial_freqs[static_cast<std::size_t>(k)]);
      if (pair.in_mainlobe()) {
        r.effective(l) += power(l, k);
        r.effective_count(l) += 1;
      }
    }
  }
  return r;
}

ScenarioResult run_scenario(const ScenarioConfig& config) {
  config.validate();
  const int trials = config.trial_count;
  const int users = config.user_count;

  ScenarioResult res;
  res.config = config;
  res.exact.resize(trials, users);
  res.effective.resize(trials, users);
  res.effective_count.resize(trials, users);
  std::vector<double> audit_error(static_cast<std::size_t>(trials), 0.0);

  parallel_for(static_cast<std::size_t>(trials), config.threads,
               [&](std::size_t begin, std::size_t end) {
    std::vector<double> freqs(static_cast<std::size_t>(users));
    for (std::size_t t = begin; t < end; ++t) {
      const auto doas = sample_doas(config.seed, freqs.size(), t, config.sector);
      std::transform(doas.begin(), doas.end(), freqs.begin(),
                     [](double phi) { return std::sin(phi); });
      const DropResult drop = evaluate_drop(config.array, freqs);
      const auto row = static_cast<Eigen::Index>(t);
      res.exact.row(row) = drop.exact.transpose();
      res.effective.row(row) = drop.effective.transpose();
      res.effective_count.row(row) = drop.effective_count.transpose();

      if (t % kAuditEvery == 0) {
        double worst = 0.0;
        for (int l = 0; l < users; ++l) {
          const double pairwise =
              user_total_interference(config.array, static_cast<std::size_t>(l), freqs);
          const double diff = std::abs(pairwise - drop.exact(l));
          worst = std::max(worst, pairwise > 0.0 ? diff / pairwise : diff);
        }
        audit_error[t] = worst;
      }
    }
  });

  res.audited_trials = (trials + kAuditEvery - 1) / kAuditEvery;
  res.audit_max_rel_error = *std::max_element(audit_error.begin(), audit_error.end());

  res.exact_stats = summarize(res.exact);
  res.effective_stats = summarize(res.effective);
  res.exact_cdf = empirical_cdf(res.exact);
  res.mean_exact = res.exact_stats.mean;
  res.mean_effective = res.effective_stats.mean;
  res.captured_fraction = ratio_or_one(res.mean_effective, res.mean_exact);

  const Eigen::VectorXd per_trial = res.effective_count.cast<double>().rowwise().mean();
  res.mean_effective_count = per_trial.mean();
  if (trials > 1) {
    const double var = (per_trial.array() - res.mean_effective_count).square().sum() / (trials - 1);
    res.effective_count_std_error = std::sqrt(var / trials);
  }
  return res;
}

ApproximationReport approximation_quality(const ScenarioResult& result) {
  return {result.mean_exact, result.mean_effective,
          ratio_or_one(result.mean_effective, result.mean_exact)};
}

ApproximationReport approximation_quality(const ScenarioConfig& config) {
  if (config.user_count < 2) throw std::invalid_argument("approximation quality needs L >= 2");
  return approximation_quality(run_scenario(config));
}

ApproximationReport approximation_quality(const LensArrayConfig& array,
                                          std::span<const std::vector<double>> drops) {
  if (drops.empty()) throw std::invalid_argument("no drops given");
  double exact = 0.0;
  double effective = 0.0;
  Eigen::Index entries = 0;
  for (const auto& freqs : drops) {
    if (freqs.size() < 2) throw std::invalid_argument("approximation quality needs L >= 2");
    const DropResult d = evaluate_drop(array, freqs);
    exact += d.exact.sum();
    effective += d.effective.sum();
    entries += d.exact.size();
  }
  const double n = static_cast<double>(entries);
  return {exact / n, effective / n, ratio_or_one(effective, exact)};
}

}  // namespace lensmimo
