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
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace lensmimo {

/// Raised when a closed-form approximation is asked for outside its regime.
class ValidityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Users are dropped with azimuth DOAs i.i.d. uniform on [-half_width, half_width].
struct SectorModel {
  double half_width = std::numbers::pi / 3.0;

  void validate() const;
  /// Largest spatial frequency a user can have: sin(half_width).
  double support_edge() const;
};

struct ProbEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t sample_count = 0;
  std::uint64_t seed = 0;
};

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 0.0;
};

/// Density of sin(phi) for a uniform DOA: 1 / (2 w sqrt(1 - y^2)) on |y| <= sin(w).
double spatial_freq_pdf(double y, const SectorModel& sector = {});

/// Density of Theta = d_tilde (sin phi_l - sin phi_k) for two independent
/// drops: the scaled autocorrelation of `spatial_freq_pdf`,
///
///   f(z) = (1/d) \int g(y + z/d) g(y) dy,
///
/// integrated adaptively after substituting y = sin t (or y + z/d = sin t) at
/// whichever end of the range the corresponding factor's edge sits. Zero for
/// |z| >= 2 sin(w) d_tilde.
double theta_pdf(double z, double d_tilde, const SectorModel& sector = {});

/// P(z_lo <= Theta <= z_hi) by nested quadrature (outer tolerance 1e-8).
double theta_probability(double z_lo, double z_hi, double d_tilde,
                         const SectorModel& sector = {});

/// Effective-interferer probability P(|Theta| <= 1) by nested quadrature.
double effective_prob_quadrature(double d_tilde, const SectorModel& sector = {});

/// Large-array closed form 9 artanh(sqrt(3)/2) / (pi^2 d_tilde), capped at 1.
/// Throws ValidityError for d_tilde < 2.
double effective_prob_closed(double d_tilde);

/// Monte Carlo estimate of P(|Theta| <= 1). Sample i uses Philox counter i on
/// the Monte Carlo stream, so the value is independent of `threads`.
ProbEstimate effective_prob_mc(double d_tilde, std::uint64_t sample_count, std::uint64_t seed,
                               unsigned threads = 1, const SectorModel& sector = {});

/// `count` i.i.d. uniform DOAs in radians. Different streams are independent.
std::vector<double> sample_doas(std::uint64_t seed, std::size_t count, std::uint64_t stream = 0,
                                const SectorModel& sector = {});

/// Theta draws from the same sample sequence as `effective_prob_mc`.
std::vector<double> sample_theta(double d_tilde, std::uint64_t sample_count, std::uint64_t seed,
                                 unsigned threads = 1, const SectorModel& sector = {});

/// Pearson goodness of fit of `observed` counts against bin probabilities.
ChiSquareResult chi_square_gof(std::span<const std::uint64_t> observed,
                               std::span<const double> expected_prob);

/// Bins Monte Carlo Theta draws into `bins` equal cells over the support and
/// tests them against `theta_pdf`.
ChiSquareResult theta_histogram_test(double d_tilde, std::uint64_t sample_count,
                                     std::uint64_t seed, int bins = 50, unsigned threads = 1,
                                     const SectorModel& sector = {});

}  // namespace lensmimo
