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

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "lensmimo/array_model.hpp"

namespace lensmimo {

/// Raised when a null or sidelobe cannot be located on the pattern.
class SearchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Spatial frequencies of a desired terminal l and an interferer k with the
/// derived separations. `theta_norm` is the separation in units of half the
/// mainlobe width.
struct AngularPair {
  double phi_tilde_l = 0.0;
  double phi_tilde_k = 0.0;
  double delta = 0.0;           // phi_l - phi_k
  double delta_sum = 0.0;       // phi_l + phi_k
  double theta_norm = 0.0;      // d_tilde * delta
  double theta_sum_norm = 0.0;  // d_tilde * delta_sum

  static AngularPair make(double d_tilde, double phi_tilde_l, double phi_tilde_k);
  bool in_mainlobe() const noexcept { return std::abs(theta_norm) <= 1.0; }
};

struct InterferenceSample {
  AngularPair pair;
  double power_linear = 0.0;
  double power_db = 0.0;
  bool effective = false;
};

struct PatternPoint {
  double delta = 0.0;
  double theta_norm = 0.0;
  double power_linear = 0.0;
  double power_db = 0.0;
  bool effective = false;
};

struct PatternSeries {
  LensArrayConfig config;
  double phi_tilde_l = 0.0;
  std::vector<PatternPoint> points;
  std::size_t skipped = 0;  // grid points whose interferer fell outside [-1, 1]
};

/// 10 log10 of a power, clamped at 1e-300 so exact nulls stay finite.
double to_db(double power_linear) noexcept;

/// (1/M) |h_l^H h_k|^2 through explicit channel vectors and an inner product.
double pairwise_interference_direct(const LensArrayConfig& config, double phi_tilde_l,
                                    double phi_tilde_k);

/// The same quantity through the trigonometric closed form, summed term by
/// term over the element indices:
///
///   N_m = (A/2) [cos(pi d (phi_l - phi_k)) - cos(pi (2m - d (phi_l + phi_k)))]
///   D_m = pi^2 [m (m - d (phi_l + phi_k)) + d^2 phi_l phi_k]
///
/// Terms with |D_m| < 1e-9 sit on a sinc zero of the denominator and are
/// evaluated as the plain sinc product instead.
double pairwise_interference_closed(const LensArrayConfig& config, double phi_tilde_l,
                                    double phi_tilde_k);

/// Mainlobe-only interference: the pairwise value when |theta_norm| <= 1, else 0.
InterferenceSample effective_interference(const LensArrayConfig& config, double phi_tilde_l,
                                          double phi_tilde_k);

/// Interference on user `index_l` from every other user in `spatial_freqs`.
double user_total_interference(const LensArrayConfig& config, std::size_t index_l,
                               std::span<const double> spatial_freqs);

/// Pattern seen by a user at `phi_tilde_l` as an interferer moves to
/// phi_tilde_l - delta for each delta in the grid.
PatternSeries sweep_pattern(const LensArrayConfig& config, double phi_tilde_l,
                            std::span<const double> delta_grid, unsigned threads = 1);

/// Smallest positive separation at which the pattern around `phi_tilde_l` has
/// a null (power <= floor_rel * peak). Bisects on the sign of the real
/// inner-product amplitude.
double first_null(const LensArrayConfig& config, double phi_tilde_l, double floor_rel = 1e-8);

inline double mainlobe_width(const LensArrayConfig& config, double phi_tilde_l) {
  return 2.0 * first_null(config, phi_tilde_l);
}

/// Peak over first-sidelobe power in dB for a broadside user. Needs M >= 11.
double sidelobe_ratio_db(const LensArrayConfig& config);

namespace detail {

/// Real amplitude sum_m A sinc(m - d phi_l) sinc(m - d phi_k). Its square
/// over M is the pairwise interference for any common phase.
double pair_amplitude(const LensArrayConfig& config, double phi_tilde_l, double phi_tilde_k);

/// Closed-form sum with the factor in front of the numerator exposed so the
/// self-check can corrupt it. `numerator_factor` is 0.5 in the real formula.
double closed_form_interference(const LensArrayConfig& config, double phi_tilde_l,
                                double phi_tilde_k, double numerator_factor);

}  // namespace detail
}  // namespace lensmimo
