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

#include "lensmimo/interference.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "lensmimo/parallel.hpp"

namespace lensmimo {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNearZeroShift = 1e-3;
constexpr double kDbFloor = 1e-300;

struct DoubleDouble {
  double hi;
  double lo;
};

DoubleDouble two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

DoubleDouble two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

// cos(x_hi + x_lo) to first order in the tail, in half-turns or radians.
double cos_with_tail(double x_hi, double x_lo, SincConvention convention) {
  if (convention == SincConvention::Normalized) {
    return cospi(x_hi) - kPi * x_lo * sinpi(x_hi);
  }
  return std::cos(x_hi) - x_lo * std::sin(x_hi);
}

void check_pair(const LensArrayConfig& config, double phi_tilde_l, double phi_tilde_k) {
  config.validate();
  check_spatial_freq(phi_tilde_l, "phi_tilde_l");
  check_spatial_freq(phi_tilde_k, "phi_tilde_k");
}

double pattern_power(const LensArrayConfig& config, double phi_tilde_l, double delta) {
  const double amp = detail::pair_amplitude(config, phi_tilde_l, phi_tilde_l - delta);
  return amp * amp / config.element_count;
}

bool interferer_in_range(double phi_tilde_l, double delta) {
  return std::abs(phi_tilde_l - delta) <= 1.0;
}

}  // namespace

AngularPair AngularPair::make(double d_tilde, double phi_tilde_l, double phi_tilde_k) {
  AngularPair p;
  p.phi_tilde_l = phi_tilde_l;
  p.phi_tilde_k = phi_tilde_k;
  p.delta = phi_tilde_l - phi_tilde_k;
  p.delta_sum = phi_tilde_l + phi_tilde_k;
  p.theta_norm = d_tilde * p.delta;
  p.theta_sum_norm = d_tilde * p.delta_sum;
  return p;
}

double to_db(double power_linear) noexcept {
  return 10.0 * std::log10(std::max(power_linear, kDbFloor));
}

double pairwise_interference_direct(const LensArrayConfig& config, double phi_tilde_l,
                                    double phi_tilde_k) {
  check_pair(config, phi_tilde_l, phi_tilde_k);
  const auto h_l = array_response<double>(config, phi_tilde_l);
  const auto h_k = array_response<double>(config, phi_tilde_k);
  // Eigen's dot conjugates the left operand: h_l^H h_k.
  return std::norm(h_l.entries.dot(h_k.entries)) / config.element_count;
}

double pairwise_interference_closed(const LensArrayConfig& config, double phi_tilde_l,
                                    double phi_tilde_k) {
  return detail::closed_form_interference(config, phi_tilde_l, phi_tilde_k, 0.5);
}

namespace detail {

double pair_amplitude(const LensArrayConfig& config, double phi_tilde_l, double phi_tilde_k) {
  check_pair(config, phi_tilde_l, phi_tilde_k);
  const double a = config.d_tilde * phi_tilde_l;
  const double b = config.d_tilde * phi_tilde_k;
  const int half = config.max_index();
  double sum = 0.0;
  for (int m = -half; m <= half; ++m) {
    sum += sinc(m - a, config.sinc_convention) * sinc(m - b, config.sinc_convention);
  }
  return config.aperture() * sum;
}

double closed_form_interference(const LensArrayConfig& config, double phi_tilde_l,
                                double phi_tilde_k, double numerator_factor) {
  check_pair(config, phi_tilde_l, phi_tilde_k);
  const SincConvention conv = config.sinc_convention;
  const double aperture = config.aperture();
  // Shifts d*phi as used by the channel vectors; the difference and sum are
  // d*Delta and d*Delta~ carried in double-double.
  const double a = config.d_tilde * phi_tilde_l;
  const double b = config.d_tilde * phi_tilde_k;
  const DoubleDouble diff = two_sum(a, -b);
  const DoubleDouble sum = two_sum(a, b);
  const DoubleDouble prod = two_prod(a, b);
  const double scale = conv == SincConvention::Normalized ? kPi * kPi : 1.0;
  const double cos_diff = cos_with_tail(diff.hi, diff.lo, conv);
  // cos(pi(2m - s)) only depends on s modulo 2 under the normalized convention.
  const double sum_reduced = conv == SincConvention::Normalized ? std::fmod(sum.hi, 2.0) : sum.hi;

  const int half = config.max_index();
  double total = 0.0;
  for (int m = -half; m <= half; ++m) {
    const double md = static_cast<double>(m);

    // D_m = m (m - s) + p, evaluated in double-double.
    const DoubleDouble ms = two_prod(md, sum.hi);
    const DoubleDouble t = two_sum(md * md, -ms.hi);
    const DoubleDouble u = two_sum(t.hi, prod.hi);
    const double denom =
        scale * (u.hi + (t.lo + u.lo - ms.lo - md * sum.lo + prod.lo));

    if (std::abs(md - a) < kNearZeroShift || std::abs(md - b) < kNearZeroShift) {
      total += aperture * sinc(md - a, conv) * sinc(md - b, conv);
      continue;
    }
    const DoubleDouble arg = two_sum(2.0 * md, -sum_reduced);
    const double cos_sum = cos_with_tail(arg.hi, arg.lo - sum.lo, conv);
    total += numerator_factor * aperture * (cos_diff - cos_sum) / denom;
  }
  return total * total / config.element_count;
}

}  // namespace detail

InterferenceSample effective_interference(const LensArrayConfig& config, double phi_tilde_l,
                                          double phi_tilde_k) {
  check_pair(config, phi_tilde_l, phi_tilde_k);
  InterferenceSample s;
  s.pair = AngularPair::make(config.d_tilde, phi_tilde_l, phi_tilde_k);
  s.effective = s.pair.in_mainlobe();
  s.power_linear =
      s.effective ? pairwise_interference_direct(config, phi_tilde_l, phi_tilde_k) : 0.0;
  s.power_db = to_db(s.power_linear);
  return s;
}

double user_total_interference(const LensArrayConfig& config, std::size_t index_l,
                               std::span<const double> spatial_freqs) {
  if (spatial_freqs.empty()) throw std::invalid_argument("user list is empty");
  if (index_l >= spatial_freqs.size()) throw std::invalid_argument("user index out of range");
  double total = 0.0;
  for (std::size_t k = 0; k < spatial_freqs.size(); ++k) {
    if (k == index_l) continue;
    total += pairwise_interference_direct(config, spatial_freqs[index_l], spatial_freqs[k]);
  }
  return total;
}

PatternSeries sweep_pattern(const LensArrayConfig& config, double phi_tilde_l,
                            std::span<const double> delta_grid, unsigned threads) {
  if (delta_grid.empty()) throw std::invalid_argument("delta grid is empty");
  config.validate();
  check_spatial_freq(phi_tilde_l, "phi_tilde_l");
  for (std::size_t i = 1; i < delta_grid.size(); ++i) {
    if (!(delta_grid[i] > delta_grid[i - 1])) {
      throw std::invalid_argument("delta grid must be strictly increasing");
    }
  }

  std::vector<double> kept;
  kept.reserve(delta_grid.size());
  for (double d : delta_grid) {
    if (interferer_in_range(phi_tilde_l, d)) kept.push_back(d);
  }

  PatternSeries series;
  series.config = config;
  series.phi_tilde_l = phi_tilde_l;
  series.skipped = delta_grid.size() - kept.size();
  series.points.resize(kept.size());
  parallel_for(kept.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double phi_k = phi_tilde_l - kept[i];
      const AngularPair pair = AngularPair::make(config.d_tilde, phi_tilde_l, phi_k);
      PatternPoint& p = series.points[i];
      p.delta = kept[i];
      p.theta_norm = pair.theta_norm;
      p.power_linear = pairwise_interference_direct(config, phi_tilde_l, phi_k);
      p.power_db = to_db(p.power_linear);
      p.effective = pair.in_mainlobe();
    }
  });
  return series;
}

double first_null(const LensArrayConfig& config, double phi_tilde_l, double floor_rel) {
  config.validate();
  check_spatial_freq(phi_tilde_l, "phi_tilde_l");
  const double peak = pattern_power(config, phi_tilde_l, 0.0);
  const double step = 1.0 / (64.0 * config.d_tilde);

  double lo = 0.0;
  double amp_lo = detail::pair_amplitude(config, phi_tilde_l, phi_tilde_l);
  double prev_power = peak;
  for (double hi = step; hi <= 2.0; hi += step) {
    if (!interferer_in_range(phi_tilde_l, hi)) break;
    const double amp_hi = detail::pair_amplitude(config, phi_tilde_l, phi_tilde_l - hi);
    const double power_hi = amp_hi * amp_hi / config.element_count;

    if (amp_hi == 0.0) return hi;
    if (std::signbit(amp_hi) != std::signbit(amp_lo)) {
      // Sign change brackets an exact zero of the amplitude.
      double a = lo;
      double b = hi;
      for (int it = 0; it < 200 && b - a > 4 * std::numeric_limits<double>::epsilon() * b; ++it) {
        const double mid = 0.5 * (a + b);
        const double amp_mid = detail::pair_amplitude(config, phi_tilde_l, phi_tilde_l - mid);
        if (amp_mid == 0.0) return mid;
        if (std::signbit(amp_mid) == std::signbit(amp_lo)) {
          a = mid;
        } else {
          b = mid;
        }
      }
      return 0.5 * (a + b);
    }
    if (power_hi > prev_power) {
      // Local minimum without a sign change: refine and accept only if deep enough.
      const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
      double a = std::max(0.0, lo - step);
      double b = hi;
      while (b - a > 1e-12) {
        const double c = b - invphi * (b - a);
        const double d = a + invphi * (b - a);
        if (pattern_power(config, phi_tilde_l, c) < pattern_power(config, phi_tilde_l, d)) {
          b = d;
        } else {
          a = c;
        }
      }
      const double where = 0.5 * (a + b);
      if (pattern_power(config, phi_tilde_l, where) <= floor_rel * peak) return where;
      throw SearchError("first pattern minimum is not a null (power above floor)");
    }
    lo = hi;
    amp_lo = amp_hi;
    prev_power = power_hi;
  }
  throw SearchError("no null found for delta <= 2");
}

double sidelobe_ratio_db(const LensArrayConfig& config) {
  config.validate();
  if (config.element_count < 11) {
    throw std::invalid_argument("sidelobe ratio needs at least 11 elements");
  }
  const double peak = pattern_power(config, 0.0, 0.0);
  const double null = first_null(config, 0.0);
  const double step = 1.0 / (256.0 * config.d_tilde);

  double prev = pattern_power(config, 0.0, null);
  for (double d = null + step; d <= 1.0; d += step) {
    const double p = pattern_power(config, 0.0, d);
    if (p < prev) {
      // Passed the sidelobe peak; it lies in [d - 2 step, d].
      const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
      double a = d - 2.0 * step;
      double b = d;
      while (b - a > 1e-12) {
        const double c = b - invphi * (b - a);
        const double e = a + invphi * (b - a);
        if (pattern_power(config, 0.0, c) > pattern_power(config, 0.0, e)) {
          b = e;
        } else {
          a = c;
        }
      }
      const double side = pattern_power(config, 0.0, 0.5 * (a + b));
      if (!(side > 0.0)) throw SearchError("first sidelobe has zero power");
      return 10.0 * std::log10(peak / side);
    }
    prev = p;
  }
  throw SearchError("no sidelobe peak found");
}

}  // namespace lensmimo
