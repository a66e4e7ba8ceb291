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

#include "lensmimo/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "lensmimo/parallel.hpp"
#include "lensmimo/quadrature.hpp"
#include "lensmimo/rng.hpp"

namespace lensmimo {
namespace {

constexpr double kInnerTol = 1e-10;
constexpr double kOuterTol = 1e-8;
// Stream reserved for the pairwise Monte Carlo draws; trial streams used by
// the scenario harness start at zero and stay far below it.
constexpr std::uint64_t kPairStream = std::uint64_t{1} << 63;

void check_d_tilde(double d_tilde) {
  if (!(d_tilde > 0.0) || !std::isfinite(d_tilde)) {
    throw std::invalid_argument("d_tilde must be positive and finite");
  }
}

// 1 / sqrt(1 - v^2) without the density constant.
double arcsine_kernel(double v) { return 1.0 / std::sqrt(std::max(0.0, 1.0 - v * v)); }

double clamp_asin(double v) { return std::asin(std::clamp(v, -1.0, 1.0)); }

}  // namespace

void SectorModel::validate() const {
  if (!(half_width > 0.0) || half_width > std::numbers::pi / 2.0) {
    throw std::invalid_argument("sector half width must lie in (0, pi/2]");
  }
}

double SectorModel::support_edge() const { return std::sin(half_width); }

double spatial_freq_pdf(double y, const SectorModel& sector) {
  sector.validate();
  if (!(std::abs(y) <= sector.support_edge()) || std::abs(y) >= 1.0) return 0.0;
  return arcsine_kernel(y) / (2.0 * sector.half_width);
}

double theta_pdf(double z, double d_tilde, const SectorModel& sector) {
  check_d_tilde(d_tilde);
  sector.validate();
  if (!std::isfinite(z)) throw std::invalid_argument("z must be finite");
  const double edge = sector.support_edge();
  const double shift = z / d_tilde;
  const double y_lo = std::max(-edge, -edge - shift);
  const double y_hi = std::min(edge, edge - shift);
  if (!(y_lo < y_hi)) return 0.0;

  // One end of [y_lo, y_hi] is the edge of y itself, the other the edge of
  // u = y + shift. Split at the middle and put each half on the angle of the
  // variable whose edge it touches: with v = sin t, g(v) dv = dt / (2w).
  const double y_mid = 0.5 * (y_lo + y_hi);
  const auto over_y = [shift](double t) { return arcsine_kernel(std::sin(t) + shift); };
  const auto over_u = [shift](double t) { return arcsine_kernel(std::sin(t) - shift); };

  double inner = 0.0;
  if (shift >= 0.0) {
    inner += integrate_adaptive(over_y, clamp_asin(y_lo), clamp_asin(y_mid), kInnerTol).value;
    inner += integrate_adaptive(over_u, clamp_asin(y_mid + shift), clamp_asin(y_hi + shift),
                                kInnerTol).value;
  } else {
    inner += integrate_adaptive(over_u, clamp_asin(y_lo + shift), clamp_asin(y_mid + shift),
                                kInnerTol).value;
    inner += integrate_adaptive(over_y, clamp_asin(y_mid), clamp_asin(y_hi), kInnerTol).value;
  }
  const double c = 1.0 / (2.0 * sector.half_width);
  return c * c * inner / d_tilde;
}

double theta_probability(double z_lo, double z_hi, double d_tilde, const SectorModel& sector) {
  check_d_tilde(d_tilde);
  sector.validate();
  if (!(z_lo <= z_hi)) throw std::invalid_argument("z_lo must not exceed z_hi");
  const double z_max = 2.0 * sector.support_edge() * d_tilde;
  const double lo = std::max(z_lo, -z_max);
  const double hi = std::min(z_hi, z_max);
  if (!(lo < hi)) return 0.0;
  const auto pdf = [d_tilde, &sector](double z) { return theta_pdf(z, d_tilde, sector); };
  // The density has a kink at z = 0.
  if (lo < 0.0 && hi > 0.0) {
    return integrate_adaptive(pdf, lo, 0.0, 0.5 * kOuterTol).value +
           integrate_adaptive(pdf, 0.0, hi, 0.5 * kOuterTol).value;
  }
  return integrate_adaptive(pdf, lo, hi, kOuterTol).value;
}

double effective_prob_quadrature(double d_tilde, const SectorModel& sector) {
  return std::clamp(theta_probability(-1.0, 1.0, d_tilde, sector), 0.0, 1.0);
}

double effective_prob_closed(double d_tilde) {
  check_d_tilde(d_tilde);
  if (d_tilde < 2.0) {
    throw ValidityError("closed-form effective-interferer probability needs d_tilde >= 2, got " +
                        std::to_string(d_tilde));
  }
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return std::min(1.0, 9.0 * std::atanh(std::sqrt(3.0) / 2.0) / (pi2 * d_tilde));
}

std::vector<double> sample_doas(std::uint64_t seed, std::size_t count, std::uint64_t stream,
                                const SectorModel& sector) {
  sector.validate();
  if (count == 0) throw std::invalid_argument("count must be positive");
  const CounterRng rng(seed, stream);
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = sector.half_width * (2.0 * rng.uniform(i) - 1.0);
  }
  return out;
}

namespace {

template <typename Visit>
void for_each_theta(double d_tilde, std::uint64_t sample_count, std::uint64_t seed,
                    unsigned threads, const SectorModel& sector, Visit&& visit) {
  check_d_tilde(d_tilde);
  sector.validate();
  const CounterRng rng(seed, kPairStream);
  const double w = sector.half_width;
  parallel_for(sample_count, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto [u_l, u_k] = rng.uniform_pair(i);
      const double phi_l = w * (2.0 * u_l - 1.0);
      const double phi_k = w * (2.0 * u_k - 1.0);
      visit(i, d_tilde * (std::sin(phi_l) - std::sin(phi_k)));
    }
  });
}

}  // namespace

ProbEstimate effective_prob_mc(double d_tilde, std::uint64_t sample_count, std::uint64_t seed,
                               unsigned threads, const SectorModel& sector) {
  if (sample_count == 0) throw std::invalid_argument("sample_count must be positive");
  std::vector<unsigned char> hit(sample_count, 0);
  for_each_theta(d_tilde, sample_count, seed, threads, sector,
                 [&hit](std::size_t i, double theta) { hit[i] = std::abs(theta) <= 1.0; });
  std::uint64_t hits = 0;
  for (unsigned char h : hit) hits += h;

  ProbEstimate est;
  est.sample_count = sample_count;
  est.seed = seed;
  est.value = static_cast<double>(hits) / static_cast<double>(sample_count);
  est.std_error = std::sqrt(est.value * (1.0 - est.value) / static_cast<double>(sample_count));
  return est;
}

std::vector<double> sample_theta(double d_tilde, std::uint64_t sample_count, std::uint64_t seed,
                                 unsigned threads, const SectorModel& sector) {
  if (sample_count == 0) throw std::invalid_argument("sample_count must be positive");
  std::vector<double> out(sample_count);
  for_each_theta(d_tilde, sample_count, seed, threads, sector,
                 [&out](std::size_t i, double theta) { out[i] = theta; });
  return out;
}

ChiSquareResult chi_square_gof(std::span<const std::uint64_t> observed,
                               std::span<const double> expected_prob) {
  if (observed.size() != expected_prob.size() || observed.size() < 2) {
    throw std::invalid_argument("chi-square needs matching bins, at least two");
  }
  double total = 0.0;
  for (auto o : observed) total += static_cast<double>(o);
  if (!(total > 0.0)) throw std::invalid_argument("chi-square needs observations");

  ChiSquareResult r;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double expected = total * expected_prob[i];
    if (!(expected > 0.0)) throw std::invalid_argument("chi-square bin with zero expectation");
    const double diff = static_cast<double>(observed[i]) - expected;
    r.statistic += diff * diff / expected;
  }
  r.dof = static_cast<int>(observed.size()) - 1;
  r.p_value = boost::math::gamma_q(0.5 * r.dof, 0.5 * r.statistic);
  return r;
}

ChiSquareResult theta_histogram_test(double d_tilde, std::uint64_t sample_count,
                                     std::uint64_t seed, int bins, unsigned threads,
                                     const SectorModel& sector) {
  if (bins < 2) throw std::invalid_argument("need at least two bins");
  const double z_max = 2.0 * sector.support_edge() * d_tilde;
  const double width = 2.0 * z_max / bins;

  std::vector<std::uint64_t> counts(static_cast<std::size_t>(bins), 0);
  for (double theta : sample_theta(d_tilde, sample_count, seed, threads, sector)) {
    const int b = std::clamp(static_cast<int>(std::floor((theta + z_max) / width)), 0, bins - 1);
    ++counts[static_cast<std::size_t>(b)];
  }
  std::vector<double> expected(static_cast<std::size_t>(bins));
  for (int b = 0; b < bins; ++b) {
    const double lo = -z_max + b * width;
    const double hi = b + 1 == bins ? z_max : lo + width;
    expected[static_cast<std::size_t>(b)] = theta_probability(lo, hi, d_tilde, sector);
  }
  return chi_square_gof(counts, expected);
}

}  // namespace lensmimo
