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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "lensmimo/quadrature.hpp"
#include "lensmimo/stochastic.hpp"

using namespace lensmimo;

namespace {

constexpr double kPi = std::numbers::pi;
const double kEdge = std::sqrt(3.0) / 2.0;

// Independent route to P(|Theta| <= 1): condition on phi_l and measure the
// arc of phi_k whose sine lands within 1/d, then integrate over phi_l with
// composite Simpson on a fine grid. No densities, no adaptive quadrature.
double angle_domain_probability(double d_tilde) {
  const double w = kPi / 3.0;
  const auto arc = [&](double phi) {
    const double y = std::sin(phi);
    const double hi = std::asin(std::min(kEdge, y + 1.0 / d_tilde));
    const double lo = std::asin(std::max(-kEdge, y - 1.0 / d_tilde));
    return std::max(0.0, hi - lo);
  };
  const int n = 2000000;
  const double h = 2.0 * w / n;
  double sum = arc(-w) + arc(w);
  for (int i = 1; i < n; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * arc(-w + i * h);
  return sum * h / 3.0 / (4.0 * w * w);
}

}  // namespace

TEST_SUITE("stochastic") {

TEST_CASE("spatial frequency density") {
  CHECK(spatial_freq_pdf(0.0) == doctest::Approx(3.0 / (2.0 * kPi)).epsilon(1e-15));
  CHECK(spatial_freq_pdf(0.0) == doctest::Approx(0.477465).epsilon(1e-6));
  CHECK(spatial_freq_pdf(0.9) == 0.0);
  CHECK(spatial_freq_pdf(-0.9) == 0.0);
  const double total =
      integrate_adaptive([](double y) { return spatial_freq_pdf(y); }, -kEdge, kEdge, 1e-13).value;
  CHECK(std::abs(total - 1.0) <= 1e-10);
  CHECK_THROWS_AS(spatial_freq_pdf(0.0, SectorModel{2.0}), std::invalid_argument);
}

TEST_CASE("Theta density at the origin has a closed form") {
  // Inner integral at z = 0 is \int dy / (1 - y^2) = 2 artanh(sqrt(3)/2).
  const double expected = 0.1 * (9.0 / (4.0 * kPi * kPi)) * 2.0 * std::atanh(kEdge);
  CHECK(theta_pdf(0.0, 10.0) == doctest::Approx(expected).epsilon(1e-10));
  CHECK(theta_pdf(0.0, 10.0) == doctest::Approx(0.060044).epsilon(1e-4));
}

TEST_CASE("Theta density is even and vanishes outside its support") {
  for (double d : {2.0, 10.0}) {
    for (int i = 0; i <= 40; ++i) {
      const double z = i * std::sqrt(3.0) * d / 40.0;
      CHECK(std::abs(theta_pdf(z, d) - theta_pdf(-z, d)) <= 1e-10);
      CHECK(theta_pdf(z, d) >= 0.0);
    }
    CHECK(theta_pdf(2.0 * std::sqrt(3.0) * d, d) == 0.0);
    CHECK(theta_pdf(std::sqrt(3.0) * d, d) == 0.0);
    CHECK(theta_pdf(-std::sqrt(3.0) * d * 1.0001, d) == 0.0);
    CHECK(theta_pdf(std::sqrt(3.0) * d * 0.999, d) > 0.0);
  }
  CHECK_THROWS_AS(theta_pdf(0.0, 0.0), std::invalid_argument);
}

TEST_CASE("Theta density is normalized") {
  for (double d : {2.0, 10.0, 50.0}) {
    const double s = std::sqrt(3.0) * d;
    CHECK_MESSAGE(std::abs(theta_probability(-s, s, d) - 1.0) <= 1e-6, "d_tilde = " << d);
  }
}

TEST_CASE("full half-plane sector keeps the substitution finite") {
  const SectorModel wide{kPi / 2.0};
  const double total = theta_probability(-4.0, 4.0, 2.0, wide);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("quadrature probability matches the angle-domain oracle") {
  for (double d : {2.0, 5.0, 10.0, 20.0}) {
    CHECK_MESSAGE(std::abs(effective_prob_quadrature(d) - angle_domain_probability(d)) <= 1e-7,
                  "d_tilde = " << d);
  }
  // Frozen from the oracle above.
  CHECK(effective_prob_quadrature(10.0) == doctest::Approx(0.1122673842).epsilon(1e-8));
  CHECK(effective_prob_quadrature(1.0 / (2.0 * std::sqrt(3.0))) ==
        doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("quadrature probability decreases with the lens size") {
  double prev = 1.0;
  for (double d : {2.0, 5.0, 10.0, 20.0, 50.0}) {
    const double p = effective_prob_quadrature(d);
    CHECK(p < prev);
    prev = p;
  }
}

TEST_CASE("closed-form probability") {
  CHECK(effective_prob_closed(10.0) ==
        doctest::Approx(9.0 * 1.3169578969248166 / (kPi * kPi * 10.0)).epsilon(1e-14));
  CHECK(effective_prob_closed(10.0) == doctest::Approx(0.1200922).epsilon(1e-6));
  CHECK(effective_prob_closed(20.0) == doctest::Approx(0.0600461).epsilon(1e-6));
  const double ref = effective_prob_closed(5.0) * 5.0;
  for (double d : {10.0, 20.0, 50.0}) CHECK(effective_prob_closed(d) * d == doctest::Approx(ref));
  CHECK_THROWS_AS(effective_prob_closed(1.0), ValidityError);
  CHECK_THROWS_AS(effective_prob_closed(1.999), ValidityError);
  CHECK_NOTHROW(effective_prob_closed(2.0));
}

TEST_CASE("closed form approaches the quadrature as the lens grows") {
  double prev = 1.0;
  for (double d : {5.0, 10.0, 20.0, 40.0}) {
    const double gap = std::abs(effective_prob_quadrature(d) - effective_prob_closed(d));
    CHECK(gap < prev);
    prev = gap;
  }
}

TEST_CASE("Monte Carlo probability") {
  const ProbEstimate est = effective_prob_mc(10.0, 1000000, 7);
  CHECK(est.sample_count == 1000000);
  CHECK(est.seed == 7);
  CHECK(est.std_error == doctest::Approx(std::sqrt(est.value * (1 - est.value) / 1e6)));
  CHECK(std::abs(est.value - effective_prob_quadrature(10.0)) <= 3.0 * est.std_error);

  const ProbEstimate all = effective_prob_mc(1.0 / (2.0 * std::sqrt(3.0)), 10000, 1);
  CHECK(all.value == 1.0);
  CHECK(all.std_error == 0.0);

  const ProbEstimate one = effective_prob_mc(10.0, 200000, 42, 1);
  const ProbEstimate many = effective_prob_mc(10.0, 200000, 42, 5);
  CHECK(one.value == many.value);
  CHECK(effective_prob_mc(10.0, 200000, 43).value != one.value);
  CHECK_THROWS_AS(effective_prob_mc(10.0, 0, 1), std::invalid_argument);
}

TEST_CASE("DOA sampler") {
  const auto doas = sample_doas(17, 1000000);
  const double w = kPi / 3.0;
  double mean = 0.0;
  for (double phi : doas) {
    CHECK_LE(std::abs(phi), w);
    mean += phi;
  }
  mean /= static_cast<double>(doas.size());
  CHECK(std::abs(mean) <= 3.0 * w / std::sqrt(3.0 * 1e6));
  CHECK(sample_doas(17, 10) == std::vector<double>(doas.begin(), doas.begin() + 10));
  CHECK(sample_doas(17, 10, 1) != sample_doas(17, 10, 0));
  CHECK_THROWS_AS(sample_doas(1, 0), std::invalid_argument);

  // sin(phi) against the arcsine density; bin probabilities come from
  // (asin b - asin a) / (2w), not from the library.
  const int bins = 40;
  std::vector<std::uint64_t> counts(bins, 0);
  for (double phi : doas) {
    const int b = std::clamp(static_cast<int>((std::sin(phi) + kEdge) / (2 * kEdge) * bins), 0,
                             bins - 1);
    ++counts[static_cast<std::size_t>(b)];
  }
  std::vector<double> expected(bins);
  for (int b = 0; b < bins; ++b) {
    const double lo = -kEdge + 2 * kEdge * b / bins;
    const double hi = -kEdge + 2 * kEdge * (b + 1) / bins;
    expected[static_cast<std::size_t>(b)] = (std::asin(hi) - std::asin(lo)) / (2 * w);
  }
  CHECK(chi_square_gof(counts, expected).p_value > 0.01);
}

TEST_CASE("chi-square statistic") {
  const std::vector<std::uint64_t> observed = {10, 20, 30, 40};
  const std::vector<double> probs = {0.25, 0.25, 0.25, 0.25};
  const auto r = chi_square_gof(observed, probs);
  CHECK(r.statistic == doctest::Approx(20.0));  // (225 + 25 + 25 + 225) / 25
  CHECK(r.dof == 3);
  CHECK(r.p_value == doctest::Approx(1.7e-4).epsilon(0.01));
  CHECK_THROWS_AS(chi_square_gof(observed, std::vector<double>{0.5, 0.5}), std::invalid_argument);
}

TEST_CASE("Monte Carlo Theta histogram follows the density") {
  CHECK(theta_histogram_test(10.0, 200000, 3).p_value > 0.01);
  CHECK(theta_histogram_test(3.0, 200000, 4, 30).p_value > 0.01);
}

}  // TEST_SUITE
