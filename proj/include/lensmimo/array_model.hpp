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
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace lensmimo {

/// Which sinc the element response uses. Normalized is sin(pi x)/(pi x), whose
/// zeros fall on the element grid; Unnormalized is the literal sin(x)/x.
enum class SincConvention { Normalized, Unnormalized };

/// Lens array geometry in wavelength-normalized units.
///
/// `d_tilde` is the azimuth lens dimension over the wavelength and `a_z` the
/// vertical one, so the normalized aperture is their product. Elements sit on
/// the focal arc with sin(theta_m) = m / d_tilde for m in {0, +-1, ..., +-(M-1)/2}.
struct LensArrayConfig {
  double d_tilde = 1.0;
  double a_z = 1.0;
  int element_count = 3;
  double focal_length = 1.0;  // meters, geometry only
  double phi0 = 0.0;          // common phase from the aperture to the array
  SincConvention sinc_convention = SincConvention::Normalized;

  /// Element count derived from `d_tilde`; throws std::invalid_argument on
  /// non-positive sizes.
  static LensArrayConfig from_normalized(double d_tilde, double a_z);

  /// Convenience for raw dimensions D_y, D_z and wavelength, all in meters.
  static LensArrayConfig from_physical(double d_y, double d_z, double wavelength);

  double aperture() const noexcept { return d_tilde * a_z; }
  int max_index() const noexcept { return (element_count - 1) / 2; }

  /// Throws std::invalid_argument if any invariant is broken (odd count,
  /// placement inside [-1, 1], positive sizes).
  void validate() const;
};

/// Largest odd element count whose placement fits in [-1, 1]: 1 + 2 floor(d_tilde).
int derive_element_count(double d_tilde);

struct ElementPlacement {
  int index = 0;
  double theta_tilde = 0.0;
  double theta = 0.0;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
};

/// Placements in ascending index order.
std::vector<ElementPlacement> element_placements(const LensArrayConfig& config);

/// Throws std::invalid_argument unless |spatial_freq| <= 1.
void check_spatial_freq(double spatial_freq, const char* what = "spatial frequency");

// sin(pi x) and cos(pi x) with exact reduction of x modulo 2, so large
// arguments near integers keep full relative accuracy.
template <typename Scalar>
Scalar sinpi(Scalar x) {
  Scalar r = std::fmod(x, Scalar(2));
  if (r > Scalar(1)) {
    r -= Scalar(2);
  } else if (r < Scalar(-1)) {
    r += Scalar(2);
  }
  if (r > Scalar(0.5)) {
    r = Scalar(1) - r;
  } else if (r < Scalar(-0.5)) {
    r = Scalar(-1) - r;
  }
  return std::sin(std::numbers::pi_v<Scalar> * r);
}

template <typename Scalar>
Scalar cospi(Scalar x) {
  Scalar r = std::abs(std::fmod(x, Scalar(2)));
  if (r > Scalar(1)) r = Scalar(2) - r;
  if (r < Scalar(0.25)) return std::cos(std::numbers::pi_v<Scalar> * r);
  return sinpi(Scalar(0.5) - r);
}

/// Sinc under the given convention. Arguments below 1e-8 in magnitude use
/// the two-term Taylor expansion, which is exact to double precision there.
template <typename Scalar>
Scalar sinc(Scalar x, SincConvention convention = SincConvention::Normalized) {
  constexpr Scalar kSeriesCutoff = Scalar(1e-8);
  const Scalar arg =
      convention == SincConvention::Normalized ? std::numbers::pi_v<Scalar> * x : x;
  if (std::abs(arg) < kSeriesCutoff) return Scalar(1) - arg * arg / Scalar(6);
  if (convention == SincConvention::Normalized) return sinpi(x) / arg;
  return std::sin(x) / x;
}

template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

/// Channel of one terminal: entry i belongs to element index i - (M-1)/2.
/// Under maximum-ratio combining this is also the terminal's combiner.
template <typename Scalar = double>
struct ChannelVector {
  ComplexVector<Scalar> entries;
  Scalar source_spatial_freq = Scalar(0);

  Eigen::Index size() const noexcept { return entries.size(); }
  const std::complex<Scalar>& at_index(int m) const {
    return entries((entries.size() - 1) / 2 + m);
  }
};

/// Response of every element to a plane wave with spatial frequency
/// sin(phi): e^{-j phi0} sqrt(A) sinc(m - d_tilde * sin(phi)).
template <typename Scalar = double>
ChannelVector<Scalar> array_response(const LensArrayConfig& config, Scalar spatial_freq) {
  config.validate();
  check_spatial_freq(static_cast<double>(spatial_freq));
  const int half = config.max_index();
  const Scalar shift = static_cast<Scalar>(config.d_tilde) * spatial_freq;
  const std::complex<Scalar> gain =
      std::polar(std::sqrt(static_cast<Scalar>(config.aperture())),
                 -static_cast<Scalar>(config.phi0));

  ChannelVector<Scalar> out;
  out.source_spatial_freq = spatial_freq;
  out.entries.resize(config.element_count);
  for (int m = -half; m <= half; ++m) {
    out.entries(m + half) = gain * sinc(static_cast<Scalar>(m) - shift, config.sinc_convention);
  }
  return out;
}

/// Stacks array responses column-wise: an M x L channel matrix.
template <typename Scalar = double>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic> channel_matrix(
    const LensArrayConfig& config, std::span<const Scalar> spatial_freqs) {
  Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic> h(
      config.element_count, static_cast<Eigen::Index>(spatial_freqs.size()));
  for (std::size_t k = 0; k < spatial_freqs.size(); ++k) {
    h.col(static_cast<Eigen::Index>(k)) = array_response<Scalar>(config, spatial_freqs[k]).entries;
  }
  return h;
}

}  // namespace lensmimo
