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

#include "lensmimo/array_model.hpp"

#include <stdexcept>
#include <string>

namespace lensmimo {

int derive_element_count(double d_tilde) {
  if (!(d_tilde > 0.0) || !std::isfinite(d_tilde)) {
    throw std::invalid_argument("d_tilde must be positive and finite");
  }
  return 1 + 2 * static_cast<int>(std::floor(d_tilde));
}

LensArrayConfig LensArrayConfig::from_normalized(double d_tilde, double a_z) {
  LensArrayConfig config;
  config.d_tilde = d_tilde;
  config.a_z = a_z;
  config.element_count = derive_element_count(d_tilde);
  config.validate();
  return config;
}

LensArrayConfig LensArrayConfig::from_physical(double d_y, double d_z, double wavelength) {
  if (!(wavelength > 0.0)) throw std::invalid_argument("wavelength must be positive");
  return from_normalized(d_y / wavelength, d_z / wavelength);
}

void LensArrayConfig::validate() const {
  if (!(d_tilde > 0.0) || !std::isfinite(d_tilde)) {
    throw std::invalid_argument("d_tilde must be positive and finite");
  }
  if (!(a_z > 0.0) || !std::isfinite(a_z)) {
    throw std::invalid_argument("a_z must be positive and finite");
  }
  if (!(focal_length > 0.0)) throw std::invalid_argument("focal_length must be positive");
  if (!std::isfinite(phi0)) throw std::invalid_argument("phi0 must be finite");
  if (element_count < 1 || element_count % 2 == 0) {
    throw std::invalid_argument("element_count must be odd and >= 1, got " +
                                std::to_string(element_count));
  }
  if (static_cast<double>(max_index()) > d_tilde) {
    throw std::invalid_argument("element_count " + std::to_string(element_count) +
                                " places elements outside [-1, 1] for d_tilde " +
                                std::to_string(d_tilde));
  }
}

void check_spatial_freq(double spatial_freq, const char* what) {
  if (!(std::abs(spatial_freq) <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in [-1, 1], got " +
                                std::to_string(spatial_freq));
  }
}

std::vector<ElementPlacement> element_placements(const LensArrayConfig& config) {
  config.validate();
  const int half = config.max_index();
  std::vector<ElementPlacement> out;
  out.reserve(static_cast<std::size_t>(config.element_count));
  for (int m = -half; m <= half; ++m) {
    ElementPlacement p;
    p.index = m;
    p.theta_tilde = static_cast<double>(m) / config.d_tilde;
    p.theta = std::asin(p.theta_tilde);
    p.position = {config.focal_length * std::cos(p.theta),
                  -config.focal_length * std::sin(p.theta), 0.0};
    out.push_back(p);
  }
  return out;
}

}  // namespace lensmimo
