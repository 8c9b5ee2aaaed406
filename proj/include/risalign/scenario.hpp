// SPDX-License-Identifier: Apache-2.0
//
// risalign - measurement-only phase alignment for RIS energy harvesting
// Copyright (C) 2026 risalign contributors
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

#include <array>
#include <cstddef>
#include <vector>

#include "risalign/signal_model.hpp"

namespace risalign {

using Position = std::array<double, 3>;

/// Planar surface on the xy-plane, centred at the origin, with a lambda/2
/// element pitch. Elements are numbered row-major from the most negative
/// (x, y) corner: n = row * cols + col, x follows col and y follows row.
struct GeometryScenario {
  double wavelength = 0.125;
  std::size_t rows = 16;
  std::size_t cols = 16;
  Position tx_position{0.0, -3.0, 4.0};
  Position rx_position{0.0, 1.0, 2.0};
  double transmit_power = 1.0;

  std::size_t size() const noexcept { return rows * cols; }
  std::vector<Position> element_positions() const;
  /// Throws GeometryError for a non-positive wavelength, an empty grid, a
  /// non-positive transmit power or a terminal on top of an element.
  void validate() const;
};

/// Sigmoid rectifier model with saturation power p_sat.
struct HarvesterModel {
  double a = 30.0;
  double b = 0.07;   // watts
  double p_sat = 0.1;  // watts
};

/// N iid CN(0, 1) gains drawn from `stream`.
ChannelRealization generate_iid_channel(std::size_t n, double sigma, RandomStream& stream);

struct NearFieldGains {
  std::vector<Complex> h;  // transmitter -> element
  std::vector<Complex> g;  // element -> receiver
};

/// Free-space scalar gains (lambda / (4 pi d)) e^{-j 2 pi d / lambda} with the
/// exact distance from each terminal to each element.
NearFieldGains near_field_gains(const GeometryScenario& scenario);

/// z_n = sqrt(P_t) h_n g_n for the scenario, with the given noise level.
ChannelRealization geometry_channel(const GeometryScenario& scenario, double noise_sigma = 0.0);

/// Conversion efficiency eta(x) for input power x > 0 watts.
double conversion_efficiency(double x, const HarvesterModel& model = {});

/// eta(x) * x, with 0 at x = 0.
double harvested_power(double x, const HarvesterModel& model = {});

/// sigma such that sum|z_n|^2 / (N sigma^2) equals the linear SNR.
double noise_sigma_for_snr(std::span<const Complex> gains, double snr_linear);

/// sigma such that E|z|^2 / sigma^2 equals the linear SNR for unit-variance gains.
double noise_sigma_for_unit_gain_snr(double snr_linear);

}  // namespace risalign
