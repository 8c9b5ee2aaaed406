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

#include "risalign/scenario.hpp"

#include <cmath>
#include <string>

#include "risalign/errors.hpp"

namespace risalign {
namespace {

double distance(const Position& a, const Position& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
}

Complex free_space_gain(double d, double wavelength) {
  return (wavelength / (4.0 * kPi * d)) * std::polar(1.0, -kTwoPi * d / wavelength);
}

// (sigmoid(a(x - b)) - sigmoid(-ab)) / (1 - sigmoid(-ab)), in [0, 1]
double saturation_fraction(double x, const HarvesterModel& model) {
  const double floor = 1.0 / (1.0 + std::exp(model.a * model.b));
  const double e = std::exp(-model.a * (x - model.b));
  if (x <= model.b) return (1.0 / (1.0 + e) - floor) / (1.0 - floor);
  return 1.0 - (e / (1.0 + e)) / (1.0 - floor);
}

}  // namespace

std::vector<Position> GeometryScenario::element_positions() const {
  const double pitch = wavelength / 2.0;
  std::vector<Position> pos;
  pos.reserve(size());
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      pos.push_back({(static_cast<double>(c) - 0.5 * static_cast<double>(cols - 1)) * pitch,
                     (static_cast<double>(r) - 0.5 * static_cast<double>(rows - 1)) * pitch, 0.0});
  return pos;
}

void GeometryScenario::validate() const {
  if (!(wavelength > 0.0) || !std::isfinite(wavelength)) throw GeometryError("wavelength must be positive");
  if (rows == 0 || cols == 0) throw GeometryError("element grid is empty");
  if (!(transmit_power > 0.0)) throw GeometryError("transmit power must be positive");
  for (const Position& p : element_positions()) {
    if (distance(p, tx_position) <= 0.0) throw GeometryError("transmitter coincides with an element");
    if (distance(p, rx_position) <= 0.0) throw GeometryError("receiver coincides with an element");
  }
}

ChannelRealization generate_iid_channel(std::size_t n, double sigma, RandomStream& stream) {
  if (n == 0) throw DimensionError("channel needs at least one element");
  std::vector<Complex> z(n);
  for (Complex& v : z) v = stream.complex_normal(1.0);
  return ChannelRealization(std::move(z), sigma);
}

NearFieldGains near_field_gains(const GeometryScenario& scenario) {
  scenario.validate();
  NearFieldGains out;
  for (const Position& p : scenario.element_positions()) {
    out.h.push_back(free_space_gain(distance(scenario.tx_position, p), scenario.wavelength));
    out.g.push_back(free_space_gain(distance(p, scenario.rx_position), scenario.wavelength));
  }
  return out;
}

ChannelRealization geometry_channel(const GeometryScenario& scenario, double noise_sigma) {
  const NearFieldGains gains = near_field_gains(scenario);
  return compose_indirect(gains.h, gains.g, scenario.transmit_power, noise_sigma);
}

double conversion_efficiency(double x, const HarvesterModel& model) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("conversion efficiency needs input power > 0");
  return model.p_sat * saturation_fraction(x, model) / x;
}

double harvested_power(double x, const HarvesterModel& model) {
  if (x == 0.0) return 0.0;
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("harvested power needs input power >= 0");
  return model.p_sat * saturation_fraction(x, model);
}

double noise_sigma_for_snr(std::span<const Complex> gains, double snr_linear) {
  if (gains.empty()) throw DimensionError("no gains");
  if (!(snr_linear > 0.0)) throw DomainError("SNR must be positive");
  double energy = 0.0;
  for (const Complex& z : gains) energy += std::norm(z);
  return std::sqrt(energy / (static_cast<double>(gains.size()) * snr_linear));
}

double noise_sigma_for_unit_gain_snr(double snr_linear) {
  if (!(snr_linear > 0.0)) throw DomainError("SNR must be positive");
  return std::sqrt(1.0 / snr_linear);
}

}  // namespace risalign
