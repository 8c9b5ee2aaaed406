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

#include "risalign/signal_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "risalign/errors.hpp"

namespace risalign {

double wrap_phase(double phase) noexcept {
  double r = std::fmod(phase, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a tiny negative value plus 2pi can round up to exactly 2pi
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double principal_phase(double phase) noexcept {
  double r = wrap_phase(phase);
  if (r > kPi) r -= kTwoPi;
  return r;
}

double circular_distance(double a, double b) noexcept {
  const double d = wrap_phase(a - b);
  return std::min(d, kTwoPi - d);
}

double db_to_linear(double db) noexcept { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) noexcept { return 10.0 * std::log10(linear); }

PhaseVector::PhaseVector(std::vector<double> phases) : phases_(std::move(phases)) {
  for (double& p : phases_) p = wrap_phase(p);
}

void PhaseVector::set(std::size_t n, double phase) { phases_.at(n) = wrap_phase(phase); }

DiscretePhaseSet::DiscretePhaseSet(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 3)
    throw std::invalid_argument("discrete phase set needs at least 3 values, got " +
                                std::to_string(values_.size()));
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0 || v >= kTwoPi)
      throw std::invalid_argument("discrete phase values must lie in [0, 2pi)");
  }
  for (std::size_t i = 0; i < values_.size(); ++i)
    for (std::size_t j = i + 1; j < values_.size(); ++j)
      if (circular_distance(values_[i], values_[j]) <= 1e-12)
        throw std::invalid_argument("discrete phase values must be pairwise distinct (entries " +
                                    std::to_string(i) + " and " + std::to_string(j) + ")");
}

DiscretePhaseSet DiscretePhaseSet::psk(std::size_t order) {
  std::vector<double> v(order);
  for (std::size_t k = 0; k < order; ++k) v[k] = kTwoPi * static_cast<double>(k) / static_cast<double>(order);
  return DiscretePhaseSet(std::move(v));
}

std::optional<std::size_t> DiscretePhaseSet::index_of(double phase, double tol) const {
  for (std::size_t k = 0; k < values_.size(); ++k)
    if (circular_distance(values_[k], phase) <= tol) return k;
  return std::nullopt;
}

ChannelRealization::ChannelRealization(std::vector<Complex> gains, double noise_sigma,
                                       double transmit_power)
    : gains_(std::move(gains)), noise_sigma_(noise_sigma), transmit_power_(transmit_power) {
  if (gains_.empty()) throw std::invalid_argument("channel needs at least one element");
  for (const Complex& z : gains_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw std::invalid_argument("channel gains must be finite");
  if (!(noise_sigma_ >= 0.0) || !std::isfinite(noise_sigma_))
    throw std::invalid_argument("noise sigma must be finite and >= 0");
  if (!(transmit_power_ > 0.0)) throw std::invalid_argument("transmit power must be > 0");
}

ChannelRealization ChannelRealization::with_noise_sigma(double sigma) const {
  return ChannelRealization(gains_, sigma, transmit_power_);
}

double ChannelRealization::max_power() const noexcept {
  double amp = 0.0;
  for (const Complex& z : gains_) amp += std::abs(z);
  return amp * amp;
}

double ChannelRealization::total_gain_energy() const noexcept {
  double e = 0.0;
  for (const Complex& z : gains_) e += std::norm(z);
  return e;
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t trial, StreamTag tag) {
  const auto t = static_cast<std::uint64_t>(tag);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32),
                    static_cast<std::uint32_t>(t)};
  engine_.seed(seq);
}

Complex RandomStream::complex_normal(double variance) {
  const double s = std::sqrt(variance / 2.0);
  const double re = normal_(engine_);
  const double im = normal_(engine_);
  return {s * re, s * im};
}

double RandomStream::normal() { return normal_(engine_); }

double RandomStream::uniform_phase() {
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  return wrap_phase(u(engine_));
}

std::size_t RandomStream::uniform_index(std::size_t n) {
  std::uniform_int_distribution<std::size_t> u(0, n - 1);
  return u(engine_);
}

namespace {

void check_lengths(const ChannelRealization& channel, const PhaseVector& phases) {
  if (channel.size() != phases.size())
    throw DimensionError("phase vector has " + std::to_string(phases.size()) +
                         " entries but the channel has " + std::to_string(channel.size()));
}

Complex coherent_sum(const ChannelRealization& channel, const PhaseVector& phases) {
  Complex s{};
  const auto z = channel.gains();
  for (std::size_t n = 0; n < z.size(); ++n) s += z[n] * std::polar(1.0, phases[n]);
  return s;
}

}  // namespace

PowerSample received_power_noiseless(const ChannelRealization& channel, const PhaseVector& phases) {
  check_lengths(channel, phases);
  return {std::norm(coherent_sum(channel, phases))};
}

PowerSample received_power_noisy(const ChannelRealization& channel, const PhaseVector& phases,
                                 RandomStream& noise) {
  check_lengths(channel, phases);
  const Complex w = noise.complex_normal(channel.noise_variance());
  return {std::norm(coherent_sum(channel, phases) + w)};
}

double average_snr(const ChannelRealization& channel) {
  if (channel.noise_sigma() == 0.0) throw DomainError("SNR is undefined for a noiseless channel");
  return channel.total_gain_energy() /
         (static_cast<double>(channel.size()) * channel.noise_variance());
}

ChannelRealization compose_indirect(std::span<const Complex> h, std::span<const Complex> g,
                                    double transmit_power, double noise_sigma) {
  if (h.size() != g.size())
    throw DimensionError("h has " + std::to_string(h.size()) + " entries, g has " +
                         std::to_string(g.size()));
  if (!(transmit_power > 0.0)) throw std::invalid_argument("transmit power must be > 0");
  const double amp = std::sqrt(transmit_power);
  std::vector<Complex> z(h.size());
  for (std::size_t n = 0; n < h.size(); ++n) z[n] = amp * h[n] * g[n];
  return ChannelRealization(std::move(z), noise_sigma, transmit_power);
}

ChannelRealization compose_direct(std::span<const Complex> h, double transmit_power,
                                  double noise_sigma) {
  const std::vector<Complex> ones(h.size(), Complex{1.0, 0.0});
  return compose_indirect(h, ones, transmit_power, noise_sigma);
}

MeasurementOracle::MeasurementOracle(std::size_t n_elements) : config_(n_elements) {}

void MeasurementOracle::configure(const PhaseVector& phases) {
  if (phases.size() != config_.size())
    throw DimensionError("configuration has " + std::to_string(phases.size()) +
                         " entries, oracle has " + std::to_string(config_.size()));
  for (std::size_t n = 0; n < phases.size(); ++n)
    if (phases[n] != config_[n]) set_phase(n, phases[n]);
}

void MeasurementOracle::set_phase(std::size_t n, double phase) {
  if (n >= config_.size())
    throw DimensionError("element index " + std::to_string(n) + " out of range");
  config_.set(n, phase);
  on_phase_change(n, config_[n]);
}

PowerSample MeasurementOracle::measure() {
  ++count_;
  return {read_power()};
}

PowerSample MeasurementOracle::measure(const PhaseVector& phases) {
  configure(phases);
  return measure();
}

ChannelOracle::ChannelOracle(const ChannelRealization& channel, RandomStream* noise)
    : MeasurementOracle(channel.size()),
      gains_(channel.gains().begin(), channel.gains().end()),
      terms_(gains_),
      noise_variance_(channel.noise_variance()),
      noise_(noise) {
  resum();
}

void ChannelOracle::on_phase_change(std::size_t n, double phase) {
  const Complex term = gains_[n] * std::polar(1.0, phase);
  sum_ += term - terms_[n];
  terms_[n] = term;
  // bound the round-off drift of the running sum
  if (++updates_since_resum_ >= 4096) resum();
}

void ChannelOracle::resum() {
  sum_ = Complex{};
  for (const Complex& t : terms_) sum_ += t;
  updates_since_resum_ = 0;
}

double ChannelOracle::read_power() {
  Complex s = sum_;
  if (noise_ != nullptr) s += noise_->complex_normal(noise_variance_);
  return std::norm(s);
}

FunctionOracle::FunctionOracle(std::size_t n_elements, Function fn)
    : MeasurementOracle(n_elements), fn_(std::move(fn)) {}

}  // namespace risalign
