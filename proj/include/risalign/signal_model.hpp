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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace risalign {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduces an angle to [0, 2pi).
double wrap_phase(double phase) noexcept;

/// Reduces an angle to the principal interval (-pi, pi].
double principal_phase(double phase) noexcept;

/// Circular distance between two angles, in [0, pi].
double circular_distance(double a, double b) noexcept;

double db_to_linear(double db) noexcept;
double linear_to_db(double linear) noexcept;

/// RIS configuration. Every entry is kept in [0, 2pi).
class PhaseVector {
 public:
  PhaseVector() = default;
  explicit PhaseVector(std::size_t n) : phases_(n, 0.0) {}
  explicit PhaseVector(std::vector<double> phases);

  std::size_t size() const noexcept { return phases_.size(); }
  double operator[](std::size_t n) const { return phases_[n]; }
  void set(std::size_t n, double phase);
  std::span<const double> values() const noexcept { return phases_; }
  auto begin() const noexcept { return phases_.begin(); }
  auto end() const noexcept { return phases_.end(); }

  bool operator==(const PhaseVector&) const = default;

 private:
  std::vector<double> phases_;
};

/// Finite set of realizable phase shifts. Values are distinct, lie in
/// [0, 2pi) and there are at least three of them.
class DiscretePhaseSet {
 public:
  explicit DiscretePhaseSet(std::vector<double> values);

  /// {0, 2pi/M, ..., 2pi(M-1)/M}.
  static DiscretePhaseSet psk(std::size_t order);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t k) const { return values_[k]; }
  std::span<const double> values() const noexcept { return values_; }

  /// Index of the member equal to `phase` (after wrapping), within `tol`.
  std::optional<std::size_t> index_of(double phase, double tol = 1e-12) const;
  bool contains(double phase, double tol = 1e-12) const { return index_of(phase, tol).has_value(); }

 private:
  std::vector<double> values_;
};

struct PowerSample {
  double value = 0.0;  // watts
};

/// Channel coefficients z_1..z_N seen through the power detector plus the
/// measurement noise level. Algorithms never see this object directly; they
/// only get a MeasurementOracle built on top of it.
class ChannelRealization {
 public:
  ChannelRealization(std::vector<Complex> gains, double noise_sigma, double transmit_power = 1.0);

  std::size_t size() const noexcept { return gains_.size(); }
  std::span<const Complex> gains() const noexcept { return gains_; }
  double noise_sigma() const noexcept { return noise_sigma_; }
  double noise_variance() const noexcept { return noise_sigma_ * noise_sigma_; }
  double transmit_power() const noexcept { return transmit_power_; }

  ChannelRealization with_noise_sigma(double sigma) const;

  /// (sum |z_n|)^2, the largest achievable noiseless power.
  double max_power() const noexcept;
  /// sum |z_n|^2
  double total_gain_energy() const noexcept;

 private:
  std::vector<Complex> gains_;
  double noise_sigma_;
  double transmit_power_;
};

/// Purpose of a random substream. Different purposes never share draws.
enum class StreamTag : std::uint64_t {
  channel = 1,
  noise = 2,
  proposals = 3,
  initial_phases = 4,
};

/// Deterministic per-trial random source. Two streams built from the same
/// (seed, trial, tag) produce identical sequences.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t trial, StreamTag tag);

  /// One draw of CN(0, variance): real and imaginary parts each N(0, variance/2).
  Complex complex_normal(double variance);
  double normal();
  /// Uniform on [0, 2pi).
  double uniform_phase();
  /// Uniform on {0, ..., n-1}.
  std::size_t uniform_index(std::size_t n);

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// |sum_n z_n e^{j phase_n}|^2
PowerSample received_power_noiseless(const ChannelRealization& channel, const PhaseVector& phases);

/// |sum_n z_n e^{j phase_n} + W|^2 with W ~ CN(0, sigma^2). Consumes exactly
/// one complex draw from `noise`.
PowerSample received_power_noisy(const ChannelRealization& channel, const PhaseVector& phases,
                                 RandomStream& noise);

/// sum |z_n|^2 / (N sigma^2) for this realization.
double average_snr(const ChannelRealization& channel);

/// z_n = sqrt(P_t) h_n g_n.
ChannelRealization compose_indirect(std::span<const Complex> h, std::span<const Complex> g,
                                    double transmit_power, double noise_sigma = 0.0);

/// z_n = sqrt(P_t) h_n.
ChannelRealization compose_direct(std::span<const Complex> h, double transmit_power,
                                  double noise_sigma = 0.0);

/// Power detector attached to a reconfigurable surface. The oracle holds the
/// current configuration; algorithms change it element by element and read
/// the detector. Every read increments the measurement counter.
class MeasurementOracle {
 public:
  explicit MeasurementOracle(std::size_t n_elements);
  virtual ~MeasurementOracle() = default;

  MeasurementOracle(const MeasurementOracle&) = delete;
  MeasurementOracle& operator=(const MeasurementOracle&) = delete;

  std::size_t size() const noexcept { return config_.size(); }
  const PhaseVector& configuration() const noexcept { return config_; }
  std::uint64_t count() const noexcept { return count_; }

  void configure(const PhaseVector& phases);
  void set_phase(std::size_t n, double phase);

  PowerSample measure();
  PowerSample measure(const PhaseVector& phases);

 protected:
  /// Called after element `n` changed to `phase` (already wrapped).
  virtual void on_phase_change(std::size_t n, double phase) = 0;
  virtual double read_power() = 0;

 private:
  PhaseVector config_;
  std::uint64_t count_ = 0;
};

/// Oracle backed by a channel realization and an optional noise stream.
/// The running sum is maintained incrementally so single-element probes cost O(1).
class ChannelOracle final : public MeasurementOracle {
 public:
  /// `noise` may be null for noiseless measurements; it must outlive the oracle.
  explicit ChannelOracle(const ChannelRealization& channel, RandomStream* noise = nullptr);

 protected:
  void on_phase_change(std::size_t n, double phase) override;
  double read_power() override;

 private:
  void resum();

  std::vector<Complex> gains_;
  std::vector<Complex> terms_;
  Complex sum_{};
  double noise_variance_;
  RandomStream* noise_;
  std::uint64_t updates_since_resum_ = 0;
};

/// Oracle that evaluates an arbitrary callable on the configuration.
class FunctionOracle final : public MeasurementOracle {
 public:
  using Function = std::function<double(const PhaseVector&)>;
  FunctionOracle(std::size_t n_elements, Function fn);

 protected:
  void on_phase_change(std::size_t, double) override {}
  double read_power() override { return fn_(configuration()); }

 private:
  Function fn_;
};

}  // namespace risalign
