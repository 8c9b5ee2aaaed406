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
#include <cstdint>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "risalign/estimation.hpp"
#include "risalign/signal_model.hpp"

namespace risalign {

struct ContinuousMode {};

/// Phases restricted to a finite set. `probes` index the three members of
/// `omega` used as absolute probe values.
struct DiscreteMode {
  DiscretePhaseSet omega;
  std::array<std::size_t, 3> probes;

  /// Uses the first admissible triple of omega in index order.
  explicit DiscreteMode(DiscretePhaseSet set);
  DiscreteMode(DiscretePhaseSet set, std::array<std::size_t, 3> probe_indices);
};

/// First admissible triple (i < j < k) of omega, by index order.
std::optional<std::array<std::size_t, 3>> first_admissible_triple(const DiscretePhaseSet& omega);

/// Probes at offsets 0, pi/2 and pi with the explicit three-sample rule.
struct ClosedFormEstimator {};

/// Least squares over arbitrary probe offsets.
struct LinearEstimator {
  MeasurementPhaseSet phi;
};

/// L equally spaced probes starting at offset 0.
struct DftEstimator {
  std::size_t l = 3;
};

using AlignmentMode = std::variant<ContinuousMode, DiscreteMode>;
using AlignmentEstimator = std::variant<ClosedFormEstimator, LinearEstimator, DftEstimator>;

struct AlignmentConfig {
  std::size_t n_elements = 1;
  std::size_t sweeps = 1;
  /// Empty means all zeros (continuous) or omega[0] everywhere (discrete).
  std::optional<PhaseVector> initial_phases;
  AlignmentMode mode = ContinuousMode{};
  AlignmentEstimator estimator = ClosedFormEstimator{};
  /// Continuous: stop after a sweep whose largest phase change is at most
  /// `early_stop_tolerance`. Discrete: stop after a sweep that changes nothing.
  bool early_stop = false;
  double early_stop_tolerance = 0.0;

  static AlignmentConfig closed_form(std::size_t n, std::size_t sweeps);
  static AlignmentConfig linear(std::size_t n, std::size_t sweeps, MeasurementPhaseSet phi);
  static AlignmentConfig dft(std::size_t n, std::size_t sweeps, std::size_t l);
  static AlignmentConfig discrete(std::size_t n, std::size_t sweeps, DiscretePhaseSet omega);

  /// Probes spent on one element update.
  std::size_t probes_per_update() const;
  PhaseVector starting_phases() const;
  /// Throws ConfigurationError on the first violated invariant.
  void validate() const;
};

struct UpdateRecord {
  std::uint64_t measurement_count = 0;  // oracle count after the update
  std::size_t element_index = 0;
  double applied_phase = 0.0;
  std::optional<double> post_update_power;
};

using AlignmentTrace = std::vector<UpdateRecord>;

/// Evaluation hook run after every update. It never touches the oracle, so
/// it does not count as a measurement. Used for noiseless scoring.
using Scorer = std::function<double(const PhaseVector&)>;

struct AlignmentResult {
  PhaseVector phases;
  AlignmentTrace trace;
};

/// Three probes per element at offsets 0, pi/2, pi; 3NM measurements.
AlignmentResult align_continuous_noiseless(MeasurementOracle& oracle, const AlignmentConfig& config,
                                           const Scorer& scorer = {});

/// L probes per element at offsets phi, least-squares update; LNM measurements.
AlignmentResult align_linear_noisy(MeasurementOracle& oracle, const AlignmentConfig& config,
                                   const Scorer& scorer = {});

/// L equally spaced probes per element, DFT-form update; LNM measurements.
AlignmentResult align_dft_noisy(MeasurementOracle& oracle, const AlignmentConfig& config,
                                const Scorer& scorer = {});

/// Member of omega closest to alpha on the circle; ties go to the smaller index.
std::size_t quantize_phase(double alpha, const DiscretePhaseSet& omega) noexcept;

/// Discrete-phase alignment: three absolute probes from omega per element,
/// continuous estimate, then quantization.
AlignmentResult align_discrete(MeasurementOracle& oracle, const AlignmentConfig& config,
                               const Scorer& scorer = {});

/// Dispatches on the estimator and mode of `config`.
AlignmentResult align(MeasurementOracle& oracle, const AlignmentConfig& config,
                      const Scorer& scorer = {});

/// Random-update benchmark. One baseline measurement, then `sweeps * N`
/// proposals cycling through the elements. A proposal is kept iff its power
/// strictly exceeds the best power measured so far.
AlignmentResult random_benchmark(MeasurementOracle& oracle, const AlignmentConfig& config,
                                 RandomStream& proposals, const Scorer& scorer = {});

inline constexpr double kExhaustiveSearchLimit = 1e8;

struct ExhaustiveResult {
  PhaseVector phases;
  PowerSample power;
};

/// Noiseless maximizer over omega^N. Among configurations within a relative
/// 1e-12 of the best, the lexicographically smallest index tuple wins.
ExhaustiveResult exhaustive_discrete_oracle(const ChannelRealization& channel,
                                            const DiscretePhaseSet& omega);

}  // namespace risalign
