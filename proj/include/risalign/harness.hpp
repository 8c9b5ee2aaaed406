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

#include <cstddef>
#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include "risalign/alignment.hpp"
#include "risalign/scenario.hpp"
#include "risalign/signal_model.hpp"

namespace risalign {

/// SNR in dB; empty means noiseless.
using Snr = std::optional<double>;

/// Noiseless power at `phases` over (sum |z_n|)^2. Throws DomainError for an
/// all-zero channel.
double nap(const ChannelRealization& channel, const PhaseVector& phases);

struct CurvePoint {
  std::uint64_t measurements = 0;
  double nap = 0.0;
};

struct TrialRecord {
  std::size_t trial_index = 0;
  std::uint64_t seed = 0;
  Snr snr_db;
  std::string method;
  std::vector<CurvePoint> curve;  // starts at 0 measurements with the initial NAP
  double final_nap = 0.0;
  std::optional<double> final_harvested_watts;
};

struct SampleStats {
  double mean = 0.0;
  double ci95 = 0.0;  // 1.96 s / sqrt(T)
  std::size_t count = 0;
};

/// Mean and normal-approximation 95% half-width, summed in the given order.
SampleStats summarize(std::span<const double> values);

struct AggregatePoint {
  std::uint64_t measurements = 0;
  double mnap = 0.0;
  double ci95 = 0.0;
};

struct AggregateResult {
  std::vector<AggregatePoint> points;
  std::size_t trials = 0;

  /// Point with the largest grid value not above `measurements`.
  const AggregatePoint& at(std::uint64_t measurements) const;
  const AggregatePoint& final() const { return points.back(); }
};

/// 0, step, 2 step, ..., up to and including `last` (appended if not a multiple).
std::vector<std::uint64_t> measurement_grid(std::uint64_t last, std::uint64_t step);

/// Value of a curve at each grid point, carrying the last value forward.
std::vector<double> resample_locf(const std::vector<CurvePoint>& curve, const std::vector<std::uint64_t>& grid);

/// Aggregates curves that were resampled on `grid`, in trial order.
AggregateResult aggregate_curves(const std::vector<std::vector<double>>& per_trial,
                                 const std::vector<std::uint64_t>& grid);

/// Worker threads for trial loops: RISALIGN_THREADS if set and positive,
/// otherwise the hardware concurrency.
std::size_t worker_count();

/// Runs fn(0) ... fn(count - 1) on a worker pool and returns the results in
/// index order. The first exception thrown by any call is rethrown.
template <typename T, typename Fn>
std::vector<T> run_trials(std::size_t count, Fn fn);

/// Configuration of the proposed method: DFT form with L equally spaced
/// probes, or least squares over `phi` when given.
AlignmentConfig proposed_config(std::size_t n, std::size_t sweeps, std::size_t l,
                                const std::optional<std::vector<double>>& phi);

/// Runs one alignment method on one channel and records the NAP after every
/// update. `method` is "proposed" (dispatch on config) or "random".
TrialRecord run_method(const std::string& method, const ChannelRealization& channel,
                       const AlignmentConfig& config, std::uint64_t seed, std::size_t trial, Snr snr_db);

// ---- tabular output ----

struct TableRow {
  std::string experiment;
  std::string method;
  std::optional<std::size_t> n;
  std::optional<std::size_t> l;
  Snr snr_db;
  std::optional<std::uint64_t> measurements;
  double value = 0.0;  // MNAP unless `extra` names another statistic
  std::optional<double> ci95;
  std::string extra;
};

using Table = std::vector<TableRow>;

// ---- experiments ----

struct ConvergenceSpec {
  std::size_t n_elements = 100;
  std::size_t l = 3;
  std::optional<std::vector<double>> phi;  // custom probe offsets; replaces the equally spaced set
  std::size_t sweeps = 10;
  std::size_t random_sweeps = 30;
  std::vector<Snr> snr_db{-10.0, 0.0, 10.0, std::nullopt};
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  std::uint64_t grid_step = 10;
  bool random_initial_phases = false;
};

struct MethodCurves {
  Snr snr_db;
  AggregateResult proposed;
  AggregateResult random;
};

/// MNAP versus measurement count for the DFT-form algorithm and the random
/// benchmark on iid unit-variance channels.
std::vector<MethodCurves> convergence_experiment(const ConvergenceSpec& spec);
Table convergence_table(const ConvergenceSpec& spec, const std::vector<MethodCurves>& curves);

struct SnrSweepSpec {
  std::size_t n_elements = 100;
  std::vector<std::size_t> l_values{3, 10, 30, 100};
  std::vector<Snr> snr_db{-10.0, 0.0, 10.0};
  std::size_t sweeps = 10;
  std::size_t random_sweeps = 30;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  bool random_initial_phases = false;
};

struct SnrSweepPoint {
  std::string method;
  std::optional<std::size_t> l;  // empty for the random benchmark
  Snr snr_db;
  std::uint64_t measurements = 0;
  SampleStats nap;
};

std::vector<SnrSweepPoint> snr_sweep(const SnrSweepSpec& spec);
Table snr_sweep_table(const SnrSweepSpec& spec, const std::vector<SnrSweepPoint>& points);

struct DiscreteSpec {
  std::size_t n_elements = 10;
  std::vector<double> omega{0.0, kPi / 2.0, kPi, 3.0 * kPi / 2.0};
  std::optional<std::array<std::size_t, 3>> probes;
  Snr snr_db;  // noiseless by default
  std::size_t sweeps = 10;
  std::size_t random_sweeps = 30;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  std::uint64_t grid_step = 3;
};

struct DiscreteResult {
  AggregateResult proposed;
  AggregateResult random;
  SampleStats proposed_final;
  SampleStats random_final;
  SampleStats oracle;
  /// Trials where the proposed power exceeds the oracle power by more than
  /// a relative 1e-12.
  std::size_t oracle_violations = 0;
  double largest_oracle_excess = 0.0;  // max relative (proposed - oracle) / oracle
};

DiscreteResult discrete_experiment(const DiscreteSpec& spec);
Table discrete_table(const DiscreteSpec& spec, const DiscreteResult& result);

struct RmseSpec {
  std::vector<double> theta;  // empty: 24 points on [0, 2pi)
  std::vector<double> magnitudes{1.0, 3.0, 10.0, 1.0 / 3.0, 0.1};
  std::vector<double> snr_db{0.0, 10.0, 20.0};
  std::vector<double> phi{0.0, 2.0 * kPi / 3.0, 4.0 * kPi / 3.0};
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  bool include_ml = true;

  std::vector<double> theta_grid() const;
};

struct RmsePoint {
  double magnitude = 0.0;
  double snr_db = 0.0;
  std::optional<double> theta;  // empty for the value pooled over the theta grid
  double linear = 0.0;
  std::optional<double> ml;
  std::size_t ambiguous = 0;  // estimates counted as 0 rad because the direction vanished
};

/// Phase RMSE of the linear and ML single-element estimators with z0 = 1,
/// z = |z| e^{-j theta} and SNR = (|z0|^2 + |z|^2) / (2 sigma^2). Errors are
/// folded into (theta - pi, theta + pi].
std::vector<RmsePoint> rmse_study(const RmseSpec& spec);
Table rmse_table(const RmseSpec& spec, const std::vector<RmsePoint>& points);

struct HarvestSpec {
  std::vector<std::size_t> grid_sides{4, 8, 16, 32};  // square grids, N = side^2
  std::vector<Snr> snr_db{-20.0, 0.0};
  std::size_t l = 3;
  std::optional<std::vector<double>> phi;
  std::size_t sweeps = 10;
  std::size_t random_sweeps = 30;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  GeometryScenario geometry{};  // rows and cols are replaced by each grid side
  HarvesterModel harvester{};
  bool random_initial_phases = false;
};

struct HarvestPoint {
  std::string method;  // proposed, random, genie
  std::size_t n_elements = 0;
  Snr snr_db;
  SampleStats harvested_watts;
  SampleStats nap;
};

std::vector<HarvestPoint> harvest_experiment(const HarvestSpec& spec);
Table harvest_table(const HarvestSpec& spec, const std::vector<HarvestPoint>& points);

}  // namespace risalign

#include "risalign/detail/run_trials.hpp"
