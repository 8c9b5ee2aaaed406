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

#include "risalign/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <type_traits>

#include "risalign/errors.hpp"

namespace risalign {
namespace {

void check_oracle(const MeasurementOracle& oracle, const AlignmentConfig& config) {
  config.validate();
  if (oracle.size() != config.n_elements)
    throw DimensionError("oracle has " + std::to_string(oracle.size()) + " elements, config has " +
                         std::to_string(config.n_elements));
}

void record(AlignmentTrace& trace, const MeasurementOracle& oracle, std::size_t n, const Scorer& scorer) {
  UpdateRecord r;
  r.measurement_count = oracle.count();
  r.element_index = n;
  r.applied_phase = oracle.configuration()[n];
  if (scorer) r.post_update_power = scorer(oracle.configuration());
  trace.push_back(r);
}

// Probes element n at current + offsets[l] and restores it afterwards.
std::vector<double> probe_relative(MeasurementOracle& oracle, std::size_t n, std::span<const double> offsets) {
  const double base = oracle.configuration()[n];
  std::vector<double> y(offsets.size());
  for (std::size_t l = 0; l < offsets.size(); ++l) {
    oracle.set_phase(n, base + offsets[l]);
    y[l] = oracle.measure().value;
  }
  oracle.set_phase(n, base);
  return y;
}

// Shared sweep loop for the continuous algorithms. `estimate` maps the probe
// powers of one element to the shift to add to its phase.
template <typename Estimate>
AlignmentResult sweep_continuous(MeasurementOracle& oracle, const AlignmentConfig& config,
                                 std::span<const double> offsets, const Scorer& scorer, Estimate estimate) {
  check_oracle(oracle, config);
  oracle.configure(config.starting_phases());
  AlignmentResult result;
  const std::size_t n_el = config.n_elements;
  result.trace.reserve(n_el * config.sweeps);

  for (std::size_t m = 0; m < config.sweeps; ++m) {
    double largest_change = 0.0;
    for (std::size_t n = 0; n < n_el; ++n) {
      const double before = oracle.configuration()[n];
      const std::vector<double> y = probe_relative(oracle, n, offsets);
      try {
        const double shift = estimate(y);
        oracle.set_phase(n, before + shift);
      } catch (const AmbiguousPhaseError&) {
        // keep the previous phase
      }
      largest_change = std::max(largest_change, circular_distance(before, oracle.configuration()[n]));
      record(result.trace, oracle, n, scorer);
    }
    if (config.early_stop && largest_change <= config.early_stop_tolerance) break;
  }
  result.phases = oracle.configuration();
  return result;
}

}  // namespace

DiscreteMode::DiscreteMode(DiscretePhaseSet set) : omega(std::move(set)), probes{0, 1, 2} {
  const auto triple = first_admissible_triple(omega);
  if (!triple) throw ConfigurationError("phase set has no admissible probe triple");
  probes = *triple;
}

DiscreteMode::DiscreteMode(DiscretePhaseSet set, std::array<std::size_t, 3> probe_indices)
    : omega(std::move(set)), probes(probe_indices) {}

std::optional<std::array<std::size_t, 3>> first_admissible_triple(const DiscretePhaseSet& omega) {
  const std::size_t k = omega.size();
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      for (std::size_t l = j + 1; l < k; ++l)
        if (admissible_probe_triple(omega[i], omega[j], omega[l])) return std::array{i, j, l};
  return std::nullopt;
}

AlignmentConfig AlignmentConfig::closed_form(std::size_t n, std::size_t sweeps) {
  AlignmentConfig c;
  c.n_elements = n;
  c.sweeps = sweeps;
  return c;
}

AlignmentConfig AlignmentConfig::linear(std::size_t n, std::size_t sweeps, MeasurementPhaseSet phi) {
  AlignmentConfig c = closed_form(n, sweeps);
  c.estimator = LinearEstimator{std::move(phi)};
  return c;
}

AlignmentConfig AlignmentConfig::dft(std::size_t n, std::size_t sweeps, std::size_t l) {
  AlignmentConfig c = closed_form(n, sweeps);
  c.estimator = DftEstimator{l};
  return c;
}

AlignmentConfig AlignmentConfig::discrete(std::size_t n, std::size_t sweeps, DiscretePhaseSet omega) {
  AlignmentConfig c = closed_form(n, sweeps);
  c.mode = DiscreteMode(std::move(omega));
  c.early_stop = true;
  return c;
}

std::size_t AlignmentConfig::probes_per_update() const {
  if (std::holds_alternative<DiscreteMode>(mode)) return 3;
  return std::visit(
      [](const auto& e) -> std::size_t {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, ClosedFormEstimator>) return 3;
        else if constexpr (std::is_same_v<T, LinearEstimator>) return e.phi.size();
        else return e.l;
      },
      estimator);
}

PhaseVector AlignmentConfig::starting_phases() const {
  if (initial_phases) return *initial_phases;
  if (const auto* d = std::get_if<DiscreteMode>(&mode))
    return PhaseVector(std::vector<double>(n_elements, d->omega[0]));
  return PhaseVector(n_elements);
}

void AlignmentConfig::validate() const {
  if (n_elements < 1) throw ConfigurationError("N >= 1 required");
  if (sweeps < 1) throw ConfigurationError("M >= 1 required");
  if (probes_per_update() < 3) throw ConfigurationError("L >= 3 required");
  if (const auto* lin = std::get_if<LinearEstimator>(&estimator)) {
    try {
      (void)pseudoinverse(build_design_matrix(lin->phi));
    } catch (const SingularDesignError& e) {
      throw ConfigurationError(std::string("measurement phases are not admissible: ") + e.what());
    }
  }
  if (initial_phases && initial_phases->size() != n_elements)
    throw ConfigurationError("initial phases have " + std::to_string(initial_phases->size()) +
                             " entries for N = " + std::to_string(n_elements));
  if (early_stop && !(early_stop_tolerance >= 0.0))
    throw ConfigurationError("early-stop tolerance must be non-negative");
  if (const auto* d = std::get_if<DiscreteMode>(&mode)) {
    for (std::size_t idx : d->probes)
      if (idx >= d->omega.size()) throw ConfigurationError("probe index outside the phase set");
    if (!admissible_probe_triple(d->omega[d->probes[0]], d->omega[d->probes[1]], d->omega[d->probes[2]]))
      throw ConfigurationError("probe triple is not admissible: sin(p1-p3)+sin(p2-p1)+sin(p3-p2) = 0");
    if (initial_phases)
      for (double p : *initial_phases)
        if (!d->omega.contains(p)) throw ConfigurationError("initial phases must lie in the phase set");
  }
}

AlignmentResult align_continuous_noiseless(MeasurementOracle& oracle, const AlignmentConfig& config,
                                           const Scorer& scorer) {
  if (!std::holds_alternative<ContinuousMode>(config.mode) ||
      !std::holds_alternative<ClosedFormEstimator>(config.estimator))
    throw ConfigurationError("closed-form alignment needs continuous mode and the closed-form estimator");
  static constexpr std::array<double, 3> offsets{0.0, kPi / 2.0, kPi};
  return sweep_continuous(oracle, config, offsets, scorer, [](const std::vector<double>& y) {
    return closed_form_three_phase(y[0], y[1], y[2]).theta;
  });
}

AlignmentResult align_linear_noisy(MeasurementOracle& oracle, const AlignmentConfig& config,
                                   const Scorer& scorer) {
  const auto* lin = std::get_if<LinearEstimator>(&config.estimator);
  if (!std::holds_alternative<ContinuousMode>(config.mode) || lin == nullptr)
    throw ConfigurationError("linear alignment needs continuous mode and a linear estimator");
  config.validate();
  const LeftInverse pinv = pseudoinverse(build_design_matrix(lin->phi));
  return sweep_continuous(oracle, config, lin->phi.values(), scorer, [&pinv](const std::vector<double>& y) {
    return phase_from_x(linear_estimate(y, pinv)).theta;
  });
}

AlignmentResult align_dft_noisy(MeasurementOracle& oracle, const AlignmentConfig& config,
                                const Scorer& scorer) {
  const auto* dft = std::get_if<DftEstimator>(&config.estimator);
  if (!std::holds_alternative<ContinuousMode>(config.mode) || dft == nullptr)
    throw ConfigurationError("DFT alignment needs continuous mode and the DFT estimator");
  config.validate();
  const MeasurementPhaseSet phi = MeasurementPhaseSet::equally_spaced(dft->l);
  return sweep_continuous(oracle, config, phi.values(), scorer,
                          [](const std::vector<double>& y) { return dft_phase_estimate(y).theta; });
}

std::size_t quantize_phase(double alpha, const DiscretePhaseSet& omega) noexcept {
  std::size_t best = 0;
  double best_distance = circular_distance(alpha, omega[0]);
  for (std::size_t k = 1; k < omega.size(); ++k) {
    const double d = circular_distance(alpha, omega[k]);
    if (d < best_distance) {
      best = k;
      best_distance = d;
    }
  }
  return best;
}

AlignmentResult align_discrete(MeasurementOracle& oracle, const AlignmentConfig& config, const Scorer& scorer) {
  const auto* mode = std::get_if<DiscreteMode>(&config.mode);
  if (mode == nullptr) throw ConfigurationError("discrete alignment needs discrete mode");
  check_oracle(oracle, config);
  const DiscretePhaseSet& omega = mode->omega;
  const std::array<double, 3> probes{omega[mode->probes[0]], omega[mode->probes[1]], omega[mode->probes[2]]};
  const MeasurementPhaseSet phi({probes[0], probes[1], probes[2]});
  const LeftInverse inverse = pseudoinverse(build_design_matrix(phi));

  oracle.configure(config.starting_phases());
  AlignmentResult result;
  for (std::size_t m = 0; m < config.sweeps; ++m) {
    bool changed = false;
    for (std::size_t n = 0; n < config.n_elements; ++n) {
      const double before = oracle.configuration()[n];
      std::array<double, 3> y{};
      for (std::size_t i = 0; i < 3; ++i) {
        oracle.set_phase(n, probes[i]);
        y[i] = oracle.measure().value;
      }
      double next = before;
      try {
        next = omega[quantize_phase(phase_from_x(linear_estimate(y, inverse)).theta, omega)];
      } catch (const AmbiguousPhaseError&) {
      }
      oracle.set_phase(n, next);
      changed = changed || next != before;
      record(result.trace, oracle, n, scorer);
    }
    if (config.early_stop && !changed) break;
  }
  result.phases = oracle.configuration();
  return result;
}

AlignmentResult align(MeasurementOracle& oracle, const AlignmentConfig& config, const Scorer& scorer) {
  if (std::holds_alternative<DiscreteMode>(config.mode)) return align_discrete(oracle, config, scorer);
  if (std::holds_alternative<LinearEstimator>(config.estimator)) return align_linear_noisy(oracle, config, scorer);
  if (std::holds_alternative<DftEstimator>(config.estimator)) return align_dft_noisy(oracle, config, scorer);
  return align_continuous_noiseless(oracle, config, scorer);
}

AlignmentResult random_benchmark(MeasurementOracle& oracle, const AlignmentConfig& config,
                                 RandomStream& proposals, const Scorer& scorer) {
  check_oracle(oracle, config);
  const auto* mode = std::get_if<DiscreteMode>(&config.mode);
  oracle.configure(config.starting_phases());
  if (mode != nullptr)
    for (double p : oracle.configuration())
      if (!mode->omega.contains(p)) throw ConfigurationError("initial phases must lie in the phase set");

  AlignmentResult result;
  result.trace.reserve(config.sweeps * config.n_elements);
  double best = oracle.measure().value;
  for (std::size_t m = 0; m < config.sweeps; ++m) {
    for (std::size_t n = 0; n < config.n_elements; ++n) {
      const double current = oracle.configuration()[n];
      double proposal;
      if (mode != nullptr) {
        const std::size_t k = mode->omega.size();
        const std::size_t cur = *mode->omega.index_of(current);
        std::size_t pick = proposals.uniform_index(k - 1);
        if (pick >= cur) ++pick;
        proposal = mode->omega[pick];
      } else {
        proposal = proposals.uniform_phase();
      }
      oracle.set_phase(n, proposal);
      const double p = oracle.measure().value;
      if (p > best) {
        best = p;
      } else {
        oracle.set_phase(n, current);
      }
      record(result.trace, oracle, n, scorer);
    }
  }
  result.phases = oracle.configuration();
  return result;
}

ExhaustiveResult exhaustive_discrete_oracle(const ChannelRealization& channel, const DiscretePhaseSet& omega) {
  const std::size_t n_el = channel.size();
  const std::size_t k = omega.size();
  if (static_cast<double>(n_el) * std::log10(static_cast<double>(k)) > std::log10(kExhaustiveSearchLimit) + 1e-12)
    throw SearchSpaceTooLarge("search space " + std::to_string(k) + "^" + std::to_string(n_el) +
                              " exceeds the 1e8 guard");

  const auto gains = channel.gains();
  std::vector<Complex> rot(k);
  for (std::size_t i = 0; i < k; ++i) rot[i] = std::polar(1.0, omega[i]);

  std::vector<std::size_t> digits(n_el, 0);
  std::vector<std::size_t> best_digits = digits;
  auto full_sum = [&] {
    Complex s{};
    for (std::size_t n = 0; n < n_el; ++n) s += gains[n] * rot[digits[n]];
    return s;
  };
  Complex sum = full_sum();
  double best = std::norm(sum);

  while (true) {
    // odometer, last digit fastest, so tuples come in lexicographic order
    std::size_t pos = n_el;
    while (pos > 0) {
      --pos;
      const std::size_t old = digits[pos];
      if (old + 1 < k) {
        digits[pos] = old + 1;
        sum += gains[pos] * (rot[old + 1] - rot[old]);
        break;
      }
      digits[pos] = 0;
      sum += gains[pos] * (rot[0] - rot[old]);
      if (pos == 0) {
        pos = n_el + 1;  // wrapped past the first digit
        break;
      }
    }
    if (pos == n_el + 1) break;
    if (pos + 2 < n_el) sum = full_sum();
    const double p = std::norm(sum);
    if (p > best * (1.0 + 1e-12)) {
      best = p;
      best_digits = digits;
    }
  }

  std::vector<double> phases(n_el);
  for (std::size_t n = 0; n < n_el; ++n) phases[n] = omega[best_digits[n]];
  PhaseVector pv(std::move(phases));
  return {pv, received_power_noiseless(channel, pv)};
}

}  // namespace risalign
