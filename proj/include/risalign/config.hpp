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
#include <optional>
#include <string>
#include <vector>

#include "risalign/harness.hpp"

namespace risalign {

/// Version tag of the configuration dialect, echoed in run manifests.
inline constexpr const char* kConfigDialect = "risalign-config/1";

enum class ExperimentKind { convergence, snr_sweep, discrete, rmse, harvest };
enum class OutputFormat { csv, json };

std::string to_string(ExperimentKind kind);

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::convergence;
  std::size_t trials = 0;
  std::uint64_t seed = 1;
  std::size_t n_elements = 100;
  std::size_t sweeps = 10;
  std::size_t random_sweeps = 30;
  std::vector<std::size_t> l{3};
  std::optional<std::vector<double>> phi;
  std::vector<Snr> snr_db;
  std::vector<double> omega;
  std::optional<std::vector<double>> probes;  // three members of omega
  std::uint64_t grid_step = 10;
  bool random_initial_phases = false;
  std::vector<double> magnitudes;
  std::vector<double> theta;
  bool include_ml = true;
  std::vector<std::size_t> grid_sides;
  GeometryScenario geometry{};
  HarvesterModel harvester{};
  std::string output_dir = "results";
  OutputFormat format = OutputFormat::csv;

  /// Defaults of every field for the given experiment, with trials unset.
  static ExperimentConfig defaults(ExperimentKind kind);
};

struct Diagnostic {
  std::string field;  // dotted path, e.g. geometry.wavelength
  int line = 0;       // 1-based; 0 when not tied to a source line
  std::string message;
};

std::string format_diagnostic(const Diagnostic& d);

struct ParseOutcome {
  std::optional<ExperimentConfig> config;  // set only when there are no diagnostics
  std::vector<Diagnostic> diagnostics;
};

/// Parses YAML text. A document with `config` and `config_dialect` keys at
/// the top level (a run manifest) is read through its `config` entry.
ParseOutcome parse_config(const std::string& text);
ParseOutcome load_config(const std::string& path);

/// Semantic checks of a complete configuration. Every violation is listed.
std::vector<Diagnostic> validate_config(const ExperimentConfig& config);

/// Effective configuration as JSON text; parse_config accepts it back.
std::string config_to_json(const ExperimentConfig& config);

struct ExperimentOutput {
  Table table;
  double wall_seconds = 0.0;
};

/// Runs the configured experiment. Throws on runtime failure.
ExperimentOutput execute(const ExperimentConfig& config);

/// Long-format CSV with header
/// experiment,method,n,l,snr_db,measurements,mnap,ci95,extra
std::string table_to_csv(const Table& table);
std::string table_to_json(const Table& table);

/// %.17g
std::string format_number(double v);

}  // namespace risalign
