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

#include "risalign/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <vector>

#include <json.hpp>

#include "risalign/config.hpp"

#ifndef RISALIGN_VERSION
#define RISALIGN_VERSION "0.0.0"
#endif

namespace risalign {
namespace {

namespace fs = std::filesystem;

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Writes every file or none of them.
class OutputSet {
 public:
  explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}
  ~OutputSet() {
    if (committed_) return;
    std::error_code ec;
    for (const fs::path& p : staged_) fs::remove(p, ec);
    for (const fs::path& p : written_) fs::remove(p, ec);
  }

  void add(const std::string& name, const std::string& content) {
    const fs::path tmp = dir_ / (name + ".partial");
    staged_.push_back(tmp);
    std::ofstream f(tmp, std::ios::binary);
    f << content;
    f.close();
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    names_.push_back(name);
  }

  void commit() {
    for (std::size_t i = 0; i < names_.size(); ++i) {
      const fs::path final_path = dir_ / names_[i];
      fs::rename(staged_[i], final_path);
      written_.push_back(final_path);
    }
    staged_.clear();
    committed_ = true;
  }

 private:
  fs::path dir_;
  std::vector<fs::path> staged_;
  std::vector<fs::path> written_;
  std::vector<std::string> names_;
  bool committed_ = false;
};

bool print_diagnostics(const std::vector<Diagnostic>& diags, const std::string& path, std::ostream& err) {
  for (const Diagnostic& d : diags) err << path << ": " << format_diagnostic(d) << '\n';
  return diags.empty();
}

}  // namespace

int validate_command(const std::string& config_path, std::ostream& out, std::ostream& err) {
  const ParseOutcome parsed = load_config(config_path);
  if (!print_diagnostics(parsed.diagnostics, config_path, err)) {
    err << parsed.diagnostics.size() << " violation(s)\n";
    return 1;
  }
  out << config_path << ": ok (" << to_string(parsed.config->experiment) << ")\n";
  return 0;
}

int run_command(const std::string& config_path, const RunOverrides& overrides, std::ostream& out, std::ostream& err) {
  const ParseOutcome parsed = load_config(config_path);
  if (!print_diagnostics(parsed.diagnostics, config_path, err)) return 1;
  ExperimentConfig config = *parsed.config;
  if (overrides.seed) config.seed = *overrides.seed;
  if (overrides.trials) config.trials = *overrides.trials;
  if (overrides.output_dir) config.output_dir = *overrides.output_dir;
  if (!print_diagnostics(validate_config(config), config_path, err)) return 1;

  try {
    const std::string name = to_string(config.experiment);
    const ExperimentOutput result = execute(config);

    const fs::path dir(config.output_dir);
    fs::create_directories(dir);
    OutputSet files(dir);
    const bool csv = config.format == OutputFormat::csv;
    const std::string data_name = name + (csv ? ".csv" : ".json");
    files.add(data_name, csv ? table_to_csv(result.table) : table_to_json(result.table));

    nlohmann::ordered_json manifest;
    manifest["tool"] = "risalign";
    manifest["version"] = RISALIGN_VERSION;
    manifest["config_dialect"] = kConfigDialect;
    manifest["timestamp"] = utc_timestamp();
    manifest["seed"] = config.seed;
    manifest["wall_time_s"] = {{name, result.wall_seconds}};
    manifest["outputs"] = {data_name};
    manifest["config"] = nlohmann::ordered_json::parse(config_to_json(config));
    files.add("manifest.json", manifest.dump(2) + "\n");
    files.commit();

    out << "wrote " << (dir / data_name).string() << " (" << result.table.size() << " rows) in "
        << format_number(result.wall_seconds) << " s\n";
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Measurement-only phase alignment experiments for reconfigurable surfaces", "risalign"};
  app.set_version_flag("--version", std::string(RISALIGN_VERSION));
  app.require_subcommand(1);

  std::string run_path;
  RunOverrides overrides;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::string out_dir;
  CLI::App* run = app.add_subcommand("run", "Run the experiment described by a config file or manifest");
  run->add_option("config", run_path, "YAML config file or manifest.json")->required();
  CLI::Option* seed_opt = run->add_option("--seed", seed, "Override the seed");
  CLI::Option* trials_opt = run->add_option("--trials", trials, "Override the trial count")->check(CLI::PositiveNumber);
  CLI::Option* out_opt = run->add_option("--out", out_dir, "Override the output directory");

  std::string validate_path;
  CLI::App* validate = app.add_subcommand("validate", "Check a config file without running it");
  validate->add_option("config", validate_path, "YAML config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*run) {
    if (*seed_opt) overrides.seed = seed;
    if (*trials_opt) overrides.trials = trials;
    if (*out_opt) overrides.output_dir = out_dir;
    return run_command(run_path, overrides, std::cout, std::cerr);
  }
  return validate_command(validate_path, std::cout, std::cerr);
}

}  // namespace risalign
