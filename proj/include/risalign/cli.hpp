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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace risalign {

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<std::string> output_dir;
};

/// Exit codes: 0 success, 1 invalid configuration, 2 runtime failure.
int run_command(const std::string& config_path, const RunOverrides& overrides, std::ostream& out, std::ostream& err);

/// Prints every violation; 0 when the file is valid, 1 otherwise.
int validate_command(const std::string& config_path, std::ostream& out, std::ostream& err);

/// Entry point of the `risalign` executable.
int cli_main(int argc, char** argv);

}  // namespace risalign
