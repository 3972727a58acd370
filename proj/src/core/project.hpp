// Copyright 2026 The approxcim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Project configuration files and the `gen` artifact set.
//
// The config format is a small TOML subset: [table] headers, key = value
// lines, '#' comments. Values are double-quoted strings, integers, floats
// or true/false. Tables: [project], [multiplier], [sram].

#ifndef APPROXCIM_CORE_PROJECT_HPP
#define APPROXCIM_CORE_PROJECT_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "core/multiplier.hpp"
#include "core/sram.hpp"

namespace approxcim {

inline constexpr char kToolkitVersion[] = "0.3.0";
inline constexpr int kConfigSchemaVersion = 1;
inline constexpr char kFailureMarker[] = "FAILED";

enum class ReportFormat { kCsv, kJson, kBoth };
ReportFormat parse_report_format(std::string_view text);

struct ProjectConfig {
  std::string name = "acim_mult";
  MultiplierConfig multiplier;
  SramConfig sram;
  std::string output_dir;  // empty when the file does not set one
  std::uint64_t seed = 1;
  ReportFormat report = ReportFormat::kBoth;

  /// Throws kConfig.
  void validate() const;
};

/// "table.key" -> value in config syntax; replaces or adds the file entry.
using ConfigOverrides = std::vector<std::pair<std::string, std::string>>;

/// Relative compressor table paths resolve against `base_dir`. Throws
/// kConfig with the offending line for syntax, type and unknown-key errors.
ProjectConfig parse_project_config(std::string_view text,
                                   const std::string& base_dir = ".",
                                   const ConfigOverrides& overrides = {});
ProjectConfig load_project_config(const std::string& path,
                                  const ConfigOverrides& overrides = {});

struct Artifact {
  std::string path;  // relative to the output directory
  std::string contents;
};

/// Multiplier RTL and testbench, PE wrapper, SRAM LEF/LIB, flow stubs, the
/// gate-count CSV, the error report (exhaustive up to 8 bits, otherwise
/// 100000 pairs drawn from the project seed) and a manifest. Pure function
/// of the config.
std::vector<Artifact> generate_artifacts(const ProjectConfig& cfg);

/// Writes every artifact under `out_dir`, removing a stale failure marker
/// first. On error the marker file is written before rethrowing.
void write_artifacts(const std::vector<Artifact>& artifacts, const std::string& out_dir);

void write_failure_marker(const std::string& out_dir, const std::string& message);

}  // namespace approxcim

#endif  // APPROXCIM_CORE_PROJECT_HPP
