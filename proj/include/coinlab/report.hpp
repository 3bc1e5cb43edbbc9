// Copyright 2026 The coinlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace coinlab {

enum class Subcommand {
  kFact3,
  kLemma52Part1,
  kLemma52Part2,
  kLemma71,
  kCoinIter,
  kAgreement,
  kSpectral,
  kConstants,
  kAll,
};

enum class OutputFormat { kJson, kCsv };

const char* to_string(Subcommand subcommand) noexcept;
std::optional<Subcommand> parse_subcommand(std::string_view name);
std::vector<std::string> subcommand_names();

/// A complete run description. Unset parameters fall back to each
/// experiment's documented defaults; `seed` has no default.
struct RunConfig {
  std::optional<Subcommand> subcommand;
  std::optional<std::int64_t> n;
  std::optional<std::int64_t> t;
  std::optional<std::int64_t> m;
  std::optional<double> epsilon;
  std::optional<double> c1;
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> max_iterations;
  unsigned workers = 0;
  double confidence = 0.99;
  std::string output_path;
  OutputFormat format = OutputFormat::kJson;
  std::string matrix_csv_prefix;
};

/// Keys accepted by apply_setting and in config files: subcommand, n, t,
/// epsilon, c1, m, trials, seed, workers, out, format, confidence,
/// max-iterations, matrix-csv. Underscores are accepted for dashes.
std::vector<std::string> setting_keys();

/// Throws UsageError on an unknown key or unparsable value.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// Flat UTF-8 `key = value` lines; blank lines and `#` comments ignored.
void load_config_text(RunConfig& config, std::string_view text);
void load_config_file(RunConfig& config, const std::filesystem::path& path);

struct Summary {
  std::uint64_t pass = 0;
  std::uint64_t fail = 0;
  std::uint64_t inconclusive = 0;
  std::uint64_t errors = 0;
};

struct Report {
  nlohmann::json document;
  Summary summary;

  /// 0 when nothing failed or errored, 1 otherwise.
  int exit_code() const noexcept {
    return summary.fail == 0 && summary.errors == 0 ? 0 : 1;
  }
  std::string render(OutputFormat format) const;
};

/// Runs the configured experiments. Throws UsageError when the seed or
/// subcommand is missing and ParameterError when the effective parameters are
/// inadmissible; errors raised while an experiment runs (non-convergence,
/// invariant violations) are recorded in the report instead.
Report run_report(const RunConfig& config);

/// Report with wall times and the worker count removed, for comparing runs.
nlohmann::json strip_nondeterministic(const nlohmann::json& document);

}  // namespace coinlab
