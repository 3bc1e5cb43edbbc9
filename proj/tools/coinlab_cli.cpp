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

// coinlab: command-line front end. Every experiment runs inside libcoinlab;
// this program only maps flags onto configuration keys and routes output.

#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "coinlab/coinlab.h"

namespace {

constexpr int kExitUsage = 2;

struct ConfigHandle {
  coinlab_config* ptr = nullptr;
  ~ConfigHandle() { coinlab_config_free(ptr); }
};

struct ReportHandle {
  coinlab_report* ptr = nullptr;
  ~ReportHandle() { coinlab_report_free(ptr); }
};

int exit_for(coinlab_status status) {
  switch (status) {
    case COINLAB_E_USAGE:
    case COINLAB_E_PARAMETER:
    case COINLAB_E_BUDGET:
      return kExitUsage;
    default:
      return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification lab for summed-coinflip global coins under adversarial stopping"};
  app.set_version_flag("--version", coinlab_version());

  std::string subcommand;
  app.add_option("subcommand", subcommand,
                 "fact3 | lemma52-1 | lemma52-2 | lemma71 | coin-iter | agreement | "
                 "spectral | constants | all")
      ->required()
      ->check(CLI::IsMember({"fact3", "lemma52-1", "lemma52-2", "lemma71", "coin-iter",
                             "agreement", "spectral", "constants", "all"}));

  // Flag values are passed through verbatim; the library validates them.
  std::map<std::string, std::string> values;
  const std::vector<std::pair<std::string, std::string>> flags = {
      {"n", "number of processors"},
      {"t", "number of bad processors"},
      {"epsilon", "slack in the spectral norm threshold"},
      {"c1", "stream-length constant for incomplete streams"},
      {"m", "iterations (rows of the iteration-sum matrix)"},
      {"trials", "Monte Carlo trials (iterations or runs, per experiment)"},
      {"seed", "master seed (required)"},
      {"workers", "worker threads; 0 = one per hardware thread"},
      {"out", "output file (default: standard output)"},
      {"format", "json or csv"},
      {"confidence", "two-sided confidence level of intervals (default 0.99)"},
      {"max-iterations", "iteration budget per agreement run (default 1000)"},
      {"matrix-csv", "spectral: write G, R, Z of trial 0 to <prefix>_{G,R,Z}.csv"},
  };
  for (const auto& [name, help] : flags) {
    app.add_option("--" + name, values[name], help);
  }
  std::string config_path;
  app.add_option("--config", config_path, "flat key=value file; flags override it");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  ConfigHandle config;
  if (coinlab_config_new(&config.ptr) != COINLAB_OK) {
    std::cerr << "coinlab: " << coinlab_last_error() << "\n";
    return 1;
  }
  if (!config_path.empty()) {
    const coinlab_status s = coinlab_config_load(config.ptr, config_path.c_str());
    if (s != COINLAB_OK) {
      std::cerr << "coinlab: " << coinlab_last_error() << "\n";
      return exit_for(s);
    }
  }
  coinlab_status status = coinlab_config_set(config.ptr, "subcommand", subcommand.c_str());
  for (const auto& [name, help] : flags) {
    if (status != COINLAB_OK) break;
    if (app.count("--" + name) > 0) {
      status = coinlab_config_set(config.ptr, name.c_str(), values[name].c_str());
    }
  }
  if (status != COINLAB_OK) {
    std::cerr << "coinlab: " << coinlab_last_error() << "\n" << app.help();
    return exit_for(status);
  }

  ReportHandle report;
  status = coinlab_run(config.ptr, &report.ptr);
  if (status != COINLAB_OK) {
    std::cerr << "coinlab: " << coinlab_last_error() << "\n";
    if (exit_for(status) == kExitUsage) std::cerr << app.help();
    return exit_for(status);
  }

  const std::string out_path = coinlab_config_output_path(config.ptr);
  if (out_path.empty()) {
    std::fputs(coinlab_report_text(report.ptr), stdout);
    std::fflush(stdout);
  } else if (coinlab_report_write(report.ptr, out_path.c_str()) != COINLAB_OK) {
    std::cerr << "coinlab: " << coinlab_last_error() << ": " << out_path << "\n";
    return 1;
  }

  std::uint64_t pass = 0, failed = 0, inconclusive = 0, errors = 0;
  coinlab_report_counts(report.ptr, &pass, &failed, &inconclusive, &errors);
  std::cerr << "coinlab " << subcommand << ": " << pass << " pass, " << failed << " fail, "
            << inconclusive << " inconclusive, " << errors << " errors\n";
  return coinlab_report_exit_code(report.ptr);
}
