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

#include "coinlab/coinlab.h"

#include <cstring>
#include <fstream>
#include <new>
#include <string>

#include "coinlab/bounds.hpp"
#include "coinlab/error.hpp"
#include "coinlab/exact.hpp"
#include "coinlab/report.hpp"
#include "coinlab/spectral.hpp"

struct coinlab_config {
  coinlab::RunConfig run;
};

struct coinlab_report {
  coinlab::Report report;
  std::string text;
};

namespace {

thread_local std::string g_last_error;

coinlab_status fail(coinlab_status status, const char* message) {
  g_last_error = message;
  return status;
}

// Maps the exception in flight to a status code.
coinlab_status translate() {
  try {
    throw;
  } catch (const coinlab::ConvergenceError& e) {
    return fail(COINLAB_E_CONVERGENCE, e.what());
  } catch (const coinlab::UsageError& e) {
    return fail(COINLAB_E_USAGE, e.what());
  } catch (const coinlab::BudgetError& e) {
    return fail(COINLAB_E_BUDGET, e.what());
  } catch (const coinlab::ParameterError& e) {
    return fail(COINLAB_E_PARAMETER, e.what());
  } catch (const std::bad_alloc&) {
    return fail(COINLAB_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(COINLAB_E_INTERNAL, e.what());
  } catch (...) {
    return fail(COINLAB_E_INTERNAL, "unknown error");
  }
}

template <class Fn>
coinlab_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (...) {
    return translate();
  }
}

}  // namespace

extern "C" {

const char* coinlab_version(void) { return COINLAB_VERSION; }

const char* coinlab_last_error(void) { return g_last_error.c_str(); }

const char* coinlab_status_name(coinlab_status status) {
  switch (status) {
    case COINLAB_OK: return "ok";
    case COINLAB_E_NULL_ARGUMENT: return "null argument";
    case COINLAB_E_PARAMETER: return "parameter error";
    case COINLAB_E_BUDGET: return "budget exceeded";
    case COINLAB_E_USAGE: return "usage error";
    case COINLAB_E_CONVERGENCE: return "convergence error";
    case COINLAB_E_IO: return "i/o error";
    case COINLAB_E_BUFFER_TOO_SMALL: return "buffer too small";
    case COINLAB_E_INTERNAL: return "internal error";
  }
  return "unknown status";
}

coinlab_status coinlab_config_new(coinlab_config** out) {
  if (out == nullptr) return fail(COINLAB_E_NULL_ARGUMENT, "out is null");
  return guarded([&] {
    *out = new coinlab_config{};
    return COINLAB_OK;
  });
}

void coinlab_config_free(coinlab_config* config) { delete config; }

coinlab_status coinlab_config_set(coinlab_config* config, const char* key, const char* value) {
  if (config == nullptr || key == nullptr || value == nullptr) {
    return fail(COINLAB_E_NULL_ARGUMENT, "config, key and value must be non-null");
  }
  return guarded([&] {
    coinlab::apply_setting(config->run, key, value);
    return COINLAB_OK;
  });
}

coinlab_status coinlab_config_load(coinlab_config* config, const char* path) {
  if (config == nullptr || path == nullptr) {
    return fail(COINLAB_E_NULL_ARGUMENT, "config and path must be non-null");
  }
  return guarded([&] {
    coinlab::load_config_file(config->run, path);
    return COINLAB_OK;
  });
}

const char* coinlab_config_output_path(const coinlab_config* config) {
  return config == nullptr ? "" : config->run.output_path.c_str();
}

coinlab_status coinlab_run(const coinlab_config* config, coinlab_report** out) {
  if (config == nullptr || out == nullptr) {
    return fail(COINLAB_E_NULL_ARGUMENT, "config and out must be non-null");
  }
  *out = nullptr;
  return guarded([&] {
    auto* handle = new coinlab_report{coinlab::run_report(config->run), {}};
    handle->text = handle->report.render(config->run.format);
    *out = handle;
    return COINLAB_OK;
  });
}

void coinlab_report_free(coinlab_report* report) { delete report; }

const char* coinlab_report_text(const coinlab_report* report) {
  return report == nullptr ? "" : report->text.c_str();
}

int coinlab_report_exit_code(const coinlab_report* report) {
  return report == nullptr ? 1 : report->report.exit_code();
}

coinlab_status coinlab_report_counts(const coinlab_report* report, uint64_t* pass, uint64_t* fail_count,
                                     uint64_t* inconclusive, uint64_t* errors) {
  if (report == nullptr) return fail(COINLAB_E_NULL_ARGUMENT, "report is null");
  const coinlab::Summary& s = report->report.summary;
  if (pass != nullptr) *pass = s.pass;
  if (fail_count != nullptr) *fail_count = s.fail;
  if (inconclusive != nullptr) *inconclusive = s.inconclusive;
  if (errors != nullptr) *errors = s.errors;
  return COINLAB_OK;
}

coinlab_status coinlab_report_write(const coinlab_report* report, const char* path) {
  if (report == nullptr || path == nullptr) {
    return fail(COINLAB_E_NULL_ARGUMENT, "report and path must be non-null");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) return fail(COINLAB_E_IO, "cannot open output file");
  out << report->text;
  return out ? COINLAB_OK : fail(COINLAB_E_IO, "write failed");
}

coinlab_status coinlab_derive(int64_t n, int64_t t, double epsilon, int64_t m,
                              coinlab_thresholds* out) {
  if (out == nullptr) return fail(COINLAB_E_NULL_ARGUMENT, "out is null");
  return guarded([&] {
    coinlab::Params p;
    p.n = n;
    p.t = t;
    p.epsilon = epsilon;
    p.m = m;
    const coinlab::DerivedThresholds d = coinlab::derive(p);
    *out = coinlab_thresholds{d.alpha,        d.beta,        d.beta_half,
                              d.beta_quarter, d.alpha_prime, d.norm_threshold};
    return COINLAB_OK;
  });
}

coinlab_status coinlab_stopped_stream_bound(int64_t n, int64_t t, double* out) {
  if (out == nullptr) return fail(COINLAB_E_NULL_ARGUMENT, "out is null");
  return guarded([&] {
    coinlab::Params p;
    p.n = n;
    p.t = t;
    *out = coinlab::lemma52_part1_bound(p);
    return COINLAB_OK;
  });
}

coinlab_status coinlab_prob_max_ge(int64_t n, int64_t r, char* buffer, size_t buffer_size,
                                   double* value) {
  if (buffer == nullptr) return fail(COINLAB_E_NULL_ARGUMENT, "buffer is null");
  return guarded([&] {
    const coinlab::ExactProb p = coinlab::prob_max_ge_reflection(n, r);
    const std::string text = p.str();
    if (text.size() + 1 > buffer_size) {
      return fail(COINLAB_E_BUFFER_TOO_SMALL, "buffer too small for the fraction");
    }
    std::memcpy(buffer, text.c_str(), text.size() + 1);
    if (value != nullptr) *value = p.to_double();
    return COINLAB_OK;
  });
}

coinlab_status coinlab_spectral_norm(const double* data, size_t rows, size_t cols, double rel_tol,
                                     int max_iters, double* value, int* iterations_used) {
  if (data == nullptr || value == nullptr) {
    return fail(COINLAB_E_NULL_ARGUMENT, "data and value must be non-null");
  }
  if (rows == 0 || cols == 0) return fail(COINLAB_E_PARAMETER, "matrix must be non-empty");
  return guarded([&] {
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        view(data, static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    try {
      const coinlab::NormEstimate est = coinlab::spectral_norm(view, rel_tol, max_iters);
      *value = est.value;
      if (iterations_used != nullptr) *iterations_used = est.iterations_used;
      return COINLAB_OK;
    } catch (const coinlab::ConvergenceError& e) {
      // The best estimate is still useful to the caller.
      *value = e.best_estimate().value;
      if (iterations_used != nullptr) *iterations_used = e.best_estimate().iterations_used;
      throw;
    }
  });
}

}  // extern "C"
