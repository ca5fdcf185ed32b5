//
// Copyright 2026 The Mehestan Authors
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
//

#include "mehestan/mehestan.h"

#include <cmath>
#include <exception>
#include <filesystem>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "mehestan/bench.hpp"
#include "mehestan/extensions.hpp"
#include "mehestan/io.hpp"
#include "mehestan/pipeline.hpp"
#include "mehestan/primitives.hpp"

struct mh_dataset {
  mehestan::io::ScoresTable table;
  std::vector<double> weights;
};

struct mh_result {
  mehestan::AggregateResult aggregate;
  std::optional<mehestan::PolarizationResult> polarization;
};

namespace {

thread_local std::string last_error;
thread_local std::size_t last_error_line = 0;

mh_status fail(mh_status status, const std::string& message,
               std::size_t line = 0) {
  last_error = message;
  last_error_line = line;
  return status;
}

mh_status status_of(mehestan::ErrorCode code) {
  using mehestan::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidInput:
      return MH_ERR_INVALID_ARGUMENT;
    case ErrorCode::kParse:
      return MH_ERR_PARSE;
    case ErrorCode::kInvariantViolation:
      return MH_ERR_INVARIANT;
    case ErrorCode::kEmptyInput:
      return MH_ERR_EMPTY_INPUT;
    case ErrorCode::kIo:
      return MH_ERR_IO;
    case ErrorCode::kConfig:
      return MH_ERR_CONFIG;
    case ErrorCode::kDegenerateGroundTruth:
      return MH_ERR_DEGENERATE;
    case ErrorCode::kNoComparablePairs:
      return MH_ERR_NO_COMPARABLE_PAIRS;
    case ErrorCode::kNoCommonAlternatives:
      return MH_ERR_NO_COMMON_ALTERNATIVES;
    case ErrorCode::kZeroVariance:
      return MH_ERR_ZERO_VARIANCE;
  }
  return MH_ERR_INTERNAL;
}

// Runs body() and converts exceptions into status codes.
template <typename Body>
mh_status guarded(Body&& body) {
  try {
    body();
    last_error.clear();
    last_error_line = 0;
    return MH_OK;
  } catch (const mehestan::ParseError& e) {
    return fail(MH_ERR_PARSE, e.what(), e.line());
  } catch (const mehestan::Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(MH_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(MH_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(MH_ERR_INTERNAL, "unknown error");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw mehestan::Error(mehestan::ErrorCode::kInvalidInput, what);
}

mehestan::WeightedScores to_input(std::size_t count, const double* weights,
                                  const double* scores,
                                  const unsigned char* present) {
  require(count == 0 || (weights != nullptr && scores != nullptr),
          "weights and scores must not be NULL");
  mehestan::WeightedScores input;
  input.weights.assign(weights, weights + count);
  input.scores.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (present == nullptr || present[i] != 0) input.scores[i] = scores[i];
  }
  return input;
}

mehestan::ScorePrior to_prior(mh_prior_kind kind, double location, double scale) {
  switch (kind) {
    case MH_PRIOR_POINT:
      return mehestan::ScorePrior::point(location);
    case MH_PRIOR_LAPLACE:
      return mehestan::ScorePrior::laplace(location, scale);
  }
  throw mehestan::Error(mehestan::ErrorCode::kInvalidInput, "unknown prior kind");
}

void copy_out(const std::vector<double>& values, double* out, std::size_t capacity) {
  require(out != nullptr || values.empty(), "output buffer must not be NULL");
  require(capacity >= values.size(), "output buffer too small");
  std::copy(values.begin(), values.end(), out);
}

}  // namespace

extern "C" {

const char* mh_version(void) { return "1.0.0"; }
const char* mh_last_error(void) { return last_error.c_str(); }
size_t mh_last_error_line(void) { return last_error_line; }

mh_status mh_mean(size_t count, const double* weights, const double* scores,
                  const unsigned char* present, double* out) {
  return guarded([&] {
    require(out != nullptr, "out must not be NULL");
    *out = mehestan::mean(to_input(count, weights, scores, present));
  });
}

mh_status mh_median(size_t count, const double* weights, const double* scores,
                    const unsigned char* present, double* out) {
  return guarded([&] {
    require(out != nullptr, "out must not be NULL");
    *out = mehestan::median(to_input(count, weights, scores, present));
  });
}

mh_status mh_qrmed(double L, size_t count, const double* weights,
                   const double* scores, const unsigned char* present, double* out) {
  return guarded([&] {
    require(out != nullptr, "out must not be NULL");
    *out = mehestan::qrmed(mehestan::Resilience(L),
                           to_input(count, weights, scores, present));
  });
}

mh_status mh_clipped_mean(size_t count, const double* weights,
                          const double* scores, const unsigned char* present,
                          double center, double radius, double* out) {
  return guarded([&] {
    require(out != nullptr, "out must not be NULL");
    *out = mehestan::clipped_mean(to_input(count, weights, scores, present),
                                  center, radius);
  });
}

mh_status mh_brmean(double L, size_t count, const double* weights,
                    const double* scores, const unsigned char* present,
                    double* out) {
  return guarded([&] {
    require(out != nullptr, "out must not be NULL");
    *out = mehestan::brmean(mehestan::Resilience(L),
                            to_input(count, weights, scores, present));
  });
}

mh_status mh_mrdist(double z, mh_prior_kind kind, double location, double scale,
                    double* out) {
  return guarded([&] {
    require(out != nullptr, "out must not be NULL");
    require(std::isfinite(z), "z must be finite");
    *out = mehestan::mrdist(z, to_prior(kind, location, scale));
  });
}

mh_status mh_qrmed_uncertain(double L, size_t count, const double* weights,
                             const mh_prior_kind* kinds, const double* locations,
                             const double* scales, double* out) {
  return guarded([&] {
    require(out != nullptr, "out must not be NULL");
    require(count == 0 || (weights && kinds && locations && scales),
            "input arrays must not be NULL");
    std::vector<mehestan::ScorePrior> priors;
    for (std::size_t i = 0; i < count; ++i) {
      priors.push_back(to_prior(kinds[i], locations[i], scales[i]));
    }
    *out = mehestan::qrmed_uncertain(
        mehestan::Resilience(L), std::span<const double>(weights, count), priors);
  });
}

mh_status mh_dataset_create(size_t voters, size_t alternatives, mh_dataset** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be NULL");
    auto dataset = std::make_unique<mh_dataset>();
    for (std::size_t n = 0; n < voters; ++n) dataset->table.voter_ids.push_back(n);
    for (std::size_t a = 0; a < alternatives; ++a) {
      dataset->table.alternative_ids.push_back(a);
    }
    dataset->table.matrix = mehestan::SparseScoreMatrix(voters, alternatives);
    dataset->weights.assign(voters, 1.0);
    *out = dataset.release();
  });
}

mh_status mh_dataset_load(const char* scores_path, const char* weights_path,
                          mh_dataset** out) {
  return guarded([&] {
    require(out != nullptr && scores_path != nullptr, "paths must not be NULL");
    auto dataset = std::make_unique<mh_dataset>();
    dataset->table = mehestan::io::load_scores(scores_path);
    if (weights_path != nullptr) {
      dataset->weights = mehestan::io::load_weights(weights_path, dataset->table);
    } else {
      dataset->weights.assign(dataset->table.voter_ids.size(), 1.0);
    }
    *out = dataset.release();
  });
}

void mh_dataset_destroy(mh_dataset* dataset) { delete dataset; }

size_t mh_dataset_num_voters(const mh_dataset* dataset) {
  return dataset ? dataset->table.matrix.num_voters() : 0;
}

size_t mh_dataset_num_alternatives(const mh_dataset* dataset) {
  return dataset ? dataset->table.matrix.num_alternatives() : 0;
}

mh_status mh_dataset_set_score(mh_dataset* dataset, size_t voter,
                               size_t alternative, double score) {
  return guarded([&] {
    require(dataset != nullptr, "dataset must not be NULL");
    dataset->table.matrix.set(voter, alternative, score);
  });
}

mh_status mh_dataset_set_weight(mh_dataset* dataset, size_t voter, double weight) {
  return guarded([&] {
    require(dataset != nullptr, "dataset must not be NULL");
    require(voter < dataset->weights.size(), "voter index out of range");
    if (!std::isfinite(weight) || weight < 0.0) {
      throw mehestan::Error(mehestan::ErrorCode::kInvariantViolation,
                            "voting rights must be finite and nonnegative");
    }
    dataset->weights[voter] = weight;
  });
}

mh_status mh_dataset_alternative_id(const mh_dataset* dataset, size_t alternative,
                                    uint64_t* out) {
  return guarded([&] {
    require(dataset != nullptr && out != nullptr, "arguments must not be NULL");
    require(alternative < dataset->table.alternative_ids.size(),
            "alternative index out of range");
    *out = dataset->table.alternative_ids[alternative];
  });
}

void mh_aggregate_options_init(mh_aggregate_options* options) {
  if (options == nullptr) return;
  options->differential_privacy = 0;
  options->dp_epsilon = 1.0;
  options->dp_seed = 0;
  options->polarization = 0;
  options->threads = 1;
}

mh_status mh_aggregate(const mh_dataset* dataset, double L,
                       const mh_aggregate_options* options, mh_result** out) {
  return guarded([&] {
    require(dataset != nullptr && out != nullptr, "arguments must not be NULL");
    mh_aggregate_options opts;
    mh_aggregate_options_init(&opts);
    if (options != nullptr) opts = *options;

    const mehestan::Resilience resilience(L);
    mehestan::AggregateOptions pipeline_options;
    pipeline_options.threads = opts.threads;
    const auto& matrix = dataset->table.matrix;

    auto result = std::make_unique<mh_result>();
    if (opts.differential_privacy != 0) {
      result->aggregate = mehestan::dp_aggregate(
          matrix, dataset->weights, resilience,
          mehestan::PrivacyParam{opts.dp_epsilon, opts.dp_seed}, pipeline_options);
    } else {
      result->aggregate =
          mehestan::aggregate(matrix, dataset->weights, resilience, pipeline_options);
    }
    if (opts.polarization != 0) {
      // Polarization is measured against the noiseless aggregate.
      if (opts.differential_privacy != 0) {
        const auto plain = mehestan::aggregate(matrix, dataset->weights,
                                               resilience, pipeline_options);
        result->polarization =
            mehestan::polarization(matrix, dataset->weights, resilience, plain);
      } else {
        result->polarization = mehestan::polarization(
            matrix, dataset->weights, resilience, result->aggregate);
      }
    }
    *out = result.release();
  });
}

void mh_result_destroy(mh_result* result) { delete result; }

size_t mh_result_num_alternatives(const mh_result* result) {
  return result ? result->aggregate.global_scores.size() : 0;
}

size_t mh_result_num_voters(const mh_result* result) {
  return result ? result->aggregate.scalings.size() : 0;
}

mh_status mh_result_scores(const mh_result* result, double* out, size_t capacity) {
  return guarded([&] {
    require(result != nullptr, "result must not be NULL");
    copy_out(result->aggregate.global_scores, out, capacity);
  });
}

mh_status mh_result_scalings(const mh_result* result, double* out,
                             size_t capacity) {
  return guarded([&] {
    require(result != nullptr, "result must not be NULL");
    copy_out(result->aggregate.scalings, out, capacity);
  });
}

mh_status mh_result_translations(const mh_result* result, double* out,
                                 size_t capacity) {
  return guarded([&] {
    require(result != nullptr, "result must not be NULL");
    copy_out(result->aggregate.translations, out, capacity);
  });
}

mh_status mh_result_polarization(const mh_result* result, double* psi_plus,
                                 double* psi_minus, size_t capacity) {
  return guarded([&] {
    require(result != nullptr, "result must not be NULL");
    require(result->polarization.has_value(), "polarization was not requested");
    std::vector<double> plus;
    std::vector<double> minus;
    for (const auto& a : result->polarization->alternatives) {
      plus.push_back(a.psi_plus);
      minus.push_back(a.psi_minus);
    }
    copy_out(plus, psi_plus, capacity);
    copy_out(minus, psi_minus, capacity);
  });
}

mh_status mh_result_write(const mh_result* result, const mh_dataset* dataset,
                          const char* scores_path, const char* diagnostics_path) {
  return guarded([&] {
    require(result != nullptr && dataset != nullptr,
            "arguments must not be NULL");
    require(result->aggregate.global_scores.size() ==
                dataset->table.alternative_ids.size(),
            "result does not belong to this dataset");
    const auto* polarization =
        result->polarization ? &*result->polarization : nullptr;
    if (scores_path != nullptr) {
      mehestan::io::write_atomically(
          scores_path,
          mehestan::io::serialize_results(
              dataset->table, result->aggregate.global_scores, polarization));
    }
    if (diagnostics_path != nullptr) {
      mehestan::io::write_atomically(
          diagnostics_path,
          mehestan::io::serialize_diagnostics(dataset->table, result->aggregate));
    }
  });
}

mh_status mh_simulate(const char* config_path, const char* out_dir,
                      unsigned threads, mh_progress_fn progress, void* user) {
  return guarded([&] {
    require(config_path != nullptr && out_dir != nullptr,
            "paths must not be NULL");
    auto config = mehestan::io::load_config(config_path);
    config.threads = threads;
    mehestan::bench::ProgressFn report_line;
    if (progress != nullptr) {
      report_line = [&](const std::string& line) { progress(line.c_str(), user); };
    }
    const auto report = mehestan::bench::run_sweep(config, report_line);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
      throw mehestan::Error(mehestan::ErrorCode::kIo,
                            std::string("cannot create ") + out_dir);
    }
    const std::filesystem::path dir(out_dir);
    mehestan::io::write_atomically(dir / "records.csv",
                                   mehestan::io::serialize_records(report));
    mehestan::io::write_atomically(dir / "summary.csv",
                                   mehestan::io::serialize_summary(report));
  });
}

}  // extern "C"
