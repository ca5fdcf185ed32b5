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

#ifndef MEHESTAN_BENCH_HPP_
#define MEHESTAN_BENCH_HPP_

// Synthetic adversarial benchmark: unanimous affine voters under (biased)
// sparsity, optional malicious voters, baselines and Pearson-correlation
// sweeps over several seeds.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mehestan/pipeline.hpp"
#include "mehestan/types.hpp"

namespace mehestan::bench {

enum class ThetaDistribution { kGaussian, kUniform, kCauchy };
enum class BiasMode {
  // Drop one honest half's votes on the top fraction, the other half's on
  // the bottom fraction.
  kRemove,
  // Each honest voter only sees the top (even) or bottom (odd) `extreme`
  // fraction of alternatives.
  kExtreme,
};
enum class Algorithm { kMedian, kMinMaxMedian, kMehestan };
enum class SweepParam { kDensity, kMaliciousFraction, kExtreme };

// Cauchy ground-truth draws are clamped to +/- this value.
inline constexpr double kCauchyClamp = 1e6;

struct ExperimentConfig {
  std::size_t voters = 150;
  std::size_t alternatives = 300;
  double density = 0.1;
  double bias_top_fraction = 0.2;  // 0 disables the bias
  BiasMode bias_mode = BiasMode::kRemove;
  double extreme = 0.6;
  double p_malicious = 0.0;
  std::vector<Resilience> l_values{Resilience::Infinite()};
  ThetaDistribution theta_distribution = ThetaDistribution::kGaussian;
  std::vector<std::uint64_t> seeds{1};
  std::vector<Algorithm> algorithms{Algorithm::kMedian, Algorithm::kMinMaxMedian,
                                    Algorithm::kMehestan};
  SweepParam sweep = SweepParam::kDensity;
  std::vector<double> sweep_values{0.1};
  unsigned threads = 1;

  // Throws kConfig on out-of-range fields.
  void validate() const;
  // Copy with the swept field set to value.
  ExperimentConfig at_point(double value) const;
};

struct GeneratedInstance {
  std::vector<double> theta_star;
  SparseScoreMatrix matrix;
  std::vector<double> weights;
  std::vector<char> honest;  // per voter
  std::vector<double> true_scaling;      // s_n*, 0 for malicious voters
  std::vector<double> true_translation;  // tau_n*, 0 for malicious voters
};

// Number of malicious voters: ceil(p_malicious * N), occupying the last slots.
std::size_t malicious_count(const ExperimentConfig& config);

GeneratedInstance generate(const ExperimentConfig& config, std::uint64_t seed);

// Alternative-wise zero-tie-break median of the reported scores; 0 for
// unscored alternatives.
std::vector<double> baseline_median(const SparseScoreMatrix& matrix);
std::vector<double> baseline_minmax_median(const SparseScoreMatrix& matrix);

// Sample Pearson correlation. Throws kZeroVariance when either vector is
// constant and kInvalidInput on length mismatch.
double pearson(std::span<const double> u, std::span<const double> v);

struct SweepRecord {
  SweepParam param;
  double value;
  Algorithm algorithm;
  std::optional<Resilience> L;  // set for Mehestan only
  std::uint64_t seed;
  double correlation;
};

struct SweepSummary {
  SweepParam param;
  double value;
  Algorithm algorithm;
  std::optional<Resilience> L;
  std::size_t seeds;
  double mean;
  double ci_low;
  double ci_high;
};

struct SweepReport {
  std::vector<SweepRecord> records;
  std::vector<SweepSummary> summary;

  // Summary row lookup; nullptr when absent.
  const SweepSummary* find(double value, Algorithm algorithm,
                           std::optional<Resilience> L = std::nullopt) const;
};

// Mean and normal-approximation 95% interval (mean +/- 1.96 stderr). One
// sample gives a zero-width interval.
SweepSummary summarize(std::span<const double> correlations);

using ProgressFn = std::function<void(const std::string&)>;

// Runs every (sweep value, seed) instance; emits one progress line per sweep
// point when `progress` is set. Output is independent of the thread count.
SweepReport run_sweep(const ExperimentConfig& config,
                      const ProgressFn& progress = {});

std::string to_string(SweepParam param);
std::string to_string(Algorithm algorithm);
std::string to_string(ThetaDistribution distribution);
std::string to_string(BiasMode mode);
// "inf" or the shortest round-trip decimal.
std::string format_resilience(const std::optional<Resilience>& L);

}  // namespace mehestan::bench

#endif  // MEHESTAN_BENCH_HPP_
