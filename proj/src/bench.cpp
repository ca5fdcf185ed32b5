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

#include "mehestan/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "mehestan/io.hpp"
#include "mehestan/primitives.hpp"
#include "mehestan/random.hpp"
#include "parallel.hpp"

namespace mehestan::bench {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kConfig, what);
}

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

std::size_t fraction_count(double fraction, std::size_t total) {
  return static_cast<std::size_t>(std::llround(fraction * static_cast<double>(total)));
}

}  // namespace

void ExperimentConfig::validate() const {
  require(voters >= 1, "N must be >= 1");
  require(alternatives >= 1, "A must be >= 1");
  require(is_probability(density), "density must lie in [0, 1]");
  require(is_probability(bias_top_fraction),
          "bias_top_fraction must lie in [0, 1]");
  require(is_probability(extreme), "extreme must lie in [0, 1]");
  require(is_probability(p_malicious), "p_malicious must lie in [0, 1]");
  require(!seeds.empty(), "at least one seed is required");
  require(!algorithms.empty(), "at least one algorithm is required");
  require(!sweep_values.empty(), "at least one sweep value is required");
  if (std::find(algorithms.begin(), algorithms.end(), Algorithm::kMehestan) !=
      algorithms.end()) {
    require(!l_values.empty(), "mehestan needs at least one L value");
  }
  for (const double v : sweep_values) {
    require(is_probability(v), "sweep values must lie in [0, 1]");
  }
}

ExperimentConfig ExperimentConfig::at_point(double value) const {
  ExperimentConfig point = *this;
  switch (sweep) {
    case SweepParam::kDensity:
      point.density = value;
      break;
    case SweepParam::kMaliciousFraction:
      point.p_malicious = value;
      break;
    case SweepParam::kExtreme:
      point.extreme = value;
      break;
  }
  point.sweep_values = {value};
  return point;
}

std::size_t malicious_count(const ExperimentConfig& config) {
  // The small offset keeps e.g. 0.1 * 150 from rounding up to 16.
  const double exact = config.p_malicious * static_cast<double>(config.voters);
  const auto count = static_cast<std::size_t>(std::ceil(exact - 1e-9));
  return std::min(count, config.voters);
}

GeneratedInstance generate(const ExperimentConfig& config, std::uint64_t seed) {
  config.validate();
  const std::size_t voters = config.voters;
  const std::size_t alternatives = config.alternatives;
  const std::size_t malicious = malicious_count(config);
  const std::size_t honest = voters - malicious;

  GeneratedInstance instance;
  instance.theta_star.resize(alternatives);
  {
    auto rng = make_stream(seed, Stream::kGroundTruth);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (double& theta : instance.theta_star) {
      switch (config.theta_distribution) {
        case ThetaDistribution::kGaussian:
          theta = normal(rng);
          break;
        case ThetaDistribution::kUniform:
          theta = open_unit(rng);
          break;
        case ThetaDistribution::kCauchy:
          theta = std::clamp(std::tan(std::numbers::pi * (open_unit(rng) - 0.5)),
                             -kCauchyClamp, kCauchyClamp);
          break;
      }
    }
  }

  // rank[a] = position of a when sorted by decreasing theta*.
  std::vector<std::size_t> order(alternatives);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return instance.theta_star[a] > instance.theta_star[b];
  });
  std::vector<std::size_t> rank(alternatives);
  for (std::size_t i = 0; i < alternatives; ++i) rank[order[i]] = i;

  const bool remove_bias = config.bias_mode == BiasMode::kRemove &&
                           config.bias_top_fraction > 0.0;
  const std::size_t biased = fraction_count(config.bias_top_fraction, alternatives);
  const std::size_t visible = fraction_count(config.extreme, alternatives);
  auto sees = [&](std::size_t voter, std::size_t a) {
    const bool even = voter % 2 == 0;
    const bool top = rank[a] < biased;
    const bool bottom = rank[a] >= alternatives - biased;
    if (config.bias_mode == BiasMode::kExtreme) {
      return even ? rank[a] < visible : rank[a] >= alternatives - visible;
    }
    if (!remove_bias) return true;
    return even ? !top : !bottom;
  };

  instance.matrix = SparseScoreMatrix(voters, alternatives);
  instance.weights.assign(voters, 1.0);
  instance.honest.assign(voters, 0);
  instance.true_scaling.assign(voters, 0.0);
  instance.true_translation.assign(voters, 0.0);

  auto affine_rng = make_stream(seed, Stream::kVoterAffine);
  auto support_rng = make_stream(seed, Stream::kSupport);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t n = 0; n < honest; ++n) {
    instance.honest[n] = 1;
    const double scaling = std::exp(normal(affine_rng));
    const double translation = normal(affine_rng);
    instance.true_scaling[n] = scaling;
    instance.true_translation[n] = translation;
    std::vector<Entry> row;
    for (std::size_t a = 0; a < alternatives; ++a) {
      // One draw per cell whatever the bias, so support streams line up
      // across bias settings.
      const bool drawn = open_unit(support_rng) < config.density;
      if (drawn && sees(n, a)) {
        row.push_back({a, scaling * instance.theta_star[a] + translation});
      }
    }
    instance.matrix.set_row(n, std::move(row));
  }

  if (malicious > 0) {
    auto rng = make_stream(seed, Stream::kMalicious);
    std::normal_distribution<double> malicious_normal(0.0, 1.0);
    std::vector<Entry> row(alternatives);
    for (std::size_t a = 0; a < alternatives; ++a) {
      row[a] = {a, malicious_normal(rng)};
    }
    for (std::size_t n = honest; n < voters; ++n) instance.matrix.set_row(n, row);
  }
  return instance;
}

std::vector<double> baseline_median(const SparseScoreMatrix& matrix) {
  std::vector<std::vector<Vote>> columns(matrix.num_alternatives());
  for (std::size_t n = 0; n < matrix.num_voters(); ++n) {
    for (const Entry& e : matrix.row(n)) {
      columns[e.alternative].push_back({1.0, e.score});
    }
  }
  std::vector<double> out(columns.size());
  for (std::size_t a = 0; a < columns.size(); ++a) out[a] = median(columns[a]);
  return out;
}

std::vector<double> baseline_minmax_median(const SparseScoreMatrix& matrix) {
  return baseline_median(minmax_normalize(matrix));
}

double pearson(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size() || u.empty()) {
    throw Error(ErrorCode::kInvalidInput,
                "pearson needs two nonempty vectors of equal length");
  }
  const double count = static_cast<double>(u.size());
  double mean_u = 0.0;
  double mean_v = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    mean_u += u[i];
    mean_v += v[i];
  }
  mean_u /= count;
  mean_v /= count;
  double cov = 0.0;
  double var_u = 0.0;
  double var_v = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double du = u[i] - mean_u;
    const double dv = v[i] - mean_v;
    cov += du * dv;
    var_u += du * du;
    var_v += dv * dv;
  }
  if (var_u == 0.0 || var_v == 0.0) {
    throw Error(ErrorCode::kZeroVariance, "pearson of a constant vector");
  }
  return std::clamp(cov / std::sqrt(var_u * var_v), -1.0, 1.0);
}

SweepSummary summarize(std::span<const double> correlations) {
  SweepSummary s{};
  s.seeds = correlations.size();
  if (correlations.empty()) return s;
  const double count = static_cast<double>(correlations.size());
  s.mean = std::accumulate(correlations.begin(), correlations.end(), 0.0) / count;
  s.ci_low = s.ci_high = s.mean;
  if (correlations.size() > 1) {
    double ss = 0.0;
    for (const double c : correlations) ss += (c - s.mean) * (c - s.mean);
    const double stderr_ = std::sqrt(ss / (count - 1.0)) / std::sqrt(count);
    s.ci_low = s.mean - 1.96 * stderr_;
    s.ci_high = s.mean + 1.96 * stderr_;
  }
  return s;
}

const SweepSummary* SweepReport::find(double value, Algorithm algorithm,
                                      std::optional<Resilience> L) const {
  for (const SweepSummary& s : summary) {
    if (s.value == value && s.algorithm == algorithm && s.L == L) return &s;
  }
  return nullptr;
}

namespace {

// One (algorithm, L) column of the sweep.
struct Column {
  Algorithm algorithm;
  std::optional<Resilience> L;
};

std::vector<Column> columns_of(const ExperimentConfig& config) {
  std::vector<Column> columns;
  for (const Algorithm a : config.algorithms) {
    if (a == Algorithm::kMehestan) {
      for (const Resilience& L : config.l_values) columns.push_back({a, L});
    } else {
      columns.push_back({a, std::nullopt});
    }
  }
  return columns;
}

double correlation_or_zero(std::span<const double> output,
                           std::span<const double> truth) {
  try {
    return pearson(output, truth);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kZeroVariance) return 0.0;
    throw;
  }
}

std::vector<double> run_instance(const ExperimentConfig& config,
                                 std::uint64_t seed,
                                 const std::vector<Column>& columns) {
  const GeneratedInstance instance = generate(config, seed);
  std::vector<double> out;
  out.reserve(columns.size());
  std::optional<PreparedInstance> prepared;
  for (const Column& c : columns) {
    std::vector<double> scores;
    switch (c.algorithm) {
      case Algorithm::kMedian:
        scores = baseline_median(instance.matrix);
        break;
      case Algorithm::kMinMaxMedian:
        scores = baseline_minmax_median(instance.matrix);
        break;
      case Algorithm::kMehestan:
        if (!prepared) prepared.emplace(instance.matrix);
        scores = prepared->aggregate(instance.weights, *c.L).global_scores;
        break;
    }
    out.push_back(correlation_or_zero(scores, instance.theta_star));
  }
  return out;
}

std::string column_label(const Column& c) {
  if (!c.L) return to_string(c.algorithm);
  return to_string(c.algorithm) + "[L=" + format_resilience(c.L) + "]";
}

}  // namespace

SweepReport run_sweep(const ExperimentConfig& config, const ProgressFn& progress) {
  config.validate();
  const auto columns = columns_of(config);
  SweepReport report;
  for (const double value : config.sweep_values) {
    const ExperimentConfig point = config.at_point(value);
    std::vector<std::vector<double>> per_seed(config.seeds.size());
    internal::parallel_for(config.seeds.size(), config.threads,
                           [&](std::size_t i) {
                             per_seed[i] = run_instance(point, config.seeds[i], columns);
                           });
    std::ostringstream line;
    line << to_string(config.sweep) << '=' << format_shortest(value);
    for (std::size_t c = 0; c < columns.size(); ++c) {
      std::vector<double> values;
      for (std::size_t i = 0; i < config.seeds.size(); ++i) {
        report.records.push_back({config.sweep, value, columns[c].algorithm,
                                  columns[c].L, config.seeds[i], per_seed[i][c]});
        values.push_back(per_seed[i][c]);
      }
      SweepSummary s = summarize(values);
      s.param = config.sweep;
      s.value = value;
      s.algorithm = columns[c].algorithm;
      s.L = columns[c].L;
      report.summary.push_back(s);
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.4f", s.mean);
      line << ' ' << column_label(columns[c]) << '=' << buf;
    }
    if (progress) progress(line.str());
  }
  return report;
}

std::string to_string(SweepParam param) {
  switch (param) {
    case SweepParam::kDensity:
      return "density";
    case SweepParam::kMaliciousFraction:
      return "p_malicious";
    case SweepParam::kExtreme:
      return "extreme";
  }
  return "?";
}

std::string to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kMedian:
      return "median";
    case Algorithm::kMinMaxMedian:
      return "minmax_median";
    case Algorithm::kMehestan:
      return "mehestan";
  }
  return "?";
}

std::string to_string(ThetaDistribution distribution) {
  switch (distribution) {
    case ThetaDistribution::kGaussian:
      return "gaussian";
    case ThetaDistribution::kUniform:
      return "uniform";
    case ThetaDistribution::kCauchy:
      return "cauchy";
  }
  return "?";
}

std::string to_string(BiasMode mode) {
  return mode == BiasMode::kRemove ? "remove" : "extreme";
}

std::string format_resilience(const std::optional<Resilience>& L) {
  if (!L) return "";
  if (L->is_infinite()) return "inf";
  return format_shortest(L->value());
}

}  // namespace mehestan::bench
