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

#include "mehestan/extensions.hpp"

#include <algorithm>
#include <cmath>

#include "mehestan/primitives.hpp"
#include "mehestan/random.hpp"

namespace mehestan {

double privacy_noise_scale(std::span<const double> weights, Resilience L,
                           double epsilon) {
  if (L.is_infinite()) {
    throw Error(ErrorCode::kInvalidInput,
                "differential privacy needs a finite resilience parameter");
  }
  if (std::isnan(epsilon) || epsilon <= 0.0) {
    throw Error(ErrorCode::kInvalidInput, "epsilon must be > 0");
  }
  double max_weight = 0.0;
  for (const double w : weights) max_weight = std::max(max_weight, w);
  return L.value() * max_weight / epsilon;
}

std::vector<double> privacy_noise(std::uint64_t seed, std::size_t count,
                                  double scale) {
  auto rng = make_stream(seed, Stream::kPrivacyNoise);
  std::vector<double> noise(count);
  for (double& x : noise) x = sample_laplace(rng, 0.0, scale);
  return noise;
}

AggregateResult dp_aggregate(const SparseScoreMatrix& matrix,
                             std::span<const double> weights, Resilience L,
                             const PrivacyParam& privacy,
                             const AggregateOptions& options) {
  const double scale = privacy_noise_scale(weights, L, privacy.epsilon);
  AggregateResult result = aggregate(matrix, weights, L, options);
  const auto noise =
      privacy_noise(privacy.seed, result.global_scores.size(), scale);
  for (std::size_t a = 0; a < noise.size(); ++a) {
    result.global_scores[a] += noise[a];
  }
  return result;
}

// ---------------------------------------------------------------------------
// Uncertainty-aware QrMed

namespace {

void check_prior(const ScorePrior& prior) {
  if (!std::isfinite(prior.location)) {
    throw Error(ErrorCode::kInvalidInput, "prior location must be finite");
  }
  if (prior.kind == ScorePrior::Kind::kLaplace &&
      !(prior.scale > 0.0 && std::isfinite(prior.scale))) {
    throw Error(ErrorCode::kInvalidInput, "Laplace prior scale must be > 0");
  }
}

}  // namespace

double mrdist(double z, const ScorePrior& prior) {
  check_prior(prior);
  const double gap = std::fabs(z - prior.location);
  if (prior.kind == ScorePrior::Kind::kPointMass) return gap;
  return gap + prior.scale * std::exp(-gap / prior.scale);
}

double mrdist_left_derivative(double z, const ScorePrior& prior) {
  check_prior(prior);
  const double d = z - prior.location;
  if (prior.kind == ScorePrior::Kind::kPointMass) return d > 0.0 ? 1.0 : -1.0;
  const double pull = -std::expm1(-std::fabs(d) / prior.scale);
  return d < 0.0 ? -pull : pull;
}

double mrdist_right_derivative(double z, const ScorePrior& prior) {
  check_prior(prior);
  const double d = z - prior.location;
  if (prior.kind == ScorePrior::Kind::kPointMass) return d < 0.0 ? -1.0 : 1.0;
  const double pull = -std::expm1(-std::fabs(d) / prior.scale);
  return d < 0.0 ? -pull : pull;
}

double qrmed_uncertain(Resilience L, std::span<const double> weights,
                       std::span<const ScorePrior> priors) {
  if (weights.size() != priors.size()) {
    throw Error(ErrorCode::kInvalidInput,
                "weights and priors must have equal length");
  }
  if (L.is_infinite()) {
    throw Error(ErrorCode::kInvalidInput,
                "uncertainty-aware QrMed needs a finite L");
  }
  struct Weighted {
    double weight;
    ScorePrior prior;
  };
  std::vector<Weighted> active;
  double lo = 0.0;
  double hi = 0.0;
  double scale = 1.0;
  for (std::size_t n = 0; n < priors.size(); ++n) {
    check_prior(priors[n]);
    if (!std::isfinite(weights[n]) || weights[n] < 0.0) {
      throw Error(ErrorCode::kInvalidInput,
                  "voting rights must be finite and nonnegative");
    }
    if (weights[n] == 0.0) continue;
    active.push_back({weights[n], priors[n]});
    lo = std::min(lo, priors[n].location);
    hi = std::max(hi, priors[n].location);
    scale = std::max(scale, std::fabs(priors[n].location));
  }
  if (active.empty()) return 0.0;

  const double l = L.value();
  auto left = [&](double z) {
    double g = z / l;
    for (const Weighted& v : active) {
      g += v.weight * mrdist_left_derivative(z, v.prior);
    }
    return g;
  };
  auto right = [&](double z) {
    double g = z / l;
    for (const Weighted& v : active) {
      g += v.weight * mrdist_right_derivative(z, v.prior);
    }
    return g;
  };

  const double tol = 1e-9 * scale;
  while (hi - lo > tol) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (right(mid) < 0.0) {
      lo = mid;
    } else if (left(mid) > 0.0) {
      hi = mid;
    } else {
      return mid;
    }
  }
  // Point-mass atoms are the only places where the subgradient jumps.
  for (const Weighted& v : active) {
    const double p = v.prior.location;
    if (v.prior.kind == ScorePrior::Kind::kPointMass && p >= lo && p <= hi &&
        left(p) <= 0.0 && right(p) >= 0.0) {
      return p;
    }
  }
  return lo + 0.5 * (hi - lo);
}

// ---------------------------------------------------------------------------
// Polarization

PolarizationResult polarization(const SparseScoreMatrix& matrix,
                                std::span<const double> weights, Resilience L,
                                const AggregateResult& aggregate) {
  const std::size_t alternatives = matrix.num_alternatives();
  if (aggregate.rescaled.num_voters() != matrix.num_voters() ||
      aggregate.rescaled.num_alternatives() != alternatives ||
      aggregate.global_scores.size() != alternatives ||
      weights.size() != matrix.num_voters()) {
    throw Error(ErrorCode::kInvalidInput,
                "aggregate does not match the score matrix");
  }

  std::vector<std::vector<Vote>> columns(alternatives);
  for (std::size_t n = 0; n < matrix.num_voters(); ++n) {
    if (!(weights[n] > 0.0)) continue;
    for (const Entry& e : aggregate.rescaled.row(n)) {
      columns[e.alternative].push_back({weights[n], e.score});
    }
  }

  PolarizationResult result;
  result.alternatives.resize(alternatives);
  for (std::size_t a = 0; a < alternatives; ++a) {
    const auto& column = columns[a];
    if (column.empty()) continue;
    AlternativePolarization& out = result.alternatives[a];
    const double global = aggregate.global_scores[a];
    out.median = median(column);
    out.weight = total_weight(column);

    std::vector<Vote> plus;
    std::vector<Vote> minus;
    for (const Vote& v : column) {
      if (v.score > out.median) {
        plus.push_back({v.weight, std::max(0.0, v.score - global) - 1.0});
        out.weight_plus += v.weight;
      } else if (v.score < out.median) {
        minus.push_back({v.weight, std::max(0.0, global - v.score) - 1.0});
        out.weight_minus += v.weight;
      }
    }
    // Both sides share the same auxiliary score, as in the original
    // definition; the weight is clamped at 0 for ties at the median.
    const double auxiliary_score = std::max(out.median - global, -1.0);
    const double plus_aux = std::max(0.0, 0.5 * out.weight - out.weight_plus);
    const double minus_aux = std::max(0.0, 0.5 * out.weight - out.weight_minus);
    if (plus_aux > 0.0) plus.push_back({plus_aux, auxiliary_score});
    if (minus_aux > 0.0) minus.push_back({minus_aux, auxiliary_score});
    out.psi_plus = 1.0 + qrmed(L, plus);
    out.psi_minus = 1.0 + qrmed(L, minus);
  }
  return result;
}

}  // namespace mehestan
