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

#ifndef MEHESTAN_EXTENSIONS_HPP_
#define MEHESTAN_EXTENSIONS_HPP_

// Add-ons on top of the pipeline: differentially private release,
// uncertainty-aware QrMed, and per-alternative polarization.

#include <cstdint>
#include <span>
#include <vector>

#include "mehestan/pipeline.hpp"
#include "mehestan/types.hpp"

namespace mehestan {

struct PrivacyParam {
  double epsilon;
  std::uint64_t seed;
};

// Laplace noise scale L * |w|_inf / epsilon.
double privacy_noise_scale(std::span<const double> weights, Resilience L,
                           double epsilon);

// `count` Laplace(0, scale) draws from the privacy stream of `seed`.
std::vector<double> privacy_noise(std::uint64_t seed, std::size_t count,
                                  double scale);

// Pipeline output plus one Laplace(0, L |w|_inf / epsilon) draw per
// alternative. Requires finite L and epsilon > 0.
AggregateResult dp_aggregate(const SparseScoreMatrix& matrix,
                             std::span<const double> weights, Resilience L,
                             const PrivacyParam& privacy,
                             const AggregateOptions& options = {});

struct ScorePrior {
  enum class Kind { kPointMass, kLaplace };
  Kind kind = Kind::kPointMass;
  double location = 0.0;
  double scale = 0.0;  // Laplace only, > 0

  static ScorePrior point(double location) {
    return {Kind::kPointMass, location, 0.0};
  }
  static ScorePrior laplace(double location, double scale) {
    return {Kind::kLaplace, location, scale};
  }
};

// Mean-risk distance E|z - X| for X drawn from the prior.
double mrdist(double z, const ScorePrior& prior);

// One-sided derivatives of mrdist in z. They coincide except at the atom of
// a point mass; both lie in [-1, 1].
double mrdist_left_derivative(double z, const ScorePrior& prior);
double mrdist_right_derivative(double z, const ScorePrior& prior);

// argmin_z z^2/(2L) + sum_n w_n mrdist(z | prior_n). Returns 0 when no prior
// carries positive weight.
double qrmed_uncertain(Resilience L, std::span<const double> weights,
                       std::span<const ScorePrior> priors);

struct AlternativePolarization {
  double psi_plus = 1.0;
  double psi_minus = 1.0;
  double median = 0.0;       // m_a over rescaled scores
  double weight = 0.0;       // w_a
  double weight_plus = 0.0;  // weight strictly above m_a
  double weight_minus = 0.0; // weight strictly below m_a
};

struct PolarizationResult {
  std::vector<AlternativePolarization> alternatives;
};

// Polarization from an aggregate computed on the same matrix, weights and L.
// Alternatives nobody scored get psi_plus = psi_minus = 1.
PolarizationResult polarization(const SparseScoreMatrix& matrix,
                                std::span<const double> weights, Resilience L,
                                const AggregateResult& aggregate);

}  // namespace mehestan

#endif  // MEHESTAN_EXTENSIONS_HPP_
