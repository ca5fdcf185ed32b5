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

#include "mehestan/primitives.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace mehestan {

std::vector<Vote> WeightedScores::participants() const {
  if (weights.size() != scores.size()) {
    throw Error(ErrorCode::kInvalidInput,
                "weights and scores must have equal length");
  }
  std::vector<Vote> votes;
  votes.reserve(weights.size());
  for (std::size_t n = 0; n < weights.size(); ++n) {
    const double w = weights[n];
    if (!std::isfinite(w) || w < 0.0) {
      throw Error(ErrorCode::kInvalidInput,
                  "voting rights must be finite and nonnegative");
    }
    if (!scores[n].has_value()) continue;
    if (!std::isfinite(*scores[n])) {
      throw Error(ErrorCode::kInvalidInput, "scores must be finite");
    }
    if (w > 0.0) votes.push_back({w, *scores[n]});
  }
  return votes;
}

double total_weight(std::span<const Vote> votes) {
  double total = 0.0;
  for (const Vote& v : votes) total += v.weight;
  return total;
}

double mean(std::span<const Vote> votes) {
  if (votes.empty()) {
    throw Error(ErrorCode::kEmptyInput, "mean of an empty participant set");
  }
  double weighted_sum = 0.0;
  double total = 0.0;
  for (const Vote& v : votes) {
    weighted_sum += v.weight * v.score;
    total += v.weight;
  }
  return weighted_sum / total;
}

double mean(const WeightedScores& input) { return mean(input.participants()); }

double median(std::span<const Vote> votes) {
  if (votes.empty()) return 0.0;
  std::vector<Vote> sorted(votes.begin(), votes.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Vote& a, const Vote& b) { return a.score < b.score; });
  const double total = total_weight(sorted);
  const std::size_t count = sorted.size();

  // Smallest score whose cumulative weight from below reaches half the total.
  double lower = sorted.back().score;
  double cumulative = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    cumulative += sorted[k].weight;
    const bool group_end = k + 1 == count || sorted[k + 1].score != sorted[k].score;
    if (group_end && 2.0 * cumulative >= total) {
      lower = sorted[k].score;
      break;
    }
  }
  // Largest score whose cumulative weight from above reaches half the total.
  double upper = sorted.front().score;
  cumulative = 0.0;
  for (std::size_t k = count; k-- > 0;) {
    cumulative += sorted[k].weight;
    const bool group_end = k == 0 || sorted[k - 1].score != sorted[k].score;
    if (group_end && 2.0 * cumulative >= total) {
      upper = sorted[k].score;
      break;
    }
  }
  if (lower > upper) std::swap(lower, upper);
  return std::clamp(0.0, lower, upper);
}

double median(const WeightedScores& input) {
  return median(input.participants());
}

double solver_tolerance(std::span<const Vote> votes) {
  double scale = 1.0;
  for (const Vote& v : votes) scale = std::max(scale, std::fabs(v.score));
  return 1e-9 * scale;
}

namespace {

// Weights of the votes strictly below, at, and strictly above z.
struct Balance {
  double below = 0.0;
  double at = 0.0;
  double above = 0.0;
};

Balance balance_at(std::span<const Vote> votes, double z) {
  Balance b;
  for (const Vote& v : votes) {
    if (v.score < z) {
      b.below += v.weight;
    } else if (v.score > z) {
      b.above += v.weight;
    } else {
      b.at += v.weight;
    }
  }
  return b;
}

// One-sided derivatives of z^2/(2L) + sum w |z - x|.
double left_derivative(double z, double L, const Balance& b) {
  return z / L + b.below - b.at - b.above;
}
double right_derivative(double z, double L, const Balance& b) {
  return z / L + b.below + b.at - b.above;
}

bool is_stationary(std::span<const Vote> votes, double z, double L) {
  const Balance b = balance_at(votes, z);
  return left_derivative(z, L, b) <= 0.0 && right_derivative(z, L, b) >= 0.0;
}

// Exact finish inside the final bisection bracket. The objective is piecewise
// quadratic with breakpoints at the scores, so the minimizer is either a
// breakpoint satisfying the subgradient condition or the stationary point
// z = -L (below - above) of a breakpoint-free segment.
double finish_in_bracket(std::span<const Vote> votes, double L, double lo,
                         double hi) {
  std::vector<double> points{lo, hi};
  for (const Vote& v : votes) {
    if (v.score > lo && v.score < hi) points.push_back(v.score);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  for (const double p : points) {
    if (is_stationary(votes, p, L)) return p;
  }
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const double mid = points[i] + 0.5 * (points[i + 1] - points[i]);
    const Balance b = balance_at(votes, mid);
    const double z = -L * (b.below - b.above);
    if (z >= points[i] && z <= points[i + 1]) return z;
  }
  return lo + 0.5 * (hi - lo);
}

}  // namespace

double qrmed(Resilience L, std::span<const Vote> votes) {
  if (votes.empty()) return 0.0;
  if (L.is_infinite()) return median(votes);

  const double l = L.value();
  double lo = 0.0;
  double hi = 0.0;
  for (const Vote& v : votes) {
    lo = std::min(lo, v.score);
    hi = std::max(hi, v.score);
  }
  const double tol = solver_tolerance(votes);
  while (hi - lo > tol) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const Balance b = balance_at(votes, mid);
    if (right_derivative(mid, l, b) < 0.0) {
      lo = mid;
    } else if (left_derivative(mid, l, b) > 0.0) {
      hi = mid;
    } else {
      return mid;
    }
  }
  return finish_in_bracket(votes, l, lo, hi);
}

double qrmed(Resilience L, const WeightedScores& input) {
  return qrmed(L, input.participants());
}

double clip(double x, double center, double radius) {
  return std::max(center - radius, std::min(center + radius, x));
}

double clipped_mean(std::span<const Vote> votes, double center, double radius) {
  if (votes.empty()) {
    throw Error(ErrorCode::kEmptyInput,
                "clipped mean of an empty participant set");
  }
  if (std::isnan(radius) || radius < 0.0) {
    throw Error(ErrorCode::kInvalidInput, "clip radius must be nonnegative");
  }
  double weighted_sum = 0.0;
  double total = 0.0;
  for (const Vote& v : votes) {
    weighted_sum += v.weight * clip(v.score, center, radius);
    total += v.weight;
  }
  return weighted_sum / total;
}

double clipped_mean(const WeightedScores& input, double center, double radius) {
  return clipped_mean(input.participants(), center, radius);
}

double brmean(Resilience L, std::span<const Vote> votes) {
  if (votes.empty()) return 0.0;
  if (L.is_infinite()) return mean(votes);
  const double center = qrmed(L.divided_by(4.0), votes);
  const double radius = L.value() * total_weight(votes) / 4.0;
  return clipped_mean(votes, center, radius);
}

double brmean(Resilience L, const WeightedScores& input) {
  return brmean(L, input.participants());
}

}  // namespace mehestan
