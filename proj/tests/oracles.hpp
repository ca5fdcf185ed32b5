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

#ifndef MEHESTAN_TESTS_ORACLES_HPP_
#define MEHESTAN_TESTS_ORACLES_HPP_

// Independent reference implementations used to check the library. They are
// deliberately naive: dense loops, direct formulas, no shared code with the
// production solvers beyond the public types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "mehestan/extensions.hpp"
#include "mehestan/pipeline.hpp"
#include "mehestan/primitives.hpp"
#include "mehestan/types.hpp"

namespace oracle {

using mehestan::Score;
using mehestan::Vote;

inline double qrmed_objective(double L, const std::vector<Vote>& votes, double z) {
  double value = z * z / (2.0 * L);
  for (const auto& v : votes) value += v.weight * std::abs(z - v.score);
  return value;
}

// Grid minimizer of a convex function on [lo, hi]: a coarse pass followed by
// a fine pass around the coarse winner. For convex f this returns the same
// point as a single dense pass at the fine step.
inline double grid_argmin(const std::function<double(double)>& f, double lo,
                          double hi, double fine_step) {
  const double coarse_step = fine_step * 100.0;
  double best = lo;
  double best_value = f(lo);
  for (double z = lo; z <= hi; z += coarse_step) {
    const double value = f(z);
    if (value < best_value) {
      best_value = value;
      best = z;
    }
  }
  const double a = std::max(lo, best - coarse_step);
  const double b = std::min(hi, best + coarse_step);
  for (double z = a; z <= b; z += fine_step) {
    const double value = f(z);
    if (value < best_value) {
      best_value = value;
      best = z;
    }
  }
  return best;
}

inline double grid_qrmed(double L, const std::vector<Vote>& votes,
                         double step = 1e-4) {
  double lo = 0.0;
  double hi = 0.0;
  for (const auto& v : votes) {
    lo = std::min(lo, v.score);
    hi = std::max(hi, v.score);
  }
  return grid_argmin([&](double z) { return qrmed_objective(L, votes, z); },
                     lo - 1.0, hi + 1.0, step);
}

// Closest-to-zero weighted median by exhaustive candidate testing.
inline double brute_median(const std::vector<Vote>& votes) {
  double total = 0.0;
  for (const auto& v : votes) total += v.weight;
  if (votes.empty()) return 0.0;
  auto valid = [&](double m) {
    double below = 0.0;
    double above = 0.0;
    for (const auto& v : votes) {
      if (v.score < m) below += v.weight;
      if (v.score > m) above += v.weight;
    }
    return 2.0 * below <= total && 2.0 * above <= total;
  };
  if (valid(0.0)) return 0.0;
  std::optional<double> best;
  for (const auto& v : votes) {
    if (valid(v.score) && (!best || std::abs(v.score) < std::abs(*best))) {
      best = v.score;
    }
  }
  return *best;
}

inline double weighted_mean(const std::vector<Vote>& votes) {
  double num = 0.0;
  double den = 0.0;
  for (const auto& v : votes) {
    num += v.weight * v.score;
    den += v.weight;
  }
  return num / den;
}

// Adaptive Simpson quadrature.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      double fa, double fm, double fb, double whole, double eps,
                      int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * eps) {
    return left + right + (left + right - whole) / 15.0;
  }
  return simpson(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double eps = 1e-12) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson(f, a, b, fa, fm, fb, whole, eps, 50);
}

// E|z - X| for X ~ Laplace(mu, delta) by quadrature, split at the kinks.
inline double numeric_laplace_mrdist(double z, double mu, double delta) {
  auto integrand = [&](double x) {
    return std::abs(z - x) * std::exp(-std::abs(x - mu) / delta) / (2.0 * delta);
  };
  std::vector<double> cuts{mu - 60.0 * delta, std::min(z, mu), std::max(z, mu),
                           mu + 60.0 * delta};
  cuts[0] = std::min(cuts[0], cuts[1]);
  cuts[3] = std::max(cuts[3], cuts[2]);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] > cuts[i]) total += integrate(integrand, cuts[i], cuts[i + 1]);
  }
  // Tails beyond +/- 60 delta contribute below 1e-24 relative.
  return total;
}

// Dense Mehestan straight from the defining formulas. Each voter's own
// opinion is included in its scaling (1) and translation (0) aggregates.
struct ReferenceResult {
  std::vector<double> scores;
  std::vector<double> scalings;
  std::vector<double> translations;
  std::vector<std::vector<Score>> normalized;
  std::vector<std::vector<std::optional<double>>> pair_scaling;
};

inline ReferenceResult reference_mehestan(const std::vector<std::vector<Score>>& raw,
                                          const std::vector<double>& w, double L) {
  const std::size_t N = raw.size();
  const std::size_t A = N ? raw[0].size() : 0;
  ReferenceResult out;
  out.normalized.assign(N, std::vector<Score>(A));
  for (std::size_t n = 0; n < N; ++n) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& x : raw[n]) {
      if (x) {
        lo = std::min(lo, *x);
        hi = std::max(hi, *x);
      }
    }
    for (std::size_t a = 0; a < A; ++a) {
      if (!raw[n][a]) continue;
      out.normalized[n][a] = hi > lo ? (*raw[n][a] - lo) / (hi - lo) : 0.0;
    }
  }
  const auto& t = out.normalized;
  const mehestan::Resilience l7 =
      std::isinf(L) ? mehestan::Resilience::Infinite() : mehestan::Resilience(L / 7.0);

  out.pair_scaling.assign(N, std::vector<std::optional<double>>(N));
  out.scalings.assign(N, 1.0);
  for (std::size_t n = 0; n < N; ++n) {
    std::vector<Vote> votes;
    for (std::size_t m = 0; m < N; ++m) {
      double sum = 0.0;
      std::size_t count = 0;
      for (std::size_t a = 0; a < A; ++a) {
        for (std::size_t b = a + 1; b < A; ++b) {
          if (!raw[n][a] || !raw[n][b] || !raw[m][a] || !raw[m][b]) continue;
          if (*raw[n][a] == *raw[n][b] || *raw[m][a] == *raw[m][b]) continue;
          sum += std::abs(*t[m][a] - *t[m][b]) / std::abs(*t[n][a] - *t[n][b]);
          ++count;
        }
      }
      if (count == 0) continue;
      const double s = sum / static_cast<double>(count);
      if (m != n) out.pair_scaling[n][m] = s;
      if (w[m] > 0.0) votes.push_back({w[m], s - 1.0});
    }
    out.scalings[n] = 1.0 + mehestan::brmean(l7, votes);
  }

  out.translations.assign(N, 0.0);
  for (std::size_t n = 0; n < N; ++n) {
    std::vector<Vote> votes;
    for (std::size_t m = 0; m < N; ++m) {
      double sum = 0.0;
      std::size_t count = 0;
      for (std::size_t a = 0; a < A; ++a) {
        if (!t[n][a] || !t[m][a]) continue;
        sum += out.scalings[m] * *t[m][a] - out.scalings[n] * *t[n][a];
        ++count;
      }
      if (count == 0 || !(w[m] > 0.0)) continue;
      votes.push_back({w[m], sum / static_cast<double>(count)});
    }
    out.translations[n] = mehestan::brmean(l7, votes);
  }

  out.scores.assign(A, 0.0);
  for (std::size_t a = 0; a < A; ++a) {
    std::vector<Vote> votes;
    for (std::size_t n = 0; n < N; ++n) {
      if (t[n][a] && w[n] > 0.0) {
        votes.push_back({w[n], out.scalings[n] * *t[n][a] + out.translations[n]});
      }
    }
    out.scores[a] = mehestan::qrmed(l7, votes);
  }
  return out;
}

// Least-squares fit y ~ alpha x + beta; returns {alpha, beta, max |residual|}.
struct AffineFit {
  double slope;
  double intercept;
  double max_residual;
};

inline AffineFit affine_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  AffineFit fit{sxy / sxx, 0.0, 0.0};
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    fit.max_residual =
        std::max(fit.max_residual, std::abs(y[i] - (fit.slope * x[i] + fit.intercept)));
  }
  return fit;
}

// The two-type unanimity example: K voters scoring [-3,-2,0,_] and K voters
// scoring [_,0,4,6] over theta* = [-2,-1,1,2]. Odd voters come first.
inline std::vector<std::vector<Score>> two_type_instance(std::size_t K) {
  std::vector<std::vector<Score>> dense;
  for (std::size_t k = 0; k < K; ++k) {
    dense.push_back({-3.0, -2.0, 0.0, std::nullopt});
    dense.push_back({std::nullopt, 0.0, 4.0, 6.0});
  }
  return dense;
}

// Random instance helpers.
inline std::vector<Vote> random_votes(std::mt19937_64& rng, std::size_t max_voters,
                                      double score_bound, double weight_bound) {
  std::uniform_int_distribution<std::size_t> count(1, max_voters);
  std::uniform_real_distribution<double> score(-score_bound, score_bound);
  std::uniform_real_distribution<double> weight(0.0, weight_bound);
  std::vector<Vote> votes(count(rng));
  for (auto& v : votes) v = {weight(rng), score(rng)};
  return votes;
}

inline std::vector<std::vector<Score>> random_sparse(std::mt19937_64& rng,
                                                     std::size_t N, std::size_t A,
                                                     double density) {
  std::bernoulli_distribution keep(density);
  std::uniform_real_distribution<double> score(-10.0, 10.0);
  std::vector<std::vector<Score>> dense(N, std::vector<Score>(A));
  for (auto& row : dense) {
    for (auto& cell : row) {
      if (keep(rng)) cell = score(rng);
    }
  }
  return dense;
}

}  // namespace oracle

#endif  // MEHESTAN_TESTS_ORACLES_HPP_
