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

#ifndef MEHESTAN_PRIMITIVES_HPP_
#define MEHESTAN_PRIMITIVES_HPP_

// Weighted scalar aggregation primitives.
//
// All functions operate on the participating set N*: voters that reported a
// score and hold a strictly positive voting right. The span-based overloads
// expect already-validated votes; the WeightedScores overloads validate and
// filter first.
//
// Resilience contracts (tested in tests/test_primitives.cpp and the
// acceptance suite):
//   qrmed(L)  moves by at most L * |dw|_1 under any weight change;
//   brmean(L) likewise, and equals the weighted mean once every score lies
//             in [-D, D] and the total weight is at least 8 D / L.

#include <span>

#include "mehestan/types.hpp"

namespace mehestan {

// Weighted average over N*. Throws kEmptyInput when N* is empty.
double mean(std::span<const Vote> votes);
double mean(const WeightedScores& input);

// Weighted median. When the set of valid medians is an interval, returns the
// point of that interval closest to zero. Returns 0 on empty input.
double median(std::span<const Vote> votes);
double median(const WeightedScores& input);

// Quadratically regularized median: the unique minimizer of
//   z^2 / (2L) + sum_n w_n |z - x_n|.
// An infinite L dispatches to median(). Returns 0 on empty input.
double qrmed(Resilience L, std::span<const Vote> votes);
double qrmed(Resilience L, const WeightedScores& input);

double clip(double x, double center, double radius);

// Weighted mean of the scores clipped to [center - radius, center + radius].
// Throws kEmptyInput when N* is empty.
double clipped_mean(std::span<const Vote> votes, double center, double radius);
double clipped_mean(const WeightedScores& input, double center, double radius);

// Lipschitz-robustified mean: clipped_mean centered on qrmed(L/4) with radius
// L * |w|_1 / 4. An infinite L dispatches to mean(). Returns 0 on empty input.
double brmean(Resilience L, std::span<const Vote> votes);
double brmean(Resilience L, const WeightedScores& input);

// Absolute bracket width at which the qrmed bisection stops.
double solver_tolerance(std::span<const Vote> votes);

}  // namespace mehestan

#endif  // MEHESTAN_PRIMITIVES_HPP_
