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

#ifndef MEHESTAN_RANDOM_HPP_
#define MEHESTAN_RANDOM_HPP_

#include <cstdint>
#include <random>

namespace mehestan {

// Named sub-streams derived from one master seed. The derivation (splitmix64
// of seed and stream tag, feeding a 64-bit Mersenne twister) is part of the
// reproducibility contract; changing it changes every seeded output.
enum class Stream : std::uint64_t {
  kGroundTruth = 1,
  kVoterAffine = 2,
  kSupport = 3,
  kMalicious = 4,
  kPrivacyNoise = 5,
};

inline constexpr const char* kStreamVersion = "mt19937_64/splitmix64-v1";

std::mt19937_64 make_stream(std::uint64_t seed, Stream stream);

// Uniform on the open interval (0, 1) from the top 53 bits of one draw.
double open_unit(std::mt19937_64& rng);

// Laplace(location, scale) by inverse CDF from a single open_unit() draw.
// A zero scale returns the location exactly.
double sample_laplace(std::mt19937_64& rng, double location, double scale);

}  // namespace mehestan

#endif  // MEHESTAN_RANDOM_HPP_
