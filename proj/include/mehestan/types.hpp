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

#ifndef MEHESTAN_TYPES_HPP_
#define MEHESTAN_TYPES_HPP_

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mehestan {

// Stable error categories. The numeric values are mirrored by the C API
// status codes in mehestan.h.
enum class ErrorCode {
  kInvalidInput = 1,
  kParse = 2,
  kInvariantViolation = 3,
  kEmptyInput = 4,
  kIo = 5,
  kConfig = 6,
  kDegenerateGroundTruth = 7,
  kNoComparablePairs = 8,
  kNoCommonAlternatives = 9,
  kZeroVariance = 10,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Parse errors carry the 1-based line number of the offending input line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(ErrorCode::kParse,
              "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Resilience parameter L. Either a finite positive value or the infinite
// sentinel, which selects the unregularized (median / mean) limits.
class Resilience {
 public:
  explicit Resilience(double value) : value_(value) {
    if (std::isnan(value) || value <= 0.0) {
      throw Error(ErrorCode::kInvalidInput,
                  "resilience parameter L must be > 0 or infinite");
    }
  }
  static Resilience Infinite() {
    return Resilience(std::numeric_limits<double>::infinity());
  }

  double value() const noexcept { return value_; }
  bool is_infinite() const noexcept { return std::isinf(value_); }

  // L / divisor; the infinite sentinel is preserved.
  Resilience divided_by(double divisor) const {
    return is_infinite() ? *this : Resilience(value_ / divisor);
  }

  friend bool operator==(const Resilience&, const Resilience&) = default;

 private:
  double value_;
};

// One participating (weight, score) pair. Only voters with a reported score
// and a strictly positive weight are ever materialized as a Vote.
struct Vote {
  double weight;
  double score;
};

using Score = std::optional<double>;

// Weights plus optional scores, as handed in by callers. Validation and
// filtering to the participating set N* happen in participants().
struct WeightedScores {
  std::vector<double> weights;
  std::vector<Score> scores;

  // Throws kInvalidInput on mismatched lengths, negative or non-finite
  // weights, and non-finite scores.
  std::vector<Vote> participants() const;
};

double total_weight(std::span<const Vote> votes);

}  // namespace mehestan

#endif  // MEHESTAN_TYPES_HPP_
