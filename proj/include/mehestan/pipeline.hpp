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

#ifndef MEHESTAN_PIPELINE_HPP_
#define MEHESTAN_PIPELINE_HPP_

// The four-step robust sparse voting pipeline:
//   1. per-voter min-max normalization,
//   2. collaborative scaling search (BrMean at L/7 over comparative scalings),
//   3. collaborative translation search (BrMean at L/7 over comparative
//      translations),
//   4. alternative-wise QrMed at L/7 over the rescaled scores.
//
// Voters are dense indices [0, N), alternatives dense indices [0, A).

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mehestan/types.hpp"

namespace mehestan {

struct Entry {
  std::size_t alternative;
  double score;
};

// Per-voter sparse rows, each sorted by alternative index. Unreported
// (voter, alternative) pairs are simply absent.
class SparseScoreMatrix {
 public:
  SparseScoreMatrix() = default;
  SparseScoreMatrix(std::size_t num_voters, std::size_t num_alternatives);

  std::size_t num_voters() const noexcept { return rows_.size(); }
  std::size_t num_alternatives() const noexcept { return num_alternatives_; }
  std::size_t num_entries() const noexcept;

  // Throws kInvalidInput for out-of-range indices or non-finite scores and
  // kInvariantViolation when the cell is already set.
  void set(std::size_t voter, std::size_t alternative, double score);
  Score get(std::size_t voter, std::size_t alternative) const;

  std::span<const Entry> row(std::size_t voter) const { return rows_[voter]; }

  // Builds a matrix from a dense table where absent entries are nullopt.
  static SparseScoreMatrix from_dense(
      const std::vector<std::vector<Score>>& dense);

  // Row-wise replacement, used to build derived matrices with the same
  // support. The row must be sorted by alternative and in range.
  void set_row(std::size_t voter, std::vector<Entry> entries);

  // voters_by_alternative()[a] lists the voters who scored a, ascending.
  std::vector<std::vector<std::size_t>> voters_by_alternative() const;

  friend bool operator==(const SparseScoreMatrix&, const SparseScoreMatrix&);

 private:
  std::size_t num_alternatives_ = 0;
  std::vector<std::vector<Entry>> rows_;
};

bool operator==(const Entry& a, const Entry& b);

// Min-max normalization of one voter's optional scores: min -> 0, max -> 1.
// Fewer than two distinct reported values maps every reported entry to 0.
std::vector<Score> minmax_normalize(std::span<const Score> scores);
std::vector<Entry> minmax_normalize(std::span<const Entry> row);
SparseScoreMatrix minmax_normalize(const SparseScoreMatrix& matrix);

// Pairwise overlap between voter n and another voter m != n.
struct PeerOverlap {
  std::size_t peer;
  std::size_t common_alternatives;  // |A_nm|
  std::size_t comparable_pairs;     // |C_nm|
};

// For each voter, the peers it shares at least one alternative with, sorted
// by peer index. Self-pairs are not indexed.
class ComparabilityIndex {
 public:
  explicit ComparabilityIndex(std::vector<std::vector<PeerOverlap>> peers)
      : peers_(std::move(peers)) {}

  std::size_t num_voters() const noexcept { return peers_.size(); }
  std::span<const PeerOverlap> peers(std::size_t voter) const {
    return peers_[voter];
  }
  // Nullopt when the two voters share no alternative.
  std::optional<PeerOverlap> overlap(std::size_t n, std::size_t m) const;

  // G_n^s: peers with a nonempty C_nm.
  std::vector<std::size_t> scaling_peers(std::size_t voter) const;
  // G_n^tau: peers with a nonempty A_nm.
  std::vector<std::size_t> translation_peers(std::size_t voter) const;

 private:
  std::vector<std::vector<PeerOverlap>> peers_;
};

ComparabilityIndex build_comparability(const SparseScoreMatrix& matrix);

// s_nm: mean over C_nm of |x_ma - x_mb| / |x_na - x_nb| on the normalized
// matrix. Throws kNoComparablePairs when C_nm is empty.
double comparative_scaling(std::size_t n, std::size_t m,
                           const SparseScoreMatrix& normalized);

// One comparable peer's opinion on a voter's scaling or translation.
struct PeerValue {
  std::size_t peer;
  double value;
};

// s_n = 1 + BrMean_{L/7}({(w_m, s_nm - 1)}). The caller passes the values it
// wants aggregated (the pipeline includes the voter itself with s_nn = 1).
double scaling_factor(std::span<const PeerValue> comparative_scalings,
                      std::span<const double> weights, Resilience L);

// tau_nm: mean over A_nm of (s_m x_ma - s_n x_na). Throws
// kNoCommonAlternatives when A_nm is empty.
double comparative_translation(std::size_t n, std::size_t m,
                               const SparseScoreMatrix& normalized,
                               std::span<const double> scalings);

// tau_n = BrMean_{L/7}({(w_m, tau_nm)}).
double translation_factor(std::span<const PeerValue> comparative_translations,
                          std::span<const double> weights, Resilience L);

struct PairDiagnostic {
  std::size_t voter;
  std::size_t peer;
  double value;
};

struct AggregateResult {
  std::vector<double> global_scores;  // one per alternative
  std::vector<double> scalings;       // s_n
  std::vector<double> translations;   // tau_n
  // s_n * normalized + tau_n on the input support.
  SparseScoreMatrix rescaled;
  // Filled only when AggregateOptions::keep_pairwise is set; ordered by
  // (voter, peer) and excluding self-pairs.
  std::vector<PairDiagnostic> comparative_scalings;
  std::vector<PairDiagnostic> comparative_translations;
};

struct AggregateOptions {
  bool keep_pairwise = false;
  // 0 picks the hardware concurrency.
  unsigned threads = 1;
};

// L-independent part of the pipeline: normalization and all comparative
// scalings. Reusable across several resilience values.
class PreparedInstance {
 public:
  explicit PreparedInstance(const SparseScoreMatrix& matrix,
                            unsigned threads = 1);

  const SparseScoreMatrix& normalized() const noexcept { return normalized_; }
  // Comparative scalings of voter n against every m != n with C_nm nonempty,
  // sorted by peer.
  std::span<const PeerValue> comparative_scalings(std::size_t voter) const {
    return scalings_[voter];
  }
  bool self_comparable(std::size_t voter) const {
    return self_comparable_[voter] != 0;
  }

  AggregateResult aggregate(std::span<const double> weights, Resilience L,
                            const AggregateOptions& options = {}) const;

 private:
  SparseScoreMatrix normalized_;
  std::vector<std::vector<std::size_t>> peers_;
  std::vector<std::vector<PeerValue>> scalings_;
  std::vector<char> self_comparable_;
};

// Runs the whole pipeline. Throws kInvalidInput when the weight vector has
// the wrong length or holds negative / non-finite values.
AggregateResult aggregate(const SparseScoreMatrix& matrix,
                          std::span<const double> weights, Resilience L,
                          const AggregateOptions& options = {});

struct UnanimityThreshold {
  double scaling_bound;  // max gap / min nonzero gap of theta*
  double min_voters;     // N0 = 8 * scaling_bound^2 / L
};

// Throws kDegenerateGroundTruth when theta* has fewer than two distinct
// values.
UnanimityThreshold unanimity_threshold(std::span<const double> theta_star,
                                       Resilience L);

}  // namespace mehestan

#endif  // MEHESTAN_PIPELINE_HPP_
