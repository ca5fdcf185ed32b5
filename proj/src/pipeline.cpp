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

#include "mehestan/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "mehestan/primitives.hpp"
#include "parallel.hpp"

namespace mehestan {

// ---------------------------------------------------------------------------
// SparseScoreMatrix

SparseScoreMatrix::SparseScoreMatrix(std::size_t num_voters,
                                     std::size_t num_alternatives)
    : num_alternatives_(num_alternatives), rows_(num_voters) {}

std::size_t SparseScoreMatrix::num_entries() const noexcept {
  std::size_t total = 0;
  for (const auto& r : rows_) total += r.size();
  return total;
}

void SparseScoreMatrix::set(std::size_t voter, std::size_t alternative,
                            double score) {
  if (voter >= rows_.size() || alternative >= num_alternatives_) {
    throw Error(ErrorCode::kInvalidInput, "score index out of range");
  }
  if (!std::isfinite(score)) {
    throw Error(ErrorCode::kInvalidInput, "scores must be finite");
  }
  auto& r = rows_[voter];
  auto it = std::lower_bound(
      r.begin(), r.end(), alternative,
      [](const Entry& e, std::size_t a) { return e.alternative < a; });
  if (it != r.end() && it->alternative == alternative) {
    throw Error(ErrorCode::kInvariantViolation,
                "duplicate score for voter " + std::to_string(voter) +
                    ", alternative " + std::to_string(alternative));
  }
  r.insert(it, Entry{alternative, score});
}

Score SparseScoreMatrix::get(std::size_t voter, std::size_t alternative) const {
  const auto& r = rows_.at(voter);
  auto it = std::lower_bound(
      r.begin(), r.end(), alternative,
      [](const Entry& e, std::size_t a) { return e.alternative < a; });
  if (it != r.end() && it->alternative == alternative) return it->score;
  return std::nullopt;
}

SparseScoreMatrix SparseScoreMatrix::from_dense(
    const std::vector<std::vector<Score>>& dense) {
  const std::size_t alternatives = dense.empty() ? 0 : dense.front().size();
  SparseScoreMatrix matrix(dense.size(), alternatives);
  for (std::size_t n = 0; n < dense.size(); ++n) {
    if (dense[n].size() != alternatives) {
      throw Error(ErrorCode::kInvalidInput, "ragged dense score table");
    }
    for (std::size_t a = 0; a < alternatives; ++a) {
      if (dense[n][a]) matrix.set(n, a, *dense[n][a]);
    }
  }
  return matrix;
}

void SparseScoreMatrix::set_row(std::size_t voter, std::vector<Entry> entries) {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].alternative >= num_alternatives_ ||
        (i > 0 && entries[i - 1].alternative >= entries[i].alternative)) {
      throw Error(ErrorCode::kInvalidInput, "row must be sorted and in range");
    }
  }
  rows_.at(voter) = std::move(entries);
}

std::vector<std::vector<std::size_t>> SparseScoreMatrix::voters_by_alternative()
    const {
  std::vector<std::vector<std::size_t>> by_alt(num_alternatives_);
  for (std::size_t n = 0; n < rows_.size(); ++n) {
    for (const Entry& e : rows_[n]) by_alt[e.alternative].push_back(n);
  }
  return by_alt;
}

bool operator==(const Entry& a, const Entry& b) {
  return a.alternative == b.alternative && a.score == b.score;
}

bool operator==(const SparseScoreMatrix& a, const SparseScoreMatrix& b) {
  return a.num_alternatives_ == b.num_alternatives_ && a.rows_ == b.rows_;
}

// ---------------------------------------------------------------------------
// Step 1: local normalization

std::vector<Score> minmax_normalize(std::span<const Score> scores) {
  double lo = 0.0;
  double hi = 0.0;
  bool any = false;
  for (const Score& s : scores) {
    if (!s) continue;
    lo = any ? std::min(lo, *s) : *s;
    hi = any ? std::max(hi, *s) : *s;
    any = true;
  }
  std::vector<Score> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!scores[i]) continue;
    out[i] = hi > lo ? (*scores[i] - lo) / (hi - lo) : 0.0;
  }
  return out;
}

std::vector<Entry> minmax_normalize(std::span<const Entry> row) {
  std::vector<Entry> out(row.begin(), row.end());
  if (out.empty()) return out;
  double lo = out.front().score;
  double hi = lo;
  for (const Entry& e : out) {
    lo = std::min(lo, e.score);
    hi = std::max(hi, e.score);
  }
  for (Entry& e : out) e.score = hi > lo ? (e.score - lo) / (hi - lo) : 0.0;
  return out;
}

SparseScoreMatrix minmax_normalize(const SparseScoreMatrix& matrix) {
  SparseScoreMatrix out(matrix.num_voters(), matrix.num_alternatives());
  for (std::size_t n = 0; n < matrix.num_voters(); ++n) {
    out.set_row(n, minmax_normalize(matrix.row(n)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Comparability

namespace {

struct CommonScore {
  double mine;
  double theirs;
};

// Scores both voters gave to their common alternatives, by alternative.
std::vector<CommonScore> common_scores(std::span<const Entry> mine,
                                       std::span<const Entry> theirs) {
  std::vector<CommonScore> out;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < mine.size() && j < theirs.size()) {
    if (mine[i].alternative < theirs[j].alternative) {
      ++i;
    } else if (theirs[j].alternative < mine[i].alternative) {
      ++j;
    } else {
      out.push_back({mine[i].score, theirs[j].score});
      ++i;
      ++j;
    }
  }
  return out;
}

// Peers (m != n) sharing at least one alternative with each voter, sorted.
std::vector<std::vector<std::size_t>> overlapping_peers(
    const SparseScoreMatrix& matrix) {
  const auto by_alt = matrix.voters_by_alternative();
  const std::size_t voters = matrix.num_voters();
  std::vector<std::vector<std::size_t>> peers(voters);
  std::vector<std::size_t> stamp(voters, voters);
  for (std::size_t n = 0; n < voters; ++n) {
    for (const Entry& e : matrix.row(n)) {
      for (const std::size_t m : by_alt[e.alternative]) {
        if (m == n || stamp[m] == n) continue;
        stamp[m] = n;
        peers[n].push_back(m);
      }
    }
    std::sort(peers[n].begin(), peers[n].end());
  }
  return peers;
}

// Ratio sums over C_nm, accumulated in (a, b) lexicographic order so the
// standalone and batched computations agree bit-for-bit.
struct ScalingSums {
  std::size_t pairs = 0;
  double forward = 0.0;   // sum |x_ma - x_mb| / |x_na - x_nb|
  double backward = 0.0;  // sum |x_na - x_nb| / |x_ma - x_mb|
};

ScalingSums scaling_sums(const std::vector<CommonScore>& common) {
  ScalingSums sums;
  for (std::size_t i = 0; i < common.size(); ++i) {
    for (std::size_t j = i + 1; j < common.size(); ++j) {
      const double mine = std::fabs(common[i].mine - common[j].mine);
      const double theirs = std::fabs(common[i].theirs - common[j].theirs);
      if (mine == 0.0 || theirs == 0.0) continue;
      ++sums.pairs;
      sums.forward += theirs / mine;
      sums.backward += mine / theirs;
    }
  }
  return sums;
}

std::size_t count_comparable_pairs(const std::vector<CommonScore>& common) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < common.size(); ++i) {
    for (std::size_t j = i + 1; j < common.size(); ++j) {
      if (common[i].mine != common[j].mine &&
          common[i].theirs != common[j].theirs) {
        ++count;
      }
    }
  }
  return count;
}

double translation_between(std::span<const Entry> mine, double my_scaling,
                           std::span<const Entry> theirs,
                           double their_scaling) {
  const auto common = common_scores(mine, theirs);
  if (common.empty()) {
    throw Error(ErrorCode::kNoCommonAlternatives,
                "voters share no alternative");
  }
  double sum = 0.0;
  for (const CommonScore& c : common) {
    sum += their_scaling * c.theirs - my_scaling * c.mine;
  }
  return sum / static_cast<double>(common.size());
}

std::vector<Vote> to_votes(std::span<const PeerValue> values,
                           std::span<const double> weights) {
  std::vector<Vote> votes;
  votes.reserve(values.size());
  for (const PeerValue& v : values) {
    const double w = weights[v.peer];
    if (w > 0.0) votes.push_back({w, v.value});
  }
  return votes;
}

void check_weights(std::span<const double> weights, std::size_t voters) {
  if (weights.size() != voters) {
    throw Error(ErrorCode::kInvalidInput,
                "expected " + std::to_string(voters) + " voting rights, got " +
                    std::to_string(weights.size()));
  }
  for (const double w : weights) {
    if (!std::isfinite(w) || w < 0.0) {
      throw Error(ErrorCode::kInvalidInput,
                  "voting rights must be finite and nonnegative");
    }
  }
}

}  // namespace

std::optional<PeerOverlap> ComparabilityIndex::overlap(std::size_t n,
                                                       std::size_t m) const {
  const auto& list = peers_.at(n);
  auto it = std::lower_bound(
      list.begin(), list.end(), m,
      [](const PeerOverlap& p, std::size_t v) { return p.peer < v; });
  if (it != list.end() && it->peer == m) return *it;
  return std::nullopt;
}

std::vector<std::size_t> ComparabilityIndex::scaling_peers(
    std::size_t voter) const {
  std::vector<std::size_t> out;
  for (const PeerOverlap& p : peers_.at(voter)) {
    if (p.comparable_pairs > 0) out.push_back(p.peer);
  }
  return out;
}

std::vector<std::size_t> ComparabilityIndex::translation_peers(
    std::size_t voter) const {
  std::vector<std::size_t> out;
  for (const PeerOverlap& p : peers_.at(voter)) out.push_back(p.peer);
  return out;
}

ComparabilityIndex build_comparability(const SparseScoreMatrix& matrix) {
  const auto peers = overlapping_peers(matrix);
  std::vector<std::vector<PeerOverlap>> index(matrix.num_voters());
  for (std::size_t n = 0; n < matrix.num_voters(); ++n) {
    index[n].reserve(peers[n].size());
    for (const std::size_t m : peers[n]) {
      const auto common = common_scores(matrix.row(n), matrix.row(m));
      index[n].push_back({m, common.size(), count_comparable_pairs(common)});
    }
  }
  return ComparabilityIndex(std::move(index));
}

// ---------------------------------------------------------------------------
// Steps 2 and 3

double comparative_scaling(std::size_t n, std::size_t m,
                           const SparseScoreMatrix& normalized) {
  const auto sums =
      scaling_sums(common_scores(normalized.row(n), normalized.row(m)));
  if (sums.pairs == 0) {
    throw Error(ErrorCode::kNoComparablePairs,
                "voters " + std::to_string(n) + " and " + std::to_string(m) +
                    " have no comparable pair of alternatives");
  }
  return sums.forward / static_cast<double>(sums.pairs);
}

double scaling_factor(std::span<const PeerValue> comparative_scalings,
                      std::span<const double> weights, Resilience L) {
  std::vector<PeerValue> shifted(comparative_scalings.begin(),
                                 comparative_scalings.end());
  for (PeerValue& v : shifted) v.value -= 1.0;
  return 1.0 + brmean(L.divided_by(7.0), to_votes(shifted, weights));
}

double comparative_translation(std::size_t n, std::size_t m,
                               const SparseScoreMatrix& normalized,
                               std::span<const double> scalings) {
  return translation_between(normalized.row(n), scalings[n], normalized.row(m),
                             scalings[m]);
}

double translation_factor(std::span<const PeerValue> comparative_translations,
                          std::span<const double> weights, Resilience L) {
  return brmean(L.divided_by(7.0), to_votes(comparative_translations, weights));
}

// ---------------------------------------------------------------------------
// PreparedInstance

PreparedInstance::PreparedInstance(const SparseScoreMatrix& matrix,
                                   unsigned threads)
    : normalized_(minmax_normalize(matrix)),
      peers_(overlapping_peers(normalized_)) {
  const std::size_t voters = normalized_.num_voters();
  const auto& peers = peers_;

  // Each unordered pair is visited once, from its smaller index.
  struct PairScaling {
    std::size_t peer;
    double forward;
    double backward;
  };
  std::vector<std::vector<PairScaling>> upper(voters);
  internal::parallel_for(voters, threads, [&](std::size_t n) {
    for (const std::size_t m : peers[n]) {
      if (m < n) continue;
      const auto sums =
          scaling_sums(common_scores(normalized_.row(n), normalized_.row(m)));
      if (sums.pairs == 0) continue;
      const double count = static_cast<double>(sums.pairs);
      upper[n].push_back({m, sums.forward / count, sums.backward / count});
    }
  });

  scalings_.resize(voters);
  for (std::size_t n = 0; n < voters; ++n) {
    for (const PairScaling& p : upper[n]) {
      scalings_[n].push_back({p.peer, p.forward});
      scalings_[p.peer].push_back({n, p.backward});
    }
  }

  self_comparable_.resize(voters, 0);
  for (std::size_t n = 0; n < voters; ++n) {
    const auto r = normalized_.row(n);
    for (const Entry& e : r) {
      if (e.score != r.front().score) {
        self_comparable_[n] = 1;
        break;
      }
    }
  }
}

namespace {

// Inserts the voter's own opinion (value) among its peer values, keeping the
// peer order.
std::vector<PeerValue> with_self(std::span<const PeerValue> peers,
                                 std::size_t self, double value) {
  std::vector<PeerValue> out;
  out.reserve(peers.size() + 1);
  bool inserted = false;
  for (const PeerValue& p : peers) {
    if (!inserted && p.peer > self) {
      out.push_back({self, value});
      inserted = true;
    }
    out.push_back(p);
  }
  if (!inserted) out.push_back({self, value});
  return out;
}

}  // namespace

AggregateResult PreparedInstance::aggregate(std::span<const double> weights,
                                            Resilience L,
                                            const AggregateOptions& options) const {
  const std::size_t voters = normalized_.num_voters();
  const std::size_t alternatives = normalized_.num_alternatives();
  check_weights(weights, voters);

  AggregateResult result;
  result.scalings.assign(voters, 1.0);
  result.translations.assign(voters, 0.0);

  // Step 2. G_n^s ranges over all voters, so a voter with two distinct
  // scores also votes s_nn = 1 for itself.
  internal::parallel_for(voters, options.threads, [&](std::size_t n) {
    const auto peers = comparative_scalings(n);
    if (self_comparable(n)) {
      result.scalings[n] = scaling_factor(with_self(peers, n, 1.0), weights, L);
    } else {
      result.scalings[n] = scaling_factor(peers, weights, L);
    }
  });

  // Step 3. Every voter with a nonempty row is translation-comparable to
  // itself with tau_nn = 0.
  const auto& peers = peers_;
  std::vector<std::vector<PeerValue>> translations(voters);
  internal::parallel_for(voters, options.threads, [&](std::size_t n) {
    auto& values = translations[n];
    values.reserve(peers[n].size());
    for (const std::size_t m : peers[n]) {
      values.push_back({m, comparative_translation(n, m, normalized_,
                                                   result.scalings)});
    }
    if (normalized_.row(n).empty()) return;
    result.translations[n] =
        translation_factor(with_self(values, n, 0.0), weights, L);
  });

  // Step 4.
  result.rescaled = SparseScoreMatrix(voters, alternatives);
  std::vector<std::vector<Vote>> columns(alternatives);
  for (std::size_t n = 0; n < voters; ++n) {
    std::vector<Entry> row(normalized_.row(n).begin(), normalized_.row(n).end());
    for (Entry& e : row) {
      e.score = result.scalings[n] * e.score + result.translations[n];
      if (weights[n] > 0.0) columns[e.alternative].push_back({weights[n], e.score});
    }
    result.rescaled.set_row(n, std::move(row));
  }
  result.global_scores.assign(alternatives, 0.0);
  const Resilience final_L = L.divided_by(7.0);
  internal::parallel_for(alternatives, options.threads, [&](std::size_t a) {
    result.global_scores[a] = qrmed(final_L, columns[a]);
  });

  if (options.keep_pairwise) {
    for (std::size_t n = 0; n < voters; ++n) {
      for (const PeerValue& p : scalings_[n]) {
        result.comparative_scalings.push_back({n, p.peer, p.value});
      }
      for (const PeerValue& p : translations[n]) {
        result.comparative_translations.push_back({n, p.peer, p.value});
      }
    }
  }
  return result;
}

AggregateResult aggregate(const SparseScoreMatrix& matrix,
                          std::span<const double> weights, Resilience L,
                          const AggregateOptions& options) {
  check_weights(weights, matrix.num_voters());
  return PreparedInstance(matrix, options.threads)
      .aggregate(weights, L, options);
}

UnanimityThreshold unanimity_threshold(std::span<const double> theta_star,
                                       Resilience L) {
  std::vector<double> values(theta_star.begin(), theta_star.end());
  for (const double v : values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidInput, "ground truth must be finite");
    }
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  if (values.size() < 2) {
    throw Error(ErrorCode::kDegenerateGroundTruth,
                "ground truth needs at least two distinct values");
  }
  double min_gap = values[1] - values[0];
  for (std::size_t i = 2; i < values.size(); ++i) {
    min_gap = std::min(min_gap, values[i] - values[i - 1]);
  }
  const double bound = (values.back() - values.front()) / min_gap;
  return {bound, L.is_infinite() ? 0.0 : 8.0 * bound * bound / L.value()};
}

}  // namespace mehestan
