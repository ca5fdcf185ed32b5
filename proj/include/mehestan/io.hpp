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

#ifndef MEHESTAN_IO_HPP_
#define MEHESTAN_IO_HPP_

// Text file formats.
//
//   scores     voter,alternative,score      one row per reported score
//   weights    voter,weight                 missing voters get weight 1
//   results    alternative,score[,psi_plus,psi_minus]
//   diagnostics voter,scaling,translation
//
// Ids are non-negative integers and need not be contiguous; they are
// compacted to dense indices in ascending id order. Decimals are written in
// the shortest form that round-trips.

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "mehestan/bench.hpp"
#include "mehestan/extensions.hpp"
#include "mehestan/pipeline.hpp"

namespace mehestan::io {

std::string format_shortest(double value);

struct ScoresTable {
  std::vector<std::uint64_t> voter_ids;        // dense index -> id
  std::vector<std::uint64_t> alternative_ids;  // dense index -> id
  SparseScoreMatrix matrix;
};

// Throws ParseError (with line number) on malformed input and kInvariantViolation
// on duplicate (voter, alternative) rows.
ScoresTable parse_scores(std::istream& in);
ScoresTable load_scores(const std::filesystem::path& path);
// Canonical text: header then rows sorted by (voter id, alternative id).
std::string serialize_scores(const ScoresTable& table);

// Voting rights indexed like table.voter_ids. Rows for voters absent from the
// table are ignored. Negative or duplicate rows are invariant violations.
std::vector<double> parse_weights(std::istream& in, const ScoresTable& table);
std::vector<double> load_weights(const std::filesystem::path& path,
                                 const ScoresTable& table);

std::string serialize_results(const ScoresTable& table,
                              const std::vector<double>& scores,
                              const PolarizationResult* polarization = nullptr);
std::string serialize_diagnostics(const ScoresTable& table,
                                  const AggregateResult& result);

// Writes to a temporary sibling and renames it over the target.
void write_atomically(const std::filesystem::path& path,
                      const std::string& content);

// `key = value` lines; '#' starts a comment. Lists are comma separated and
// integer seeds accept `a-b` ranges. Throws kConfig on any error.
bench::ExperimentConfig parse_config(std::istream& in);
bench::ExperimentConfig load_config(const std::filesystem::path& path);

std::string serialize_records(const bench::SweepReport& report);
std::string serialize_summary(const bench::SweepReport& report);

}  // namespace mehestan::io

namespace mehestan {
using io::format_shortest;
}

#endif  // MEHESTAN_IO_HPP_
