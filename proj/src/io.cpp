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

#include "mehestan/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <system_error>
#include <utility>

#include <unistd.h>

namespace mehestan::io {

std::string format_shortest(double value) {
  if (value == 0.0) return "0";  // folds -0 as well
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep = ',') {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    fields.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

std::uint64_t parse_id(std::string_view field, std::size_t line,
                       const char* what) {
  std::uint64_t value = 0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || res.ec != std::errc() ||
      res.ptr != field.data() + field.size()) {
    throw ParseError(line, std::string("invalid ") + what + " id '" +
                               std::string(field) + "'");
  }
  return value;
}

double parse_decimal(std::string_view field, std::size_t line, const char* what) {
  double value = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || res.ec != std::errc() ||
      res.ptr != field.data() + field.size() || !std::isfinite(value)) {
    throw ParseError(line, std::string("invalid ") + what + " '" +
                               std::string(field) + "'");
  }
  return value;
}

// Reads non-blank lines, checks the header, and hands (line number, fields)
// of every data row to `row`.
template <typename RowFn>
void read_csv(std::istream& in, const std::vector<std::string_view>& header,
              RowFn&& row) {
  std::string text;
  std::size_t line_no = 0;
  bool seen_header = false;
  while (std::getline(in, text)) {
    ++line_no;
    const auto line = trim(text);
    if (line.empty()) continue;
    auto fields = split(line);
    if (!seen_header) {
      if (fields != header) {
        std::string expected;
        for (const auto& h : header) expected += (expected.empty() ? "" : ",") + std::string(h);
        throw ParseError(line_no, "expected header '" + expected + "'");
      }
      seen_header = true;
      continue;
    }
    if (fields.size() != header.size()) {
      throw ParseError(line_no, "expected " + std::to_string(header.size()) +
                                    " fields, got " + std::to_string(fields.size()));
    }
    row(line_no, fields);
  }
  if (!seen_header) throw ParseError(line_no + 1, "missing header");
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return in;
}

std::size_t index_of(const std::vector<std::uint64_t>& ids, std::uint64_t id) {
  return static_cast<std::size_t>(
      std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
}

}  // namespace

ScoresTable parse_scores(std::istream& in) {
  struct Row {
    std::uint64_t voter;
    std::uint64_t alternative;
    double score;
  };
  std::vector<Row> rows;
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::size_t> seen;
  read_csv(in, {"voter", "alternative", "score"},
           [&](std::size_t line, const std::vector<std::string_view>& f) {
             Row r{parse_id(f[0], line, "voter"), parse_id(f[1], line, "alternative"),
                   parse_decimal(f[2], line, "score")};
             const auto [it, fresh] = seen.emplace(std::pair{r.voter, r.alternative}, line);
             if (!fresh) {
               throw Error(ErrorCode::kInvariantViolation,
                           "line " + std::to_string(line) + ": duplicate score for voter " +
                               std::to_string(r.voter) + ", alternative " +
                               std::to_string(r.alternative) + " (first on line " +
                               std::to_string(it->second) + ")");
             }
             rows.push_back(r);
           });

  ScoresTable table;
  std::set<std::uint64_t> voters;
  std::set<std::uint64_t> alternatives;
  for (const Row& r : rows) {
    voters.insert(r.voter);
    alternatives.insert(r.alternative);
  }
  table.voter_ids.assign(voters.begin(), voters.end());
  table.alternative_ids.assign(alternatives.begin(), alternatives.end());
  table.matrix = SparseScoreMatrix(table.voter_ids.size(), table.alternative_ids.size());
  for (const Row& r : rows) {
    table.matrix.set(index_of(table.voter_ids, r.voter),
                     index_of(table.alternative_ids, r.alternative), r.score);
  }
  return table;
}

ScoresTable load_scores(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_scores(in);
}

std::string serialize_scores(const ScoresTable& table) {
  std::string out = "voter,alternative,score\n";
  for (std::size_t n = 0; n < table.matrix.num_voters(); ++n) {
    for (const Entry& e : table.matrix.row(n)) {
      out += std::to_string(table.voter_ids[n]);
      out += ',';
      out += std::to_string(table.alternative_ids[e.alternative]);
      out += ',';
      out += format_shortest(e.score);
      out += '\n';
    }
  }
  return out;
}

std::vector<double> parse_weights(std::istream& in, const ScoresTable& table) {
  std::vector<double> weights(table.voter_ids.size(), 1.0);
  std::map<std::uint64_t, std::size_t> seen;
  read_csv(in, {"voter", "weight"},
           [&](std::size_t line, const std::vector<std::string_view>& f) {
             const std::uint64_t voter = parse_id(f[0], line, "voter");
             const double weight = parse_decimal(f[1], line, "weight");
             if (weight < 0.0) {
               throw Error(ErrorCode::kInvariantViolation,
                           "line " + std::to_string(line) + ": negative weight for voter " +
                               std::to_string(voter));
             }
             if (!seen.emplace(voter, line).second) {
               throw Error(ErrorCode::kInvariantViolation,
                           "line " + std::to_string(line) +
                               ": duplicate weight for voter " + std::to_string(voter));
             }
             const std::size_t n = index_of(table.voter_ids, voter);
             if (n < table.voter_ids.size() && table.voter_ids[n] == voter) {
               weights[n] = weight;
             }
           });
  return weights;
}

std::vector<double> load_weights(const std::filesystem::path& path,
                                 const ScoresTable& table) {
  auto in = open_input(path);
  return parse_weights(in, table);
}

std::string serialize_results(const ScoresTable& table,
                              const std::vector<double>& scores,
                              const PolarizationResult* polarization) {
  std::string out = polarization ? "alternative,score,psi_plus,psi_minus\n"
                                 : "alternative,score\n";
  for (std::size_t a = 0; a < scores.size(); ++a) {
    out += std::to_string(table.alternative_ids[a]);
    out += ',';
    out += format_shortest(scores[a]);
    if (polarization) {
      out += ',';
      out += format_shortest(polarization->alternatives[a].psi_plus);
      out += ',';
      out += format_shortest(polarization->alternatives[a].psi_minus);
    }
    out += '\n';
  }
  return out;
}

std::string serialize_diagnostics(const ScoresTable& table,
                                  const AggregateResult& result) {
  std::string out = "voter,scaling,translation\n";
  for (std::size_t n = 0; n < result.scalings.size(); ++n) {
    out += std::to_string(table.voter_ids[n]);
    out += ',';
    out += format_shortest(result.scalings[n]);
    out += ',';
    out += format_shortest(result.translations[n]);
    out += '\n';
  }
  return out;
}

void write_atomically(const std::filesystem::path& path,
                      const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::kIo, "cannot move output into place at " + path.string());
  }
}

// ---------------------------------------------------------------------------
// Experiment configs

namespace {

[[noreturn]] void config_error(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::kConfig, "config line " + std::to_string(line) + ": " + what);
}

double config_double(std::string_view s, std::size_t line) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size() ||
      !std::isfinite(v)) {
    config_error(line, "invalid number '" + std::string(s) + "'");
  }
  return v;
}

std::uint64_t config_uint(std::string_view s, std::size_t line) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    config_error(line, "invalid integer '" + std::string(s) + "'");
  }
  return v;
}

std::vector<double> config_doubles(std::string_view s, std::size_t line) {
  std::vector<double> out;
  for (const auto f : split(s)) out.push_back(config_double(f, line));
  return out;
}

}  // namespace

bench::ExperimentConfig parse_config(std::istream& in) {
  using namespace bench;
  ExperimentConfig config;
  std::map<std::string, std::size_t> seen;
  std::vector<double> density{config.density};
  std::vector<double> malicious{config.p_malicious};
  std::vector<double> extreme{config.extreme};
  std::optional<SweepParam> sweep;

  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    std::string_view line = text;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) config_error(line_no, "expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (!seen.emplace(key, line_no).second) config_error(line_no, "duplicate key " + key);

    if (key == "N") {
      config.voters = config_uint(value, line_no);
    } else if (key == "A") {
      config.alternatives = config_uint(value, line_no);
    } else if (key == "density") {
      density = config_doubles(value, line_no);
    } else if (key == "p_malicious") {
      malicious = config_doubles(value, line_no);
    } else if (key == "extreme") {
      extreme = config_doubles(value, line_no);
    } else if (key == "bias_top_fraction") {
      config.bias_top_fraction = config_double(value, line_no);
    } else if (key == "bias_mode") {
      if (value == "remove") {
        config.bias_mode = BiasMode::kRemove;
      } else if (value == "extreme") {
        config.bias_mode = BiasMode::kExtreme;
      } else {
        config_error(line_no, "bias_mode must be remove or extreme");
      }
    } else if (key == "L_values") {
      config.l_values.clear();
      for (const auto f : split(value)) {
        if (f == "inf") {
          config.l_values.push_back(Resilience::Infinite());
          continue;
        }
        const double l = config_double(f, line_no);
        if (!(l > 0.0)) config_error(line_no, "L values must be > 0 or inf");
        config.l_values.emplace_back(l);
      }
    } else if (key == "theta_distribution") {
      if (value == "gaussian") {
        config.theta_distribution = ThetaDistribution::kGaussian;
      } else if (value == "uniform") {
        config.theta_distribution = ThetaDistribution::kUniform;
      } else if (value == "cauchy") {
        config.theta_distribution = ThetaDistribution::kCauchy;
      } else {
        config_error(line_no, "theta_distribution must be gaussian, uniform or cauchy");
      }
    } else if (key == "seeds") {
      config.seeds.clear();
      for (const auto f : split(value)) {
        const auto dash = f.find('-');
        if (dash == std::string_view::npos) {
          config.seeds.push_back(config_uint(f, line_no));
          continue;
        }
        const auto first = config_uint(trim(f.substr(0, dash)), line_no);
        const auto last = config_uint(trim(f.substr(dash + 1)), line_no);
        if (last < first) config_error(line_no, "empty seed range");
        for (auto s = first; s <= last; ++s) config.seeds.push_back(s);
      }
    } else if (key == "algorithms") {
      config.algorithms.clear();
      for (const auto f : split(value)) {
        if (f == "median") {
          config.algorithms.push_back(Algorithm::kMedian);
        } else if (f == "minmax_median") {
          config.algorithms.push_back(Algorithm::kMinMaxMedian);
        } else if (f == "mehestan") {
          config.algorithms.push_back(Algorithm::kMehestan);
        } else {
          config_error(line_no, "unknown algorithm '" + std::string(f) + "'");
        }
      }
    } else if (key == "sweep") {
      if (value == "density") {
        sweep = SweepParam::kDensity;
      } else if (value == "p_malicious") {
        sweep = SweepParam::kMaliciousFraction;
      } else if (value == "extreme") {
        sweep = SweepParam::kExtreme;
      } else {
        config_error(line_no, "sweep must be density, p_malicious or extreme");
      }
    } else {
      config_error(line_no, "unknown key " + key);
    }
  }

  // The swept parameter is either named explicitly or the one list-valued
  // parameter.
  const std::pair<SweepParam, std::vector<double>*> candidates[] = {
      {SweepParam::kDensity, &density},
      {SweepParam::kMaliciousFraction, &malicious},
      {SweepParam::kExtreme, &extreme}};
  if (!sweep) {
    for (const auto& [param, values] : candidates) {
      if (values->size() > 1) {
        if (sweep) config_error(line_no, "only one parameter may be swept");
        sweep = param;
      }
    }
  }
  config.sweep = sweep.value_or(SweepParam::kDensity);
  for (const auto& [param, values] : candidates) {
    if (param == config.sweep) {
      config.sweep_values = *values;
    } else if (values->size() != 1) {
      config_error(line_no, "only the swept parameter may hold a list");
    }
  }
  config.density = density.front();
  config.p_malicious = malicious.front();
  config.extreme = extreme.front();
  config.validate();
  return config;
}

bench::ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfig, "cannot open config " + path.string());
  return parse_config(in);
}

std::string serialize_records(const bench::SweepReport& report) {
  std::string out = "sweep_param,value,algorithm,L,seed,correlation\n";
  for (const auto& r : report.records) {
    out += bench::to_string(r.param) + ',' + format_shortest(r.value) + ',' +
           bench::to_string(r.algorithm) + ',' + bench::format_resilience(r.L) +
           ',' + std::to_string(r.seed) + ',' + format_shortest(r.correlation) + '\n';
  }
  return out;
}

std::string serialize_summary(const bench::SweepReport& report) {
  std::string out = "sweep_param,value,algorithm,L,seeds,mean,ci_low,ci_high\n";
  for (const auto& s : report.summary) {
    out += bench::to_string(s.param) + ',' + format_shortest(s.value) + ',' +
           bench::to_string(s.algorithm) + ',' + bench::format_resilience(s.L) +
           ',' + std::to_string(s.seeds) + ',' + format_shortest(s.mean) + ',' +
           format_shortest(s.ci_low) + ',' + format_shortest(s.ci_high) + '\n';
  }
  return out;
}

}  // namespace mehestan::io
