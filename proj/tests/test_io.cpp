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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "mehestan/io.hpp"

using mehestan::ErrorCode;
using mehestan::ParseError;
using mehestan::Resilience;
using namespace mehestan::io;
namespace bench = mehestan::bench;

namespace {

ScoresTable scores_from(const std::string& text) {
  std::istringstream in(text);
  return parse_scores(in);
}

std::vector<double> weights_from(const std::string& text, const ScoresTable& table) {
  std::istringstream in(text);
  return parse_weights(in, table);
}

bench::ExperimentConfig config_from(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

std::size_t parse_line(const std::string& text) {
  try {
    scores_from(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  FAIL("expected a parse error");
  return 0;
}

template <typename Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const mehestan::Error& e) {
    return e.code();
  }
  FAIL("expected an exception");
  return ErrorCode::kInvalidInput;
}

}  // namespace

TEST_CASE("shortest decimal formatting") {
  CHECK(format_shortest(0.1) == "0.1");
  CHECK(format_shortest(1.0) == "1");
  CHECK(format_shortest(-0.0) == "0");
  CHECK(format_shortest(1.0 / 3.0) == "0.3333333333333333");
  CHECK(std::stod(format_shortest(2.0 / 3.0)) == 2.0 / 3.0);
}

TEST_CASE("scores round-trip through the canonical form") {
  const std::string text =
      "voter, alternative, score\n"
      "\n"
      "7,30,1.5\n"
      "2,10,-4\n"
      "7,10,0.25\n"
      "2,30,1e-3\n";
  const auto table = scores_from(text);
  CHECK(table.voter_ids == std::vector<std::uint64_t>{2, 7});
  CHECK(table.alternative_ids == std::vector<std::uint64_t>{10, 30});
  CHECK(table.matrix.get(0, 0) == -4.0);
  CHECK(table.matrix.get(1, 1) == 1.5);
  const std::string canonical =
      "voter,alternative,score\n"
      "2,10,-4\n"
      "2,30,0.001\n"
      "7,10,0.25\n"
      "7,30,1.5\n";
  CHECK(serialize_scores(table) == canonical);
  CHECK(serialize_scores(scores_from(canonical)) == canonical);
}

TEST_CASE("malformed scores report the offending line") {
  CHECK(parse_line("voter,alternative,score\n1,2,x\n") == 2);
  CHECK(parse_line("voter,alternative,score\n1,2,3\n\n1,2\n") == 4);
  CHECK(parse_line("voter,alternative,score\n1,2,nan\n") == 2);
  CHECK(parse_line("voter,alternative,score\n1,2,inf\n") == 2);
  CHECK(parse_line("voter,alternative,score\n-1,2,3\n") == 2);
  CHECK(parse_line("voter,alternative,score\n1,2,3,4\n") == 2);
  CHECK(parse_line("voter,score,alternative\n") == 1);
  CHECK(parse_line("") == 1);
}

TEST_CASE("duplicate scores are invariant violations") {
  try {
    scores_from("voter,alternative,score\n1,2,3\n1,2,4\n");
    FAIL("expected an exception");
  } catch (const mehestan::Error& e) {
    CHECK(e.code() == ErrorCode::kInvariantViolation);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("weights") {
  const auto table = scores_from("voter,alternative,score\n4,0,1\n9,0,2\n12,0,3\n");
  CHECK(weights_from("voter,weight\n", table) == std::vector<double>{1, 1, 1});
  CHECK(weights_from("voter,weight\n9,2.5\n100,7\n", table) ==
        std::vector<double>{1, 2.5, 1});
  CHECK(weights_from("voter,weight\n12,0\n", table) == std::vector<double>{1, 1, 0});
  CHECK(code_of([&] { weights_from("voter,weight\n4,-1\n", table); }) ==
        ErrorCode::kInvariantViolation);
  CHECK(code_of([&] { weights_from("voter,weight\n4,1\n4,2\n", table); }) ==
        ErrorCode::kInvariantViolation);
  CHECK(code_of([&] { weights_from("voter,w\n", table); }) == ErrorCode::kParse);
}

TEST_CASE("results and diagnostics use the original ids") {
  const auto table = scores_from("voter,alternative,score\n5,40,1\n8,41,2\n");
  CHECK(serialize_results(table, {0.5, -2.0}) == "alternative,score\n40,0.5\n41,-2\n");
  mehestan::PolarizationResult pol;
  pol.alternatives.resize(2);
  pol.alternatives[0].psi_plus = 1.25;
  pol.alternatives[0].psi_minus = 1;
  pol.alternatives[1].psi_plus = 1;
  pol.alternatives[1].psi_minus = 3;
  CHECK(serialize_results(table, {0.5, -2.0}, &pol) ==
        "alternative,score,psi_plus,psi_minus\n40,0.5,1.25,1\n41,-2,1,3\n");
  mehestan::AggregateResult result;
  result.scalings = {1.0, 0.75};
  result.translations = {0.0, -0.125};
  CHECK(serialize_diagnostics(table, result) ==
        "voter,scaling,translation\n5,1,0\n8,0.75,-0.125\n");
}

TEST_CASE("atomic writes replace the target") {
  const auto dir = std::filesystem::temp_directory_path() / "mehestan_test_io";
  std::filesystem::create_directories(dir);
  const auto path = dir / "out.csv";
  write_atomically(path, "first\n");
  write_atomically(path, "second\n");
  std::ifstream in(path);
  std::stringstream body;
  body << in.rdbuf();
  CHECK(body.str() == "second\n");
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++files;
  CHECK(files == 1);
  CHECK(code_of([&] { write_atomically(dir / "missing" / "x.csv", "x"); }) ==
        ErrorCode::kIo);
  std::filesystem::remove_all(dir);
}

TEST_CASE("config parsing") {
  const auto c = config_from(
      "# comment\n"
      "N = 50\n"
      "A = 60   # trailing comment\n"
      "density = 0.1, 0.2,0.3\n"
      "p_malicious = 0.05\n"
      "bias_top_fraction = 0.25\n"
      "L_values = 0.1, inf\n"
      "theta_distribution = uniform\n"
      "seeds = 1-3, 10\n"
      "algorithms = median, mehestan\n");
  CHECK(c.voters == 50);
  CHECK(c.alternatives == 60);
  CHECK(c.sweep == bench::SweepParam::kDensity);
  CHECK(c.sweep_values == std::vector<double>{0.1, 0.2, 0.3});
  CHECK(c.p_malicious == 0.05);
  CHECK(c.bias_top_fraction == 0.25);
  CHECK(c.l_values == std::vector<Resilience>{Resilience(0.1), Resilience::Infinite()});
  CHECK(c.theta_distribution == bench::ThetaDistribution::kUniform);
  CHECK(c.seeds == std::vector<std::uint64_t>{1, 2, 3, 10});
  CHECK(c.algorithms ==
        std::vector<bench::Algorithm>{bench::Algorithm::kMedian, bench::Algorithm::kMehestan});

  const auto m = config_from("p_malicious = 0, 0.5\nbias_mode = extreme\nextreme = 0.4\n");
  CHECK(m.sweep == bench::SweepParam::kMaliciousFraction);
  CHECK(m.sweep_values == std::vector<double>{0, 0.5});
  CHECK(m.bias_mode == bench::BiasMode::kExtreme);
  CHECK(m.extreme == 0.4);

  const auto single = config_from("density = 0.4\n");
  CHECK(single.sweep == bench::SweepParam::kDensity);
  CHECK(single.sweep_values == std::vector<double>{0.4});
}

TEST_CASE("config errors") {
  const char* bad[] = {
      "N = ten\n",
      "N = 5\nN = 6\n",
      "colour = red\n",
      "no equals sign\n",
      "density = 0.1,0.2\np_malicious = 0,0.1\n",
      "sweep = density\np_malicious = 0,0.1\n",
      "L_values = 0\n",
      "seeds = 5-2\n",
      "algorithms = mean\n",
      "bias_mode = sideways\n",
      "density = 2\n",
      "theta_distribution = poisson\n",
  };
  for (const char* text : bad) {
    CAPTURE(text);
    CHECK(code_of([&] { config_from(text); }) == ErrorCode::kConfig);
  }
  CHECK(code_of([] { load_config("/nonexistent/config.cfg"); }) == ErrorCode::kConfig);
}

TEST_CASE("bundled configs load") {
  const std::filesystem::path root = MEHESTAN_SOURCE_DIR;
  const auto a = load_config(root / "configs" / "density_sweep.cfg");
  CHECK(a.sweep == bench::SweepParam::kDensity);
  CHECK(a.seeds.size() == 20);
  const auto b = load_config(root / "configs" / "malicious_sweep.cfg");
  CHECK(b.sweep == bench::SweepParam::kMaliciousFraction);
  CHECK(load_config(root / "configs" / "smoke.cfg").seeds.size() == 1);
}

TEST_CASE("sweep tables") {
  bench::SweepReport report;
  report.records.push_back({bench::SweepParam::kDensity, 0.1, bench::Algorithm::kMehestan,
                            Resilience(0.1), 3, 0.5});
  report.summary.push_back({bench::SweepParam::kDensity, 0.1, bench::Algorithm::kMedian,
                            std::nullopt, 2, 0.25, 0.125, 0.375});
  CHECK(serialize_records(report) ==
        "sweep_param,value,algorithm,L,seed,correlation\ndensity,0.1,mehestan,0.1,3,0.5\n");
  CHECK(serialize_summary(report) ==
        "sweep_param,value,algorithm,L,seeds,mean,ci_low,ci_high\n"
        "density,0.1,median,,2,0.25,0.125,0.375\n");
}
