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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "mehestan/mehestan.h"

namespace {

std::filesystem::path scratch() {
  const auto dir = std::filesystem::temp_directory_path() / "mehestan_test_c_api";
  std::filesystem::create_directories(dir);
  return dir;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path) << text;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::stringstream body;
  body << in.rdbuf();
  return body.str();
}

}  // namespace

TEST_CASE("version and scalar primitives") {
  CHECK(std::string(mh_version()) == "1.0.0");
  const double w[] = {1, 1, 1};
  const double x[] = {1, 2, 9};
  double out = -1;
  REQUIRE(mh_median(3, w, x, nullptr, &out) == MH_OK);
  CHECK(out == 2);
  REQUIRE(mh_mean(3, w, x, nullptr, &out) == MH_OK);
  CHECK(out == 4);
  const unsigned char present[] = {1, 0, 1};
  REQUIRE(mh_mean(3, w, x, present, &out) == MH_OK);
  CHECK(out == 5);
  const double one_w[] = {1};
  const double ten[] = {10};
  REQUIRE(mh_qrmed(1, 1, one_w, ten, nullptr, &out) == MH_OK);
  CHECK(out == doctest::Approx(1).epsilon(1e-9));
  REQUIRE(mh_qrmed(MH_L_INFINITE, 3, w, x, nullptr, &out) == MH_OK);
  CHECK(out == 2);
  REQUIRE(mh_clipped_mean(3, w, x, nullptr, 0, 2, &out) == MH_OK);
  CHECK(out == doctest::Approx(5.0 / 3.0));
  REQUIRE(mh_brmean(MH_L_INFINITE, 3, w, x, nullptr, &out) == MH_OK);
  CHECK(out == 4);
  REQUIRE(mh_brmean(1, 0, nullptr, nullptr, nullptr, &out) == MH_OK);
  CHECK(out == 0);
  REQUIRE(mh_mrdist(1, MH_PRIOR_LAPLACE, 0, 1, &out) == MH_OK);
  CHECK(out == doctest::Approx(1 + std::exp(-1.0)));
  const mh_prior_kind kinds[] = {MH_PRIOR_POINT};
  const double scales[] = {0};
  REQUIRE(mh_qrmed_uncertain(1, 1, one_w, kinds, ten, scales, &out) == MH_OK);
  CHECK(out == doctest::Approx(1).epsilon(1e-6));
}

TEST_CASE("invalid arguments set the status and last error") {
  const double w[] = {1};
  const double x[] = {1};
  double out = 0;
  CHECK(mh_qrmed(0, 1, w, x, nullptr, &out) == MH_ERR_INVALID_ARGUMENT);
  CHECK(std::string(mh_last_error()).find("L") != std::string::npos);
  CHECK(mh_median(1, w, x, nullptr, nullptr) == MH_ERR_INVALID_ARGUMENT);
  CHECK(mh_median(1, nullptr, x, nullptr, &out) == MH_ERR_INVALID_ARGUMENT);
  const double neg[] = {-1};
  CHECK(mh_median(1, neg, x, nullptr, &out) != MH_OK);
  CHECK(mh_mrdist(0, MH_PRIOR_LAPLACE, 0, 0, &out) == MH_ERR_INVALID_ARGUMENT);
  CHECK(mh_aggregate(nullptr, 1, nullptr, nullptr) == MH_ERR_INVALID_ARGUMENT);
}

TEST_CASE("building and aggregating a dataset") {
  mh_dataset* ds = nullptr;
  REQUIRE(mh_dataset_create(2, 3, &ds) == MH_OK);
  CHECK(mh_dataset_num_voters(ds) == 2);
  CHECK(mh_dataset_num_alternatives(ds) == 3);
  for (size_t n = 0; n < 2; ++n) {
    for (size_t a = 0; a < 3; ++a) {
      REQUIRE(mh_dataset_set_score(ds, n, a, static_cast<double>(a) * (n + 1)) == MH_OK);
    }
  }
  CHECK(mh_dataset_set_score(ds, 2, 0, 1) == MH_ERR_INVALID_ARGUMENT);
  CHECK(mh_dataset_set_score(ds, 0, 0, NAN) == MH_ERR_INVALID_ARGUMENT);
  CHECK(mh_dataset_set_weight(ds, 0, -1) == MH_ERR_INVARIANT);
  uint64_t id = 0;
  REQUIRE(mh_dataset_alternative_id(ds, 2, &id) == MH_OK);
  CHECK(id == 2);

  mh_result* result = nullptr;
  REQUIRE(mh_aggregate(ds, MH_L_INFINITE, nullptr, &result) == MH_OK);
  CHECK(mh_result_num_alternatives(result) == 3);
  CHECK(mh_result_num_voters(result) == 2);
  double scores[3];
  REQUIRE(mh_result_scores(result, scores, 3) == MH_OK);
  // Both voters normalize to [0, 0.5, 1].
  CHECK(scores[0] == doctest::Approx(0));
  CHECK(scores[1] == doctest::Approx(0.5));
  CHECK(scores[2] == doctest::Approx(1));
  double small[2];
  CHECK(mh_result_scores(result, small, 2) == MH_ERR_INVALID_ARGUMENT);
  double scalings[2];
  double translations[2];
  REQUIRE(mh_result_scalings(result, scalings, 2) == MH_OK);
  REQUIRE(mh_result_translations(result, translations, 2) == MH_OK);
  CHECK(scalings[0] == doctest::Approx(1));
  CHECK(translations[1] == doctest::Approx(0));
  double psi[3];
  CHECK(mh_result_polarization(result, psi, psi, 3) == MH_ERR_INVALID_ARGUMENT);
  mh_result_destroy(result);

  mh_aggregate_options options;
  mh_aggregate_options_init(&options);
  CHECK(options.differential_privacy == 0);
  CHECK(options.threads == 1);
  options.polarization = 1;
  options.threads = 2;
  REQUIRE(mh_aggregate(ds, 1, &options, &result) == MH_OK);
  double plus[3];
  double minus[3];
  REQUIRE(mh_result_polarization(result, plus, minus, 3) == MH_OK);
  for (int a = 0; a < 3; ++a) {
    CHECK(plus[a] >= 1);
    CHECK(minus[a] >= 1);
  }
  mh_result_destroy(result);

  options.differential_privacy = 1;
  options.dp_epsilon = 0;
  CHECK(mh_aggregate(ds, 1, &options, &result) == MH_ERR_INVALID_ARGUMENT);
  mh_dataset_destroy(ds);
  mh_dataset_destroy(nullptr);
  mh_result_destroy(nullptr);
}

TEST_CASE("differential privacy is reproducible per seed") {
  mh_dataset* ds = nullptr;
  REQUIRE(mh_dataset_create(3, 4, &ds) == MH_OK);
  for (size_t n = 0; n < 3; ++n) {
    for (size_t a = 0; a < 4; ++a) {
      REQUIRE(mh_dataset_set_score(ds, n, a, static_cast<double>(a + n)) == MH_OK);
    }
  }
  mh_aggregate_options options;
  mh_aggregate_options_init(&options);
  options.differential_privacy = 1;
  options.dp_epsilon = 1;
  auto run = [&](uint64_t seed) {
    options.dp_seed = seed;
    mh_result* result = nullptr;
    REQUIRE(mh_aggregate(ds, 1, &options, &result) == MH_OK);
    std::vector<double> s(4);
    REQUIRE(mh_result_scores(result, s.data(), 4) == MH_OK);
    mh_result_destroy(result);
    return s;
  };
  CHECK(run(5) == run(5));
  CHECK(run(5) != run(6));
  mh_dataset_destroy(ds);
}

TEST_CASE("file round trip and error statuses") {
  const auto dir = scratch();
  write_file(dir / "scores.csv", "voter,alternative,score\n3,20,0\n3,21,1\n4,20,5\n4,21,7\n");
  write_file(dir / "weights.csv", "voter,weight\n4,2\n");
  mh_dataset* ds = nullptr;
  REQUIRE(mh_dataset_load((dir / "scores.csv").c_str(), (dir / "weights.csv").c_str(), &ds) ==
          MH_OK);
  uint64_t id = 0;
  REQUIRE(mh_dataset_alternative_id(ds, 1, &id) == MH_OK);
  CHECK(id == 21);
  CHECK(mh_dataset_alternative_id(ds, 2, &id) == MH_ERR_INVALID_ARGUMENT);
  mh_result* result = nullptr;
  REQUIRE(mh_aggregate(ds, MH_L_INFINITE, nullptr, &result) == MH_OK);
  REQUIRE(mh_result_write(result, ds, (dir / "out.csv").c_str(), (dir / "diag.csv").c_str()) ==
          MH_OK);
  CHECK(read_file(dir / "out.csv") == "alternative,score\n20,0\n21,1\n");
  CHECK(read_file(dir / "diag.csv") == "voter,scaling,translation\n3,1,0\n4,1,0\n");
  REQUIRE(mh_result_write(result, ds, nullptr, nullptr) == MH_OK);
  mh_result_destroy(result);
  mh_dataset_destroy(ds);

  write_file(dir / "bad.csv", "voter,alternative,score\n1,1,1\n1,1,oops\n");
  CHECK(mh_dataset_load((dir / "bad.csv").c_str(), nullptr, &ds) == MH_ERR_PARSE);
  CHECK(mh_last_error_line() == 3);
  write_file(dir / "dup.csv", "voter,alternative,score\n1,1,1\n1,1,2\n");
  CHECK(mh_dataset_load((dir / "dup.csv").c_str(), nullptr, &ds) == MH_ERR_INVARIANT);
  CHECK(mh_last_error_line() == 0);
  CHECK(mh_dataset_load((dir / "missing.csv").c_str(), nullptr, &ds) == MH_ERR_IO);
  std::filesystem::remove_all(dir);
}

TEST_CASE("simulate writes both tables") {
  const auto dir = scratch();
  write_file(dir / "tiny.cfg",
             "N = 10\nA = 12\ndensity = 0.5\nL_values = 1\nseeds = 1-2\n");
  std::vector<std::string> lines;
  auto progress = [](const char* line, void* user) {
    static_cast<std::vector<std::string>*>(user)->push_back(line);
  };
  REQUIRE(mh_simulate((dir / "tiny.cfg").c_str(), (dir / "out").c_str(), 1, progress,
                      &lines) == MH_OK);
  CHECK(lines.size() == 1);
  const auto records = read_file(dir / "out" / "records.csv");
  CHECK(records.rfind("sweep_param,value,algorithm,L,seed,correlation\n", 0) == 0);
  CHECK(std::count(records.begin(), records.end(), '\n') == 1 + 2 * 3);
  CHECK(std::filesystem::exists(dir / "out" / "summary.csv"));
  write_file(dir / "bad.cfg", "density = 7\n");
  CHECK(mh_simulate((dir / "bad.cfg").c_str(), (dir / "out").c_str(), 1, nullptr, nullptr) ==
        MH_ERR_CONFIG);
  std::filesystem::remove_all(dir);
}
