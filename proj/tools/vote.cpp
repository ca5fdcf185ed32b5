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

// Command-line front end for the robust sparse voting library.
//
//   vote aggregate --scores FILE [--weights FILE] --L (VALUE|inf)
//                  [--dp-epsilon E --dp-seed S] [--polarization]
//                  [--diagnostics FILE] [--out FILE]
//   vote primitive (mean|med|qrmed|brmean|mrdist) [--L VALUE] [--w LIST]
//                  [--x LIST] [--z Z --mu MU --delta D --prior KIND]
//   vote simulate CONFIG --out DIR
//
// Exit codes:
//   0  success
//   1  other failure (I/O, internal)
//   2  usage, parse or config error
//   3  invariant violation (negative weight, duplicate cell)
//
// VOTE_THREADS caps the number of worker threads (0 or unset = all cores).

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "CLI11.hpp"
#include "mehestan/mehestan.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInvariant = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int report(mh_status status) {
  if (status == MH_OK) return kExitOk;
  // Parse messages already start with "line N:".
  std::fprintf(stderr, "vote: %s\n", mh_last_error());
  switch (status) {
    case MH_ERR_PARSE:
    case MH_ERR_CONFIG:
    case MH_ERR_INVALID_ARGUMENT:
      return kExitUsage;
    case MH_ERR_INVARIANT:
      return kExitInvariant;
    default:
      return kExitFailure;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_number(std::string_view text, const char* what) {
  text = trim(text);
  if (text == "inf" || text == "+inf") return HUGE_VAL;
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || text.empty() ||
      !std::isfinite(value)) {
    throw UsageError(std::string("invalid ") + what + ": '" + std::string(text) + "'");
  }
  return value;
}

double parse_resilience(const std::string& text) {
  return parse_number(text, "--L");
}

// Comma separated numbers; `_` marks an unreported score.
void parse_list(const std::string& text, const char* what, std::vector<double>& values,
                std::vector<unsigned char>* present) {
  if (trim(text).empty()) return;
  std::string_view rest(text);
  while (true) {
    const auto comma = rest.find(',');
    const std::string_view item = trim(rest.substr(0, comma));
    if (present != nullptr && item == "_") {
      values.push_back(0.0);
      present->push_back(0);
    } else {
      const double v = parse_number(item, what);
      if (std::isinf(v)) throw UsageError(std::string("invalid ") + what);
      values.push_back(v);
      if (present != nullptr) present->push_back(1);
    }
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
}

unsigned threads_from_env() {
  const char* value = std::getenv("VOTE_THREADS");
  if (value == nullptr || *value == '\0') return 0;
  unsigned threads = 0;
  const std::string_view text(value);
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), threads);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw UsageError("VOTE_THREADS must be a non-negative integer");
  }
  return threads;
}

std::string shortest(double value) {
  if (value == 0.0) return "0";
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, result.ptr);
}

void print_value(double value) { std::printf("%.17g\n", value); }

struct AggregateArgs {
  std::string scores;
  std::string weights;
  std::string L;
  std::optional<double> dp_epsilon;
  std::optional<std::uint64_t> dp_seed;
  bool polarization = false;
  std::string diagnostics;
  std::string out;
};

int print_results(const mh_dataset* dataset, const mh_result* result,
                  bool polarization) {
  const std::size_t count = mh_result_num_alternatives(result);
  std::vector<double> scores(count);
  std::vector<double> plus(count);
  std::vector<double> minus(count);
  if (const mh_status s = mh_result_scores(result, scores.data(), count); s != MH_OK) {
    return report(s);
  }
  if (polarization) {
    const mh_status s = mh_result_polarization(result, plus.data(), minus.data(), count);
    if (s != MH_OK) return report(s);
  }
  std::string text = polarization ? "alternative,score,psi_plus,psi_minus\n"
                                  : "alternative,score\n";
  for (std::size_t a = 0; a < count; ++a) {
    std::uint64_t id = 0;
    if (const mh_status s = mh_dataset_alternative_id(dataset, a, &id); s != MH_OK) {
      return report(s);
    }
    text += std::to_string(id) + "," + shortest(scores[a]);
    if (polarization) text += "," + shortest(plus[a]) + "," + shortest(minus[a]);
    text += "\n";
  }
  std::fputs(text.c_str(), stdout);
  return kExitOk;
}

int run_aggregate(const AggregateArgs& args) {
  const double L = parse_resilience(args.L);
  if (args.dp_seed && !args.dp_epsilon) {
    throw UsageError("--dp-seed requires --dp-epsilon");
  }

  mh_dataset* dataset = nullptr;
  mh_status status = mh_dataset_load(args.scores.c_str(),
                                     args.weights.empty() ? nullptr : args.weights.c_str(),
                                     &dataset);
  if (status != MH_OK) return report(status);

  mh_aggregate_options options;
  mh_aggregate_options_init(&options);
  options.threads = threads_from_env();
  options.polarization = args.polarization ? 1 : 0;
  if (args.dp_epsilon) {
    options.differential_privacy = 1;
    options.dp_epsilon = *args.dp_epsilon;
    options.dp_seed = args.dp_seed.value_or(0);
  }

  mh_result* result = nullptr;
  status = mh_aggregate(dataset, L, &options, &result);
  int code = report(status);
  if (code == kExitOk) {
    if (args.out.empty()) {
      code = print_results(dataset, result, args.polarization);
      if (code == kExitOk && !args.diagnostics.empty()) {
        code = report(
            mh_result_write(result, dataset, nullptr, args.diagnostics.c_str()));
      }
    } else {
      code = report(mh_result_write(
          result, dataset, args.out.c_str(),
          args.diagnostics.empty() ? nullptr : args.diagnostics.c_str()));
    }
  }
  mh_result_destroy(result);
  mh_dataset_destroy(dataset);
  return code;
}

struct PrimitiveArgs {
  std::string name;
  std::string L = "inf";
  std::string w;
  std::string x;
  std::optional<double> z;
  double mu = 0.0;
  double delta = 0.0;
  std::string prior = "laplace";
};

int run_primitive(const PrimitiveArgs& args) {
  double value = 0.0;
  mh_status status = MH_OK;

  if (args.name == "mrdist") {
    if (!args.z) throw UsageError("mrdist requires --z");
    mh_prior_kind kind;
    if (args.prior == "laplace") {
      kind = MH_PRIOR_LAPLACE;
    } else if (args.prior == "point") {
      kind = MH_PRIOR_POINT;
    } else {
      throw UsageError("--prior must be 'laplace' or 'point'");
    }
    status = mh_mrdist(*args.z, kind, args.mu, args.delta, &value);
  } else {
    std::vector<double> w;
    std::vector<double> x;
    std::vector<unsigned char> present;
    parse_list(args.w, "--w", w, nullptr);
    parse_list(args.x, "--x", x, &present);
    if (w.size() != x.size()) {
      throw UsageError("--w and --x must have the same number of entries");
    }
    const std::size_t n = w.size();
    if (args.name == "mean") {
      status = mh_mean(n, w.data(), x.data(), present.data(), &value);
    } else if (args.name == "med") {
      status = mh_median(n, w.data(), x.data(), present.data(), &value);
    } else if (args.name == "qrmed") {
      status = mh_qrmed(parse_resilience(args.L), n, w.data(), x.data(),
                        present.data(), &value);
    } else if (args.name == "brmean") {
      status = mh_brmean(parse_resilience(args.L), n, w.data(), x.data(),
                         present.data(), &value);
    } else {
      throw UsageError("unknown primitive '" + args.name + "'");
    }
  }
  if (status != MH_OK) return report(status);
  print_value(value);
  return kExitOk;
}

void print_progress(const char* line, void*) {
  std::printf("%s\n", line);
  std::fflush(stdout);
}

int run_simulate(const std::string& config, const std::string& out) {
  return report(mh_simulate(config.c_str(), out.c_str(), threads_from_env(),
                            print_progress, nullptr));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust sparse voting"};
  app.require_subcommand(1);

  AggregateArgs aggregate;
  auto* cmd_aggregate = app.add_subcommand("aggregate", "Aggregate a scores file");
  cmd_aggregate->add_option("--scores", aggregate.scores, "voter,alternative,score file")
      ->required();
  cmd_aggregate->add_option("--weights", aggregate.weights, "voter,weight file");
  cmd_aggregate->add_option("--L", aggregate.L, "Resilience (number or inf)")->required();
  cmd_aggregate->add_option("--dp-epsilon", aggregate.dp_epsilon,
                            "Add Laplace noise with this privacy budget");
  cmd_aggregate->add_option("--dp-seed", aggregate.dp_seed, "Noise seed");
  cmd_aggregate->add_flag("--polarization", aggregate.polarization,
                          "Add psi_plus,psi_minus columns");
  cmd_aggregate->add_option("--diagnostics", aggregate.diagnostics,
                            "Write voter,scaling,translation here");
  cmd_aggregate->add_option("--out", aggregate.out, "Result file (default stdout)");

  PrimitiveArgs primitive;
  auto* cmd_primitive = app.add_subcommand("primitive", "Evaluate one primitive");
  cmd_primitive->add_option("name", primitive.name, "mean, med, qrmed, brmean or mrdist")
      ->required();
  cmd_primitive->add_option("--L", primitive.L, "Resilience (number or inf)");
  cmd_primitive->add_option("--w", primitive.w, "Comma separated weights");
  cmd_primitive->add_option("--x", primitive.x, "Comma separated scores, _ = unreported");
  cmd_primitive->add_option("--z", primitive.z, "mrdist evaluation point");
  cmd_primitive->add_option("--mu", primitive.mu, "Prior location");
  cmd_primitive->add_option("--delta", primitive.delta, "Prior scale");
  cmd_primitive->add_option("--prior", primitive.prior, "laplace or point");

  std::string config;
  std::string out_dir;
  auto* cmd_simulate = app.add_subcommand("simulate", "Run a benchmark sweep");
  cmd_simulate->add_option("config", config, "Experiment config file")->required();
  cmd_simulate->add_option("--out", out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (cmd_aggregate->parsed()) return run_aggregate(aggregate);
    if (cmd_primitive->parsed()) return run_primitive(primitive);
    if (cmd_simulate->parsed()) return run_simulate(config, out_dir);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "vote: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
