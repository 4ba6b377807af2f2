/*
 * Copyright 2026 The frechet-forest Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FRECHET_CLI_HPP_
#define FRECHET_CLI_HPP_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "frechet/regressors.hpp"
#include "frechet/simgen.hpp"

namespace frechet {

// Usage problem: unknown command, missing path or seed.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;  // fit | predict | tune | simulate | bench-table
  MetricSpace space;
  EstimatorSpec estimator;
  std::string x_path;
  std::string y_path;
  bool header = false;
  // fit: store training data inside the model rather than by reference.
  bool embed_data = true;
  std::string model_path;
  std::string query_path;
  std::string output;
  // Mandatory for every command that draws random numbers.
  std::optional<std::uint64_t> seed;
  int threads = 0;
  int folds = 5;
  std::vector<TuningCell> grid;  // empty: default grid
  SimSetting simulation;
  std::vector<SimSetting> bench_settings;
  std::vector<EstimatorKind> bench_methods;
  int runs = 20;
  int test_size = 100;
  bool tune = true;
};

// Parses a full configuration document.
RunConfig parse_run_config(const nlohmann::json& config);

// Executes one command; throws on failure. Writes a one-line JSON report of
// the produced artifacts to `report`.
void run(const RunConfig& config, std::ostream& report);

// argv entry point: config file plus flag overrides. Returns the process
// exit status; failures are reported on stderr as a JSON object.
int run_main(int argc, char** argv);

}  // namespace frechet

#endif  // FRECHET_CLI_HPP_
