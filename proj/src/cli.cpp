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

#include "frechet/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "frechet/io.hpp"
#include "frechet/model_io.hpp"
#include "frechet/seed.hpp"

namespace frechet {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

const std::vector<std::string> kCommands = {"fit", "predict", "tune", "simulate",
                                            "bench-table"};

template <typename T>
void read_if(const json& j, const char* key, T* out) {
  if (j.contains(key) && !j.at(key).is_null()) *out = j.at(key).get<T>();
}

SimSetting setting_from_json(const json& j) {
  SimSetting s;
  s.scenario = parse_scenario(j.at("scenario").get<std::string>());
  read_if(j, "p", &s.p);
  read_if(j, "n", &s.n);
  read_if(j, "sigma", &s.sigma);
  read_if(j, "grid_size", &s.grid_size);
  if (j.contains("spd_metric")) {
    s.spd_metric = parse_space_kind(j.at("spd_metric").get<std::string>());
  }
  return s;
}

std::string require_path(const std::string& value, const char* what) {
  if (value.empty()) throw UsageError(std::string("missing ") + what);
  return value;
}

std::uint64_t require_seed(const RunConfig& c) {
  if (!c.seed) throw UsageError("a seed is required (--seed or \"seed\")");
  return *c.seed;
}

std::string join(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (k > 0) out += ',';
    out += fields[k];
  }
  return out + '\n';
}

std::string cell_label(double mean, double sd) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g (%.4g)", mean, sd);
  return buf;
}

std::string depth_label(int depth) {
  return depth == kUnlimitedDepth ? "unlimited" : std::to_string(depth);
}

Eigen::VectorXd row_of(const Eigen::MatrixXd& m, Eigen::Index i) {
  return m.row(i).transpose();
}

void cmd_fit(const RunConfig& c, std::ostream& report) {
  const std::string out = c.output.empty() ? "model.json" : c.output;
  EstimatorSpec spec = c.estimator;
  spec.forest.master_seed = require_seed(c);
  spec.forest.threads = c.threads;
  auto data = std::make_shared<const Dataset>(
      load_dataset(require_path(c.x_path, "training X path"),
                   require_path(c.y_path, "training Y path"), c.space, c.header));
  const RegressionModel model = RegressionModel::fit(spec, data);
  DataSource source;
  source.inline_data = c.embed_data;
  if (!c.embed_data) {
    source.x_path = fs::absolute(c.x_path).string();
    source.y_path = fs::absolute(c.y_path).string();
    source.header = c.header;
  }
  json doc = model_to_json(model, source);
  doc["estimator"]["forest"].erase("threads");
  atomic_write(out, doc.dump(1) + "\n");
  report << json{{"command", "fit"}, {"model", out}, {"rows", data->size()}}.dump()
         << "\n";
}

void cmd_predict(const RunConfig& c, std::ostream& report) {
  const std::string model_path = require_path(c.model_path, "model path");
  std::ifstream in(model_path);
  if (!in) throw DomainError("cannot open " + model_path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw DomainError(model_path + ": " + e.what());
  }
  const RegressionModel model = model_from_json(doc, fs::path(model_path).parent_path());
  const Eigen::MatrixXd queries =
      read_matrix_csv(require_path(c.query_path, "query path"), c.header);
  const MetricSpace& space = model.data().space;
  const int p = model.data().num_features();
  if (queries.cols() != p) {
    throw DomainError("query file has " + std::to_string(queries.cols()) +
                      " columns, model expects " + std::to_string(p));
  }

  std::vector<std::string> head{"row"};
  for (int j = 0; j < p; ++j) head.push_back("x_" + std::to_string(j));
  for (int j = 0; j < space.serialized_size(); ++j) {
    head.push_back("y_" + std::to_string(j));
  }
  for (const char* h : {"converged", "fell_back", "weight_min", "weight_max", "weight_sum"}) {
    head.push_back(h);
  }
  std::string csv = join(head);
  for (Eigen::Index i = 0; i < queries.rows(); ++i) {
    const Eigen::VectorXd x = row_of(queries, i);
    const Prediction pred = model.predict(row_span(x));
    std::vector<std::string> f{std::to_string(i + 1)};
    for (int j = 0; j < p; ++j) f.push_back(format_double(x[j]));
    for (double v : serialize(space, pred.value)) f.push_back(format_double(v));
    f.push_back(pred.converged ? "1" : "0");
    f.push_back(pred.fell_back ? "1" : "0");
    f.push_back(format_double(pred.weights.minCoeff()));
    f.push_back(format_double(pred.weights.maxCoeff()));
    f.push_back(format_double(pred.weights.sum()));
    csv += join(f);
  }
  const std::string out = c.output.empty() ? "predictions.csv" : c.output;
  atomic_write(out, csv);
  report << json{{"command", "predict"}, {"predictions", out}, {"rows", queries.rows()}}
                .dump()
         << "\n";
}

void cmd_tune(const RunConfig& c, std::ostream& report) {
  const std::uint64_t seed = require_seed(c);
  const Dataset data =
      load_dataset(require_path(c.x_path, "training X path"),
                   require_path(c.y_path, "training Y path"), c.space, c.header);
  check_dataset(data);
  EstimatorSpec base = c.estimator;
  base.forest.master_seed = seed;
  const std::vector<TuningCell> grid =
      c.grid.empty() ? default_grid(base.kind, data.size(), data.num_features())
                     : c.grid;
  const TuningResult result =
      tune_cv(data, base, grid, c.folds, derive_seed(seed, 0), c.threads);

  std::vector<std::string> head{"cell", "max_depth", "mtry", "bandwidth",
                                "mean_error", "sd_error", "failed"};
  for (int f = 0; f < c.folds; ++f) head.push_back("fold_" + std::to_string(f + 1));
  std::string csv = join(head);
  for (std::size_t k = 0; k < result.table.size(); ++k) {
    const CvRow& row = result.table[k];
    std::vector<std::string> f{std::to_string(k), depth_label(row.cell.max_depth),
                               std::to_string(row.cell.mtry),
                               format_double(row.cell.bandwidth),
                               format_double(row.mean_error),
                               format_double(row.sd_error), row.failed ? "1" : "0"};
    for (double e : row.fold_errors) f.push_back(format_double(e));
    csv += join(f);
  }
  const std::string out = c.output.empty() ? "cv.csv" : c.output;
  atomic_write(out, csv);
  const CvRow& best = result.table[result.best];
  report << json{{"command", "tune"},
                 {"table", out},
                 {"best_cell", result.best},
                 {"max_depth", depth_label(best.cell.max_depth)},
                 {"mtry", best.cell.mtry},
                 {"bandwidth", best.cell.bandwidth},
                 {"mean_error", best.mean_error}}
                .dump()
         << "\n";
}

void cmd_simulate(const RunConfig& c, std::ostream& report) {
  std::mt19937_64 rng(require_seed(c));
  const Dataset data = generate(c.simulation, c.simulation.n, rng);
  const fs::path dir = c.output.empty() ? fs::path("simulated") : fs::path(c.output);
  atomic_write_all({{dir / "x.csv", to_csv(data.x)},
                    {dir / "y.csv", objects_to_csv(data.space, data.y)},
                    {dir / "truth.csv", objects_to_csv(data.space, data.truth)},
                    {dir / "space.json", space_to_json(data.space).dump(1) + "\n"}});
  report << json{{"command", "simulate"}, {"directory", dir.string()},
                 {"rows", data.size()}}
                .dump()
         << "\n";
}

void cmd_bench(const RunConfig& c, std::ostream& report) {
  const std::uint64_t seed = require_seed(c);
  if (c.bench_settings.empty()) throw UsageError("bench-table needs at least one setting");
  if (c.bench_methods.empty()) throw UsageError("bench-table needs at least one method");
  std::string summary =
      join({"setting", "p", "n", "method", "mean_mse", "sd_mse", "runs", "failures",
            "table_cell"});
  std::string long_csv = join({"setting", "method", "run", "mse"});
  json metrics = json::array();
  for (std::size_t s = 0; s < c.bench_settings.size(); ++s) {
    const SimSetting& setting = c.bench_settings[s];
    MonteCarloOptions options;
    options.runs = c.runs;
    options.test_size = c.test_size;
    options.seed = derive_seed(seed, s);
    options.tune = c.tune;
    options.folds = c.folds;
    options.base = c.estimator;
    options.threads = c.threads;
    const MonteCarloResult result = monte_carlo(setting, c.bench_methods, options);
    const std::string name(to_string(setting.scenario));
    for (const MethodSummary& m : result.summary) {
      const std::string method(to_string(m.kind));
      summary += join({name, std::to_string(setting.p), std::to_string(setting.n),
                       method, format_double(m.mean_mse), format_double(m.sd_mse),
                       std::to_string(m.runs), std::to_string(m.failures),
                       "\"" + cell_label(m.mean_mse, m.sd_mse) + "\""});
      metrics.push_back({{"setting", name},
                         {"p", setting.p},
                         {"n", setting.n},
                         {"method", method},
                         {"mean_mse", m.mean_mse},
                         {"sd_mse", m.sd_mse},
                         {"runs", m.runs},
                         {"failures", m.failures}});
    }
    for (const RunRecord& r : result.rows) {
      long_csv += join({name, std::string(to_string(r.kind)), std::to_string(r.run + 1),
                        r.failed ? "NA" : format_double(r.mse)});
    }
  }
  const fs::path dir = c.output.empty() ? fs::path("bench") : fs::path(c.output);
  atomic_write_all({{dir / "summary.csv", summary},
                    {dir / "results_long.csv", long_csv},
                    {dir / "metrics.json", json{{"results", metrics}}.dump(1) + "\n"}});
  report << json{{"command", "bench-table"}, {"directory", dir.string()}}.dump() << "\n";
}

// Overrides layered on top of the config document.
struct Flags {
  std::string command;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads, dimension, trees, max_depth, min_leaf, mtry,
      subsample_size, folds, p, n, grid_size, runs, test_size;
  std::optional<double> bandwidth, sigma;
  std::optional<std::string> x, y, model, query, out, space, normalization,
      estimator, split, subsample, kernel, scenario, spd_metric, methods;
  bool header = false, honest = false, reference_data = false, no_tune = false;
};

json merge_flags(json doc, const Flags& f) {
  auto set = [](json& node, const char* key, const auto& value) {
    if (value) node[key] = *value;
  };
  doc["command"] = f.command;
  set(doc, "seed", f.seed);
  set(doc, "threads", f.threads);
  set(doc, "model", f.model);
  set(doc, "query", f.query);
  set(doc, "output", f.out);
  json& data = doc["data"];
  set(data, "x", f.x);
  set(data, "y", f.y);
  if (f.header) data["header"] = true;
  if (f.reference_data) data["embed"] = false;
  json& space = doc["space"];
  set(space, "kind", f.space);
  set(space, "dimension", f.dimension);
  set(space, "normalization", f.normalization);
  if (!doc["space"].contains("kind")) doc.erase("space");
  json& est = doc["estimator"];
  set(est, "kind", f.estimator);
  set(est, "bandwidth", f.bandwidth);
  set(est, "kernel", f.kernel);
  json& forest = est["forest"];
  set(forest, "num_trees", f.trees);
  if (f.max_depth) {
    forest["max_depth"] = *f.max_depth <= 0 ? json(nullptr) : json(*f.max_depth);
  }
  set(forest, "min_leaf", f.min_leaf);
  set(forest, "mtry", f.mtry);
  set(forest, "split_method", f.split);
  set(forest, "subsample_mode", f.subsample);
  set(forest, "subsample_size", f.subsample_size);
  if (f.honest) forest["honest"] = true;
  json& tune = doc["tune"];
  set(tune, "folds", f.folds);

  json setting = doc.contains("simulate") ? doc["simulate"] : json::object();
  set(setting, "scenario", f.scenario);
  set(setting, "p", f.p);
  set(setting, "n", f.n);
  set(setting, "sigma", f.sigma);
  set(setting, "grid_size", f.grid_size);
  set(setting, "spd_metric", f.spd_metric);
  if (!setting.empty()) doc["simulate"] = setting;

  json& bench = doc["bench"];
  if (f.scenario) bench["settings"] = json::array({setting});
  if (f.methods) {
    json list = json::array();
    std::stringstream ss(*f.methods);
    std::string m;
    while (std::getline(ss, m, ',')) list.push_back(m);
    bench["methods"] = list;
  }
  set(bench, "runs", f.runs);
  set(bench, "test_size", f.test_size);
  set(bench, "folds", f.folds);
  if (f.no_tune) bench["tune"] = false;
  return doc;
}

}  // namespace

RunConfig parse_run_config(const json& j) {
  RunConfig c;
  read_if(j, "command", &c.command);
  if (j.contains("seed") && !j.at("seed").is_null()) {
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  read_if(j, "threads", &c.threads);
  read_if(j, "model", &c.model_path);
  read_if(j, "query", &c.query_path);
  read_if(j, "output", &c.output);
  if (j.contains("space")) c.space = space_from_json(j.at("space"));
  if (j.contains("estimator")) c.estimator = spec_from_json(j.at("estimator"));
  if (j.contains("data")) {
    const json& d = j.at("data");
    read_if(d, "x", &c.x_path);
    read_if(d, "y", &c.y_path);
    read_if(d, "header", &c.header);
    read_if(d, "embed", &c.embed_data);
  }
  if (j.contains("tune")) {
    const json& t = j.at("tune");
    read_if(t, "folds", &c.folds);
    if (t.contains("grid")) {
      for (const json& cell : t.at("grid")) {
        TuningCell tc;
        if (cell.contains("max_depth")) {
          tc.max_depth = cell.at("max_depth").is_null()
                             ? kUnlimitedDepth
                             : cell.at("max_depth").get<int>();
        }
        read_if(cell, "mtry", &tc.mtry);
        read_if(cell, "bandwidth", &tc.bandwidth);
        c.grid.push_back(tc);
      }
    }
  }
  if (j.contains("simulate") && j.at("simulate").contains("scenario")) {
    c.simulation = setting_from_json(j.at("simulate"));
  }
  if (j.contains("bench")) {
    const json& b = j.at("bench");
    if (b.contains("settings")) {
      for (const json& s : b.at("settings")) c.bench_settings.push_back(setting_from_json(s));
    }
    if (b.contains("methods")) {
      for (const json& m : b.at("methods")) {
        c.bench_methods.push_back(parse_estimator_kind(m.get<std::string>()));
      }
    }
    read_if(b, "runs", &c.runs);
    read_if(b, "test_size", &c.test_size);
    read_if(b, "folds", &c.folds);
    read_if(b, "tune", &c.tune);
  }
  if (c.bench_methods.empty()) {
    c.bench_methods = {EstimatorKind::kGfr, EstimatorKind::kRfwlcfr,
                       EstimatorKind::kRfwllfr};
  }
  if (c.threads < 0) throw UsageError("threads must be nonnegative");
  return c;
}

void run(const RunConfig& config, std::ostream& report) {
  const std::string& cmd = config.command;
  if (cmd == "fit") return cmd_fit(config, report);
  if (cmd == "predict") return cmd_predict(config, report);
  if (cmd == "tune") return cmd_tune(config, report);
  if (cmd == "simulate") return cmd_simulate(config, report);
  if (cmd == "bench-table") return cmd_bench(config, report);
  throw UsageError("unknown command: " + cmd);
}

int run_main(int argc, char** argv) {
  CLI::App app{"Random-forest weighted Fréchet regression"};
  Flags f;
  app.add_option("command", f.command, "fit | predict | tune | simulate | bench-table")
      ->required()
      ->check(CLI::IsMember(kCommands));
  app.add_option("-c,--config", f.config_path, "JSON configuration file");
  app.add_option("--seed", f.seed, "master seed");
  app.add_option("--threads", f.threads, "worker threads (0 = all cores)");
  app.add_option("--x", f.x, "predictor CSV");
  app.add_option("--y", f.y, "response CSV");
  app.add_flag("--header", f.header, "CSV files start with a header line");
  app.add_flag("--reference-data", f.reference_data,
               "store training data by path instead of inline");
  app.add_option("--space", f.space,
                 "wasserstein | log_cholesky | affine_invariant | sphere");
  app.add_option("--dimension", f.dimension, "grid size, matrix order or ambient dimension");
  app.add_option("--normalization", f.normalization, "riemann | euclidean");
  app.add_option("--estimator", f.estimator, "rfwlcfr | rfwllfr | frf | gfr | nw | lfr");
  app.add_option("--trees", f.trees, "number of trees");
  app.add_option("--max-depth", f.max_depth, "maximum tree depth (0 = unlimited)");
  app.add_option("--min-leaf", f.min_leaf, "minimum leaf size");
  app.add_option("--mtry", f.mtry, "features tried per split (0 = all)");
  app.add_option("--split", f.split, "two_means | exhaustive");
  app.add_flag("--honest", f.honest, "grow honest trees");
  app.add_option("--subsample", f.subsample, "bootstrap | without_replacement");
  app.add_option("--subsample-size", f.subsample_size, "subsample size without replacement");
  app.add_option("--bandwidth", f.bandwidth, "kernel bandwidth");
  app.add_option("--kernel", f.kernel, "epanechnikov | gaussian");
  app.add_option("--model", f.model, "model JSON (predict)");
  app.add_option("--query", f.query, "query predictor CSV (predict)");
  app.add_option("-o,--out", f.out, "output file or directory");
  app.add_option("--folds", f.folds, "cross-validation folds");
  app.add_option("--scenario", f.scenario, "I-1 | I-2 | I-3 | II-1 | II-2 | III-1 | III-2");
  app.add_option("--p", f.p, "number of predictors");
  app.add_option("--n", f.n, "training sample size");
  app.add_option("--sigma", f.sigma, "noise level");
  app.add_option("--grid-size", f.grid_size, "quantile grid size");
  app.add_option("--spd-metric", f.spd_metric, "log_cholesky | affine_invariant");
  app.add_option("--methods", f.methods, "comma-separated estimators (bench-table)");
  app.add_option("--runs", f.runs, "Monte-Carlo runs (bench-table)");
  app.add_option("--test-size", f.test_size, "test points per run (bench-table)");
  app.add_flag("--no-tune", f.no_tune, "skip cross-validated tuning (bench-table)");

  auto fail = [&](const char* type, const std::string& message, int status) {
    std::cerr << json{{"error", {{"command", f.command}, {"type", type},
                                 {"message", message}}}}
                     .dump()
              << std::endl;
    return status;
  };
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), 2);
  }
  try {
    json doc = json::object();
    if (!f.config_path.empty()) {
      std::ifstream in(f.config_path);
      if (!in) throw UsageError("cannot open config " + f.config_path);
      doc = json::parse(in);
    }
    run(parse_run_config(merge_flags(std::move(doc), f)), std::cout);
    return 0;
  } catch (const UsageError& e) {
    return fail("usage", e.what(), 2);
  } catch (const json::exception& e) {
    return fail("config", e.what(), 2);
  } catch (const DomainError& e) {
    return fail("domain", e.what(), 1);
  } catch (const std::exception& e) {
    return fail("runtime", e.what(), 1);
  }
}

}  // namespace frechet
