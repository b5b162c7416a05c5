/**
 * Copyright (c) MonoNet Contributors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// mononet command-line tool. Talks to the library through the C API only.
//
// Exit codes: 0 success, 1 usage, data or verification failure, 2 numerical
// failure (for example a diverged training run).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mononet/mononet.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitNumerical = 2;

struct Failure {
  int exit_code;
  std::string message;
};

int exit_code_for(mn_status s) { return s == MN_ERR_NUMERICAL ? kExitNumerical : kExitFailure; }

void check(mn_status s) {
  if (s != MN_OK) throw Failure{exit_code_for(s), std::string(mn_status_name(s)) + ": " + mn_last_error()};
}

std::string take_string(char* s) {
  std::string out(s ? s : "");
  mn_string_free(s);
  return out;
}

using NetPtr = std::unique_ptr<mn_network, decltype(&mn_network_free)>;
using DataPtr = std::unique_ptr<mn_dataset, decltype(&mn_dataset_free)>;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitFailure, "cannot open '" + path + "'"};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Failure{kExitFailure, "cannot write '" + path.string() + "'"};
  out << content;
  if (!content.empty() && content.back() != '\n') out << '\n';
}

std::vector<std::size_t> parse_sizes(const std::string& list) {
  std::vector<std::size_t> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used != item.size() || v < 0) throw std::invalid_argument(item);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw Failure{kExitFailure, "bad integer '" + item + "' in list '" + list + "'"};
    }
  }
  if (out.empty()) throw Failure{kExitFailure, "empty list"};
  return out;
}

std::vector<std::string> parse_words(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  if (out.empty()) throw Failure{kExitFailure, "empty list"};
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

/// Splices a JSON config file into the argument list right after the
/// subcommand, so flags given on the command line come later and win.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  std::optional<std::string> config_path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
  }
  if (!config_path || args.size() < 2) return args;

  json cfg;
  try {
    cfg = json::parse(read_file(*config_path));
  } catch (const json::exception& e) {
    throw Failure{kExitFailure, "config '" + *config_path + "' is not valid JSON: " + e.what()};
  }
  if (!cfg.is_object()) throw Failure{kExitFailure, "config '" + *config_path + "' must be an object"};

  std::vector<std::string> injected;
  for (const auto& [key, value] : cfg.items()) {
    const std::string flag = "--" + key;
    if (value.is_boolean()) {
      if (value.get<bool>()) injected.push_back(flag);
    } else if (value.is_array()) {
      std::string joined;
      for (const auto& v : value) {
        if (!joined.empty()) joined += ',';
        joined += v.is_string() ? v.get<std::string>() : v.dump();
      }
      injected.push_back(flag);
      injected.push_back(joined);
    } else if (value.is_string()) {
      injected.push_back(flag);
      injected.push_back(value.get<std::string>());
    } else if (value.is_number()) {
      injected.push_back(flag);
      injected.push_back(value.dump());
    } else {
      throw Failure{kExitFailure, "config key '" + key + "' has an unsupported value"};
    }
  }
  args.insert(args.begin() + 2, injected.begin(), injected.end());
  return args;
}

// ---- shared option groups -------------------------------------------------

struct DataOptions {
  std::string dataset;
  std::string descriptor;
  std::string csv;
  std::size_t points = 100;
  double noise = 0.2;
  std::uint64_t data_seed = 0;

  void add(CLI::App* app, bool required) {
    auto* d = app->add_option("--dataset", dataset,
                              "Built-in dataset name, or 'synthetic' for the two-feature toy set");
    auto* f = app->add_option("--descriptor", descriptor, "Dataset descriptor JSON file");
    d->excludes(f);
    f->excludes(d);
    app->add_option("--csv", csv, "CSV file with the dataset rows");
    app->add_option("--points", points, "Rows of the synthetic dataset")->capture_default_str();
    app->add_option("--noise", noise, "Noise std of the synthetic dataset")->capture_default_str();
    app->add_option("--data-seed", data_seed, "Seed of the synthetic dataset")->capture_default_str();
    required_ = required;
  }

  bool given() const { return !dataset.empty() || !descriptor.empty(); }

  DataPtr load() const {
    if (!given()) {
      if (required_) throw Failure{kExitFailure, "one of --dataset or --descriptor is required"};
      return {nullptr, mn_dataset_free};
    }
    mn_dataset* raw = nullptr;
    if (dataset == "synthetic") {
      check(mn_dataset_synthetic(points, noise, data_seed, &raw));
    } else {
      if (csv.empty()) throw Failure{kExitFailure, "--csv is required for dataset files"};
      if (!fs::exists(csv)) throw Failure{kExitFailure, "CSV file not found: '" + csv + "'"};
      if (!dataset.empty()) {
        check(mn_dataset_load_builtin(dataset.c_str(), csv.c_str(), &raw));
      } else {
        const std::string desc = read_file(descriptor);
        check(mn_dataset_load(desc.c_str(), csv.c_str(), &raw));
      }
    }
    return {raw, mn_dataset_free};
  }

 private:
  bool required_ = true;
};

struct ProtocolOptions {
  std::string arch = "type1";
  std::optional<std::size_t> width;
  std::size_t depth = 1;
  std::string kind = "elu";
  std::string selector;
  std::string widths, depths, kinds;
  std::uint64_t seed = 0;
  std::uint64_t split_seed = 0;
  std::size_t epochs = 200;
  double lr = 1e-3;
  std::size_t batch = 16;
  std::string optimizer = "adam";
  std::string metric;
  std::size_t runs = 10;
  std::size_t best = 5;

  void add(CLI::App* app, bool fixed_cell) {
    app->add_option("--arch", arch, "Architecture: type1 or type2")->capture_default_str();
    if (fixed_cell) {
      app->add_option("--width", width, "Hidden width; omit to select by grid search");
      app->add_option("--depth", depth, "Hidden layers when --width is given")->capture_default_str();
      app->add_option("--kind", kind, "Activation kind when --width is given: relu, elu, selu")
          ->capture_default_str();
      app->add_option("--selector", selector,
                      "Convex,concave,saturated unit counts per hidden layer when --width is given "
                      "(default: even split)");
    }
    app->add_option("--widths", widths, "Grid widths, comma separated (default 4,8,16,32,64)");
    app->add_option("--depths", depths, "Grid depths, comma separated (default 1,2)");
    app->add_option("--kinds", kinds, "Grid activation kinds, comma separated (default elu,relu)");
    app->add_option("--seed", seed, "Seed of initialization and shuffling")
        ->envname("MONONET_SEED")
        ->capture_default_str();
    app->add_option("--split-seed", split_seed, "Seed of the 80/20 split")->capture_default_str();
    app->add_option("--epochs", epochs, "Training epochs")->capture_default_str();
    app->add_option("--lr", lr, "Learning rate")->capture_default_str();
    app->add_option("--batch", batch, "Minibatch size")->capture_default_str();
    app->add_option("--optimizer", optimizer, "adam or sgd")->capture_default_str();
    app->add_option("--metric", metric, "mse, rmse, accuracy or log_loss");
    if (fixed_cell) {
      app->add_option("--runs", runs, "Training runs with seeds seed, seed+1, ...")->capture_default_str();
      app->add_option("--best", best, "Runs kept for the reported mean and std")->capture_default_str();
    }
  }

  json to_json() const {
    json j{{"architecture", arch}, {"seed", seed},       {"split_seed", split_seed},
           {"epochs", epochs},     {"learning_rate", lr}, {"batch_size", batch},
           {"optimizer", optimizer}, {"runs", runs},     {"best", best}};
    if (!metric.empty()) j["metric"] = metric;
    if (!widths.empty()) j["widths"] = parse_sizes(widths);
    if (!depths.empty()) j["depths"] = parse_sizes(depths);
    if (!kinds.empty()) j["kinds"] = parse_words(kinds);
    if (width) {
      j["cell"] = {{"width", *width}, {"depth", depth}, {"kind", kind}};
      if (!selector.empty()) j["cell"]["selector"] = parse_sizes(selector);
    } else if (!selector.empty()) {
      throw Failure{kExitFailure, "--selector needs --width"};
    }
    return j;
  }
};

// ---- subcommands ----------------------------------------------------------

struct TrainOptions {
  DataOptions data;
  ProtocolOptions protocol;
  std::string model_out = "model.json";
  std::string report_out = "report.json";
  std::string curve_out;
};

int cmd_train(const TrainOptions& o) {
  const auto data = o.data.load();
  const std::string config = o.protocol.to_json().dump();
  mn_network* raw_net = nullptr;
  char* raw_report = nullptr;
  check(mn_train(data.get(), config.c_str(), &raw_net, &raw_report));
  NetPtr net(raw_net, mn_network_free);
  const std::string report = take_string(raw_report);

  check(mn_network_save(net.get(), o.model_out.c_str()));
  write_file(o.report_out, report);
  const json r = json::parse(report);
  if (!o.curve_out.empty()) {
    const std::size_t best = r.at("kept_runs").at(0).get<std::size_t>();
    std::string csv = "epoch,loss\n";
    const auto& hist = r.at("runs").at(best).at("loss_history");
    for (std::size_t e = 0; e < hist.size(); ++e) {
      char line[64];
      std::snprintf(line, sizeof line, "%zu,%.17g\n", e + 1, hist[e].get<double>());
      csv += line;
    }
    write_file(o.curve_out, csv);
  }

  const auto& cell = r.at("cell");
  std::cout << "cell: width " << cell.at("width") << ", depth " << cell.at("depth") << ", "
            << cell.at("kind").get<std::string>();
  if (cell.contains("selector")) std::cout << ", selector " << cell.at("selector").dump();
  std::cout << "\n";
  const std::string metric = r.at("metric").get<std::string>();
  const auto& metrics = r.at("test_metrics");
  if (metrics.size() == 1) {
    std::cout << "test " << metric << ": " << fmt(metrics[0].get<double>()) << "\n";
  } else {
    std::cout << "test " << metric << ": " << fmt(r.at("mean").get<double>()) << " +/- "
              << fmt(r.at("std").get<double>()) << " (best " << r.at("kept_runs").size() << " of "
              << metrics.size() << " runs)\n";
  }
  std::cout << "model: " << o.model_out << "\nreport: " << o.report_out << "\n";
  return kExitOk;
}

struct GridOptions {
  DataOptions data;
  ProtocolOptions protocol;
  std::string report_out = "grid.json";
};

int cmd_grid(const GridOptions& o) {
  const auto data = o.data.load();
  const std::string config = o.protocol.to_json().dump();
  char* raw = nullptr;
  check(mn_grid(data.get(), config.c_str(), &raw));
  const std::string report = take_string(raw);
  write_file(o.report_out, report);
  const json r = json::parse(report);
  for (const auto& e : r.at("leaderboard")) {
    std::cout << "width " << e.at("width") << " depth " << e.at("depth") << " "
              << e.at("kind").get<std::string>() << "  params " << e.at("param_count")
              << "  validation " << fmt(e.at("validation_metric").get<double>()) << "\n";
  }
  std::cout << "report: " << o.report_out << "\n";
  return kExitOk;
}

struct EvalOptions {
  std::string model;
  DataOptions data;
  std::string metric;
  std::string report_out;
};

NetPtr load_net(const std::string& path) {
  if (!fs::exists(path)) throw Failure{kExitFailure, "model file not found: '" + path + "'"};
  mn_network* raw = nullptr;
  check(mn_network_load(path.c_str(), &raw));
  return {raw, mn_network_free};
}

int cmd_eval(const EvalOptions& o) {
  const auto net = load_net(o.model);
  const auto data = o.data.load();
  std::string metric = o.metric;
  if (metric.empty()) {
    char* raw = nullptr;
    check(mn_network_to_json(net.get(), &raw));
    const json m = json::parse(take_string(raw));
    metric = m.value("final_activation", std::string("linear")) == "linear" ? "mse" : "accuracy";
  }
  double value = 0.0;
  check(mn_evaluate(net.get(), data.get(), metric.c_str(), &value));
  std::size_t rows = 0;
  check(mn_dataset_shape(data.get(), &rows, nullptr));
  if (!o.report_out.empty()) {
    write_file(o.report_out, json{{"metric", metric}, {"value", value}, {"rows", rows}}.dump(1));
  }
  std::cout << metric << ": " << fmt(value) << " (" << rows << " rows)\n";
  return kExitOk;
}

struct VerifyOptions {
  std::string model;
  DataOptions data;
  std::size_t pairs = 10000;
  std::size_t points = 1000;
  std::uint64_t seed = 0;
  std::string report_out = "verify.json";
};

int cmd_verify(const VerifyOptions& o) {
  const auto net = load_net(o.model);
  const auto data = o.data.load();
  const json config{{"pairs", o.pairs}, {"gradient_points", o.points}, {"seed", o.seed}};
  char* raw = nullptr;
  int passed = 0;
  check(mn_verify(net.get(), data.get(), config.dump().c_str(), &raw, &passed));
  const std::string report = take_string(raw);
  write_file(o.report_out, report);
  const json r = json::parse(report);
  std::cout << "feature  dir  check     tested  violations  result\n";
  for (const char* check_name : {"pairwise", "gradient_sign"}) {
    for (const auto& f : r.at(check_name).at("features")) {
      const std::size_t v = f.at("violations").get<std::size_t>();
      char line[128];
      std::snprintf(line, sizeof line, "%7zu  %+3d  %-8s %7zu  %10zu  %s\n",
                    f.at("feature").get<std::size_t>(), f.at("direction").get<int>(),
                    std::string(check_name).substr(0, 8).c_str(),
                    f.at("pairs_tested").get<std::size_t>(), v, v == 0 ? "PASS" : "FAIL");
      std::cout << line;
    }
  }
  std::cout << (passed ? "monotonicity verified" : "monotonicity VIOLATED") << "\nreport: " << o.report_out
            << "\n";
  return passed ? kExitOk : kExitFailure;
}

struct FitDemoOptions {
  std::string kind = "relu";
  std::string widths = "2,32";
  std::uint64_t seed = 0;
  std::size_t epochs = 600;
  double lr = 5e-3;
  std::size_t batch = 16;
  std::string out_dir = "fit-demo";
};

void write_bundle(const std::string& out_dir, const std::string& report_name, const std::string& bundle) {
  const json b = json::parse(bundle);
  write_file(fs::path(out_dir) / report_name, b.at("report").dump(1));
  for (const auto& [name, content] : b.at("files").items()) {
    write_file(fs::path(out_dir) / name, content.get<std::string>());
  }
}

int cmd_fit_demo(const FitDemoOptions& o) {
  const json config{{"kind", o.kind},       {"widths", parse_sizes(o.widths)},
                    {"seed", o.seed},       {"epochs", o.epochs},
                    {"learning_rate", o.lr}, {"batch_size", o.batch}};
  char* raw = nullptr;
  check(mn_fit_demo(config.dump().c_str(), &raw));
  const std::string bundle = take_string(raw);
  write_bundle(o.out_dir, "fit_demo.json", bundle);
  std::cout << "variant           width  mse         mse[-1,0]   mse[0,1]\n";
  const json parsed = json::parse(bundle);
  for (const auto& c : parsed.at("report").at("curves")) {
    char line[160];
    std::snprintf(line, sizeof line, "%-16s  %5zu  %-10.4g  %-10.4g  %-10.4g\n",
                  c.at("variant").get<std::string>().c_str(), c.at("width").get<std::size_t>(),
                  c.at("mse").get<double>(), c.at("mse_left").get<double>(),
                  c.at("mse_right").get<double>());
    std::cout << line;
  }
  std::cout << "output: " << o.out_dir << "\n";
  return kExitOk;
}

struct SynthOptions {
  std::uint64_t seed = 0;
  double noise = 0.2;
  std::size_t points = 100;
  std::size_t epochs = 1000;
  double lr = 3e-3;
  std::size_t batch = 16;
  std::size_t pairs = 10000;
  std::size_t grid = 51;
  std::string out_dir = "synth";
};

int cmd_synth(const SynthOptions& o) {
  const json config{{"seed", o.seed},     {"noise_std", o.noise},     {"n_train", o.points},
                    {"epochs", o.epochs}, {"learning_rate", o.lr},    {"batch_size", o.batch},
                    {"audit_pairs", o.pairs}, {"grid", o.grid}};
  char* raw = nullptr;
  check(mn_synth(config.dump().c_str(), &raw));
  const std::string bundle = take_string(raw);
  write_bundle(o.out_dir, "synth.json", bundle);
  std::cout << "variant           grid mse    x-violations\n";
  const json parsed = json::parse(bundle);
  for (const auto& v : parsed.at("report").at("variants")) {
    std::size_t violations = 0;
    for (const auto& f : v.at("audit").at("features")) violations += f.at("violations").get<std::size_t>();
    char line[128];
    std::snprintf(line, sizeof line, "%-16s  %-10.4g  %zu\n", v.at("name").get<std::string>().c_str(),
                  v.at("grid_mse").get<double>(), violations);
    std::cout << line;
  }
  std::cout << "output: " << o.out_dir << "\n";
  return kExitOk;
}

struct ExportOptions {
  std::string report;
  std::optional<std::size_t> run;
  std::string model;
  std::size_t feature = 0;
  std::size_t points = 101;
  std::string out = "curve.csv";
};

int cmd_export_curve(const ExportOptions& o) {
  std::string csv;
  if (!o.report.empty()) {
    const json r = json::parse(read_file(o.report), nullptr, false);
    if (r.is_discarded() || !r.contains("runs")) {
      throw Failure{kExitFailure, "'" + o.report + "' is not a training report"};
    }
    const std::size_t run = o.run ? *o.run : r.at("kept_runs").at(0).get<std::size_t>();
    if (run >= r.at("runs").size()) throw Failure{kExitFailure, "--run is out of range"};
    csv = "epoch,loss\n";
    const auto& hist = r.at("runs").at(run).at("loss_history");
    for (std::size_t e = 0; e < hist.size(); ++e) {
      char line[64];
      std::snprintf(line, sizeof line, "%zu,%.17g\n", e + 1, hist[e].get<double>());
      csv += line;
    }
  } else {
    // Response of the model along one feature, the others held at their
    // training mean, across the model's audit box.
    const auto net = load_net(o.model);
    char* raw = nullptr;
    check(mn_network_to_json(net.get(), &raw));
    const json m = json::parse(take_string(raw));
    std::size_t in = 0, out = 0;
    check(mn_network_input_dim(net.get(), &in));
    check(mn_network_output_dim(net.get(), &out));
    if (o.feature >= in) throw Failure{kExitFailure, "--feature is out of range"};
    if (o.points < 2) throw Failure{kExitFailure, "--points must be >= 2"};
    std::vector<double> mean(in, 0.0), scale(in, 1.0), lo(in, -1.0), hi(in, 1.0);
    if (m.contains("input_scaling")) {
      mean = m.at("input_scaling").at("mean").get<std::vector<double>>();
      scale = m.at("input_scaling").at("scale").get<std::vector<double>>();
    }
    if (m.contains("input_box")) {
      lo = m.at("input_box").at("lower").get<std::vector<double>>();
      hi = m.at("input_box").at("upper").get<std::vector<double>>();
    }
    csv = "x";
    for (std::size_t k = 0; k < out; ++k) csv += ",y" + std::to_string(k);
    csv += "\n";
    std::vector<double> x(mean), y(out);
    for (std::size_t p = 0; p < o.points; ++p) {
      const double z = lo[o.feature] + (hi[o.feature] - lo[o.feature]) * static_cast<double>(p) /
                                           static_cast<double>(o.points - 1);
      x[o.feature] = mean[o.feature] + scale[o.feature] * z;
      check(mn_network_predict(net.get(), x.data(), x.size(), y.data(), y.size()));
      char cell[40];
      std::snprintf(cell, sizeof cell, "%.17g", x[o.feature]);
      csv += cell;
      for (double v : y) {
        std::snprintf(cell, sizeof cell, ",%.17g", v);
        csv += cell;
      }
      csv += "\n";
    }
  }
  write_file(o.out, csv);
  std::cout << "curve: " << o.out << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monotone-by-construction neural networks", "mononet"};
  app.set_version_flag("--version", mn_version());
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::string config_file;

  TrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "Train on a dataset and write the best model and a report");
  train.data.add(train_cmd, true);
  train.protocol.add(train_cmd, true);
  train_cmd->add_option("--model", train.model_out, "Output model JSON")->capture_default_str();
  train_cmd->add_option("--report", train.report_out, "Output report JSON")->capture_default_str();
  train_cmd->add_option("--curve", train.curve_out, "Output loss curve CSV of the best run");

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a model on a dataset");
  eval_cmd->add_option("--model", eval.model, "Model JSON")->required();
  eval.data.add(eval_cmd, true);
  eval_cmd->add_option("--metric", eval.metric, "mse, rmse, accuracy or log_loss");
  eval_cmd->add_option("--report", eval.report_out, "Output report JSON");

  VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "Audit the monotonicity of a model; exit 1 on violations");
  verify_cmd->add_option("--model", verify.model, "Model JSON")->required();
  verify.data.add(verify_cmd, false);
  verify_cmd->add_option("--pairs", verify.pairs, "Ordered pairs per monotone feature")->capture_default_str();
  verify_cmd->add_option("--gradient-points", verify.points, "Finite-difference points per feature")
      ->capture_default_str();
  verify_cmd->add_option("--seed", verify.seed, "Audit seed")->envname("MONONET_SEED")->capture_default_str();
  verify_cmd->add_option("--report", verify.report_out, "Output report JSON")->capture_default_str();

  FitDemoOptions fit;
  auto* fit_cmd = app.add_subcommand("fit-demo", "Fit x^3 with unconstrained, convex and three-branch nets");
  fit_cmd->add_option("--kind", fit.kind, "Activation kind")->capture_default_str();
  fit_cmd->add_option("--widths", fit.widths, "Hidden widths, comma separated")->capture_default_str();
  fit_cmd->add_option("--seed", fit.seed, "Seed")->envname("MONONET_SEED")->capture_default_str();
  fit_cmd->add_option("--epochs", fit.epochs, "Training epochs")->capture_default_str();
  fit_cmd->add_option("--lr", fit.lr, "Learning rate")->capture_default_str();
  fit_cmd->add_option("--batch", fit.batch, "Minibatch size")->capture_default_str();
  fit_cmd->add_option("--out-dir", fit.out_dir, "Output directory")->capture_default_str();

  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Two-feature synthetic study of the three net variants");
  synth_cmd->add_option("--seed", synth.seed, "Seed")->envname("MONONET_SEED")->capture_default_str();
  synth_cmd->add_option("--noise", synth.noise, "Noise std of the training targets")->capture_default_str();
  synth_cmd->add_option("--points", synth.points, "Training points")->capture_default_str();
  synth_cmd->add_option("--epochs", synth.epochs, "Training epochs")->capture_default_str();
  synth_cmd->add_option("--lr", synth.lr, "Learning rate")->capture_default_str();
  synth_cmd->add_option("--batch", synth.batch, "Minibatch size")->capture_default_str();
  synth_cmd->add_option("--pairs", synth.pairs, "Audit pairs")->capture_default_str();
  synth_cmd->add_option("--grid", synth.grid, "Evaluation grid points per axis")->capture_default_str();
  synth_cmd->add_option("--out-dir", synth.out_dir, "Output directory")->capture_default_str();

  GridOptions grid;
  auto* grid_cmd = app.add_subcommand("grid", "Grid search on the training part of a dataset");
  grid.data.add(grid_cmd, true);
  grid.protocol.add(grid_cmd, false);
  grid_cmd->add_option("--report", grid.report_out, "Output report JSON")->capture_default_str();

  ExportOptions exp;
  auto* export_cmd = app.add_subcommand("export-curve", "Export a loss curve or a model response curve as CSV");
  auto* rep_opt = export_cmd->add_option("--report", exp.report, "Training report JSON");
  export_cmd->add_option("--run", exp.run, "Run index in the report (default: best)");
  auto* model_opt = export_cmd->add_option("--model", exp.model, "Model JSON");
  export_cmd->add_option("--feature", exp.feature, "Feature swept for a model curve")->capture_default_str();
  export_cmd->add_option("--points", exp.points, "Points of a model curve")->capture_default_str();
  export_cmd->add_option("--out", exp.out, "Output CSV")->capture_default_str();
  rep_opt->excludes(model_opt);
  model_opt->excludes(rep_opt);

  for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; })) {
    sub->add_option("--config", config_file, "JSON file of flag values; command-line flags override");
  }

  try {
    auto args = expand_config(argc, argv);
    std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
    try {
      app.parse(std::move(rev));
    } catch (const CLI::ParseError& e) {
      const int rc = app.exit(e);
      return rc == 0 ? kExitOk : kExitFailure;
    }
    if (*train_cmd) return cmd_train(train);
    if (*eval_cmd) return cmd_eval(eval);
    if (*verify_cmd) return cmd_verify(verify);
    if (*fit_cmd) return cmd_fit_demo(fit);
    if (*synth_cmd) return cmd_synth(synth);
    if (*grid_cmd) return cmd_grid(grid);
    if (*export_cmd) {
      if (exp.report.empty() && exp.model.empty()) {
        throw Failure{kExitFailure, "one of --report or --model is required"};
      }
      return cmd_export_curve(exp);
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
