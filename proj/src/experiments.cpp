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
#include "mononet/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json.hpp"
#include "mononet/error.hpp"

namespace mononet {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json selector_json(const ActivationSelector& s) {
  return {s.convex, s.concave, s.saturated};
}

}  // namespace

std::string FitDemoCurve::to_csv() const {
  std::string out = "x,y_true,y_pred\n";
  for (std::size_t k = 0; k < x.size(); ++k) {
    out += fmt(x[k]) + "," + fmt(y_true[k]) + "," + fmt(y_pred[k]) + "\n";
  }
  return out;
}

const FitDemoCurve& FitDemoResult::find(std::string_view variant, std::size_t width) const {
  for (const auto& c : curves) {
    if (c.variant == variant && c.width == width) return c;
  }
  throw InvalidArgument("no fit-demo curve '" + std::string(variant) + "' of width " +
                        std::to_string(width));
}

std::string FitDemoResult::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : curves) {
    arr.push_back({{"variant", c.variant},
                   {"width", c.width},
                   {"selector", selector_json(c.selector)},
                   {"mse", c.mse},
                   {"mse_left", c.mse_left},
                   {"mse_right", c.mse_right}});
  }
  return nlohmann::json{{"target", "x^3"}, {"interval", {-1.0, 1.0}}, {"curves", arr}}.dump(1);
}

FitDemoResult run_fit_demo(const FitDemoConfig& config) {
  if (config.widths.empty()) throw InvalidArgument("fit demo needs at least one width");
  const auto cube = [](double x) { return x * x * x; };
  constexpr std::size_t kGrid = 201;
  FitDemoResult result;
  for (std::size_t width : config.widths) {
    if (width < 1) throw InvalidArgument("fit demo widths must be >= 1");
    BatteryConfig tc = config.training;
    tc.width = width;
    struct Variant {
      const char* name;
      ActivationSelector s;
      bool unconstrained;
    };
    const Variant variants[] = {
        {"unconstrained", ActivationSelector::all(Branch::Convex, width), true},
        {"convex", ActivationSelector::all(Branch::Convex, width), false},
        {"three_activation", ActivationSelector::default_split(width), false},
    };
    for (const auto& v : variants) {
      const auto fit = fit_curve(cube, -1.0, 1.0, config.kind, v.s, v.unconstrained, config.seed, tc);
      FitDemoCurve c;
      c.variant = v.name;
      c.width = width;
      c.selector = v.s;
      double left = 0.0, right = 0.0, all = 0.0;
      std::size_t n_left = 0, n_right = 0;
      for (std::size_t k = 0; k < kGrid; ++k) {
        const double x = -1.0 + 2.0 * static_cast<double>(k) / (kGrid - 1);
        const double y = cube(x);
        const double p = predict(fit.net, std::span<const double>(&x, 1))[0];
        c.x.push_back(x);
        c.y_true.push_back(y);
        c.y_pred.push_back(p);
        const double e2 = (p - y) * (p - y);
        all += e2;
        if (x < 0.0) {
          left += e2;
          ++n_left;
        } else if (x > 0.0) {
          right += e2;
          ++n_right;
        }
      }
      c.mse = all / kGrid;
      c.mse_left = left / static_cast<double>(n_left);
      c.mse_right = right / static_cast<double>(n_right);
      result.curves.push_back(std::move(c));
    }
  }
  return result;
}

const SynthVariant& SynthResult::find(std::string_view name) const {
  for (const auto& v : variants) {
    if (v.name == name) return v;
  }
  throw InvalidArgument("no synth variant '" + std::string(name) + "'");
}

std::string SynthResult::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& v : variants) {
    arr.push_back({{"name", v.name},
                   {"selector", selector_json(v.selector)},
                   {"unconstrained", v.unconstrained},
                   {"grid_mse", v.grid_mse},
                   {"train_mse", v.train_mse},
                   {"x_violations", v.audit.total_violations()},
                   {"audit", nlohmann::json::parse(v.audit.to_json())}});
  }
  nlohmann::json j{{"n_train", config.n_train},
                   {"noise_std", config.noise_std},
                   {"seed", config.seed},
                   {"hidden", config.hidden},
                   {"epochs", config.epochs},
                   {"audit_pairs", config.audit_pairs},
                   {"grid", config.grid},
                   {"variants", arr}};
  return j.dump(1);
}

std::string SynthResult::surface_csv() const {
  std::string out = "x,y,f_true";
  for (const auto& v : variants) out += "," + v.name;
  out += "\n";
  for (std::size_t k = 0; k < grid_x.size(); ++k) {
    out += fmt(grid_x[k]) + "," + fmt(grid_y[k]) + "," + fmt(grid_true[k]);
    for (const auto& v : variants) out += "," + fmt(v.grid_pred[k]);
    out += "\n";
  }
  return out;
}

SynthResult run_synth(const SynthConfig& config) {
  if (config.grid < 2) throw InvalidArgument("synth grid needs at least 2 points per axis");
  if (config.hidden.empty()) throw InvalidArgument("synth needs at least one hidden layer");
  const auto raw = generate_synthetic(config.n_train, config.noise_std, config.seed);
  const auto [train_data, scaling] = normalize(raw);
  const InputBox box = data_box(train_data);

  SynthResult result;
  result.config = config;
  const std::size_t g = config.grid;
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = 0; j < g; ++j) {
      const double x = -2.5 + 5.0 * static_cast<double>(i) / static_cast<double>(g - 1);
      const double y = -2.5 + 5.0 * static_cast<double>(j) / static_cast<double>(g - 1);
      result.grid_x.push_back(x);
      result.grid_y.push_back(y);
      result.grid_true.push_back(synthetic_target(x, y));
    }
  }

  struct Variant {
    const char* name;
    bool unconstrained;
    bool convex_only;
  };
  const Variant variants[] = {
      {"unconstrained", true, false},
      {"convex", false, true},
      {"three_activation", false, false},
  };
  for (const auto& v : variants) {
    NetworkSpec spec;
    spec.input_indicator = train_data.descriptor.indicator;
    spec.kind = ActivationKind::ELU;
    spec.unconstrained = v.unconstrained;
    for (std::size_t w : config.hidden) {
      spec.hidden_layers.push_back(
          {w, v.convex_only ? std::optional(ActivationSelector::all(Branch::Convex, w)) : std::nullopt,
           std::nullopt});
    }
    Network net = build_network(spec, config.seed);
    TrainConfig tc;
    tc.epochs = config.epochs;
    tc.batch_size = config.batch_size;
    tc.optimizer.learning_rate = config.learning_rate;
    tc.seed = config.seed;
    const auto report = train(net, train_data, tc);
    net.input_scaling = scaling;
    net.input_box = box;

    SynthVariant sv;
    sv.name = v.name;
    sv.unconstrained = v.unconstrained;
    sv.selector = net.trunk.front().selector;
    sv.train_mse = report.train_metric;
    sv.audit = check_pairwise_monotonicity(net, train_data.descriptor.indicator, box,
                                           config.audit_pairs, config.seed);
    double sse = 0.0;
    for (std::size_t k = 0; k < result.grid_x.size(); ++k) {
      const double in[2] = {result.grid_x[k], result.grid_y[k]};
      const double p = predict(net, in)[0];
      sv.grid_pred.push_back(p);
      sse += (p - result.grid_true[k]) * (p - result.grid_true[k]);
    }
    sv.grid_mse = sse / static_cast<double>(result.grid_x.size());
    result.variants.push_back(std::move(sv));
  }
  return result;
}

NetworkSpec base_spec_for(const DatasetDescriptor& d, std::size_t n_classes, Architecture arch) {
  NetworkSpec spec;
  spec.architecture = arch;
  spec.input_indicator = d.indicator;
  if (d.task == Task::Regression) {
    spec.final_activation = FinalActivation::Linear;
  } else if (n_classes <= 2) {
    spec.final_activation = FinalActivation::Sigmoid;
  } else {
    spec.final_activation = FinalActivation::Softmax;
    spec.output_dim = n_classes;
  }
  return spec;
}

std::string ProtocolResult::to_json() const {
  nlohmann::json runs_json = nlohmann::json::array();
  for (const auto& r : runs) runs_json.push_back(nlohmann::json::parse(r.to_json()));
  nlohmann::json cell_json{{"width", cell.width},
                           {"depth", cell.depth},
                           {"kind", std::string(to_string(cell.kind))}};
  if (cell.selector) {
    cell_json["selector"] = {cell.selector->convex, cell.selector->concave, cell.selector->saturated};
  }
  nlohmann::json j{{"dataset", dataset},
                   {"rows", rows},
                   {"dropped_rows", dropped_rows},
                   {"train_rows", train_rows},
                   {"test_rows", test_rows},
                   {"cell", cell_json},
                   {"metric", runs.empty() ? "" : std::string(to_string(runs.front().metric))},
                   {"test_metrics", summary.metrics},
                   {"kept_runs", summary.kept},
                   {"mean", summary.mean},
                   {"std", summary.stddev},
                   {"param_count", param_count(best_net)},
                   {"runs", runs_json}};
  if (grid) j["grid"] = nlohmann::json::parse(grid->to_json());
  return j.dump(1);
}

ProtocolResult run_protocol(const TabularDataset& data, const ProtocolConfig& config) {
  if (config.runs < 1) throw InvalidArgument("runs must be >= 1");
  if (config.best < 1 || config.best > config.runs) throw InvalidArgument("best must be in [1, runs]");
  const auto [train_raw, test_raw] = split_80_20(data, config.split_seed);
  const auto [train_data, scaling] = normalize(train_raw);
  const auto test_data = apply_normalization(test_raw, scaling);
  const InputBox box = data_box(train_data);

  ProtocolResult result;
  result.dataset = data.descriptor.name;
  result.rows = data.rows();
  result.dropped_rows = data.dropped_rows;
  result.train_rows = train_data.rows();
  result.test_rows = test_data.rows();

  const NetworkSpec base = base_spec_for(data.descriptor, data.n_classes(), config.architecture);
  TrainConfig tc = config.train;
  tc.seed = config.seed;
  if (config.cell) {
    result.cell = *config.cell;
  } else {
    result.grid = grid_search(train_data, base, tc);
    result.cell = result.grid->leaderboard.front().cell;
  }
  const NetworkSpec spec = spec_for_cell(base, result.cell);

  std::vector<double> metrics;
  std::optional<std::size_t> best_run;
  for (std::size_t r = 0; r < config.runs; ++r) {
    const std::uint64_t seed = config.seed + r;
    Network net = build_network(spec, seed);
    tc.seed = seed;
    auto report = train(net, train_data, tc, &test_data);
    const double m = *report.test_metric;
    const bool better =
        !best_run || (higher_is_better(report.metric) ? m > metrics[*best_run] : m < metrics[*best_run]);
    metrics.push_back(m);
    if (better) {
      best_run = r;
      net.input_scaling = scaling;
      net.input_box = box;
      result.best_net = std::move(net);
    }
    result.runs.push_back(std::move(report));
  }
  result.summary = aggregate_best(metrics, std::min(config.best, metrics.size()),
                                  result.runs.front().metric);
  return result;
}

GridResult run_grid(const TabularDataset& data, const ProtocolConfig& config) {
  const auto [train_raw, test_raw] = split_80_20(data, config.split_seed);
  const auto [train_data, scaling] = normalize(train_raw);
  TrainConfig tc = config.train;
  tc.seed = config.seed;
  return grid_search(train_data, base_spec_for(data.descriptor, data.n_classes(), config.architecture),
                     tc);
}

}  // namespace mononet
