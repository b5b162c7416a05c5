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
#include "mononet/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>

#include "json.hpp"
#include "mononet/error.hpp"

namespace mononet {

std::string_view to_string(LossKind k) { return k == LossKind::MSE ? "mse" : "cross_entropy"; }
std::string_view to_string(OptimizerKind k) { return k == OptimizerKind::SGD ? "sgd" : "adam"; }
std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::MSE: return "mse";
    case Metric::RMSE: return "rmse";
    case Metric::Accuracy: return "accuracy";
    case Metric::LogLoss: return "log_loss";
  }
  return "mse";
}

LossKind parse_loss(std::string_view tag) {
  if (tag == "mse") return LossKind::MSE;
  if (tag == "cross_entropy") return LossKind::CrossEntropy;
  throw InvalidArgument("unknown loss '" + std::string(tag) + "' (expected mse or cross_entropy)");
}

OptimizerKind parse_optimizer(std::string_view tag) {
  if (tag == "sgd") return OptimizerKind::SGD;
  if (tag == "adam") return OptimizerKind::Adam;
  throw InvalidArgument("unknown optimizer '" + std::string(tag) + "' (expected sgd or adam)");
}

Metric parse_metric(std::string_view tag) {
  if (tag == "mse") return Metric::MSE;
  if (tag == "rmse") return Metric::RMSE;
  if (tag == "accuracy") return Metric::Accuracy;
  if (tag == "log_loss") return Metric::LogLoss;
  throw InvalidArgument("unknown metric '" + std::string(tag) + "'");
}

bool higher_is_better(Metric m) noexcept { return m == Metric::Accuracy; }

LossResult mse_loss(std::span<const double> pred, std::span<const double> target) {
  if (pred.empty()) throw InvalidArgument("mse_loss on empty input");
  if (pred.size() != target.size()) throw DimensionError("mse_loss length mismatch");
  const double n = static_cast<double>(pred.size());
  LossResult r{0.0, Vector(pred.size())};
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - target[i];
    r.value += d * d;
    r.grad[i] = 2.0 * d / n;
  }
  r.value /= n;
  return r;
}

LossResult cross_entropy_loss(FinalActivation head, std::span<const double> logits,
                              std::size_t target_class) {
  constexpr double kClip = 1e-12;
  if (head == FinalActivation::Linear) {
    throw InvalidArgument("cross-entropy needs a sigmoid or softmax head");
  }
  const Vector p = apply_head(head, logits);
  LossResult r{0.0, Vector(logits.size())};
  if (head == FinalActivation::Sigmoid) {
    if (logits.size() != 1) throw DimensionError("sigmoid head expects one logit");
    if (target_class > 1) {
      throw InvalidArgument("class index " + std::to_string(target_class) +
                            " is invalid for a binary head");
    }
    const double q = std::clamp(target_class == 1 ? p[0] : 1.0 - p[0], kClip, 1.0 - kClip);
    r.value = -std::log(q);
    r.grad[0] = p[0] - static_cast<double>(target_class);
    return r;
  }
  if (target_class >= logits.size()) {
    throw InvalidArgument("class index " + std::to_string(target_class) + " out of range for " +
                          std::to_string(logits.size()) + " classes");
  }
  r.value = -std::log(std::clamp(p[target_class], kClip, 1.0 - kClip));
  for (std::size_t k = 0; k < p.size(); ++k) r.grad[k] = p[k] - (k == target_class ? 1.0 : 0.0);
  return r;
}

void optimizer_step(std::span<double> params, std::span<const double> grads,
                    OptimizerState& state, const OptimizerConfig& config) {
  if (params.size() != grads.size()) throw DimensionError("optimizer: gradient size mismatch");
  if (!all_finite(grads)) throw NumericalError("optimizer: non-finite gradient");
  ++state.step;
  if (config.kind == OptimizerKind::SGD) {
    for (std::size_t i = 0; i < params.size(); ++i) params[i] -= config.learning_rate * grads[i];
    return;
  }
  if (state.m.size() != params.size()) {
    state.m.assign(params.size(), 0.0);
    state.v.assign(params.size(), 0.0);
  }
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(config.beta1, t);
  const double c2 = 1.0 - std::pow(config.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    state.m[i] = config.beta1 * state.m[i] + (1.0 - config.beta1) * grads[i];
    state.v[i] = config.beta2 * state.v[i] + (1.0 - config.beta2) * grads[i] * grads[i];
    const double mh = state.m[i] / c1;
    const double vh = state.v[i] / c2;
    params[i] -= config.learning_rate * mh / (std::sqrt(vh) + config.epsilon);
  }
}

void TrainConfig::validate() const {
  if (epochs < 1) throw InvalidArgument("epochs must be >= 1");
  if (batch_size < 1) throw InvalidArgument("batch size must be >= 1");
  if (!(optimizer.learning_rate > 0.0)) throw InvalidArgument("learning rate must be > 0");
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Metric default_metric(const TabularDataset& d) {
  return d.descriptor.task == Task::Classification ? Metric::Accuracy : Metric::MSE;
}

std::size_t predicted_class(FinalActivation head, std::span<const double> out) {
  if (head == FinalActivation::Sigmoid || out.size() == 1) return out[0] >= 0.5 ? 1 : 0;
  return static_cast<std::size_t>(std::max_element(out.begin(), out.end()) - out.begin());
}

}  // namespace

std::string TrainReport::to_json(bool include_timing) const {
  nlohmann::json j{{"metric", std::string(to_string(metric))},
                   {"train_metric", train_metric},
                   {"param_count", param_count},
                   {"seed", seed},
                   {"epochs", epochs},
                   {"loss_history", loss_history}};
  j["test_metric"] = test_metric ? nlohmann::json(*test_metric) : nlohmann::json(nullptr);
  if (include_timing) j["elapsed_seconds"] = elapsed_seconds;
  return j.dump(1);
}

std::string TrainReport::curve_csv() const {
  std::string out = "epoch,loss\n";
  for (std::size_t e = 0; e < loss_history.size(); ++e) {
    out += std::to_string(e + 1) + "," + fmt(loss_history[e]) + "\n";
  }
  return out;
}

double evaluate(const Network& net, const TabularDataset& data, Metric metric) {
  if (data.rows() == 0) throw InvalidArgument("cannot evaluate on an empty dataset");
  if (data.cols() != net.input_dim) {
    throw DimensionError("dataset has " + std::to_string(data.cols()) +
                         " features but the network expects " + std::to_string(net.input_dim));
  }
  if (metric == Metric::LogLoss && net.final_activation == FinalActivation::Linear) {
    throw InvalidArgument("log-loss needs a sigmoid or softmax head");
  }
  double acc = 0.0;
  NetworkCache cache;
  for (std::size_t r = 0; r < data.rows(); ++r) {
    const Vector out = network_forward(net, data.features.row(r), &cache);
    if (metric == Metric::LogLoss) {
      acc += cross_entropy_loss(net.final_activation, cache.logits,
                                static_cast<std::size_t>(data.targets[r]))
                 .value;
    } else if (metric == Metric::Accuracy) {
      acc += predicted_class(net.final_activation, out) ==
                     static_cast<std::size_t>(data.targets[r])
                 ? 1.0
                 : 0.0;
    } else {
      const double d = out[0] - data.targets[r];
      acc += d * d;
    }
  }
  acc /= static_cast<double>(data.rows());
  return metric == Metric::RMSE ? std::sqrt(acc) : acc;
}

TrainReport train(Network& net, const TabularDataset& train_data, const TrainConfig& config,
                  const TabularDataset* test_data) {
  config.validate();
  net.validate();
  const auto started = std::chrono::steady_clock::now();
  const std::size_t n = train_data.rows();
  if (n == 0) throw InvalidArgument("training set is empty");
  if (train_data.cols() != net.input_dim) {
    throw DimensionError("dataset has " + std::to_string(train_data.cols()) +
                         " features but the network expects " + std::to_string(net.input_dim));
  }
  const LossKind loss = config.loss.value_or(
      net.final_activation == FinalActivation::Linear ? LossKind::MSE : LossKind::CrossEntropy);
  if (loss == LossKind::MSE && net.final_activation != FinalActivation::Linear) {
    throw InvalidArgument("mse loss needs a linear head");
  }
  if (loss == LossKind::CrossEntropy && net.final_activation == FinalActivation::Linear) {
    throw InvalidArgument("cross-entropy loss needs a sigmoid or softmax head");
  }
  if (loss == LossKind::MSE && net.output_dim() != 1) {
    throw InvalidArgument("regression training supports a single output");
  }

  double shift = 0.0, scale = 1.0;
  if (loss == LossKind::MSE && config.standardize_targets && n > 1) {
    shift = std::accumulate(train_data.targets.begin(), train_data.targets.end(), 0.0) /
            static_cast<double>(n);
    double var = 0.0;
    for (double t : train_data.targets) var += (t - shift) * (t - shift);
    const double sd = std::sqrt(var / static_cast<double>(n));
    if (sd > 1e-12) scale = sd;
  }

  Vector params = get_parameters(net);
  OptimizerState state;
  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  NetworkCache cache;
  Vector grad(params.size());
  double target[1];

  TrainReport report;
  report.seed = config.seed;
  report.epochs = config.epochs;
  report.loss_history.reserve(config.epochs);
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < n; start += config.batch_size) {
      const std::size_t end = std::min(n, start + config.batch_size);
      const double inv_b = 1.0 / static_cast<double>(end - start);
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t k = start; k < end; ++k) {
        const std::size_t r = order[k];
        network_forward(net, train_data.features.row(r), &cache);
        LossResult lr;
        if (loss == LossKind::MSE) {
          target[0] = (train_data.targets[r] - shift) / scale;
          lr = mse_loss(cache.logits, target);
        } else {
          lr = cross_entropy_loss(net.final_activation, cache.logits,
                                  static_cast<std::size_t>(train_data.targets[r]));
        }
        epoch_loss += lr.value;
        for (double& g : lr.grad) g *= inv_b;
        const auto g = network_backward(net, cache, lr.grad);
        for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += g.parameters[i];
      }
      if (!std::isfinite(epoch_loss) || !all_finite(grad)) {
        throw TrainingDiverged(epoch, "training diverged at epoch " + std::to_string(epoch) +
                                          " (non-finite loss or gradient)");
      }
      optimizer_step(params, grad, state, config.optimizer);
      set_parameters(net, params);
    }
    report.loss_history.push_back(epoch_loss / static_cast<double>(n) * scale * scale);
  }
  if (loss == LossKind::MSE && (scale != 1.0 || shift != 0.0)) {
    fold_output_affine(net, scale, shift);
  }

  report.metric = config.metric.value_or(default_metric(train_data));
  report.train_metric = evaluate(net, train_data, report.metric);
  if (test_data) report.test_metric = evaluate(net, *test_data, report.metric);
  report.param_count = param_count(net);
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

NetworkSpec spec_for_cell(const NetworkSpec& base, const GridCell& cell) {
  if (cell.width < 1 || cell.depth < 1) throw InvalidArgument("grid cell needs width, depth >= 1");
  if (cell.selector && cell.selector->width() != cell.width) {
    throw InvalidArgument("cell selector does not sum to width " + std::to_string(cell.width));
  }
  NetworkSpec spec = base;
  spec.kind = cell.kind;
  spec.hidden_layers.assign(cell.depth, HiddenLayerSpec{cell.width, cell.selector, std::nullopt});
  spec.feature_unit_width = cell.width;
  for (auto& fu : spec.feature_units) fu.width = cell.width;
  if (!spec.free_extractor.empty()) spec.free_extractor.assign(1, cell.width);
  return spec;
}

std::string GridResult::to_json() const {
  nlohmann::json board = nlohmann::json::array();
  for (const auto& e : leaderboard) {
    board.push_back({{"width", e.cell.width},
                     {"depth", e.cell.depth},
                     {"kind", std::string(to_string(e.cell.kind))},
                     {"enumeration_index", e.enumeration_index},
                     {"param_count", e.param_count},
                     {"validation_metric", e.validation_metric}});
  }
  nlohmann::json j{{"leaderboard", board},
                   {"best_report", nlohmann::json::parse(best_report.to_json())}};
  return j.dump(1);
}

GridResult grid_search(const TabularDataset& train_data, const NetworkSpec& base,
                       const TrainConfig& config) {
  const auto& sp = config.space;
  if (sp.widths.empty() || sp.depths.empty() || sp.kinds.empty()) {
    throw InvalidArgument("grid search space is empty");
  }
  const auto split = split_80_20(train_data.rows(), config.seed);
  const auto inner = subset(train_data, split.train_rows);
  const auto valid = subset(train_data, split.test_rows);
  const Metric metric = config.selection_metric.value_or(
      train_data.descriptor.task == Task::Classification ? Metric::LogLoss : Metric::MSE);
  TrainConfig cfg = config;
  cfg.metric = metric;

  GridResult result;
  std::vector<TrainReport> reports;
  std::size_t index = 0;
  for (std::size_t depth : sp.depths) {
    for (std::size_t width : sp.widths) {
      for (ActivationKind kind : sp.kinds) {
        const GridCell cell{width, depth, kind, std::nullopt};
        Network net = build_network(spec_for_cell(base, cell), config.seed);
        auto report = train(net, inner, cfg, &valid);
        result.leaderboard.push_back({cell, index++, report.param_count, *report.test_metric});
        reports.push_back(std::move(report));
      }
    }
  }
  const bool up = higher_is_better(metric);
  std::stable_sort(result.leaderboard.begin(), result.leaderboard.end(),
                   [up](const GridEntry& a, const GridEntry& b) {
                     if (a.validation_metric != b.validation_metric) {
                       return up ? a.validation_metric > b.validation_metric
                                 : a.validation_metric < b.validation_metric;
                     }
                     if (a.param_count != b.param_count) return a.param_count < b.param_count;
                     return a.enumeration_index < b.enumeration_index;
                   });
  const auto& best = result.leaderboard.front();
  result.best_spec = spec_for_cell(base, best.cell);
  result.best_report = reports[best.enumeration_index];
  return result;
}

RunSummary aggregate_best(std::span<const double> metrics, std::size_t keep, Metric metric) {
  if (metrics.empty()) throw InvalidArgument("no runs to aggregate");
  if (keep < 1 || keep > metrics.size()) {
    throw InvalidArgument("cannot keep " + std::to_string(keep) + " of " +
                          std::to_string(metrics.size()) + " runs");
  }
  RunSummary s;
  s.metrics.assign(metrics.begin(), metrics.end());
  std::vector<std::size_t> idx(metrics.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  const bool up = higher_is_better(metric);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return up ? metrics[a] > metrics[b] : metrics[a] < metrics[b];
  });
  s.kept.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(keep));
  for (std::size_t i : s.kept) s.mean += metrics[i];
  s.mean /= static_cast<double>(keep);
  for (std::size_t i : s.kept) s.stddev += (metrics[i] - s.mean) * (metrics[i] - s.mean);
  s.stddev = std::sqrt(s.stddev / static_cast<double>(keep));
  return s;
}

}  // namespace mononet
