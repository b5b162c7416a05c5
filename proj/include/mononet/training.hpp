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
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mononet/data.hpp"
#include "mononet/network.hpp"

namespace mononet {

enum class LossKind { MSE, CrossEntropy };
enum class OptimizerKind { SGD, Adam };
enum class Metric { MSE, RMSE, Accuracy, LogLoss };

std::string_view to_string(LossKind k);
std::string_view to_string(OptimizerKind k);
std::string_view to_string(Metric m);
LossKind parse_loss(std::string_view tag);
OptimizerKind parse_optimizer(std::string_view tag);
Metric parse_metric(std::string_view tag);

/// Larger is better only for accuracy.
bool higher_is_better(Metric m) noexcept;

struct LossResult {
  double value = 0.0;
  Vector grad;
};

/// Mean of squared residuals; grad = 2 (pred - target) / N.
LossResult mse_loss(std::span<const double> pred, std::span<const double> target);

/// -log p(target) with p clipped to [1e-12, 1 - 1e-12]. The gradient is taken
/// with respect to the logits feeding the head (sigmoid: one logit, softmax:
/// one per class).
LossResult cross_entropy_loss(FinalActivation head, std::span<const double> logits,
                              std::size_t target_class);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::Adam;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct OptimizerState {
  Vector m;
  Vector v;
  std::uint64_t step = 0;
};

/// In-place update. Throws NumericalError on non-finite gradients.
void optimizer_step(std::span<double> params, std::span<const double> grads,
                    OptimizerState& state, const OptimizerConfig& config);

struct SearchSpace {
  std::vector<std::size_t> widths{4, 8, 16, 32, 64};
  std::vector<std::size_t> depths{1, 2};
  std::vector<ActivationKind> kinds{ActivationKind::ELU, ActivationKind::ReLU};
};

struct TrainConfig {
  /// Unset: MSE for a linear head, cross-entropy otherwise.
  std::optional<LossKind> loss;
  OptimizerConfig optimizer;
  std::size_t batch_size = 16;
  std::size_t epochs = 200;
  std::uint64_t seed = 0;
  /// Train regression nets on z-scored targets and fold the scaling back
  /// into the output layer afterwards.
  bool standardize_targets = true;
  /// Unset: MSE for regression, accuracy for classification.
  std::optional<Metric> metric;
  /// Grid cells are ranked on this validation metric. Unset: MSE for
  /// regression, log-loss for classification.
  std::optional<Metric> selection_metric;
  SearchSpace space;

  void validate() const;
};

struct TrainReport {
  /// Mean per-sample training loss of each epoch, in target units.
  std::vector<double> loss_history;
  Metric metric = Metric::MSE;
  double train_metric = 0.0;
  std::optional<double> test_metric;
  std::size_t param_count = 0;
  std::uint64_t seed = 0;
  std::size_t epochs = 0;
  double elapsed_seconds = 0.0;

  /// Wall-clock time is left out unless asked for, so reports of identical
  /// runs compare equal byte for byte.
  std::string to_json(bool include_timing = false) const;
  std::string curve_csv() const;
};

/// Metric of `net` on a normalized dataset.
double evaluate(const Network& net, const TabularDataset& data, Metric metric);

/// Trains `net` in place on a normalized dataset. Throws TrainingDiverged on
/// a non-finite loss.
TrainReport train(Network& net, const TabularDataset& train_data, const TrainConfig& config,
                  const TabularDataset* test_data = nullptr);

struct GridCell {
  std::size_t width = 0;
  std::size_t depth = 0;
  ActivationKind kind = ActivationKind::ELU;
  /// Trunk hidden layers only. Unset: default split of width.
  std::optional<ActivationSelector> selector;
};

/// `base` with its hidden stack (and type 2 unit widths) replaced by the cell.
NetworkSpec spec_for_cell(const NetworkSpec& base, const GridCell& cell);

struct GridEntry {
  GridCell cell;
  std::size_t enumeration_index = 0;
  std::size_t param_count = 0;
  double validation_metric = 0.0;
};

struct GridResult {
  /// Best first; ties go to fewer parameters, then earlier enumeration.
  std::vector<GridEntry> leaderboard;
  NetworkSpec best_spec;
  TrainReport best_report;

  std::string to_json() const;
};

/// Exhaustive search over config.space. The last 20% of a seeded permutation
/// of `train_data` is held out for validation.
GridResult grid_search(const TabularDataset& train_data, const NetworkSpec& base,
                       const TrainConfig& config);

struct RunSummary {
  std::vector<double> metrics;
  /// Indices into metrics of the runs kept, best first.
  std::vector<std::size_t> kept;
  double mean = 0.0;
  /// Population standard deviation of the kept runs.
  double stddev = 0.0;
};

/// Mean and deviation of the best `keep` of `metrics`.
RunSummary aggregate_best(std::span<const double> metrics, std::size_t keep, Metric metric);

}  // namespace mononet
