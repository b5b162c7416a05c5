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
#include <string>
#include <vector>

#include "mononet/data.hpp"
#include "mononet/training.hpp"
#include "mononet/verification.hpp"

namespace mononet {

// ---- cubic fit demo -------------------------------------------------------

struct FitDemoConfig {
  ActivationKind kind = ActivationKind::ReLU;
  std::vector<std::size_t> widths{2, 32};
  std::uint64_t seed = 0;
  BatteryConfig training;
};

struct FitDemoCurve {
  /// "unconstrained", "convex" or "three_activation".
  std::string variant;
  std::size_t width = 0;
  ActivationSelector selector;
  double mse = 0.0;
  double mse_left = 0.0;   // x < 0
  double mse_right = 0.0;  // x > 0
  Vector x, y_true, y_pred;

  /// Header x,y_true,y_pred and one row per grid point.
  std::string to_csv() const;
};

struct FitDemoResult {
  std::vector<FitDemoCurve> curves;
  const FitDemoCurve& find(std::string_view variant, std::size_t width) const;
  std::string to_json() const;
};

/// Fits x^3 on [-1, 1] with an unconstrained net, a convex-only constrained
/// net and a constrained net using all three activation branches, for every
/// configured width, and evaluates each on a 201-point grid.
FitDemoResult run_fit_demo(const FitDemoConfig& config);

// ---- synthetic two-feature study -----------------------------------------

struct SynthConfig {
  std::size_t n_train = 100;
  double noise_std = 0.2;
  std::uint64_t seed = 0;
  std::vector<std::size_t> hidden{32, 32};
  std::size_t epochs = 1000;
  std::size_t batch_size = 16;
  double learning_rate = 3e-3;
  std::size_t audit_pairs = 10000;
  /// Points per axis of the noiseless evaluation grid on [-2.5, 2.5]^2.
  std::size_t grid = 51;
};

struct SynthVariant {
  std::string name;
  ActivationSelector selector;
  bool unconstrained = false;
  double grid_mse = 0.0;
  double train_mse = 0.0;
  MonotonicityAudit audit;
  Vector grid_pred;
};

struct SynthResult {
  SynthConfig config;
  Vector grid_x, grid_y, grid_true;
  std::vector<SynthVariant> variants;
  const SynthVariant& find(std::string_view name) const;
  std::string to_json() const;
  /// x,y,f_true and one prediction column per variant.
  std::string surface_csv() const;
};

/// Trains unconstrained, convex-only and three-activation ELU nets of the
/// same shape on noisy samples of the synthetic target, audits x-monotonicity
/// on the expanded data box and scores each on a noiseless grid.
SynthResult run_synth(const SynthConfig& config);

// ---- dataset protocol -----------------------------------------------------

/// Type 1 or type 2 skeleton for a dataset: the descriptor's indicator, a
/// linear head for regression, sigmoid for two classes and softmax above.
NetworkSpec base_spec_for(const DatasetDescriptor& d, std::size_t n_classes,
                          Architecture arch);

struct ProtocolConfig {
  Architecture architecture = Architecture::Type1;
  std::uint64_t split_seed = 0;
  std::uint64_t seed = 0;
  std::size_t runs = 10;
  std::size_t best = 5;
  TrainConfig train;
  /// When unset, the cell is picked by grid_search over train.space.
  std::optional<GridCell> cell;
};

struct ProtocolResult {
  std::string dataset;
  std::size_t rows = 0;
  std::size_t dropped_rows = 0;
  std::size_t train_rows = 0;
  std::size_t test_rows = 0;
  std::optional<GridResult> grid;
  GridCell cell;
  std::vector<TrainReport> runs;
  RunSummary summary;
  /// Run with the best test metric, carrying its input scaling and box.
  Network best_net;

  std::string to_json() const;
};

/// 80/20 split with split_seed, z-scoring from the training part, optional
/// grid selection, then `runs` trainings seeded seed, seed+1, ... evaluated on
/// the test part and summarized over the best `best`.
ProtocolResult run_protocol(const TabularDataset& data, const ProtocolConfig& config);

/// The selection stage of run_protocol alone: same split and scaling, grid
/// over config.train.space. config.cell, runs and best are ignored.
GridResult run_grid(const TabularDataset& data, const ProtocolConfig& config);

}  // namespace mononet
