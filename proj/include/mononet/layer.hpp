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
#include <random>
#include <span>
#include <vector>

#include "mononet/activation.hpp"
#include "mononet/numeric.hpp"

namespace mononet {

/// Per-input monotone direction: +1 increasing, -1 decreasing, 0 free.
class MonotonicityIndicator {
 public:
  MonotonicityIndicator() = default;
  /// Throws InvalidArgument for entries outside {-1, 0, 1}.
  explicit MonotonicityIndicator(std::vector<int> entries);
  static MonotonicityIndicator constant(std::size_t n, int value);

  std::size_t size() const noexcept { return entries_.size(); }
  int operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<int>& entries() const noexcept { return entries_; }
  bool all_zero() const noexcept;

  friend bool operator==(const MonotonicityIndicator&, const MonotonicityIndicator&) = default;

 private:
  std::vector<int> entries_;
};

/// |w| for t = 1, -|w| for t = -1, w for t = 0.
inline double constrain_weight(double w, int t) noexcept {
  if (t == 0) return w;
  const double mag = w < 0.0 ? -w : w;
  return t > 0 ? mag : -mag;
}

/// d constrain_weight / dw, with sign(0) = 0.
inline double constrain_weight_slope(double w, int t) noexcept {
  if (t == 0) return 1.0;
  const double sign = w > 0.0 ? 1.0 : (w < 0.0 ? -1.0 : 0.0);
  return t > 0 ? sign : -sign;
}

/// Sign operator on an m x n matrix whose columns are indexed by t.
/// Throws DimensionError when t.size() != M.cols().
Matrix apply_indicator(const Matrix& m, const MonotonicityIndicator& t);

/// Values kept from layer_forward for the backward pass.
struct LayerCache {
  Vector input;
  Vector pre_activation;
};

struct LayerGradients {
  Matrix weights;
  Vector bias;
  Vector input;
};

/// Dense layer with sign-constrained effective weights and the combined
/// activation. `weights` is n x m (input rows, unit columns) and holds the free
/// parameters; the constraint is applied on every forward pass and never
/// written back.
struct MonotoneDenseLayer {
  Matrix weights;
  Vector bias;
  MonotonicityIndicator indicator;
  ActivationSelector selector;
  ActivationKind kind = ActivationKind::ReLU;
  bool output_is_linear = false;

  std::size_t inputs() const noexcept { return weights.rows(); }
  std::size_t units() const noexcept { return weights.cols(); }

  /// Throws DimensionError/InvalidArgument if the fields are inconsistent.
  void validate() const;

  /// n x m matrix with the sign operator applied row-wise.
  Matrix effective_weights() const;
};

/// Fan-in/fan-out scaled uniform init on the free weights, zero bias.
MonotoneDenseLayer make_layer(std::size_t n, std::size_t m, MonotonicityIndicator t,
                              ActivationSelector s, ActivationKind kind,
                              bool output_is_linear, std::mt19937_64& rng);

Vector layer_forward(const MonotoneDenseLayer& layer, std::span<const double> x,
                     LayerCache* cache = nullptr);

/// Pre-activation only: h = |W^T|_t x + b.
Vector layer_pre_activation(const MonotoneDenseLayer& layer, std::span<const double> x);

LayerGradients layer_backward(const MonotoneDenseLayer& layer, const LayerCache& cache,
                              std::span<const double> grad_y);

std::size_t param_count(const MonotoneDenseLayer& layer) noexcept;

}  // namespace mononet
