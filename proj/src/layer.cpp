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
#include "mononet/layer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mononet/error.hpp"

namespace mononet {

MonotonicityIndicator::MonotonicityIndicator(std::vector<int> entries)
    : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i] < -1 || entries_[i] > 1) {
      throw InvalidArgument("monotonicity indicator entry " + std::to_string(i) + " is " +
                            std::to_string(entries_[i]) + ", expected -1, 0 or 1");
    }
  }
}

MonotonicityIndicator MonotonicityIndicator::constant(std::size_t n, int value) {
  return MonotonicityIndicator(std::vector<int>(n, value));
}

bool MonotonicityIndicator::all_zero() const noexcept {
  return std::all_of(entries_.begin(), entries_.end(), [](int t) { return t == 0; });
}

Matrix apply_indicator(const Matrix& m, const MonotonicityIndicator& t) {
  if (t.size() != m.cols()) {
    throw DimensionError("apply_indicator: indicator has " + std::to_string(t.size()) +
                         " entries for a matrix with " + std::to_string(m.cols()) +
                         " columns");
  }
  Matrix out(m.rows(), m.cols());
  for (std::size_t j = 0; j < m.rows(); ++j)
    for (std::size_t i = 0; i < m.cols(); ++i) out(j, i) = constrain_weight(m(j, i), t[i]);
  return out;
}

void MonotoneDenseLayer::validate() const {
  if (indicator.size() != inputs()) {
    throw DimensionError("layer indicator has " + std::to_string(indicator.size()) +
                         " entries for " + std::to_string(inputs()) + " inputs");
  }
  if (bias.size() != units()) {
    throw DimensionError("layer bias has " + std::to_string(bias.size()) + " entries for " +
                         std::to_string(units()) + " units");
  }
  if (selector.width() != units()) {
    throw InvalidArgument("layer selector does not sum to its width " +
                          std::to_string(units()));
  }
}

Matrix MonotoneDenseLayer::effective_weights() const {
  Matrix eff(weights.rows(), weights.cols());
  for (std::size_t i = 0; i < weights.rows(); ++i)
    for (std::size_t j = 0; j < weights.cols(); ++j)
      eff(i, j) = constrain_weight(weights(i, j), indicator[i]);
  return eff;
}

MonotoneDenseLayer make_layer(std::size_t n, std::size_t m, MonotonicityIndicator t,
                              ActivationSelector s, ActivationKind kind,
                              bool output_is_linear, std::mt19937_64& rng) {
  if (m == 0) throw InvalidArgument("layer width must be at least 1");
  MonotoneDenseLayer layer{Matrix(n, m), Vector(m, 0.0), std::move(t), s, kind,
                           output_is_linear};
  layer.validate();
  const double limit = std::sqrt(6.0 / static_cast<double>(n + m));
  std::uniform_real_distribution<double> dist(-limit, limit);
  for (double& w : layer.weights.data()) w = dist(rng);
  return layer;
}

Vector layer_pre_activation(const MonotoneDenseLayer& layer, std::span<const double> x) {
  if (x.size() != layer.inputs()) {
    throw DimensionError("layer expects " + std::to_string(layer.inputs()) +
                         " inputs, got " + std::to_string(x.size()));
  }
  Vector h(layer.bias);
  for (std::size_t i = 0; i < layer.inputs(); ++i) {
    const double xi = x[i];
    const int t = layer.indicator[i];
    auto row = layer.weights.row(i);
    for (std::size_t j = 0; j < h.size(); ++j) h[j] += constrain_weight(row[j], t) * xi;
  }
  return h;
}

Vector layer_forward(const MonotoneDenseLayer& layer, std::span<const double> x,
                     LayerCache* cache) {
  Vector h = layer_pre_activation(layer, x);
  Vector y = layer.output_is_linear ? h : combined(layer.selector, layer.kind, h);
  if (cache) {
    cache->input.assign(x.begin(), x.end());
    cache->pre_activation = std::move(h);
  }
  return y;
}

LayerGradients layer_backward(const MonotoneDenseLayer& layer, const LayerCache& cache,
                              std::span<const double> grad_y) {
  if (grad_y.size() != layer.units() || cache.input.size() != layer.inputs() ||
      cache.pre_activation.size() != layer.units()) {
    throw DimensionError("layer_backward: cache or gradient shape mismatch");
  }
  Vector grad_h(grad_y.begin(), grad_y.end());
  if (!layer.output_is_linear) {
    const Vector slope = combined_derivative(layer.selector, layer.kind, cache.pre_activation);
    for (std::size_t j = 0; j < grad_h.size(); ++j) grad_h[j] *= slope[j];
  }
  LayerGradients g{Matrix(layer.inputs(), layer.units()), grad_h,
                   Vector(layer.inputs(), 0.0)};
  for (std::size_t i = 0; i < layer.inputs(); ++i) {
    const int t = layer.indicator[i];
    const double xi = cache.input[i];
    auto row = layer.weights.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < layer.units(); ++j) {
      g.weights(i, j) = xi * grad_h[j] * constrain_weight_slope(row[j], t);
      acc += constrain_weight(row[j], t) * grad_h[j];
    }
    g.input[i] = acc;
  }
  return g;
}

std::size_t param_count(const MonotoneDenseLayer& layer) noexcept {
  return layer.inputs() * layer.units() + layer.units();
}

}  // namespace mononet
