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
#include "mononet/numeric.hpp"

#include <cmath>
#include <string>

#include "mononet/error.hpp"

namespace mononet {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw DimensionError("matrix data has " + std::to_string(data_.size()) +
                         " entries, expected " + std::to_string(rows_ * cols_));
  }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("ragged matrix initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

bool Matrix::all_finite() const noexcept { return mononet::all_finite(data_); }

bool all_finite(std::span<const double> v) noexcept {
  for (double d : v)
    if (!std::isfinite(d)) return false;
  return true;
}

Vector affine_forward(const Matrix& weights, std::span<const double> x,
                      std::span<const double> bias) {
  if (x.size() != weights.rows() || bias.size() != weights.cols()) {
    throw DimensionError("affine_forward: W is " + std::to_string(weights.rows()) + "x" +
                         std::to_string(weights.cols()) + ", x has " +
                         std::to_string(x.size()) + ", b has " + std::to_string(bias.size()));
  }
  Vector out(bias.begin(), bias.end());
  for (std::size_t i = 0; i < weights.rows(); ++i) {
    const double xi = x[i];
    auto row = weights.row(i);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += row[j] * xi;
  }
  return out;
}

AffineGradients affine_backward(const Matrix& weights, std::span<const double> x,
                                std::span<const double> grad_out) {
  if (x.size() != weights.rows() || grad_out.size() != weights.cols()) {
    throw DimensionError("affine_backward: shape mismatch");
  }
  AffineGradients g{Matrix(weights.rows(), weights.cols()),
                    Vector(grad_out.begin(), grad_out.end()), Vector(x.size(), 0.0)};
  for (std::size_t i = 0; i < weights.rows(); ++i) {
    auto row = weights.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < weights.cols(); ++j) {
      g.weights(i, j) = x[i] * grad_out[j];
      acc += row[j] * grad_out[j];
    }
    g.input[i] = acc;
  }
  return g;
}

Vector finite_difference_gradient(const ScalarFunction& f, std::span<const double> x,
                                  double step) {
  if (!(step > 0.0)) throw InvalidArgument("finite difference step must be positive");
  Vector probe(x.begin(), x.end());
  Vector grad(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double saved = probe[i];
    probe[i] = saved + step;
    const double up = f(probe);
    probe[i] = saved - step;
    const double down = f(probe);
    probe[i] = saved;
    if (!std::isfinite(up) || !std::isfinite(down)) {
      throw NumericalError("non-finite function value while differencing coordinate " +
                           std::to_string(i));
    }
    grad[i] = (up - down) / (2.0 * step);
  }
  return grad;
}

double relative_error(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("relative_error: length mismatch");
  double diff = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  const double denom = std::sqrt(na) + std::sqrt(nb);
  if (denom == 0.0) return 0.0;
  return std::sqrt(diff) / denom;
}

}  // namespace mononet
