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

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace mononet {

using Vector = std::vector<double>;

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  /// Throws DimensionError if data.size() != rows * cols.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  Matrix transposed() const;
  bool all_finite() const noexcept;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// result[j] = sum_i W(i, j) * x[i] + b[j] for W of shape n x m.
Vector affine_forward(const Matrix& weights, std::span<const double> x,
                      std::span<const double> bias);

struct AffineGradients {
  Matrix weights;
  Vector bias;
  Vector input;
};

/// Reverse-mode rule for affine_forward given dL/dresult.
AffineGradients affine_backward(const Matrix& weights, std::span<const double> x,
                                std::span<const double> grad_out);

using ScalarFunction = std::function<double(std::span<const double>)>;

/// Central differences: (f(x + h e_i) - f(x - h e_i)) / 2h for every i.
/// Throws NumericalError when f is non-finite at a probe point.
Vector finite_difference_gradient(const ScalarFunction& f, std::span<const double> x,
                                  double step = 1e-5);

/// ||a - b|| / (||a|| + ||b||), zero when both are zero.
double relative_error(std::span<const double> a, std::span<const double> b);

bool all_finite(std::span<const double> v) noexcept;

}  // namespace mononet
