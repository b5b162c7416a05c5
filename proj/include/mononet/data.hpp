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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mononet/layer.hpp"
#include "mononet/network.hpp"
#include "mononet/numeric.hpp"

namespace mononet {

enum class Task { Regression, Classification };

std::string_view to_string(Task task);
Task parse_task(std::string_view tag);

/// Fixed one-hot scheme for a coded categorical column.
struct CategoricalEncoding {
  std::string column;
  std::vector<double> levels;
};

struct DatasetDescriptor {
  std::string name;
  Task task = Task::Regression;
  std::vector<std::string> feature_names;
  MonotonicityIndicator indicator;
  std::string target_column;
  /// Classification only; 0 means "infer from the data".
  std::size_t n_classes = 0;
  /// Keep only rows whose target is below this quantile of the loaded targets.
  std::optional<double> target_quantile_filter;
  std::optional<FeatureScaling> normalization;
  /// Columns expanded into one indicator feature per level on load. They
  /// must be free (t = 0).
  std::vector<CategoricalEncoding> categorical;

  /// Throws InvalidArgument when the indicator and feature list disagree.
  void validate() const;
};

struct TabularDataset {
  Matrix features;  // rows x features
  Vector targets;   // regression value, or class index for classification
  DatasetDescriptor descriptor;
  std::size_t dropped_rows = 0;

  std::size_t rows() const noexcept { return features.rows(); }
  std::size_t cols() const noexcept { return features.cols(); }
  Vector row(std::size_t r) const {
    auto s = features.row(r);
    return {s.begin(), s.end()};
  }
  std::size_t n_classes() const;
};

/// Feature list after categorical expansion: "col=level" columns replace
/// each categorical column in place, with t = 0.
DatasetDescriptor encoded_descriptor(const DatasetDescriptor& d);

/// Comma-separated, header row first, '.' decimals. Columns not named in the
/// descriptor are ignored. Rows with a "?" or empty cell in a used column are
/// dropped and counted; any other unparseable cell throws ParseError naming
/// the line and column. The result carries encoded_descriptor(descriptor).
TabularDataset parse_csv(std::string_view text, const DatasetDescriptor& descriptor);
TabularDataset load_csv(const std::filesystem::path& path, const DatasetDescriptor& descriptor);
void write_csv(const TabularDataset& data, const std::filesystem::path& path);

/// Per-feature z-score statistics; constant columns get scale 1.
FeatureScaling fit_normalization(const TabularDataset& data);
TabularDataset apply_normalization(const TabularDataset& data, const FeatureScaling& scaling);
/// fit_normalization followed by apply_normalization.
std::pair<TabularDataset, FeatureScaling> normalize(const TabularDataset& data);

TabularDataset subset(const TabularDataset& data, const std::vector<std::size_t>& rows);

struct DataSplit {
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
};

/// Seeded permutation; the first floor(0.8 N) rows of it train.
DataSplit split_80_20(std::size_t n_rows, std::uint64_t seed);
std::pair<TabularDataset, TabularDataset> split_80_20(const TabularDataset& data,
                                                      std::uint64_t seed);

std::vector<std::string> builtin_dataset_names();
/// Throws InvalidArgument listing the available names for an unknown name.
DatasetDescriptor builtin_descriptor(std::string_view name);

std::string descriptor_to_json(const DatasetDescriptor& d);
DatasetDescriptor descriptor_from_json(std::string_view text);

/// Coefficients of the two-feature synthetic benchmark.
struct SyntheticCoefficients {
  double a = 0.5;
  double b = 0.35;
  double c = 3.3;
};

/// sgn(a x) |x|^3 + b sin(c y); non-decreasing in x for a > 0.
double synthetic_target(double x, double y, const SyntheticCoefficients& k = {});

/// x, y ~ U(-2.5, 2.5) with additive N(0, noise_std^2) target noise.
TabularDataset generate_synthetic(std::size_t n_points, double noise_std, std::uint64_t seed);

/// Empirical per-feature range expanded by `expand` of its width on each side.
InputBox data_box(const TabularDataset& data, double expand = 0.1);

}  // namespace mononet
