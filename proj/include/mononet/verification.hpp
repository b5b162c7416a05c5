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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mononet/network.hpp"
#include "mononet/training.hpp"

namespace mononet {

/// Ordering or sign audit of one declared-monotone feature.
struct MonotonicityReport {
  std::size_t feature = 0;
  int direction = 0;
  std::size_t pairs_tested = 0;
  std::size_t violations = 0;
  /// Largest amount by which an output moved against the declared direction.
  double worst_violation = 0.0;
};

struct MonotonicityAudit {
  std::vector<MonotonicityReport> features;
  std::size_t total_violations() const noexcept;
  bool passed() const noexcept { return total_violations() == 0; }
  std::string to_json() const;
};

/// The box a network is audited on: net.input_box when set, else [-1, 1]^n.
InputBox audit_box(const Network& net);

/// For every feature with t != 0: x uniform in `box`, delta uniform in
/// (0, box width], compare every output-layer value at x and x + delta e_i.
/// Output-layer values are compared before the head. Float slack is
/// 1e-12 max(1, |y(x)|).
MonotonicityAudit check_pairwise_monotonicity(const Network& net,
                                              const MonotonicityIndicator& indicator,
                                              const InputBox& box, std::size_t n_pairs,
                                              std::uint64_t seed);
MonotonicityAudit check_pairwise_monotonicity(const Network& net, std::size_t n_pairs,
                                              std::uint64_t seed);

/// Central-difference partials (step 1e-5) of every output-layer value with
/// respect to each monotone feature at random points of `box`; a violation is
/// t_i * d < -1e-8.
MonotonicityAudit check_gradient_sign(const Network& net, const MonotonicityIndicator& indicator,
                                      const InputBox& box, std::size_t n_points,
                                      std::uint64_t seed);
MonotonicityAudit check_gradient_sign(const Network& net, std::size_t n_points,
                                      std::uint64_t seed);

enum class Curvature { Convex, Concave };

struct ConvexityReport {
  Curvature mode = Curvature::Convex;
  std::size_t triples_tested = 0;
  std::size_t violations = 0;
  double worst_violation = 0.0;
  bool passed() const noexcept { return violations == 0; }
  std::string to_json() const;
};

/// Midpoint test f((a+b)/2) <= (f(a)+f(b))/2 (reversed for concave) with
/// 1e-10 slack, on output-layer values before the head. Throws
/// InvalidArgument unless every hidden layer's selector is all-convex (resp.
/// all-concave).
ConvexityReport check_convexity(const Network& net, Curvature mode, const InputBox& box,
                                std::size_t n_triples, std::uint64_t seed);

/// Same test on a single activation branch over [lo, hi].
ConvexityReport check_convexity(ActivationKind kind, Branch branch, Curvature mode, double lo,
                                double hi, std::size_t n_triples, std::uint64_t seed);

struct BatteryEntry {
  std::string name;
  ActivationSelector selector;
  double test_mse = 0.0;
  double threshold = 0.0;
  /// True when the case must reach test_mse < threshold, false for a
  /// negative control that must stay above it.
  bool expect_fit = true;
  bool passed() const noexcept { return expect_fit ? test_mse < threshold : test_mse > threshold; }
};

struct BatteryConfig {
  std::size_t width = 32;
  std::size_t n_train = 256;
  std::size_t epochs = 600;
  std::size_t batch_size = 16;
  double learning_rate = 5e-3;
  /// Inputs are mapped affinely onto [-input_range, input_range].
  double input_range = 2.0;
};

struct BatteryReport {
  ActivationKind kind = ActivationKind::ELU;
  std::vector<BatteryEntry> entries;
  bool passed() const noexcept;
  std::string to_json() const;
};

/// One-hidden-layer fits of monotone 1-D targets: convex e^x - 1 on [0, 2],
/// concave log(1 + x) on [0, 3], sigmoidal 1 / (1 + e^(-5x)) on [-2, 2] with
/// saturated units, the cubic x^3 on [-1, 1] with half convex and half
/// concave units, and the sigmoidal target with convex units only as a
/// negative control.
BatteryReport universal_fit_battery(ActivationKind kind, std::uint64_t seed,
                                    const BatteryConfig& config = {});

/// Trains a single-hidden-layer, single-input net with selector `s` on
/// `target` sampled on [lo, hi] and returns it with the test MSE on a
/// 201-point grid.
struct CurveFit {
  Network net;
  double test_mse = 0.0;
  TrainReport report;
};
CurveFit fit_curve(const std::function<double(double)>& target, double lo, double hi,
                   ActivationKind kind, const ActivationSelector& s, bool unconstrained,
                   std::uint64_t seed, const BatteryConfig& config);

}  // namespace mononet
