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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mononet/layer.hpp"

namespace mononet {

enum class Architecture { Type1, Type2 };
enum class FinalActivation { Linear, Sigmoid, Softmax };

std::string_view to_string(Architecture a);
std::string_view to_string(FinalActivation f);
Architecture parse_architecture(std::string_view tag);
FinalActivation parse_final_activation(std::string_view tag);

struct HiddenLayerSpec {
  std::size_t width = 0;
  /// Unset means ActivationSelector::default_split(width).
  std::optional<ActivationSelector> selector;
  /// Unset means NetworkSpec::kind.
  std::optional<ActivationKind> kind;
};

/// Type 2 unit for a single monotone feature.
struct FeatureUnitSpec {
  std::size_t width = 8;
  std::optional<ActivationSelector> selector;
  std::optional<ActivationKind> kind;
};

struct NetworkSpec {
  Architecture architecture = Architecture::Type1;
  MonotonicityIndicator input_indicator;
  ActivationKind kind = ActivationKind::ReLU;
  /// Hidden layers of the trunk. The output layer is added by the builder.
  std::vector<HiddenLayerSpec> hidden_layers;
  FinalActivation final_activation = FinalActivation::Linear;
  std::size_t output_dim = 1;

  /// Type 2: one entry per monotone feature in input order. When empty every
  /// monotone feature gets {feature_unit_width, default split}.
  std::vector<FeatureUnitSpec> feature_units;
  std::size_t feature_unit_width = 8;
  /// Type 2: widths of the dense stack fed with the free features. Empty means
  /// the free features go straight into the trunk.
  std::vector<std::size_t> free_extractor;

  /// Baseline switch: every layer gets t = 0 and, unless a selector is given,
  /// plain base activations. The result is an ordinary MLP with no
  /// monotonicity guarantee.
  bool unconstrained = false;
};

/// Type 2 sub-network reading a subset of the inputs.
struct InputBranch {
  std::vector<std::size_t> inputs;
  std::vector<MonotoneDenseLayer> layers;
  std::size_t output_width() const noexcept {
    return layers.empty() ? inputs.size() : layers.back().units();
  }
};

/// Per-feature affine map from raw to normalized inputs: (x - mean) / scale.
struct FeatureScaling {
  Vector mean;
  Vector scale;
  Vector apply(std::span<const double> raw) const;
  Vector invert(std::span<const double> normalized) const;
};

/// Axis-aligned box in normalized input space used by the verification suite.
struct InputBox {
  Vector lower;
  Vector upper;
};

struct Network {
  Architecture architecture = Architecture::Type1;
  std::size_t input_dim = 0;
  /// Declared direction of every input feature.
  MonotonicityIndicator input_indicator;
  /// Empty for type 1, whose trunk reads the raw input vector.
  std::vector<InputBranch> branches;
  /// Hidden layers followed by the linear output layer.
  std::vector<MonotoneDenseLayer> trunk;
  FinalActivation final_activation = FinalActivation::Linear;

  std::optional<FeatureScaling> input_scaling;
  std::optional<InputBox> input_box;

  std::size_t output_dim() const noexcept { return trunk.empty() ? 0 : trunk.back().units(); }
  /// Throws if adjacent dimensions disagree or a layer is malformed.
  void validate() const;
};

Network build_type1(const NetworkSpec& spec, std::uint64_t seed);
Network build_type2(const NetworkSpec& spec, std::uint64_t seed);
/// Dispatches on spec.architecture.
Network build_network(const NetworkSpec& spec, std::uint64_t seed);

std::size_t param_count(const Network& net) noexcept;

/// Replaces hidden activations y by alpha * y + beta during a forward pass.
struct HiddenAffine {
  double alpha = 1.0;
  double beta = 0.0;
};

struct NetworkCache {
  std::vector<std::vector<LayerCache>> branches;
  std::vector<LayerCache> trunk;
  Vector logits;
  Vector output;
};

/// Applies the head (identity, sigmoid or softmax) to the output-layer values.
Vector apply_head(FinalActivation head, std::span<const double> logits);

/// Forward pass on normalized inputs. `affine` is only used to evaluate the
/// rescaled-activation twin of a saturated network.
Vector network_forward(const Network& net, std::span<const double> x,
                       NetworkCache* cache = nullptr, const HiddenAffine* affine = nullptr);

/// Forward pass on raw inputs, applying input_scaling first when present.
Vector predict(const Network& net, std::span<const double> raw_x);

struct NetworkGradients {
  /// Flattened in parameter order, see get_parameters().
  Vector parameters;
  Vector input;
};

/// Backward pass from dL/dlogits (the output layer values before the head).
NetworkGradients network_backward(const Network& net, const NetworkCache& cache,
                                  std::span<const double> grad_logits);

/// All free parameters, branch layers first then trunk, W (row-major) then b
/// per layer.
Vector get_parameters(const Network& net);
void set_parameters(Network& net, std::span<const double> values);

/// Builds the plain-saturated network whose output equals `net` evaluated
/// with hidden activations alpha * y + beta:
///   W'_k = alpha W_k,  b'_k = beta |W_k|_t 1 + b_k
/// for every layer fed by hidden activations. Requires alpha > 0 and
/// saturated-only selectors in every hidden layer.
Network rescale_equivalent(const Network& net, double alpha, double beta);

/// Scales the output layer so the network predicts scale * y + shift.
void fold_output_affine(Network& net, double scale, double shift);

inline constexpr int kModelFormatVersion = 1;

std::string network_to_json(const Network& net);
/// Throws ParseError on malformed input, UnsupportedVersion on a version tag
/// other than kModelFormatVersion.
Network network_from_json(std::string_view text);
void save_model(const Network& net, const std::filesystem::path& path);
Network load_model(const std::filesystem::path& path);

}  // namespace mononet
