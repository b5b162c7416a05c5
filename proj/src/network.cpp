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
#include "mononet/network.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "mononet/error.hpp"

namespace mononet {

std::string_view to_string(Architecture a) {
  return a == Architecture::Type1 ? "type1" : "type2";
}

std::string_view to_string(FinalActivation f) {
  switch (f) {
    case FinalActivation::Linear:
      return "linear";
    case FinalActivation::Sigmoid:
      return "sigmoid";
    case FinalActivation::Softmax:
      return "softmax";
  }
  return "?";
}

Architecture parse_architecture(std::string_view tag) {
  if (tag == "type1") return Architecture::Type1;
  if (tag == "type2") return Architecture::Type2;
  throw InvalidArgument("unknown architecture '" + std::string(tag) +
                        "' (expected type1 or type2)");
}

FinalActivation parse_final_activation(std::string_view tag) {
  if (tag == "linear") return FinalActivation::Linear;
  if (tag == "sigmoid") return FinalActivation::Sigmoid;
  if (tag == "softmax") return FinalActivation::Softmax;
  throw InvalidArgument("unknown final activation '" + std::string(tag) +
                        "' (expected linear, sigmoid or softmax)");
}

Vector FeatureScaling::apply(std::span<const double> raw) const {
  if (raw.size() != mean.size()) throw DimensionError("feature scaling: width mismatch");
  Vector out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) out[i] = (raw[i] - mean[i]) / scale[i];
  return out;
}

Vector FeatureScaling::invert(std::span<const double> normalized) const {
  if (normalized.size() != mean.size()) throw DimensionError("feature scaling: width mismatch");
  Vector out(normalized.size());
  for (std::size_t i = 0; i < normalized.size(); ++i)
    out[i] = normalized[i] * scale[i] + mean[i];
  return out;
}

namespace {

std::size_t concat_width(const Network& net) {
  if (net.branches.empty()) return net.input_dim;
  std::size_t w = 0;
  for (const auto& b : net.branches) w += b.output_width();
  return w;
}

void check_chain(const std::vector<MonotoneDenseLayer>& layers, std::size_t in,
                 const char* where) {
  for (const auto& l : layers) {
    l.validate();
    if (l.inputs() != in) {
      throw DimensionError(std::string(where) + ": layer expects " +
                           std::to_string(l.inputs()) + " inputs but receives " +
                           std::to_string(in));
    }
    in = l.units();
  }
}

ActivationSelector resolve_selector(const std::optional<ActivationSelector>& s,
                                    std::size_t width, bool plain) {
  if (s) {
    if (s->width() != width) {
      throw InvalidArgument("selector does not sum to layer width " + std::to_string(width));
    }
    return *s;
  }
  return plain ? ActivationSelector::all(Branch::Convex, width)
               : ActivationSelector::default_split(width);
}

// Hidden layers then the linear output layer. `first_t` applies to the first
// layer; later layers use all ones (or all zeros for the unconstrained baseline).
std::vector<MonotoneDenseLayer> build_trunk(const NetworkSpec& spec, std::size_t in,
                                            MonotonicityIndicator first_t,
                                            std::mt19937_64& rng) {
  const int later = spec.unconstrained ? 0 : 1;
  std::vector<MonotoneDenseLayer> trunk;
  MonotonicityIndicator t = std::move(first_t);
  for (const auto& hs : spec.hidden_layers) {
    if (hs.width == 0) throw InvalidArgument("hidden layer width must be at least 1");
    auto sel = resolve_selector(hs.selector, hs.width, spec.unconstrained);
    trunk.push_back(make_layer(in, hs.width, std::move(t), sel, hs.kind.value_or(spec.kind),
                               false, rng));
    in = hs.width;
    t = MonotonicityIndicator::constant(in, later);
  }
  if (spec.output_dim == 0) throw InvalidArgument("output dimension must be at least 1");
  if (spec.final_activation == FinalActivation::Softmax && spec.output_dim < 2) {
    throw InvalidArgument("softmax head needs at least 2 outputs");
  }
  trunk.push_back(make_layer(in, spec.output_dim, std::move(t),
                             ActivationSelector::all(Branch::Convex, spec.output_dim),
                             spec.kind, true, rng));
  return trunk;
}

}  // namespace

void Network::validate() const {
  if (input_indicator.size() != input_dim) {
    throw DimensionError("network indicator length differs from input width");
  }
  for (const auto& b : branches) {
    for (std::size_t i : b.inputs) {
      if (i >= input_dim) throw DimensionError("branch reads input index out of range");
    }
    check_chain(b.layers, b.inputs.size(), "branch");
  }
  if (trunk.empty()) throw DimensionError("network has no output layer");
  check_chain(trunk, concat_width(*this), "trunk");
  if (!trunk.back().output_is_linear) {
    throw InvalidArgument("last trunk layer must be the linear output layer");
  }
  if (input_scaling && (input_scaling->mean.size() != input_dim ||
                        input_scaling->scale.size() != input_dim)) {
    throw DimensionError("input scaling width differs from input width");
  }
  if (input_box && (input_box->lower.size() != input_dim ||
                    input_box->upper.size() != input_dim)) {
    throw DimensionError("input box width differs from input width");
  }
}

Network build_type1(const NetworkSpec& spec, std::uint64_t seed) {
  if (spec.architecture != Architecture::Type1) {
    throw InvalidArgument("build_type1 called with a type 2 spec");
  }
  const std::size_t n = spec.input_indicator.size();
  if (n == 0) throw InvalidArgument("network needs at least one input feature");
  std::mt19937_64 rng(seed);
  Network net;
  net.architecture = Architecture::Type1;
  net.input_dim = n;
  net.input_indicator = spec.input_indicator;
  net.final_activation = spec.final_activation;
  auto first_t = spec.unconstrained ? MonotonicityIndicator::constant(n, 0) : spec.input_indicator;
  net.trunk = build_trunk(spec, n, std::move(first_t), rng);
  net.validate();
  return net;
}

Network build_type2(const NetworkSpec& spec, std::uint64_t seed) {
  if (spec.architecture != Architecture::Type2) {
    throw InvalidArgument("build_type2 called with a type 1 spec");
  }
  const std::size_t n = spec.input_indicator.size();
  if (n == 0) throw InvalidArgument("network needs at least one input feature");
  std::mt19937_64 rng(seed);
  Network net;
  net.architecture = Architecture::Type2;
  net.input_dim = n;
  net.input_indicator = spec.input_indicator;
  net.final_activation = spec.final_activation;

  std::vector<std::size_t> free_inputs;
  std::vector<int> concat_t;
  std::size_t monotone_seen = 0;
  const std::size_t monotone_total =
      n - static_cast<std::size_t>(std::count(spec.input_indicator.entries().begin(),
                                              spec.input_indicator.entries().end(), 0));
  if (!spec.feature_units.empty() && spec.feature_units.size() != monotone_total) {
    throw InvalidArgument("type 2 spec lists " + std::to_string(spec.feature_units.size()) +
                          " feature units for " + std::to_string(monotone_total) +
                          " monotone features");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const int t = spec.input_indicator[i];
    if (t == 0) {
      free_inputs.push_back(i);
      continue;
    }
    FeatureUnitSpec unit{spec.feature_unit_width, std::nullopt, std::nullopt};
    if (!spec.feature_units.empty()) unit = spec.feature_units[monotone_seen];
    ++monotone_seen;
    if (unit.width == 0) throw InvalidArgument("feature unit width must be at least 1");
    auto sel = resolve_selector(unit.selector, unit.width, spec.unconstrained);
    InputBranch b;
    b.inputs = {i};
    b.layers.push_back(make_layer(1, unit.width,
                                  MonotonicityIndicator({spec.unconstrained ? 0 : t}), sel,
                                  unit.kind.value_or(spec.kind), false, rng));
    concat_t.insert(concat_t.end(), unit.width, spec.unconstrained ? 0 : 1);
    net.branches.push_back(std::move(b));
  }
  if (!free_inputs.empty()) {
    InputBranch b;
    b.inputs = free_inputs;
    std::size_t in = free_inputs.size();
    for (std::size_t w : spec.free_extractor) {
      if (w == 0) throw InvalidArgument("free extractor width must be at least 1");
      b.layers.push_back(make_layer(in, w, MonotonicityIndicator::constant(in, 0),
                                    ActivationSelector::all(Branch::Convex, w), spec.kind,
                                    false, rng));
      in = w;
    }
    // Extracted features enter the trunk like any hidden activation; raw free
    // features stay unconstrained.
    const int t = (b.layers.empty() || spec.unconstrained) ? 0 : 1;
    concat_t.insert(concat_t.end(), b.output_width(), t);
    net.branches.push_back(std::move(b));
  }
  const std::size_t concat = concat_t.size();
  net.trunk = build_trunk(spec, concat, MonotonicityIndicator(std::move(concat_t)), rng);
  net.validate();
  return net;
}

Network build_network(const NetworkSpec& spec, std::uint64_t seed) {
  return spec.architecture == Architecture::Type1 ? build_type1(spec, seed)
                                                  : build_type2(spec, seed);
}

std::size_t param_count(const Network& net) noexcept {
  std::size_t total = 0;
  for (const auto& b : net.branches)
    for (const auto& l : b.layers) total += param_count(l);
  for (const auto& l : net.trunk) total += param_count(l);
  return total;
}

Vector apply_head(FinalActivation head, std::span<const double> logits) {
  Vector out(logits.begin(), logits.end());
  switch (head) {
    case FinalActivation::Linear:
      break;
    case FinalActivation::Sigmoid:
      for (double& v : out) v = v >= 0.0 ? 1.0 / (1.0 + std::exp(-v)) : std::exp(v) / (1.0 + std::exp(v));
      break;
    case FinalActivation::Softmax: {
      const double top = *std::max_element(out.begin(), out.end());
      double sum = 0.0;
      for (double& v : out) sum += (v = std::exp(v - top));
      for (double& v : out) v /= sum;
      break;
    }
  }
  return out;
}

namespace {

Vector run_layer(const MonotoneDenseLayer& layer, std::span<const double> x, LayerCache* cache,
                 const HiddenAffine* affine) {
  Vector y = layer_forward(layer, x, cache);
  if (affine && !layer.output_is_linear) {
    for (double& v : y) v = affine->alpha * v + affine->beta;
  }
  return y;
}

}  // namespace

Vector network_forward(const Network& net, std::span<const double> x, NetworkCache* cache,
                       const HiddenAffine* affine) {
  if (x.size() != net.input_dim) {
    throw DimensionError("network expects " + std::to_string(net.input_dim) +
                         " inputs, got " + std::to_string(x.size()));
  }
  Vector concat;
  if (net.branches.empty()) {
    concat.assign(x.begin(), x.end());
  } else {
    if (cache) cache->branches.resize(net.branches.size());
    for (std::size_t bi = 0; bi < net.branches.size(); ++bi) {
      const auto& b = net.branches[bi];
      Vector v(b.inputs.size());
      for (std::size_t k = 0; k < b.inputs.size(); ++k) v[k] = x[b.inputs[k]];
      if (cache) cache->branches[bi].resize(b.layers.size());
      for (std::size_t li = 0; li < b.layers.size(); ++li) {
        v = run_layer(b.layers[li], v, cache ? &cache->branches[bi][li] : nullptr, affine);
      }
      concat.insert(concat.end(), v.begin(), v.end());
    }
  }
  if (cache) cache->trunk.resize(net.trunk.size());
  Vector v = std::move(concat);
  for (std::size_t li = 0; li < net.trunk.size(); ++li) {
    v = run_layer(net.trunk[li], v, cache ? &cache->trunk[li] : nullptr, affine);
  }
  Vector out = apply_head(net.final_activation, v);
  if (cache) {
    cache->logits = std::move(v);
    cache->output = out;
  }
  return out;
}

Vector predict(const Network& net, std::span<const double> raw_x) {
  if (net.input_scaling) return network_forward(net, net.input_scaling->apply(raw_x));
  return network_forward(net, raw_x);
}

namespace {

void append(Vector& dst, std::span<const double> src) { dst.insert(dst.end(), src.begin(), src.end()); }

}  // namespace

NetworkGradients network_backward(const Network& net, const NetworkCache& cache,
                                  std::span<const double> grad_logits) {
  if (cache.trunk.size() != net.trunk.size() ||
      (!net.branches.empty() && cache.branches.size() != net.branches.size())) {
    throw DimensionError("network_backward: cache does not match network");
  }
  if (grad_logits.size() != net.output_dim()) {
    throw DimensionError("network_backward: gradient width differs from output width");
  }
  std::vector<LayerGradients> trunk_grads(net.trunk.size());
  Vector g(grad_logits.begin(), grad_logits.end());
  for (std::size_t li = net.trunk.size(); li-- > 0;) {
    trunk_grads[li] = layer_backward(net.trunk[li], cache.trunk[li], g);
    g = trunk_grads[li].input;
  }

  NetworkGradients out;
  out.input.assign(net.input_dim, 0.0);
  std::vector<std::vector<LayerGradients>> branch_grads(net.branches.size());
  if (net.branches.empty()) {
    out.input = g;
  } else {
    std::size_t offset = 0;
    for (std::size_t bi = 0; bi < net.branches.size(); ++bi) {
      const auto& b = net.branches[bi];
      const std::size_t w = b.output_width();
      Vector gb(g.begin() + static_cast<std::ptrdiff_t>(offset),
                g.begin() + static_cast<std::ptrdiff_t>(offset + w));
      offset += w;
      branch_grads[bi].resize(b.layers.size());
      for (std::size_t li = b.layers.size(); li-- > 0;) {
        branch_grads[bi][li] = layer_backward(b.layers[li], cache.branches[bi][li], gb);
        gb = branch_grads[bi][li].input;
      }
      for (std::size_t k = 0; k < b.inputs.size(); ++k) out.input[b.inputs[k]] += gb[k];
    }
  }

  out.parameters.reserve(param_count(net));
  for (const auto& bg : branch_grads) {
    for (const auto& lg : bg) {
      append(out.parameters, lg.weights.data());
      append(out.parameters, lg.bias);
    }
  }
  for (const auto& lg : trunk_grads) {
    append(out.parameters, lg.weights.data());
    append(out.parameters, lg.bias);
  }
  return out;
}

namespace {

template <typename Net, typename Fn>
void for_each_layer(Net& net, Fn&& fn) {
  for (auto& b : net.branches)
    for (auto& l : b.layers) fn(l);
  for (auto& l : net.trunk) fn(l);
}

}  // namespace

Vector get_parameters(const Network& net) {
  Vector p;
  p.reserve(param_count(net));
  for_each_layer(net, [&](const MonotoneDenseLayer& l) {
    append(p, l.weights.data());
    append(p, l.bias);
  });
  return p;
}

void set_parameters(Network& net, std::span<const double> values) {
  if (values.size() != param_count(net)) {
    throw DimensionError("set_parameters: expected " + std::to_string(param_count(net)) +
                         " values, got " + std::to_string(values.size()));
  }
  std::size_t k = 0;
  for_each_layer(net, [&](MonotoneDenseLayer& l) {
    for (double& w : l.weights.data()) w = values[k++];
    for (double& b : l.bias) b = values[k++];
  });
}

namespace {

void check_saturated(const std::vector<MonotoneDenseLayer>& layers) {
  for (const auto& l : layers) {
    if (!l.output_is_linear && !l.selector.saturated_only()) {
      throw InvalidArgument(
          "rescale_equivalent requires saturated-only selectors in every hidden layer");
    }
  }
}

// Rescales the rows of `layer` flagged in `fed_by_hidden`.
void rescale_layer(MonotoneDenseLayer& layer, const std::vector<bool>& fed_by_hidden,
                   double alpha, double beta) {
  const Matrix eff = layer.effective_weights();
  for (std::size_t i = 0; i < layer.inputs(); ++i) {
    if (!fed_by_hidden[i]) continue;
    for (std::size_t j = 0; j < layer.units(); ++j) {
      layer.bias[j] += beta * eff(i, j);
      layer.weights(i, j) *= alpha;
    }
  }
}

}  // namespace

Network rescale_equivalent(const Network& net, double alpha, double beta) {
  if (!(alpha > 0.0)) throw InvalidArgument("rescale_equivalent: alpha must be > 0");
  for (const auto& b : net.branches) check_saturated(b.layers);
  check_saturated(net.trunk);

  Network out = net;
  std::vector<bool> trunk_in;
  if (out.branches.empty()) {
    trunk_in.assign(out.input_dim, false);
  } else {
    for (auto& b : out.branches) {
      for (std::size_t li = 1; li < b.layers.size(); ++li) {
        rescale_layer(b.layers[li], std::vector<bool>(b.layers[li].inputs(), true), alpha, beta);
      }
      trunk_in.insert(trunk_in.end(), b.output_width(), !b.layers.empty());
    }
  }
  for (std::size_t li = 0; li < out.trunk.size(); ++li) {
    auto& layer = out.trunk[li];
    rescale_layer(layer, li == 0 ? trunk_in : std::vector<bool>(layer.inputs(), true), alpha,
                  beta);
  }
  return out;
}

void fold_output_affine(Network& net, double scale, double shift) {
  if (!(scale > 0.0)) throw InvalidArgument("fold_output_affine: scale must be > 0");
  auto& out = net.trunk.back();
  for (double& w : out.weights.data()) w *= scale;
  for (double& b : out.bias) b = b * scale + shift;
}

}  // namespace mononet
