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
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "doctest.h"
#include "mononet/error.hpp"
#include "mononet/network.hpp"
#include "mononet/verification.hpp"
#include "oracles.hpp"

using namespace mononet;

namespace {

NetworkSpec type1_spec(std::vector<int> t, std::vector<std::size_t> widths, ActivationKind kind) {
  NetworkSpec s;
  s.input_indicator = MonotonicityIndicator(std::move(t));
  s.kind = kind;
  for (auto w : widths) s.hidden_layers.push_back({w, std::nullopt, std::nullopt});
  return s;
}

NetworkSpec saturated_spec(std::size_t depth, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> t(-1, 1), w(2, 9);
  NetworkSpec s;
  std::vector<int> ind(3);
  for (auto& v : ind) v = t(rng);
  s.input_indicator = MonotonicityIndicator(ind);
  s.kind = static_cast<ActivationKind>(seed % 3);
  for (std::size_t d = 0; d < depth; ++d) {
    const std::size_t m = static_cast<std::size_t>(w(rng));
    s.hidden_layers.push_back({m, ActivationSelector::all(Branch::Saturated, m), std::nullopt});
  }
  return s;
}

void randomize_biases(Network& net, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto p = get_parameters(net);
  for (auto& v : p) v += oracle::uniform(rng, 1, -0.3, 0.3)[0];
  set_parameters(net, p);
}

}  // namespace

TEST_CASE("architecture and head names") {
  CHECK(parse_architecture("type1") == Architecture::Type1);
  CHECK(parse_architecture(to_string(Architecture::Type2)) == Architecture::Type2);
  CHECK(parse_final_activation("softmax") == FinalActivation::Softmax);
  CHECK_THROWS_AS(parse_architecture("type3"), InvalidArgument);
}

TEST_CASE("type 1 parameter count") {
  NetworkSpec s = type1_spec({1}, {32}, ActivationKind::ReLU);
  s.hidden_layers[0].selector = ActivationSelector{16, 16, 0};
  const Network net = build_type1(s, 0);
  CHECK(param_count(net) == 97);
  CHECK(net.output_dim() == 1);
  CHECK(net.trunk.size() == 2);
  CHECK(net.trunk[0].selector == ActivationSelector{16, 16, 0});
}

TEST_CASE("type 1 hidden layers beyond the first are monotone increasing in their inputs") {
  const Network net = build_type1(type1_spec({1, -1, 0}, {8, 6}, ActivationKind::ELU), 3);
  CHECK(net.trunk[0].indicator.entries() == std::vector<int>{1, -1, 0});
  CHECK(net.trunk[1].indicator.entries() == std::vector<int>(8, 1));
  CHECK(net.trunk[2].indicator.entries() == std::vector<int>(6, 1));
  CHECK(net.trunk[2].output_is_linear);
}

TEST_CASE("unconstrained spec is an ordinary MLP") {
  NetworkSpec s = type1_spec({1, -1}, {8}, ActivationKind::ReLU);
  s.unconstrained = true;
  const Network net = build_network(s, 0);
  for (const auto& l : net.trunk) CHECK(l.indicator.all_zero());
  CHECK(net.trunk[0].selector.all_convex());
}

TEST_CASE("type 2 layout") {
  NetworkSpec s;
  s.architecture = Architecture::Type2;
  s.input_indicator = MonotonicityIndicator({1, -1, 0});
  s.kind = ActivationKind::ELU;
  s.feature_units = {{4, ActivationSelector::all(Branch::Convex, 4), std::nullopt},
                     {4, ActivationSelector::all(Branch::Concave, 4), std::nullopt}};
  s.free_extractor = {5};
  s.hidden_layers = {{6, std::nullopt, std::nullopt}};
  const Network net = build_type2(s, 1);
  REQUIRE(net.branches.size() == 3);
  CHECK(net.branches[0].inputs == std::vector<std::size_t>{0});
  CHECK(net.branches[1].inputs == std::vector<std::size_t>{1});
  CHECK(net.branches[2].inputs == std::vector<std::size_t>{2});
  CHECK(net.branches[0].layers[0].selector.all_convex());
  CHECK(net.branches[1].layers[0].selector.all_concave());
  CHECK(net.branches[0].layers[0].indicator.entries() == std::vector<int>{1});
  CHECK(net.branches[1].layers[0].indicator.entries() == std::vector<int>{-1});
  CHECK(net.branches[2].layers[0].indicator.all_zero());
  // unit outputs and extracted features all enter the trunk as increasing inputs
  CHECK(net.trunk[0].indicator.entries() == std::vector<int>(13, 1));

  SUBCASE("no free features") {
    NetworkSpec p;
    p.architecture = Architecture::Type2;
    p.input_indicator = MonotonicityIndicator({1, 1});
    p.hidden_layers = {{4, std::nullopt, std::nullopt}};
    const Network n2 = build_type2(p, 0);
    CHECK(n2.branches.size() == 2);
    CHECK(n2.trunk[0].inputs() == 16);
  }
  SUBCASE("free features without an extractor go straight to the trunk") {
    NetworkSpec p;
    p.architecture = Architecture::Type2;
    p.input_indicator = MonotonicityIndicator({0, 1, 0});
    p.hidden_layers = {{4, std::nullopt, std::nullopt}};
    const Network n2 = build_type2(p, 0);
    CHECK(n2.trunk[0].inputs() == 8 + 2);
  }
}

TEST_CASE("invalid specs") {
  CHECK_THROWS_AS(build_type1(type1_spec({1}, {0}, ActivationKind::ReLU), 0), InvalidArgument);
  CHECK_THROWS_AS(build_type1(type1_spec({}, {4}, ActivationKind::ReLU), 0), InvalidArgument);
  NetworkSpec s = type1_spec({1}, {4}, ActivationKind::ReLU);
  s.hidden_layers[0].selector = ActivationSelector{1, 1, 1};
  CHECK_THROWS_AS(build_type1(s, 0), InvalidArgument);
}

TEST_CASE("forward pass matches the layer-by-layer reference") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    NetworkSpec s = type1_spec({1, -1, 0, 1}, {7, 5}, static_cast<ActivationKind>(seed % 3));
    if (seed % 2) {
      s.architecture = Architecture::Type2;
      s.free_extractor = {3};
    }
    Network net = build_network(s, seed);
    randomize_biases(net, seed);
    std::mt19937_64 rng(seed);
    for (int i = 0; i < 20; ++i) {
      const auto x = oracle::uniform(rng, 4, -2, 2);
      CHECK(oracle::max_abs_diff(network_forward(net, x), oracle::logits(net, x)) < 1e-12);
    }
  }
}

TEST_CASE("one-layer network reproduces layer_forward") {
  NetworkSpec s = type1_spec({1, 0}, {}, ActivationKind::ELU);
  const Network net = build_type1(s, 4);
  REQUIRE(net.trunk.size() == 1);
  const Vector x{0.3, -0.8};
  CHECK(network_forward(net, x) == layer_forward(net.trunk[0], x));
}

TEST_CASE("heads") {
  NetworkSpec s = type1_spec({1, 0, -1}, {6}, ActivationKind::ELU);
  s.final_activation = FinalActivation::Softmax;
  s.output_dim = 4;
  const Network net = build_network(s, 2);
  std::mt19937_64 rng(2);
  for (int i = 0; i < 50; ++i) {
    const auto y = network_forward(net, oracle::uniform(rng, 3, -3, 3));
    CHECK(std::fabs(std::accumulate(y.begin(), y.end(), 0.0) - 1.0) < 1e-12);
    for (double v : y) CHECK(v > 0.0);
  }
  const auto sig = apply_head(FinalActivation::Sigmoid, Vector{0.0});
  CHECK(sig[0] == 0.5);
  CHECK(apply_head(FinalActivation::Linear, Vector{-3.5})[0] == -3.5);
  CHECK_THROWS_AS(network_forward(net, Vector{1, 2}), DimensionError);
}

TEST_CASE("network backward matches central differences") {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 30 && checked < 20; ++seed) {
    NetworkSpec s = type1_spec({1, -1, 0}, {5, 4}, static_cast<ActivationKind>(seed % 3));
    if (seed % 2) s.architecture = Architecture::Type2;
    Network net = build_network(s, seed);
    randomize_biases(net, seed + 1);
    std::mt19937_64 rng(seed);
    const auto x = oracle::uniform(rng, 3, -1, 1);
    NetworkCache cache;
    network_forward(net, x, &cache);
    bool kinky = false;
    auto scan = [&](const MonotoneDenseLayer& l, const LayerCache& c) {
      if (l.output_is_linear) return;
      for (std::size_t j = 0; j < c.pre_activation.size(); ++j)
        kinky = kinky || near_kink(l.kind, l.selector.branch_of(j), c.pre_activation[j], 1e-3);
    };
    for (std::size_t b = 0; b < net.branches.size(); ++b)
      for (std::size_t k = 0; k < net.branches[b].layers.size(); ++k) scan(net.branches[b].layers[k], cache.branches[b][k]);
    for (std::size_t k = 0; k < net.trunk.size(); ++k) scan(net.trunk[k], cache.trunk[k]);
    const auto p0 = get_parameters(net);
    bool tiny = false;
    for (double v : p0) tiny = tiny || (std::fabs(v) < 1e-3);
    if (kinky || tiny) continue;
    ++checked;

    const auto g = network_backward(net, cache, Vector{1.0});
    const auto fd_p = finite_difference_gradient(
        [&](std::span<const double> p) {
          Network n2 = net;
          set_parameters(n2, p);
          return oracle::logits(n2, x)[0];
        },
        p0);
    CHECK(relative_error(g.parameters, fd_p) < 1e-5);
    const auto fd_x = finite_difference_gradient(
        [&](std::span<const double> v) { return oracle::logits(net, Vector(v.begin(), v.end()))[0]; }, x);
    CHECK(relative_error(g.input, fd_x) < 1e-5);
  }
  CHECK(checked >= 10);
}

TEST_CASE("parameter vector round trip") {
  Network net = build_network(type1_spec({1, 0}, {4, 3}, ActivationKind::ELU), 0);
  auto p = get_parameters(net);
  CHECK(p.size() == param_count(net));
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = static_cast<double>(i);
  set_parameters(net, p);
  CHECK(get_parameters(net) == p);
  CHECK_THROWS_AS(set_parameters(net, Vector(p.size() + 1)), DimensionError);
}

TEST_CASE("rescale_equivalent matches the rescaled-activation network") {
  SUBCASE("identity rescale") {
    Network net = build_network(saturated_spec(2, 1), 1);
    randomize_biases(net, 1);
    const Network same = rescale_equivalent(net, 1.0, 0.0);
    CHECK(get_parameters(same) == get_parameters(net));
  }
  for (auto [alpha, beta, depth] : {std::tuple{2.5, -0.7, std::size_t{2}}, std::tuple{0.5, 0.3, std::size_t{3}}}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      Network net = build_network(saturated_spec(depth, seed), seed);
      randomize_biases(net, seed);
      const Network twin = rescale_equivalent(net, alpha, beta);
      const HiddenAffine aff{alpha, beta};
      std::mt19937_64 rng(seed);
      double worst = 0.0;
      for (int i = 0; i < 1000; ++i) {
        const auto x = oracle::uniform(rng, 3, -3, 3);
        worst = std::max(worst, oracle::max_abs_diff(network_forward(twin, x), network_forward(net, x, nullptr, &aff)));
      }
      CHECK(worst < 1e-9);
    }
  }
  SUBCASE("errors") {
    const Network net = build_network(saturated_spec(1, 0), 0);
    CHECK_THROWS_AS(rescale_equivalent(net, 0.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(rescale_equivalent(net, -1.0, 1.0), InvalidArgument);
    const Network mixed = build_network(type1_spec({1}, {6}, ActivationKind::ELU), 0);
    CHECK_THROWS_AS(rescale_equivalent(mixed, 2.0, 0.0), InvalidArgument);
  }
}

TEST_CASE("rescaled twin of a monotone net keeps the declared directions") {
  Network net = build_network(saturated_spec(2, 7), 7);
  const Network twin = rescale_equivalent(net, 3.0, 0.4);
  CHECK(check_pairwise_monotonicity(twin, 2000, 1).passed());
}

TEST_CASE("fold_output_affine") {
  Network net = build_network(type1_spec({1, 0}, {5}, ActivationKind::ELU), 0);
  randomize_biases(net, 0);
  const Network before = net;
  fold_output_affine(net, 3.0, -2.0);
  std::mt19937_64 rng(0);
  for (int i = 0; i < 20; ++i) {
    const auto x = oracle::uniform(rng, 2, -1, 1);
    CHECK(network_forward(net, x)[0] == doctest::Approx(3.0 * network_forward(before, x)[0] - 2.0).epsilon(1e-13));
  }
  CHECK_THROWS_AS(fold_output_affine(net, 0.0, 1.0), InvalidArgument);
}

TEST_CASE("predict applies the stored input scaling") {
  Network net = build_network(type1_spec({1, 0}, {5}, ActivationKind::ELU), 0);
  net.input_scaling = FeatureScaling{{10.0, -1.0}, {2.0, 0.5}};
  const Vector raw{12.0, -1.5};
  CHECK(predict(net, raw) == network_forward(net, Vector{1.0, -1.0}));
}

TEST_CASE("serialization") {
  NetworkSpec s = type1_spec({1, -1, 0}, {6, 4}, ActivationKind::SELU);
  s.architecture = Architecture::Type2;
  s.free_extractor = {3};
  s.final_activation = FinalActivation::Sigmoid;
  Network net = build_network(s, 5);
  randomize_biases(net, 5);
  net.input_scaling = FeatureScaling{{0.1, 0.2, 0.3}, {1.1, 1.2, 1.3}};
  net.input_box = InputBox{{-1, -2, -3}, {1, 2, 3}};

  const auto dir = std::filesystem::temp_directory_path() / "mononet_test_serialization";
  std::filesystem::create_directories(dir);
  const auto path = dir / "model.json";
  save_model(net, path);
  const Network back = load_model(path);
  CHECK(get_parameters(back) == get_parameters(net));
  CHECK(network_to_json(back) == network_to_json(net));
  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    const auto x = oracle::uniform(rng, 3, -2, 2);
    CHECK(network_forward(back, x) == network_forward(net, x));
  }

  const std::string text = network_to_json(net);
  CHECK_THROWS_AS(network_from_json(text.substr(0, text.size() / 2)), ParseError);
  CHECK_THROWS_AS(network_from_json("[]"), ParseError);
  std::string bumped = text;
  const auto pos = bumped.find("\"format_version\"");
  REQUIRE(pos != std::string::npos);
  const auto colon = bumped.find(':', pos);
  const auto end = bumped.find_first_of(",}", colon);
  bumped.replace(colon + 1, end - colon - 1, "99");
  CHECK_THROWS_AS(network_from_json(bumped), UnsupportedVersion);
  CHECK_THROWS_AS(load_model(dir / "missing.json"), IoError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("fresh constrained networks are monotone") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    NetworkSpec s = type1_spec({1, -1, 0, 1}, {8, 8}, static_cast<ActivationKind>(seed % 3));
    if (seed % 2) s.architecture = Architecture::Type2;
    Network net = build_network(s, seed);
    randomize_biases(net, seed);
    CHECK(check_pairwise_monotonicity(net, 2000, seed).passed());
    CHECK(check_gradient_sign(net, 200, seed).passed());
  }
}
