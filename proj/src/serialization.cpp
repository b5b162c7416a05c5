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
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mononet/error.hpp"
#include "mononet/network.hpp"

namespace mononet {

using nlohmann::json;

namespace {

json layer_to_json(const MonotoneDenseLayer& l) {
  return json{{"n", l.inputs()},
              {"m", l.units()},
              {"kind", std::string(to_string(l.kind))},
              {"t", l.indicator.entries()},
              {"s", {l.selector.convex, l.selector.concave, l.selector.saturated}},
              {"W", std::vector<double>(l.weights.data().begin(), l.weights.data().end())},
              {"b", l.bias},
              {"output_is_linear", l.output_is_linear}};
}

MonotoneDenseLayer layer_from_json(const json& j) {
  const auto n = j.at("n").get<std::size_t>();
  const auto m = j.at("m").get<std::size_t>();
  const auto s = j.at("s").get<std::vector<std::size_t>>();
  if (s.size() != 3) throw ParseError("layer selector must have three entries");
  MonotoneDenseLayer l{Matrix(n, m, j.at("W").get<std::vector<double>>()),
                       j.at("b").get<std::vector<double>>(),
                       MonotonicityIndicator(j.at("t").get<std::vector<int>>()),
                       ActivationSelector{s[0], s[1], s[2]},
                       parse_activation_kind(j.at("kind").get<std::string>()),
                       j.at("output_is_linear").get<bool>()};
  l.validate();
  if (!l.weights.all_finite() || !all_finite(l.bias)) {
    throw ParseError("layer contains non-finite parameters");
  }
  return l;
}

}  // namespace

std::string network_to_json(const Network& net) {
  json j;
  j["format_version"] = kModelFormatVersion;
  j["architecture"] = std::string(to_string(net.architecture));
  j["final_activation"] = std::string(to_string(net.final_activation));
  j["input_dim"] = net.input_dim;
  j["input_indicator"] = net.input_indicator.entries();
  json branches = json::array();
  for (const auto& b : net.branches) {
    json layers = json::array();
    for (const auto& l : b.layers) layers.push_back(layer_to_json(l));
    branches.push_back({{"inputs", b.inputs}, {"layers", layers}});
  }
  j["branches"] = branches;
  json layers = json::array();
  for (const auto& l : net.trunk) layers.push_back(layer_to_json(l));
  j["layers"] = layers;
  if (net.input_scaling) {
    j["input_scaling"] = {{"mean", net.input_scaling->mean}, {"scale", net.input_scaling->scale}};
  }
  if (net.input_box) {
    j["input_box"] = {{"lower", net.input_box->lower}, {"upper", net.input_box->upper}};
  }
  return j.dump(1);
}

Network network_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (!j.is_object() || !j.contains("format_version")) {
      throw ParseError("model file has no format_version field");
    }
    const int version = j.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
      throw UnsupportedVersion("model format_version " + std::to_string(version) +
                               " is not supported (expected " +
                               std::to_string(kModelFormatVersion) + ")");
    }
    Network net;
    net.architecture = parse_architecture(j.at("architecture").get<std::string>());
    net.final_activation = parse_final_activation(j.at("final_activation").get<std::string>());
    net.input_dim = j.at("input_dim").get<std::size_t>();
    net.input_indicator = MonotonicityIndicator(j.at("input_indicator").get<std::vector<int>>());
    for (const auto& jb : j.at("branches")) {
      InputBranch b;
      b.inputs = jb.at("inputs").get<std::vector<std::size_t>>();
      for (const auto& jl : jb.at("layers")) b.layers.push_back(layer_from_json(jl));
      net.branches.push_back(std::move(b));
    }
    for (const auto& jl : j.at("layers")) net.trunk.push_back(layer_from_json(jl));
    if (j.contains("input_scaling")) {
      const auto& s = j.at("input_scaling");
      net.input_scaling = FeatureScaling{s.at("mean").get<Vector>(), s.at("scale").get<Vector>()};
    }
    if (j.contains("input_box")) {
      const auto& s = j.at("input_box");
      net.input_box = InputBox{s.at("lower").get<Vector>(), s.at("upper").get<Vector>()};
    }
    net.validate();
    return net;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed model file: ") + e.what());
  } catch (const UnsupportedVersion&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(std::string("invalid model: ") + e.what());
  }
}

void save_model(const Network& net, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << network_to_json(net) << '\n';
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

Network load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return network_from_json(buf.str());
}

}  // namespace mononet
