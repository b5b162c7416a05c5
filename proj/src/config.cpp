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
#include "mononet/config.hpp"

#include <algorithm>
#include <initializer_list>

#include "json.hpp"
#include "mononet/error.hpp"

namespace mononet {

using nlohmann::json;

namespace {

json parse_object(std::string_view text, std::initializer_list<std::string_view> allowed) {
  json j;
  try {
    j = text.empty() ? json::object() : json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw InvalidArgument("unknown config key '" + key + "'");
    }
  }
  return j;
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("config key '") + key + "': " + e.what());
  }
}

ActivationSelector selector_from(const json& s) {
  const auto v = s.get<std::vector<std::size_t>>();
  if (v.size() != 3) throw InvalidArgument("selector must have three entries");
  return {v[0], v[1], v[2]};
}

std::vector<ActivationKind> kinds_from(const json& j) {
  std::vector<ActivationKind> out;
  for (const auto& k : j) out.push_back(parse_activation_kind(k.get<std::string>()));
  return out;
}

}  // namespace

NetworkSpec network_spec_from_json(std::string_view text) {
  const json j = parse_object(text, {"architecture", "indicator", "kind", "hidden",
                                     "final_activation", "output_dim", "feature_unit_width",
                                     "feature_units", "free_extractor", "unconstrained"});
  NetworkSpec spec;
  try {
    if (j.contains("architecture"))
      spec.architecture = parse_architecture(j.at("architecture").get<std::string>());
    if (!j.contains("indicator")) throw InvalidArgument("network spec needs an indicator");
    spec.input_indicator = MonotonicityIndicator(j.at("indicator").get<std::vector<int>>());
    if (j.contains("kind")) spec.kind = parse_activation_kind(j.at("kind").get<std::string>());
    if (j.contains("hidden")) {
      for (const auto& h : j.at("hidden")) {
        HiddenLayerSpec hs;
        if (h.is_number()) {
          hs.width = h.get<std::size_t>();
        } else {
          hs.width = h.at("width").get<std::size_t>();
          if (h.contains("selector")) hs.selector = selector_from(h.at("selector"));
          if (h.contains("kind")) hs.kind = parse_activation_kind(h.at("kind").get<std::string>());
        }
        spec.hidden_layers.push_back(hs);
      }
    }
    if (j.contains("final_activation"))
      spec.final_activation = parse_final_activation(j.at("final_activation").get<std::string>());
    read(j, "output_dim", spec.output_dim);
    read(j, "feature_unit_width", spec.feature_unit_width);
    if (j.contains("feature_units")) {
      for (const auto& f : j.at("feature_units")) {
        FeatureUnitSpec fu;
        fu.width = f.value("width", spec.feature_unit_width);
        if (f.contains("selector")) fu.selector = selector_from(f.at("selector"));
        if (f.contains("kind")) fu.kind = parse_activation_kind(f.at("kind").get<std::string>());
        spec.feature_units.push_back(fu);
      }
    }
    read(j, "free_extractor", spec.free_extractor);
    read(j, "unconstrained", spec.unconstrained);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed network spec: ") + e.what());
  }
  return spec;
}

ProtocolConfig protocol_config_from_json(std::string_view text) {
  const json j = parse_object(
      text, {"architecture", "split_seed", "seed", "runs", "best", "epochs", "batch_size",
             "learning_rate", "optimizer", "metric", "selection_metric", "widths", "depths",
             "kinds", "cell"});
  ProtocolConfig c;
  try {
    if (j.contains("architecture"))
      c.architecture = parse_architecture(j.at("architecture").get<std::string>());
    read(j, "split_seed", c.split_seed);
    read(j, "seed", c.seed);
    read(j, "runs", c.runs);
    read(j, "best", c.best);
    read(j, "epochs", c.train.epochs);
    read(j, "batch_size", c.train.batch_size);
    read(j, "learning_rate", c.train.optimizer.learning_rate);
    if (j.contains("optimizer"))
      c.train.optimizer.kind = parse_optimizer(j.at("optimizer").get<std::string>());
    if (j.contains("metric")) c.train.metric = parse_metric(j.at("metric").get<std::string>());
    if (j.contains("selection_metric"))
      c.train.selection_metric = parse_metric(j.at("selection_metric").get<std::string>());
    read(j, "widths", c.train.space.widths);
    read(j, "depths", c.train.space.depths);
    if (j.contains("kinds")) c.train.space.kinds = kinds_from(j.at("kinds"));
    if (j.contains("cell") && !j.at("cell").is_null()) {
      const auto& cj = j.at("cell");
      for (const auto& [key, _] : cj.items()) {
        if (key != "width" && key != "depth" && key != "kind" && key != "selector")
          throw InvalidArgument("unknown cell key '" + key + "'");
      }
      GridCell cell;
      cell.width = cj.at("width").get<std::size_t>();
      cell.depth = cj.value("depth", std::size_t{1});
      cell.kind = parse_activation_kind(cj.value("kind", std::string("elu")));
      if (cj.contains("selector") && !cj.at("selector").is_null()) cell.selector = selector_from(cj.at("selector"));
      c.cell = cell;
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed training config: ") + e.what());
  }
  c.train.validate();
  if (c.cell && c.cell->selector && c.cell->selector->width() != c.cell->width)
    throw InvalidArgument("cell selector does not sum to width " + std::to_string(c.cell->width));
  if (c.runs < 1) throw InvalidArgument("runs must be >= 1");
  if (c.best < 1 || c.best > c.runs) throw InvalidArgument("best must be in [1, runs]");
  return c;
}

FitDemoConfig fit_demo_config_from_json(std::string_view text) {
  const json j = parse_object(text, {"kind", "widths", "seed", "epochs", "learning_rate",
                                     "batch_size", "n_train", "input_range"});
  FitDemoConfig c;
  try {
    if (j.contains("kind")) c.kind = parse_activation_kind(j.at("kind").get<std::string>());
    read(j, "widths", c.widths);
    read(j, "seed", c.seed);
    read(j, "epochs", c.training.epochs);
    read(j, "learning_rate", c.training.learning_rate);
    read(j, "batch_size", c.training.batch_size);
    read(j, "n_train", c.training.n_train);
    read(j, "input_range", c.training.input_range);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed fit-demo config: ") + e.what());
  }
  if (!(c.training.input_range > 0.0)) throw InvalidArgument("input_range must be > 0");
  return c;
}

SynthConfig synth_config_from_json(std::string_view text) {
  const json j = parse_object(text, {"n_train", "noise_std", "seed", "hidden", "epochs",
                                     "batch_size", "learning_rate", "audit_pairs", "grid"});
  SynthConfig c;
  read(j, "n_train", c.n_train);
  read(j, "noise_std", c.noise_std);
  read(j, "seed", c.seed);
  read(j, "hidden", c.hidden);
  read(j, "epochs", c.epochs);
  read(j, "batch_size", c.batch_size);
  read(j, "learning_rate", c.learning_rate);
  read(j, "audit_pairs", c.audit_pairs);
  read(j, "grid", c.grid);
  if (c.n_train < 5) throw InvalidArgument("synth needs at least 5 training points");
  if (!(c.noise_std >= 0.0)) throw InvalidArgument("noise_std must be >= 0");
  return c;
}

VerifyConfig verify_config_from_json(std::string_view text) {
  const json j = parse_object(text, {"pairs", "gradient_points", "seed"});
  VerifyConfig c;
  read(j, "pairs", c.pairs);
  read(j, "gradient_points", c.gradient_points);
  read(j, "seed", c.seed);
  if (c.pairs < 1 || c.gradient_points < 1) throw InvalidArgument("pair and point counts must be >= 1");
  return c;
}

std::string VerifyReport::to_json() const {
  json j{{"pairwise", json::parse(pairwise.to_json())},
         {"gradient_sign", json::parse(gradient.to_json())},
         {"passed", passed()}};
  return j.dump(1);
}

VerifyReport verify_model(const Network& net, const VerifyConfig& config, const InputBox* box) {
  const InputBox b = box ? *box : audit_box(net);
  return {check_pairwise_monotonicity(net, net.input_indicator, b, config.pairs, config.seed),
          check_gradient_sign(net, net.input_indicator, b, config.gradient_points, config.seed)};
}

namespace {

TabularDataset scaled_for(const Network& net, const TabularDataset& data) {
  if (data.cols() != net.input_dim) {
    throw DimensionError("dataset has " + std::to_string(data.cols()) +
                         " features, model expects " + std::to_string(net.input_dim));
  }
  return net.input_scaling ? apply_normalization(data, *net.input_scaling) : data;
}

}  // namespace

InputBox model_data_box(const Network& net, const TabularDataset& data) {
  return data_box(scaled_for(net, data));
}

double evaluate_raw(const Network& net, const TabularDataset& data, Metric metric) {
  return evaluate(net, scaled_for(net, data), metric);
}

}  // namespace mononet
