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

#include <string_view>

#include "mononet/experiments.hpp"

// JSON front-ends for the configuration structs. Missing keys keep the
// struct defaults; unknown keys are rejected so typos do not pass silently.
// Malformed input throws ParseError, bad values InvalidArgument.

namespace mononet {

/// {"architecture", "indicator", "kind", "hidden": [width | {"width",
/// "selector", "kind"}], "final_activation", "output_dim",
/// "feature_unit_width", "feature_units", "free_extractor", "unconstrained"}
NetworkSpec network_spec_from_json(std::string_view text);

/// {"architecture", "split_seed", "seed", "runs", "best", "epochs",
/// "batch_size", "learning_rate", "optimizer", "metric", "selection_metric",
/// "widths", "depths", "kinds", "cell": {"width", "depth", "kind"}}
ProtocolConfig protocol_config_from_json(std::string_view text);

/// {"kind", "widths", "seed", "epochs", "learning_rate", "batch_size",
/// "n_train", "input_range"}
FitDemoConfig fit_demo_config_from_json(std::string_view text);

/// {"n_train", "noise_std", "seed", "hidden", "epochs", "batch_size",
/// "learning_rate", "audit_pairs", "grid"}
SynthConfig synth_config_from_json(std::string_view text);

struct VerifyConfig {
  std::size_t pairs = 10000;
  std::size_t gradient_points = 1000;
  std::uint64_t seed = 0;
};

/// {"pairs", "gradient_points", "seed"}
VerifyConfig verify_config_from_json(std::string_view text);

/// Pairwise and gradient-sign audits of a model on its own input box.
struct VerifyReport {
  MonotonicityAudit pairwise;
  MonotonicityAudit gradient;
  bool passed() const noexcept { return pairwise.passed() && gradient.passed(); }
  std::string to_json() const;
};
/// `box` overrides the audit box; by default audit_box(net).
VerifyReport verify_model(const Network& net, const VerifyConfig& config,
                          const InputBox* box = nullptr);

/// Audit box of raw `data` in the network's normalized input space.
InputBox model_data_box(const Network& net, const TabularDataset& data);

/// Metric of `net` on raw (unnormalized) data, through net.input_scaling.
double evaluate_raw(const Network& net, const TabularDataset& data, Metric metric);

}  // namespace mononet
