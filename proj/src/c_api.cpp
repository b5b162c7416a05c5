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
#include "mononet/mononet.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "json.hpp"
#include "mononet/config.hpp"
#include "mononet/error.hpp"

struct mn_network {
  mononet::Network net;
};

struct mn_dataset {
  mononet::TabularDataset data;
};

namespace {

thread_local std::string g_last_error;

mn_status fail(mn_status s, const char* what) {
  g_last_error = what;
  return s;
}

template <class F>
mn_status guarded(F&& f) noexcept {
  try {
    g_last_error.clear();
    f();
    return MN_OK;
  } catch (const mononet::Error& e) {
    return fail(static_cast<mn_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(MN_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(MN_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(MN_ERR_INTERNAL, "unknown error");
  }
}

void require(const void* p, const char* name) {
  if (!p) throw mononet::InvalidArgument(std::string(name) + " must not be null");
}

std::string_view text_or_empty(const char* s) { return s ? std::string_view(s) : std::string_view(); }

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void copy_out(const mononet::Vector& v, double* out, size_t out_len) {
  if (out_len < v.size()) {
    throw mononet::DimensionError("output buffer holds " + std::to_string(out_len) +
                                  " values, need " + std::to_string(v.size()));
  }
  std::copy(v.begin(), v.end(), out);
}

}  // namespace

extern "C" {

const char* mn_version(void) { return "1.0.0"; }

const char* mn_last_error(void) { return g_last_error.c_str(); }

const char* mn_status_name(mn_status status) {
  switch (status) {
    case MN_OK: return "ok";
    case MN_ERR_INVALID_ARGUMENT: return "invalid argument";
    case MN_ERR_DIMENSION: return "dimension mismatch";
    case MN_ERR_PARSE: return "parse error";
    case MN_ERR_IO: return "i/o error";
    case MN_ERR_NUMERICAL: return "numerical failure";
    case MN_ERR_UNSUPPORTED_VERSION: return "unsupported version";
    case MN_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void mn_string_free(char* s) { std::free(s); }

mn_status mn_network_build(const char* spec_json, uint64_t seed, mn_network** out) {
  return guarded([&] {
    require(spec_json, "spec_json");
    require(out, "out");
    auto net = mononet::build_network(mononet::network_spec_from_json(spec_json), seed);
    *out = new mn_network{std::move(net)};
  });
}

mn_status mn_network_from_json(const char* model_json, mn_network** out) {
  return guarded([&] {
    require(model_json, "model_json");
    require(out, "out");
    *out = new mn_network{mononet::network_from_json(model_json)};
  });
}

mn_status mn_network_load(const char* path, mn_network** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new mn_network{mononet::load_model(path)};
  });
}

mn_status mn_network_save(const mn_network* net, const char* path) {
  return guarded([&] {
    require(net, "net");
    require(path, "path");
    mononet::save_model(net->net, path);
  });
}

mn_status mn_network_to_json(const mn_network* net, char** out) {
  return guarded([&] {
    require(net, "net");
    require(out, "out");
    *out = dup_string(mononet::network_to_json(net->net));
  });
}

void mn_network_free(mn_network* net) { delete net; }

mn_status mn_network_input_dim(const mn_network* net, size_t* out) {
  return guarded([&] {
    require(net, "net");
    require(out, "out");
    *out = net->net.input_dim;
  });
}

mn_status mn_network_output_dim(const mn_network* net, size_t* out) {
  return guarded([&] {
    require(net, "net");
    require(out, "out");
    *out = net->net.output_dim();
  });
}

mn_status mn_network_param_count(const mn_network* net, size_t* out) {
  return guarded([&] {
    require(net, "net");
    require(out, "out");
    *out = mononet::param_count(net->net);
  });
}

mn_status mn_network_forward(const mn_network* net, const double* x, size_t x_len, double* out,
                             size_t out_len) {
  return guarded([&] {
    require(net, "net");
    require(x, "x");
    require(out, "out");
    copy_out(mononet::network_forward(net->net, {x, x_len}), out, out_len);
  });
}

mn_status mn_network_predict(const mn_network* net, const double* x, size_t x_len, double* out,
                             size_t out_len) {
  return guarded([&] {
    require(net, "net");
    require(x, "x");
    require(out, "out");
    copy_out(mononet::predict(net->net, {x, x_len}), out, out_len);
  });
}

mn_status mn_network_rescale(const mn_network* net, double alpha, double beta, mn_network** out) {
  return guarded([&] {
    require(net, "net");
    require(out, "out");
    *out = new mn_network{mononet::rescale_equivalent(net->net, alpha, beta)};
  });
}

mn_status mn_builtin_names(char** out) {
  return guarded([&] {
    require(out, "out");
    *out = dup_string(nlohmann::json(mononet::builtin_dataset_names()).dump());
  });
}

mn_status mn_builtin_descriptor(const char* name, char** out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    *out = dup_string(mononet::descriptor_to_json(mononet::builtin_descriptor(name)));
  });
}

mn_status mn_dataset_load_builtin(const char* name, const char* csv_path, mn_dataset** out) {
  return guarded([&] {
    require(name, "name");
    require(csv_path, "csv_path");
    require(out, "out");
    *out = new mn_dataset{mononet::load_csv(csv_path, mononet::builtin_descriptor(name))};
  });
}

mn_status mn_dataset_load(const char* descriptor_json, const char* csv_path, mn_dataset** out) {
  return guarded([&] {
    require(descriptor_json, "descriptor_json");
    require(csv_path, "csv_path");
    require(out, "out");
    *out = new mn_dataset{
        mononet::load_csv(csv_path, mononet::descriptor_from_json(descriptor_json))};
  });
}

mn_status mn_dataset_synthetic(size_t n, double noise_std, uint64_t seed, mn_dataset** out) {
  return guarded([&] {
    require(out, "out");
    *out = new mn_dataset{mononet::generate_synthetic(n, noise_std, seed)};
  });
}

void mn_dataset_free(mn_dataset* data) { delete data; }

mn_status mn_dataset_shape(const mn_dataset* data, size_t* rows, size_t* cols) {
  return guarded([&] {
    require(data, "data");
    if (rows) *rows = data->data.rows();
    if (cols) *cols = data->data.cols();
  });
}

mn_status mn_train(const mn_dataset* data, const char* config_json, mn_network** best_out,
                   char** report_out) {
  return guarded([&] {
    require(data, "data");
    require(report_out, "report_out");
    auto result =
        mononet::run_protocol(data->data, mononet::protocol_config_from_json(text_or_empty(config_json)));
    char* report = dup_string(result.to_json());
    if (best_out) {
      try {
        *best_out = new mn_network{std::move(result.best_net)};
      } catch (...) {
        std::free(report);
        throw;
      }
    }
    *report_out = report;
  });
}

mn_status mn_grid(const mn_dataset* data, const char* config_json, char** report_out) {
  return guarded([&] {
    require(data, "data");
    require(report_out, "report_out");
    const auto grid =
        mononet::run_grid(data->data, mononet::protocol_config_from_json(text_or_empty(config_json)));
    *report_out = dup_string(grid.to_json());
  });
}

mn_status mn_evaluate(const mn_network* net, const mn_dataset* data, const char* metric,
                      double* out) {
  return guarded([&] {
    require(net, "net");
    require(data, "data");
    require(metric, "metric");
    require(out, "out");
    *out = mononet::evaluate_raw(net->net, data->data, mononet::parse_metric(metric));
  });
}

mn_status mn_verify(const mn_network* net, const mn_dataset* data, const char* config_json,
                    char** report_out, int* passed_out) {
  return guarded([&] {
    require(net, "net");
    require(report_out, "report_out");
    const auto config = mononet::verify_config_from_json(text_or_empty(config_json));
    mononet::VerifyReport report;
    if (data) {
      const auto box = mononet::model_data_box(net->net, data->data);
      report = mononet::verify_model(net->net, config, &box);
    } else {
      report = mononet::verify_model(net->net, config);
    }
    *report_out = dup_string(report.to_json());
    if (passed_out) *passed_out = report.passed() ? 1 : 0;
  });
}

mn_status mn_fit_demo(const char* config_json, char** result_out) {
  return guarded([&] {
    require(result_out, "result_out");
    const auto result = mononet::run_fit_demo(mononet::fit_demo_config_from_json(text_or_empty(config_json)));
    nlohmann::json files = nlohmann::json::object();
    for (const auto& c : result.curves) {
      files["fit_" + c.variant + "_w" + std::to_string(c.width) + ".csv"] = c.to_csv();
    }
    nlohmann::json j{{"report", nlohmann::json::parse(result.to_json())}, {"files", files}};
    *result_out = dup_string(j.dump(1));
  });
}

mn_status mn_synth(const char* config_json, char** result_out) {
  return guarded([&] {
    require(result_out, "result_out");
    const auto result = mononet::run_synth(mononet::synth_config_from_json(text_or_empty(config_json)));
    nlohmann::json j{{"report", nlohmann::json::parse(result.to_json())},
                     {"files", {{"synth_surface.csv", result.surface_csv()}}}};
    *result_out = dup_string(j.dump(1));
  });
}

}  // extern "C"
