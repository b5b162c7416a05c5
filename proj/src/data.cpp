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
#include "mononet/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "json.hpp"
#include "mononet/error.hpp"

namespace mononet {

std::string_view to_string(Task task) {
  return task == Task::Regression ? "regression" : "classification";
}

Task parse_task(std::string_view tag) {
  if (tag == "regression") return Task::Regression;
  if (tag == "classification") return Task::Classification;
  throw InvalidArgument("unknown task '" + std::string(tag) +
                        "' (expected regression or classification)");
}

void DatasetDescriptor::validate() const {
  if (indicator.size() != feature_names.size()) {
    throw InvalidArgument("descriptor '" + name + "' has " +
                          std::to_string(feature_names.size()) + " features but " +
                          std::to_string(indicator.size()) + " indicator entries");
  }
  if (target_column.empty()) throw InvalidArgument("descriptor has no target column");
  for (const auto& c : categorical) {
    auto it = std::find(feature_names.begin(), feature_names.end(), c.column);
    if (it == feature_names.end()) {
      throw InvalidArgument("categorical column '" + c.column + "' is not a feature");
    }
    if (indicator[static_cast<std::size_t>(it - feature_names.begin())] != 0) {
      throw InvalidArgument("categorical column '" + c.column + "' cannot be monotone");
    }
    if (c.levels.empty()) throw InvalidArgument("categorical column '" + c.column + "' has no levels");
  }
}

namespace {

const CategoricalEncoding* encoding_of(const DatasetDescriptor& d, const std::string& column) {
  for (const auto& c : d.categorical) {
    if (c.column == column) return &c;
  }
  return nullptr;
}

std::string level_name(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

}  // namespace

DatasetDescriptor encoded_descriptor(const DatasetDescriptor& d) {
  d.validate();
  if (d.categorical.empty()) return d;
  DatasetDescriptor out = d;
  out.feature_names.clear();
  out.categorical.clear();
  std::vector<int> t;
  for (std::size_t k = 0; k < d.feature_names.size(); ++k) {
    if (const auto* enc = encoding_of(d, d.feature_names[k])) {
      for (double level : enc->levels) {
        out.feature_names.push_back(d.feature_names[k] + "=" + level_name(level));
        t.push_back(0);
      }
    } else {
      out.feature_names.push_back(d.feature_names[k]);
      t.push_back(d.indicator[k]);
    }
  }
  out.indicator = MonotonicityIndicator(std::move(t));
  return out;
}

std::size_t TabularDataset::n_classes() const {
  if (descriptor.n_classes > 0) return descriptor.n_classes;
  double top = 0.0;
  for (double t : targets) top = std::max(top, t);
  return static_cast<std::size_t>(top) + 1;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == ',' && !quoted) {
      out.push_back(trim(line.substr(start, i - start)));
      start = i + 1;
    }
  }
  out.push_back(trim(line.substr(start)));
  return out;
}

bool parse_number(std::string_view cell, double& value) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  const auto* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, value);
  return ec == std::errc() && ptr == end && std::isfinite(value);
}

double quantile(Vector v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

TabularDataset parse_csv(std::string_view text, const DatasetDescriptor& descriptor) {
  descriptor.validate();
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  if (!lines.empty() && lines[0].starts_with("\xEF\xBB\xBF")) lines[0].remove_prefix(3);
  if (lines.empty() || trim(lines[0]).empty()) throw ParseError("CSV has no header row");

  const auto header = split_fields(lines[0]);
  auto column_of = [&](const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ParseError("CSV header has no column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  std::vector<std::size_t> used;
  for (const auto& f : descriptor.feature_names) used.push_back(column_of(f));
  used.push_back(column_of(descriptor.target_column));

  const DatasetDescriptor encoded = encoded_descriptor(descriptor);
  const std::size_t n_raw = descriptor.feature_names.size();
  std::vector<const CategoricalEncoding*> encodings(n_raw);
  for (std::size_t k = 0; k < n_raw; ++k) {
    encodings[k] = encoding_of(descriptor, descriptor.feature_names[k]);
  }
  const std::size_t n_features = encoded.feature_names.size();
  std::vector<double> values;
  Vector targets;
  std::size_t dropped = 0;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (trim(lines[li]).empty()) continue;
    const auto fields = split_fields(lines[li]);
    if (fields.size() != header.size()) {
      throw ParseError("line " + std::to_string(li + 1) + ": expected " +
                       std::to_string(header.size()) + " fields, found " +
                       std::to_string(fields.size()));
    }
    std::vector<double> row(used.size());
    bool missing = false;
    for (std::size_t k = 0; k < used.size(); ++k) {
      const auto cell = fields[used[k]];
      if (cell.empty() || cell == "?") {
        missing = true;
        continue;
      }
      if (!parse_number(cell, row[k])) {
        throw ParseError("line " + std::to_string(li + 1) + ", column " +
                         std::to_string(used[k] + 1) + " ('" + std::string(header[used[k]]) +
                         "'): cannot parse '" + std::string(cell) + "'");
      }
    }
    if (missing) {
      ++dropped;
      continue;
    }
    if (descriptor.task == Task::Classification) {
      const double t = row.back();
      if (t < 0.0 || t != std::floor(t)) {
        throw ParseError("line " + std::to_string(li + 1) + ": class label '" +
                         std::to_string(t) + "' is not a non-negative integer");
      }
    }
    for (std::size_t k = 0; k < n_raw; ++k) {
      if (!encodings[k]) {
        values.push_back(row[k]);
        continue;
      }
      const auto& levels = encodings[k]->levels;
      if (std::find(levels.begin(), levels.end(), row[k]) == levels.end()) {
        throw ParseError("line " + std::to_string(li + 1) + ", column '" +
                         descriptor.feature_names[k] + "': unknown level '" +
                         level_name(row[k]) + "'");
      }
      for (double level : levels) values.push_back(row[k] == level ? 1.0 : 0.0);
    }
    targets.push_back(row.back());
  }

  TabularDataset data{Matrix(targets.size(), n_features, std::move(values)), std::move(targets),
                      encoded, dropped};
  if (descriptor.target_quantile_filter && data.rows() > 0) {
    const double cut = quantile(data.targets, *descriptor.target_quantile_filter);
    std::vector<std::size_t> keep;
    for (std::size_t r = 0; r < data.rows(); ++r)
      if (data.targets[r] < cut) keep.push_back(r);
    const std::size_t filtered = data.rows() - keep.size();
    data = subset(data, keep);
    data.dropped_rows = dropped + filtered;
  }
  return data;
}

TabularDataset load_csv(const std::filesystem::path& path, const DatasetDescriptor& descriptor) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open CSV file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), descriptor);
}

void write_csv(const TabularDataset& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  for (const auto& f : data.descriptor.feature_names) out << f << ',';
  out << data.descriptor.target_column << '\n';
  char buf[32];
  for (std::size_t r = 0; r < data.rows(); ++r) {
    for (std::size_t c = 0; c < data.cols(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", data.features(r, c));
      out << buf << ',';
    }
    std::snprintf(buf, sizeof buf, "%.17g", data.targets[r]);
    out << buf << '\n';
  }
}

FeatureScaling fit_normalization(const TabularDataset& data) {
  if (data.rows() < 2) throw InvalidArgument("normalization needs at least 2 rows");
  FeatureScaling s{Vector(data.cols(), 0.0), Vector(data.cols(), 1.0)};
  const auto n = static_cast<double>(data.rows());
  for (std::size_t c = 0; c < data.cols(); ++c) {
    double sum = 0.0;
    for (std::size_t r = 0; r < data.rows(); ++r) sum += data.features(r, c);
    const double mean = sum / n;
    double var = 0.0;
    for (std::size_t r = 0; r < data.rows(); ++r) {
      const double d = data.features(r, c) - mean;
      var += d * d;
    }
    const double sd = std::sqrt(var / n);
    s.mean[c] = mean;
    s.scale[c] = sd > 1e-12 ? sd : 1.0;
  }
  return s;
}

TabularDataset apply_normalization(const TabularDataset& data, const FeatureScaling& scaling) {
  if (scaling.mean.size() != data.cols()) throw DimensionError("normalization width mismatch");
  TabularDataset out = data;
  for (std::size_t r = 0; r < out.rows(); ++r)
    for (std::size_t c = 0; c < out.cols(); ++c)
      out.features(r, c) = (data.features(r, c) - scaling.mean[c]) / scaling.scale[c];
  out.descriptor.normalization = scaling;
  return out;
}

std::pair<TabularDataset, FeatureScaling> normalize(const TabularDataset& data) {
  auto s = fit_normalization(data);
  return {apply_normalization(data, s), s};
}

TabularDataset subset(const TabularDataset& data, const std::vector<std::size_t>& rows) {
  TabularDataset out{Matrix(rows.size(), data.cols()), Vector(rows.size()), data.descriptor,
                     data.dropped_rows};
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] >= data.rows()) throw DimensionError("subset row index out of range");
    for (std::size_t c = 0; c < data.cols(); ++c) out.features(k, c) = data.features(rows[k], c);
    out.targets[k] = data.targets[rows[k]];
  }
  return out;
}

DataSplit split_80_20(std::size_t n_rows, std::uint64_t seed) {
  if (n_rows < 5) throw InvalidArgument("80/20 split needs at least 5 rows");
  std::vector<std::size_t> perm(n_rows);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  const std::size_t n_train = n_rows * 8 / 10;
  return {std::vector<std::size_t>(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train)),
          std::vector<std::size_t>(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end())};
}

std::pair<TabularDataset, TabularDataset> split_80_20(const TabularDataset& data,
                                                      std::uint64_t seed) {
  const auto s = split_80_20(data.rows(), seed);
  return {subset(data, s.train_rows), subset(data, s.test_rows)};
}

namespace {

DatasetDescriptor make_descriptor(std::string name, Task task, std::vector<std::string> features,
                                  const std::vector<std::pair<std::string, int>>& monotone,
                                  std::string target) {
  std::vector<int> t(features.size(), 0);
  for (const auto& [feature, dir] : monotone) {
    auto it = std::find(features.begin(), features.end(), feature);
    t[static_cast<std::size_t>(it - features.begin())] = dir;
  }
  DatasetDescriptor d;
  d.name = std::move(name);
  d.task = task;
  d.feature_names = std::move(features);
  d.indicator = MonotonicityIndicator(std::move(t));
  d.target_column = std::move(target);
  if (task == Task::Classification) d.n_classes = 2;
  return d;
}

}  // namespace

std::vector<std::string> builtin_dataset_names() {
  return {"auto-mpg", "heart-disease", "compas", "blog-feedback", "loan-defaulter"};
}

DatasetDescriptor builtin_descriptor(std::string_view name) {
  if (name == "auto-mpg") {
    return make_descriptor("auto-mpg", Task::Regression,
                           {"cylinders", "displacement", "horsepower", "weight", "acceleration",
                            "model_year", "origin"},
                           {{"weight", -1}, {"displacement", -1}, {"horsepower", -1}}, "mpg");
  }
  if (name == "heart-disease") {
    auto d = make_descriptor("heart-disease", Task::Classification,
                             {"age", "sex", "cp", "trestbps", "chol", "fbs", "restecg", "thalach",
                              "exang", "oldpeak", "slope", "ca", "thal"},
                             {{"trestbps", 1}, {"chol", 1}}, "disease");
    d.categorical = {{"cp", {0, 1, 2, 3}},
                     {"restecg", {0, 1, 2}},
                     {"slope", {0, 1, 2}},
                     {"ca", {0, 1, 2, 3, 4}},
                     {"thal", {0, 1, 2, 3}}};
    return d;
  }
  if (name == "compas") {
    return make_descriptor(
        "compas", Task::Classification,
        {"priors_count", "juv_fel_count", "juv_misd_count", "juv_other_count", "age", "sex",
         "race_african_american", "race_asian", "race_caucasian", "race_hispanic",
         "race_native_american", "race_other", "c_charge_degree"},
        {{"priors_count", 1}, {"juv_fel_count", 1}, {"juv_misd_count", 1}, {"juv_other_count", 1}},
        "two_year_recid");
  }
  if (name == "blog-feedback") {
    std::vector<std::string> features;
    for (int i = 1; i <= 276; ++i) features.push_back("A" + std::to_string(i));
    std::vector<std::pair<std::string, int>> monotone;
    for (int i : {51, 52, 53, 54, 56, 57, 58, 59}) monotone.emplace_back("A" + std::to_string(i), 1);
    auto d = make_descriptor("blog-feedback", Task::Regression, std::move(features), monotone,
                             "target");
    d.target_quantile_filter = 0.9;
    return d;
  }
  if (name == "loan-defaulter") {
    std::vector<std::string> features{"pub_rec_bankruptcies", "dti", "fico_score", "emp_length",
                                      "annual_inc"};
    for (int i = 6; i <= 28; ++i) features.push_back("feature_" + std::to_string(i));
    return make_descriptor("loan-defaulter", Task::Classification, std::move(features),
                           {{"pub_rec_bankruptcies", 1},
                            {"dti", 1},
                            {"fico_score", -1},
                            {"emp_length", -1},
                            {"annual_inc", -1}},
                           "default");
  }
  std::string names;
  for (const auto& n : builtin_dataset_names()) names += (names.empty() ? "" : ", ") + n;
  throw InvalidArgument("unknown dataset '" + std::string(name) + "'; available: " + names);
}

std::string descriptor_to_json(const DatasetDescriptor& d) {
  nlohmann::json j{{"name", d.name},
                   {"task", std::string(to_string(d.task))},
                   {"feature_names", d.feature_names},
                   {"indicator", d.indicator.entries()},
                   {"target_column", d.target_column},
                   {"n_classes", d.n_classes}};
  if (d.target_quantile_filter) j["target_quantile_filter"] = *d.target_quantile_filter;
  if (!d.categorical.empty()) {
    nlohmann::json cats = nlohmann::json::array();
    for (const auto& c : d.categorical) cats.push_back({{"column", c.column}, {"levels", c.levels}});
    j["categorical"] = cats;
  }
  if (d.normalization) {
    j["normalization"] = {{"mean", d.normalization->mean}, {"scale", d.normalization->scale}};
  }
  return j.dump(1);
}

DatasetDescriptor descriptor_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    DatasetDescriptor d;
    d.name = j.value("name", std::string("custom"));
    d.task = parse_task(j.at("task").get<std::string>());
    d.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    d.indicator = MonotonicityIndicator(j.at("indicator").get<std::vector<int>>());
    d.target_column = j.at("target_column").get<std::string>();
    d.n_classes = j.value("n_classes", std::size_t{0});
    if (j.contains("target_quantile_filter"))
      d.target_quantile_filter = j.at("target_quantile_filter").get<double>();
    if (j.contains("normalization")) {
      const auto& n = j.at("normalization");
      d.normalization = FeatureScaling{n.at("mean").get<Vector>(), n.at("scale").get<Vector>()};
    }
    if (j.contains("categorical")) {
      for (const auto& c : j.at("categorical")) {
        d.categorical.push_back({c.at("column").get<std::string>(), c.at("levels").get<Vector>()});
      }
    }
    d.validate();
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed dataset descriptor: ") + e.what());
  }
}

double synthetic_target(double x, double y, const SyntheticCoefficients& k) {
  const double ax = k.a * x;
  const double sgn = ax > 0.0 ? 1.0 : (ax < 0.0 ? -1.0 : 0.0);
  return sgn * std::abs(x * x * x) + k.b * std::sin(k.c * y);
}

TabularDataset generate_synthetic(std::size_t n_points, double noise_std, std::uint64_t seed) {
  if (n_points == 0) throw InvalidArgument("synthetic dataset needs at least one point");
  if (!(noise_std >= 0.0)) throw InvalidArgument("noise standard deviation must be >= 0");
  DatasetDescriptor d;
  d.name = "synthetic";
  d.task = Task::Regression;
  d.feature_names = {"x", "y"};
  d.indicator = MonotonicityIndicator({1, 0});
  d.target_column = "f";

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-2.5, 2.5);
  std::normal_distribution<double> noise(0.0, 1.0);
  TabularDataset data{Matrix(n_points, 2), Vector(n_points), d, 0};
  for (std::size_t r = 0; r < n_points; ++r) {
    const double x = coord(rng);
    const double y = coord(rng);
    const double eps = noise(rng);
    data.features(r, 0) = x;
    data.features(r, 1) = y;
    data.targets[r] = synthetic_target(x, y) + noise_std * eps;
  }
  return data;
}

InputBox data_box(const TabularDataset& data, double expand) {
  if (data.rows() == 0) throw InvalidArgument("data_box of an empty dataset");
  InputBox box{Vector(data.cols()), Vector(data.cols())};
  for (std::size_t c = 0; c < data.cols(); ++c) {
    double lo = data.features(0, c), hi = lo;
    for (std::size_t r = 1; r < data.rows(); ++r) {
      lo = std::min(lo, data.features(r, c));
      hi = std::max(hi, data.features(r, c));
    }
    const double pad = expand * (hi - lo);
    box.lower[c] = lo - pad;
    box.upper[c] = hi + pad;
  }
  return box;
}

}  // namespace mononet
