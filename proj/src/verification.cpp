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
#include "mononet/verification.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "json.hpp"
#include "mononet/error.hpp"

namespace mononet {

namespace {

Vector logits_at(const Network& net, std::span<const double> x, NetworkCache& cache) {
  network_forward(net, x, &cache);
  return cache.logits;
}

void check_box(const InputBox& box, std::size_t n) {
  if (box.lower.size() != n || box.upper.size() != n) {
    throw DimensionError("audit box has the wrong number of features");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(box.upper[i] >= box.lower[i])) throw InvalidArgument("audit box has upper < lower");
  }
}

Vector sample_point(const InputBox& box, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vector x(box.lower.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = box.lower[i] + u(rng) * (box.upper[i] - box.lower[i]);
  }
  return x;
}

nlohmann::json reports_json(const std::vector<MonotonicityReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) {
    arr.push_back({{"feature", r.feature},
                   {"direction", r.direction},
                   {"pairs_tested", r.pairs_tested},
                   {"violations", r.violations},
                   {"worst_violation", r.worst_violation}});
  }
  return arr;
}

}  // namespace

std::size_t MonotonicityAudit::total_violations() const noexcept {
  std::size_t n = 0;
  for (const auto& f : features) n += f.violations;
  return n;
}

std::string MonotonicityAudit::to_json() const {
  nlohmann::json j{{"features", reports_json(features)},
                   {"total_violations", total_violations()},
                   {"passed", passed()}};
  return j.dump(1);
}

InputBox audit_box(const Network& net) {
  if (net.input_box) return *net.input_box;
  return {Vector(net.input_dim, -1.0), Vector(net.input_dim, 1.0)};
}

MonotonicityAudit check_pairwise_monotonicity(const Network& net,
                                              const MonotonicityIndicator& indicator,
                                              const InputBox& box, std::size_t n_pairs,
                                              std::uint64_t seed) {
  if (n_pairs < 1) throw InvalidArgument("n_pairs must be >= 1");
  if (indicator.size() != net.input_dim) throw DimensionError("indicator width mismatch");
  check_box(box, net.input_dim);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  NetworkCache cache;
  MonotonicityAudit audit;
  for (std::size_t i = 0; i < net.input_dim; ++i) {
    const int t = indicator[i];
    if (t == 0) continue;
    MonotonicityReport rep{i, t, n_pairs, 0, 0.0};
    const double width = box.upper[i] - box.lower[i];
    for (std::size_t p = 0; p < n_pairs; ++p) {
      Vector x = sample_point(box, rng);
      const double delta = (1.0 - u(rng)) * width;
      const Vector y1 = logits_at(net, x, cache);
      x[i] += delta;
      const Vector y2 = logits_at(net, x, cache);
      bool bad = false;
      for (std::size_t j = 0; j < y1.size(); ++j) {
        const double slack = 1e-12 * std::max(1.0, std::abs(y1[j]));
        const double against = t > 0 ? y1[j] - y2[j] : y2[j] - y1[j];
        if (against > slack) {
          bad = true;
          rep.worst_violation = std::max(rep.worst_violation, against);
        }
      }
      if (bad) ++rep.violations;
    }
    audit.features.push_back(rep);
  }
  return audit;
}

MonotonicityAudit check_pairwise_monotonicity(const Network& net, std::size_t n_pairs,
                                              std::uint64_t seed) {
  return check_pairwise_monotonicity(net, net.input_indicator, audit_box(net), n_pairs, seed);
}

MonotonicityAudit check_gradient_sign(const Network& net, const MonotonicityIndicator& indicator,
                                      const InputBox& box, std::size_t n_points,
                                      std::uint64_t seed) {
  constexpr double kStep = 1e-5;
  constexpr double kSlack = 1e-8;
  if (n_points < 1) throw InvalidArgument("n_points must be >= 1");
  if (indicator.size() != net.input_dim) throw DimensionError("indicator width mismatch");
  check_box(box, net.input_dim);
  std::mt19937_64 rng(seed);
  NetworkCache cache;
  MonotonicityAudit audit;
  for (std::size_t i = 0; i < net.input_dim; ++i) {
    const int t = indicator[i];
    if (t == 0) continue;
    MonotonicityReport rep{i, t, n_points, 0, 0.0};
    for (std::size_t p = 0; p < n_points; ++p) {
      Vector x = sample_point(box, rng);
      x[i] += kStep;
      const Vector up = logits_at(net, x, cache);
      x[i] -= 2.0 * kStep;
      const Vector down = logits_at(net, x, cache);
      bool bad = false;
      for (std::size_t j = 0; j < up.size(); ++j) {
        const double d = t * (up[j] - down[j]) / (2.0 * kStep);
        if (d < -kSlack) {
          bad = true;
          rep.worst_violation = std::max(rep.worst_violation, -d);
        }
      }
      if (bad) ++rep.violations;
    }
    audit.features.push_back(rep);
  }
  return audit;
}

MonotonicityAudit check_gradient_sign(const Network& net, std::size_t n_points,
                                      std::uint64_t seed) {
  return check_gradient_sign(net, net.input_indicator, audit_box(net), n_points, seed);
}

std::string ConvexityReport::to_json() const {
  nlohmann::json j{{"mode", mode == Curvature::Convex ? "convex" : "concave"},
                   {"triples_tested", triples_tested},
                   {"violations", violations},
                   {"worst_violation", worst_violation},
                   {"passed", passed()}};
  return j.dump(1);
}

namespace {

template <class Eval>
ConvexityReport midpoint_test(Curvature mode, std::size_t n_triples, std::uint64_t seed,
                              const InputBox& box, Eval&& eval) {
  constexpr double kSlack = 1e-10;
  if (n_triples < 1) throw InvalidArgument("n_triples must be >= 1");
  std::mt19937_64 rng(seed);
  ConvexityReport rep{mode, n_triples, 0, 0.0};
  const double sign = mode == Curvature::Convex ? 1.0 : -1.0;
  for (std::size_t k = 0; k < n_triples; ++k) {
    const Vector a = sample_point(box, rng);
    const Vector b = sample_point(box, rng);
    Vector mid(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) mid[i] = 0.5 * (a[i] + b[i]);
    const Vector fa = eval(a), fb = eval(b), fm = eval(mid);
    bool bad = false;
    for (std::size_t j = 0; j < fm.size(); ++j) {
      const double gap = sign * (fm[j] - 0.5 * (fa[j] + fb[j]));
      if (gap > kSlack) {
        bad = true;
        rep.worst_violation = std::max(rep.worst_violation, gap);
      }
    }
    if (bad) ++rep.violations;
  }
  return rep;
}

void require_curvature(const std::vector<MonotoneDenseLayer>& layers, Curvature mode) {
  for (const auto& l : layers) {
    if (l.output_is_linear) continue;
    const bool ok = mode == Curvature::Convex ? l.selector.all_convex() : l.selector.all_concave();
    if (!ok) {
      throw InvalidArgument(std::string("curvature check needs all-") +
                            (mode == Curvature::Convex ? "convex" : "concave") +
                            " selectors in every hidden layer");
    }
  }
}

}  // namespace

ConvexityReport check_convexity(const Network& net, Curvature mode, const InputBox& box,
                                std::size_t n_triples, std::uint64_t seed) {
  check_box(box, net.input_dim);
  for (const auto& b : net.branches) require_curvature(b.layers, mode);
  require_curvature(net.trunk, mode);
  NetworkCache cache;
  return midpoint_test(mode, n_triples, seed, box,
                       [&](const Vector& x) { return logits_at(net, x, cache); });
}

ConvexityReport check_convexity(ActivationKind kind, Branch branch, Curvature mode, double lo,
                                double hi, std::size_t n_triples, std::uint64_t seed) {
  if (branch == Branch::Saturated) {
    throw InvalidArgument("the saturated branch is neither convex nor concave");
  }
  if ((branch == Branch::Convex) != (mode == Curvature::Convex)) {
    throw InvalidArgument("curvature claim does not match the activation branch");
  }
  const InputBox box{{lo}, {hi}};
  return midpoint_test(mode, n_triples, seed, box, [&](const Vector& x) {
    return Vector{apply(kind, branch, x[0])};
  });
}

bool BatteryReport::passed() const noexcept {
  return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.passed(); });
}

std::string BatteryReport::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : entries) {
    arr.push_back({{"name", e.name},
                   {"selector", {e.selector.convex, e.selector.concave, e.selector.saturated}},
                   {"test_mse", e.test_mse},
                   {"threshold", e.threshold},
                   {"expect_fit", e.expect_fit},
                   {"passed", e.passed()}});
  }
  nlohmann::json j{{"kind", std::string(to_string(kind))}, {"entries", arr}, {"passed", passed()}};
  return j.dump(1);
}

CurveFit fit_curve(const std::function<double(double)>& target, double lo, double hi,
                   ActivationKind kind, const ActivationSelector& s, bool unconstrained,
                   std::uint64_t seed, const BatteryConfig& config) {
  if (!(hi > lo)) throw InvalidArgument("fit interval needs hi > lo");
  NetworkSpec spec;
  spec.input_indicator = MonotonicityIndicator({1});
  spec.kind = kind;
  spec.hidden_layers = {HiddenLayerSpec{config.width, s, std::nullopt}};
  spec.unconstrained = unconstrained;
  Network net = build_network(spec, seed);
  const FeatureScaling scaling{{0.5 * (lo + hi)}, {0.5 * (hi - lo) / config.input_range}};

  DatasetDescriptor d;
  d.name = "curve";
  d.feature_names = {"x"};
  d.indicator = spec.input_indicator;
  d.target_column = "y";
  TabularDataset data{Matrix(config.n_train, 1), Vector(config.n_train), d, 0};
  std::mt19937_64 rng(seed ^ 0x9E3779B97F4A7C15ULL);
  std::uniform_real_distribution<double> u(lo, hi);
  for (std::size_t r = 0; r < config.n_train; ++r) {
    const double x = u(rng);
    data.features(r, 0) = scaling.apply(std::span<const double>(&x, 1))[0];
    data.targets[r] = target(x);
  }

  TrainConfig tc;
  tc.epochs = config.epochs;
  tc.batch_size = config.batch_size;
  tc.optimizer.learning_rate = config.learning_rate;
  tc.seed = seed;
  CurveFit fit{std::move(net), 0.0, {}};
  fit.report = train(fit.net, data, tc);
  fit.net.input_scaling = scaling;
  fit.net.input_box = InputBox{{-config.input_range}, {config.input_range}};

  constexpr std::size_t kGrid = 201;
  double sse = 0.0;
  for (std::size_t k = 0; k < kGrid; ++k) {
    const double x = lo + (hi - lo) * static_cast<double>(k) / (kGrid - 1);
    const double e = predict(fit.net, std::span<const double>(&x, 1))[0] - target(x);
    sse += e * e;
  }
  fit.test_mse = sse / kGrid;
  return fit;
}

BatteryReport universal_fit_battery(ActivationKind kind, std::uint64_t seed,
                                    const BatteryConfig& config) {
  constexpr double kFit = 1e-3;
  constexpr double kControl = 1e-2;
  const std::size_t m = config.width;
  const auto sigmoidal = [](double x) { return 1.0 / (1.0 + std::exp(-5.0 * x)); };
  struct Case {
    std::string name;
    std::function<double(double)> f;
    double lo, hi;
    ActivationSelector s;
    bool expect_fit;
  };
  const std::vector<Case> cases{
      {"convex_exp", [](double x) { return std::expm1(x); }, 0.0, 2.0,
       ActivationSelector::all(Branch::Convex, m), true},
      {"concave_log", [](double x) { return std::log1p(x); }, 0.0, 3.0,
       ActivationSelector::all(Branch::Concave, m), true},
      {"sigmoidal", sigmoidal, -2.0, 2.0, ActivationSelector::all(Branch::Saturated, m), true},
      {"cubic", [](double x) { return x * x * x; }, -1.0, 1.0,
       ActivationSelector{m / 2, m - m / 2, 0}, true},
      {"sigmoidal_convex_only", sigmoidal, -2.0, 2.0, ActivationSelector::all(Branch::Convex, m),
       false},
  };
  BatteryReport rep;
  rep.kind = kind;
  for (const auto& c : cases) {
    const auto fit = fit_curve(c.f, c.lo, c.hi, kind, c.s, false, seed, config);
    rep.entries.push_back({c.name, c.s, fit.test_mse, c.expect_fit ? kFit : kControl, c.expect_fit});
  }
  return rep;
}

}  // namespace mononet
