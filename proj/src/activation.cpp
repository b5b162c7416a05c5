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
#include "mononet/activation.hpp"

#include <cmath>

#include "mononet/error.hpp"

namespace mononet {

namespace {

// One-sided derivatives of the base function. ELU with alpha = 1 is C1, the
// other two have a kink at the origin.
double base_right_derivative(ActivationKind kind, double x) {
  switch (kind) {
    case ActivationKind::ReLU:
      return x >= 0.0 ? 1.0 : 0.0;
    case ActivationKind::ELU:
      return x >= 0.0 ? 1.0 : std::exp(x);
    case ActivationKind::SELU:
      return x >= 0.0 ? selu::kLambda : selu::kLambda * selu::kAlpha * std::exp(x);
  }
  return 0.0;
}

double base_left_derivative(ActivationKind kind, double x) {
  switch (kind) {
    case ActivationKind::ReLU:
      return x > 0.0 ? 1.0 : 0.0;
    case ActivationKind::ELU:
      return x > 0.0 ? 1.0 : std::exp(x);
    case ActivationKind::SELU:
      return x > 0.0 ? selu::kLambda : selu::kLambda * selu::kAlpha * std::exp(x);
  }
  return 0.0;
}

}  // namespace

std::string_view to_string(ActivationKind kind) {
  switch (kind) {
    case ActivationKind::ReLU:
      return "relu";
    case ActivationKind::ELU:
      return "elu";
    case ActivationKind::SELU:
      return "selu";
  }
  return "?";
}

ActivationKind parse_activation_kind(std::string_view tag) {
  if (tag == "relu") return ActivationKind::ReLU;
  if (tag == "elu") return ActivationKind::ELU;
  if (tag == "selu") return ActivationKind::SELU;
  throw InvalidArgument("unknown activation kind '" + std::string(tag) +
                        "' (expected relu, elu or selu)");
}

double base(ActivationKind kind, double x) {
  switch (kind) {
    case ActivationKind::ReLU:
      return x > 0.0 ? x : 0.0;
    case ActivationKind::ELU:
      return x >= 0.0 ? x : std::expm1(x);
    case ActivationKind::SELU:
      return selu::kLambda * (x >= 0.0 ? x : selu::kAlpha * std::expm1(x));
  }
  return 0.0;
}

double reflected(ActivationKind kind, double x) { return -base(kind, -x); }

double saturated(ActivationKind kind, double x) {
  const double at_one = base(kind, 1.0);
  if (x < 0.0) return base(kind, x + 1.0) - at_one;
  return reflected(kind, x - 1.0) + at_one;
}

double apply(ActivationKind kind, Branch branch, double x) {
  switch (branch) {
    case Branch::Convex:
      return base(kind, x);
    case Branch::Concave:
      return reflected(kind, x);
    case Branch::Saturated:
      return saturated(kind, x);
  }
  return 0.0;
}

double derivative(ActivationKind kind, Branch branch, double x) {
  switch (branch) {
    case Branch::Convex:
      return base_right_derivative(kind, x);
    case Branch::Concave:
      // d/dx -f(-x) = f'(-x); a right derivative in x is a left one in -x.
      return base_left_derivative(kind, -x);
    case Branch::Saturated:
      if (x < 0.0) return base_right_derivative(kind, x + 1.0);
      return base_left_derivative(kind, 1.0 - x);
  }
  return 0.0;
}

double lower_bound(ActivationKind kind) {
  switch (kind) {
    case ActivationKind::ReLU:
      return 0.0;
    case ActivationKind::ELU:
      return -1.0;
    case ActivationKind::SELU:
      return -selu::kLambda * selu::kAlpha;
  }
  return 0.0;
}

bool near_kink(ActivationKind kind, Branch branch, double x, double tolerance) {
  if (kind == ActivationKind::ELU) return false;
  switch (branch) {
    case Branch::Convex:
    case Branch::Concave:
      return std::abs(x) < tolerance;
    case Branch::Saturated:
      return std::abs(x - 1.0) < tolerance || std::abs(x + 1.0) < tolerance;
  }
  return false;
}

ActivationSelector ActivationSelector::default_split(std::size_t m) {
  const std::size_t third = m / 3;
  const std::size_t rest = m % 3;
  return {third + (rest >= 1 ? 1 : 0), third + (rest >= 2 ? 1 : 0), third};
}

ActivationSelector ActivationSelector::all(Branch branch, std::size_t m) {
  switch (branch) {
    case Branch::Convex:
      return {m, 0, 0};
    case Branch::Concave:
      return {0, m, 0};
    case Branch::Saturated:
      return {0, 0, m};
  }
  return {};
}

namespace {
void check_width(const ActivationSelector& s, std::size_t m) {
  if (s.width() != m) {
    throw InvalidArgument("activation selector (" + std::to_string(s.convex) + "," +
                          std::to_string(s.concave) + "," + std::to_string(s.saturated) +
                          ") does not sum to layer width " + std::to_string(m));
  }
}
}  // namespace

Vector combined(const ActivationSelector& selector, ActivationKind kind,
                std::span<const double> h) {
  check_width(selector, h.size());
  Vector y(h.size());
  for (std::size_t j = 0; j < h.size(); ++j) y[j] = apply(kind, selector.branch_of(j), h[j]);
  return y;
}

Vector combined_derivative(const ActivationSelector& selector, ActivationKind kind,
                           std::span<const double> h) {
  check_width(selector, h.size());
  Vector d(h.size());
  for (std::size_t j = 0; j < h.size(); ++j)
    d[j] = derivative(kind, selector.branch_of(j), h[j]);
  return d;
}

double heavyside_approximant(ActivationKind kind, double x, double a) {
  if (!(a > 0.0)) throw InvalidArgument("heavyside_approximant: scale a must be > 0");
  const double c = lower_bound(kind);
  const double at_one = base(kind, 1.0);
  return (saturated(kind, a * x) - c + at_one) / (2.0 * (at_one - c));
}

}  // namespace mononet
