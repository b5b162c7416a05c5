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

// Convex base activations and the two monotone variants built from them.
//
// Every base activation here is zero-centred, increasing, convex and bounded
// below. From a base f we derive
//   reflected(x) = -f(-x)                       concave, bounded above
//   saturated(x) = f(x + 1) - f(1)     x < 0    bounded on both sides
//                  -f(1 - x) + f(1)    x >= 0
// and a layer of width m applies f to its first `convex` units, the reflection
// to the next `concave` units and the saturated variant to the rest.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "mononet/numeric.hpp"

namespace mononet {

enum class ActivationKind { ReLU, ELU, SELU };

/// Which of the three monotone variants a unit uses.
enum class Branch { Convex, Concave, Saturated };

namespace selu {
inline constexpr double kLambda = 1.0507009873554804934193349852946;
inline constexpr double kAlpha = 1.6732632423543772848170429916717;
}  // namespace selu

std::string_view to_string(ActivationKind kind);
/// Accepts "relu" | "elu" | "selu"; throws InvalidArgument otherwise.
ActivationKind parse_activation_kind(std::string_view tag);

double base(ActivationKind kind, double x);
double reflected(ActivationKind kind, double x);
double saturated(ActivationKind kind, double x);
double apply(ActivationKind kind, Branch branch, double x);

/// Right derivative of the selected variant; every value is >= 0.
double derivative(ActivationKind kind, Branch branch, double x);

/// lim_{x -> -inf} base(kind, x): 0 for ReLU, -1 for ELU, -lambda*alpha for SELU.
double lower_bound(ActivationKind kind);

/// Points where the selected variant is not differentiable.
bool near_kink(ActivationKind kind, Branch branch, double x, double tolerance);

/// Partition of a layer's units: first `convex` units, then `concave`, then
/// `saturated`.
struct ActivationSelector {
  std::size_t convex = 0;
  std::size_t concave = 0;
  std::size_t saturated = 0;

  std::size_t width() const noexcept { return convex + concave + saturated; }
  /// Branch of 0-based unit j.
  Branch branch_of(std::size_t j) const noexcept {
    if (j < convex) return Branch::Convex;
    if (j < convex + concave) return Branch::Concave;
    return Branch::Saturated;
  }
  bool all_convex() const noexcept { return concave == 0 && saturated == 0; }
  bool all_concave() const noexcept { return convex == 0 && saturated == 0; }
  bool saturated_only() const noexcept { return convex == 0 && concave == 0; }

  /// convex = concave = floor(m/3), the first one or two remainder units go
  /// to convex then concave, saturated gets floor(m/3).
  static ActivationSelector default_split(std::size_t m);
  static ActivationSelector all(Branch branch, std::size_t m);

  friend bool operator==(const ActivationSelector&, const ActivationSelector&) = default;
};

/// Elementwise combined activation; throws InvalidArgument when the selector
/// width differs from h.size().
Vector combined(const ActivationSelector& selector, ActivationKind kind,
                std::span<const double> h);
Vector combined_derivative(const ActivationSelector& selector, ActivationKind kind,
                           std::span<const double> h);

/// Saturated variant rescaled into [0, 1] and evaluated at a*x:
///   (saturated(a x) - c + f(1)) / (2 (f(1) - c)),  c = lower_bound(kind).
/// Tends to the step function H(x) as a grows. Throws InvalidArgument for a <= 0.
double heavyside_approximant(ActivationKind kind, double x, double a);

}  // namespace mononet
