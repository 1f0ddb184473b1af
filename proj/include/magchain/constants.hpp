#pragma once

#include <numbers>

namespace magchain {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kZeta3 = 1.2020569031595943;  // Apery's constant
inline constexpr double kEulerGamma = 0.5772156649015329;
inline constexpr double kMu0 = 4.0e-7 * std::numbers::pi;  // T m / A

/// Coefficient of the rod-like quadratic functional in the ring deformation energy.
inline constexpr double kRingStiffness = kZeta3 / 4.0 + 1.0 / 24.0;

}  // namespace magchain
