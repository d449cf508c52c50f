#pragma once

#include <numbers>

namespace halbach {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kMu0 = 4.0e-7 * kPi;  // vacuum permeability [H/m]

}  // namespace halbach
