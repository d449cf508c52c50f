#pragma once

#include <functional>
#include <optional>
#include <string>

#include "halbach/error.hpp"
#include "halbach/motor_config.hpp"

namespace fixture {

inline const char* kTable1 = R"(
lambda_m = 0.04
gap_m = 0.0005
coil_height_m = 0.004
pm_height_m = 0.007
depth_m = 0.04
n_magnets_per_pole = 2
n_phases = 3
back_iron = false
remanence_T = 1.1
j_max_A_per_m2 = 1e7
frequency_Hz = 50
)";

inline halbach::MotorParameters table1(int nm = 2, bool back_iron = false, int phases = 3) {
  halbach::MotorParameters p;
  p.magnets_per_pole = nm;
  p.back_iron = back_iron;
  p.phases = phases;
  return p;
}

inline halbach::MotorDesign design(int nm = 2, bool back_iron = false, int phases = 3) {
  return halbach::MotorDesign(table1(nm, back_iron, phases));
}

inline std::optional<halbach::ErrorCode> error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const halbach::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace fixture
