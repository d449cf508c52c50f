#pragma once

#include <string>
#include <vector>

#include "halbach/fd_oracle.hpp"
#include "halbach/field_types.hpp"
#include "halbach/motor_config.hpp"

namespace halbach {

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;  // measured deviation
  double limit = 0.0;  // tolerance it is held to
};

// Interface conditions of a solved field, each normalised by the local
// field maximum on the same interface.
struct BoundaryReport {
  double stator_bx = 0.0;        // B_x at y = 0
  double lower_hy_jump = 0.0;    // y = g_e
  double lower_bx_jump = 0.0;
  double lower_by_continuity = 0.0;
  double upper_hy_jump = 0.0;    // y = g_e + h_m, open top
  double upper_bx_jump = 0.0;
  double upper_by_continuity = 0.0;
  double iron_hx = 0.0;          // y = g_e + h_m, back-iron face
  double worst() const;
};

BoundaryReport boundary_residuals(const FieldCoefficients& c, int points = 256);

// Largest difference between closed-form and solved coefficients, relative
// to the largest scaled coefficient of the same harmonic.
double closed_form_deviation(const FieldCoefficients& solved, const FieldCoefficients& closed);

// Max deviation of the maps from Models 2 and 3 back to Model 1.
double coefficient_map_deviation(const FieldCoefficients& m1, const FieldCoefficients& m2,
                                 const FieldCoefficients& m3);

// Field components of three solutions at random points across all regions,
// normalised per component by its max over the sample set.
double tri_model_deviation(const FieldCoefficients& m1, const FieldCoefficients& m2, const FieldCoefficients& m3,
                           int points = 200, unsigned seed = 12345);

// Max |B_y| error along y = g_e / 2 relative to the analytic peak there.
double fd_midgap_error(const MotorDesign& d, const FieldCoefficients& c, const FdGrid& grid, int points = 1024);

struct VerifyOptions {
  bool skip_fd = false;
  int corrupt_row = -1;
  FdGridSpec fd_grid{};
  std::vector<int> magnet_counts{2, 3, 4, 5};
  bool both_topologies = true;
};

std::vector<CheckResult> run_verification(const MotorConfig& cfg, const VerifyOptions& options);

}  // namespace halbach
