#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "halbach/motor_config.hpp"

namespace halbach {

enum class MovingMember { MovingPm, MovingStator };

struct StageSpec {
  double length = 0.6;        // L_stage [m]
  double mass = 100.0;        // m_stage [kg]
  double depth = 0.3;         // in-depth length of the stage [m]
  MovingMember moving = MovingMember::MovingPm;
  std::optional<int> stator_units;  // defaults to ceil(N_u) + 1

  double mover_units(const MotorDesign& d) const { return length / d.lambda(); }
  int stator_unit_count(const MotorDesign& d) const;
};

void validate(const StageSpec& s);

struct ExtendedWeights {
  double thd = 1.0;
  double ripple = 1.0;
  double cost = 1.0;
  double cost_drive = 0.0;  // required, > 0
};

struct ObjectiveConfig {
  double alpha = 1.0;
  double beta = 0.2;
  std::optional<ExtendedWeights> extended;
};

void validate(const ObjectiveConfig& o);

struct StageMetrics {
  double mover_units = 0.0;
  int stator_units = 0;
  double thrust = 0.0;          // unit-cell mean thrust at the optimal x0 [N]
  double shear = 0.0;           // [N/m^2]
  double moving_mass = 0.0;     // m_pm or m_cu [kg]
  double acceleration = 0.0;    // [m/s^2]
  double copper_loss = 0.0;     // [W]
  std::optional<double> thd;         // back-EMF THD (fraction)
  std::optional<double> ripple_pct;  // thrust ripple [%]
};

StageMetrics stage_metrics(const MotorDesign& d, const StageSpec& stage, double thrust_mean);

double objective(const MotorDesign& d, const StageSpec& stage, const ObjectiveConfig& obj, const StageMetrics& m);

// Solves the fields of one design and fills every metric the objective needs.
StageMetrics evaluate_design(const MotorDesign& d, const HarmonicTruncation& trunc, const StageSpec& stage,
                             const ObjectiveConfig& obj);

struct SweepAxes {
  std::vector<double> lambda;
  std::vector<double> pm_height;
  std::vector<double> coil_height;
};

struct SweepRow {
  double lambda = 0.0, pm_height = 0.0, coil_height = 0.0;
  StageMetrics metrics;
  double score = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::size_t best = 0;
};

constexpr std::size_t kMaxSweepPoints = 100000;

// Full factorial, lambda outermost and coil height innermost.
SweepResult sweep(const MotorDesign& tmpl, const HarmonicTruncation& trunc, const StageSpec& stage,
                  const ObjectiveConfig& obj, const SweepAxes& axes);

struct Bounds {
  std::array<double, 2> lambda{0.04, 0.04};
  std::array<double, 2> pm_height{2e-3, 20e-3};
  std::array<double, 2> coil_height{1e-3, 12e-3};
};

void validate(const Bounds& b);

struct TraceEntry {
  int pass = 0;  // 0 coarse, then refinements
  std::array<int, 3> lattice{};
  SweepRow row;
};

struct OptimizeResult {
  SweepRow best;
  std::array<int, 3> best_lattice{};
  std::vector<TraceEntry> trace;
  std::vector<double> pass_best;  // incumbent score after each pass
  int evaluations = 0;
};

struct OptimizeOptions {
  int coarse_points = 9;  // per varying axis
  int refinements = 2;    // each halves the spacing
  int radius = 2;         // lattice steps examined around the incumbent
};

// Final-resolution lattice: coarse spacing halved `refinements` times.
int lattice_points(const OptimizeOptions& opt);
double lattice_value(const std::array<double, 2>& range, int index, int points);

OptimizeResult optimize(const MotorDesign& tmpl, const HarmonicTruncation& trunc, const StageSpec& stage,
                        const ObjectiveConfig& obj, const Bounds& bounds, const OptimizeOptions& opt = {});

struct SizingResult {
  double shear = 0.0;           // [N/m^2]
  double force = 0.0;           // [N]
  double loss_density = 0.0;    // [W/m^3]
};

SizingResult initial_sizing(double b_av, double j_av, const MotorDesign& d);

MotorDesign design_at(const MotorDesign& tmpl, double lambda, double pm_height, double coil_height);

}  // namespace halbach
