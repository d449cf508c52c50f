#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "halbach/field_types.hpp"
#include "halbach/halbach_source.hpp"
#include "halbach/motor_config.hpp"

namespace halbach {

// One electrical period sampled uniformly, endpoint excluded.
Eigen::VectorXd period_grid(const MotorDesign& d, int samples = 720);

// x-extent of the phase-m coil side within the first pole pitch: width
// lambda / (2 N_ph) centred on (m - 1) lambda / (2 N_ph).
std::pair<double, double> coil_span(const MotorDesign& d, int m);

struct ForceResult {
  Eigen::VectorXd t;
  Eigen::MatrixXd phase;  // rows: samples, cols: phases
  Eigen::VectorXd total;
  Eigen::VectorXd shear;
  double mean_force = 0.0;
  double ripple_pct = 0.0;
};

ForceResult thrust(const MotorDesign& d, const FieldCoefficients& c, const OperatingPoint& op,
                   const Eigen::VectorXd& t);

// Time-averaged total thrust at synchronous speed. Only the fundamental
// field harmonic carries a mean against sinusoidal currents.
double mean_thrust(const MotorDesign& d, const FieldCoefficients& c, double x0);

struct ForceAngleResult {
  Eigen::VectorXd x0;
  Eigen::VectorXd mean_force;
  int peak_index = 0;
  double peak_x0 = 0.0;
  double peak_force = 0.0;
  double force_angle = 0.0;  // k x0 at the peak [rad]
};

ForceAngleResult force_angle(const MotorDesign& d, const FieldCoefficients& c, int points = 360);

// Peak of the force-angle curve, located analytically.
double peak_mean_thrust(const MotorDesign& d, const FieldCoefficients& c);
double optimal_x0(const MotorDesign& d, const FieldCoefficients& c);

struct NormalForceResult {
  Eigen::VectorXd x;
  Eigen::VectorXd tyy;     // top side, y = 0
  double fy = 0.0;         // per side
  double fy_top = 0.0;
  double fy_bottom = 0.0;
  double fy_total = 0.0;   // top - bottom
};

// Normal stress on the stator surface and the per-side attraction force.
NormalForceResult attraction_force(const MotorDesign& d, const FieldCoefficients& c, int points = 256);

double attraction_force_value(const MotorDesign& d, const FieldCoefficients& c);

NormalForceResult misalignment_force(const MotorDesign& d, const HarmonicSource& source,
                                     const HarmonicTruncation& trunc, double g0, int points = 256);

// d F_y,total / d g_0 at g_0 = 0, differentiating the boundary systems
// exactly with respect to the airgap.
double misalignment_stiffness(const MotorDesign& d, const HarmonicSource& source, const HarmonicTruncation& trunc);

struct EmfResult {
  Eigen::VectorXd t;
  Eigen::MatrixXd flux;     // phi_avg [Wb]
  Eigen::MatrixXd linkage;  // N phi_avg [Wb-turns]
  Eigen::MatrixXd emf;      // [V]
};

EmfResult back_emf(const MotorDesign& d, const FieldCoefficients& c, const OperatingPoint& op,
                   const Eigen::VectorXd& t);

// Total harmonic distortion of the phase-1 EMF at constant speed.
double emf_thd(const MotorDesign& d, const FieldCoefficients& c);

struct PowerBalanceReport {
  Eigen::VectorXd t;
  Eigen::VectorXd force_from_power;
  Eigen::VectorXd force_direct;
  double max_rel_deviation = 0.0;
};

PowerBalanceReport power_balance(const MotorDesign& d, const FieldCoefficients& c, const OperatingPoint& op,
                                 const Eigen::VectorXd& t);

}  // namespace halbach
