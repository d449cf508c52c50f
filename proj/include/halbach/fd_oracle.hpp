#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "halbach/field_types.hpp"
#include "halbach/halbach_source.hpp"
#include "halbach/motor_config.hpp"

namespace halbach {

struct FdGridSpec {
  int nx = 1024;  // nodes per wavelength (periodic)
  int ny = 512;   // cells between the two Dirichlet rows
};

struct FdOptions {
  double tolerance = 1e-10;  // residual relative to source norm
  int max_iterations = 8;
  double far_field_margin_wavelengths = 3.0;
};

// Node (i, j) sits at x = i dx, y = j dy. Rows j = 0 and j = ny hold psi = 0.
struct FdGrid {
  int nx = 0;
  int ny = 0;
  double dx = 0.0;
  double dy = 0.0;
  double y_max = 0.0;
  Topology topology = Topology::NoBackIron;
  Eigen::MatrixXd psi;     // (ny + 1) x nx
  Eigen::MatrixXd source;  // projected div M, same shape
  std::vector<std::pair<int, double>> residual_log;

  double x(int i) const { return i * dx; }
  double y(int j) const { return j * dy; }
};

// Domain height for the topology: the back-iron face, or the magnet top plus
// a decay margin.
double fd_domain_height(const MotorDesign& d, const FdOptions& options = {});

// Projects div M of the exact piecewise array onto the bilinear node basis.
Eigen::MatrixXd fd_source(const MotorDesign& d, const HalbachLayout& layout, const FdGridSpec& spec,
                          double y_max);

// Five-point Laplacian on interior rows; Dirichlet rows return zero.
Eigen::MatrixXd fd_laplacian(const FdGrid& grid, const Eigen::MatrixXd& psi);

FdGrid solve_scalar_poisson(const MotorDesign& d, const HalbachLayout& layout, const FdGridSpec& spec,
                            const FdOptions& options = {});
FdGrid solve_scalar_poisson(const MotorDesign& d, const FdGridSpec& spec, const FdOptions& options = {});

struct FdFields {
  Eigen::MatrixXd hx, hy, bx, by;  // node values, same shape as psi

  double sample(const FdGrid& grid, const Eigen::MatrixXd& field, double x, double y) const;
};

FdFields fd_fields(const FdGrid& grid, const MotorDesign& d);

// Net discrete flux of B out of the node block [i0, i1] x [j0, j1], and the
// magnitude of the magnetic sources inside it, both per unit depth.
std::pair<double, double> fd_block_flux(const FdGrid& grid, int i0, int i1, int j0, int j1);

struct FdForceReport {
  double fd_force = 0.0;
  double analytic_force = 0.0;
  double rel_gap = 0.0;
};

// Lorentz force on the coils from the grid's B_y, integrated over each coil
// cross-section, against the analytic thrust at the same instant.
FdForceReport fd_force_check(const MotorDesign& d, const FdGrid& grid, const OperatingPoint& op,
                             const HarmonicTruncation& trunc = HarmonicTruncation{});

// Integral of the unit hat centred on c with half-width h over [p, q].
double hat_integral(double c, double h, double p, double q);

}  // namespace halbach
