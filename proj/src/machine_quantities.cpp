#include "halbach/machine_quantities.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/LU>
#include <unsupported/Eigen/AutoDiff>

#include "halbach/boundary_system.hpp"
#include "halbach/error.hpp"
#include "halbach/field_laplace.hpp"

namespace halbach {

namespace {

// A_1n sinh(nk h_c) in the hybrid-model normalisation, whatever model the
// coefficients were solved with.
double a1_sinh_hc(const MotorDesign& d, const FieldCoefficients& c, int i) {
  const double v = c.a1_sinh(i, d.coil_height());
  return c.model() == Model::PoissonVector ? -v / kMu0 : v;
}

double a1_laplace(const FieldCoefficients& c, int i) {
  const double v = c.a1(i);
  return c.model() == Model::PoissonVector ? -v / kMu0 : v;
}

double coil_width(const MotorDesign& d) { return d.lambda() / (2.0 * d.phases()); }

}  // namespace

Eigen::VectorXd period_grid(const MotorDesign& d, int samples) {
  if (samples < 1) throw Error(ErrorCode::InvalidValue, "need at least one time sample");
  const double period = 1.0 / d.frequency();
  return Eigen::VectorXd::LinSpaced(samples, 0.0, period * (samples - 1) / samples);
}

std::pair<double, double> coil_span(const MotorDesign& d, int m) {
  const double w = coil_width(d);
  return {(m - 1.5) * w, (m - 0.5) * w};
}

ForceResult thrust(const MotorDesign& d, const FieldCoefficients& c, const OperatingPoint& op,
                   const Eigen::VectorXd& t) {
  check_geometry(d, c);
  const int nph = d.phases();
  const double u = op.velocity(d);
  ForceResult r;
  r.t = t;
  r.phase = Eigen::MatrixXd::Zero(t.size(), nph);
  for (int i = 0; i < c.count(); ++i) {
    const double a = FieldCoefficients::order(i) * c.wave_number();
    const double cn = -8.0 * kMu0 * d.depth() * a1_sinh_hc(d, c, i) / a;
    if (cn == 0.0) continue;
    for (int m = 1; m <= nph; ++m) {
      const auto [x1, x2] = coil_span(d, m);
      for (Eigen::Index j = 0; j < t.size(); ++j) {
        const double s = a * (u * t[j] + op.x0);
        r.phase(j, m - 1) += cn * (std::cos(a * x1 - s) - std::cos(a * x2 - s));
      }
    }
  }
  for (int m = 1; m <= nph; ++m) {
    for (Eigen::Index j = 0; j < t.size(); ++j) r.phase(j, m - 1) *= phase_current_density(d, m, t[j]);
  }
  r.total = r.phase.rowwise().sum();
  r.shear = r.total / (d.lambda() * d.depth());
  r.mean_force = t.size() ? r.total.mean() : 0.0;
  r.ripple_pct = t.size() ? 100.0 * (r.total.maxCoeff() - r.total.minCoeff()) / r.mean_force : 0.0;
  return r;
}

double mean_thrust(const MotorDesign& d, const FieldCoefficients& c, double x0) {
  check_geometry(d, c);
  if (c.count() == 0) return 0.0;
  const double k = d.wave_number();
  const double per_phase = 8.0 * kMu0 * d.depth() * a1_sinh_hc(d, c, 0) / k * d.j_max() *
                           std::sin(kPi / (2.0 * d.phases()));
  return d.phases() * per_phase * std::sin(k * x0 - d.phi0());
}

double optimal_x0(const MotorDesign& d, const FieldCoefficients& c) {
  check_geometry(d, c);
  const double sign = c.count() && a1_sinh_hc(d, c, 0) < 0.0 ? -1.0 : 1.0;
  double x0 = (d.phi0() + sign * kPi / 2.0) / d.wave_number();
  x0 = std::fmod(x0, d.lambda());
  if (x0 < 0.0) x0 += d.lambda();
  return x0;
}

double peak_mean_thrust(const MotorDesign& d, const FieldCoefficients& c) {
  return mean_thrust(d, c, optimal_x0(d, c));
}

ForceAngleResult force_angle(const MotorDesign& d, const FieldCoefficients& c, int points) {
  if (points < 1) throw Error(ErrorCode::InvalidValue, "need at least one x0 point");
  ForceAngleResult r;
  r.x0 = Eigen::VectorXd::LinSpaced(points, 0.0, d.lambda() * (points - 1) / points);
  r.mean_force.resize(points);
  for (int j = 0; j < points; ++j) r.mean_force[j] = mean_thrust(d, c, r.x0[j]);
  r.mean_force.maxCoeff(&r.peak_index);
  r.peak_x0 = r.x0[r.peak_index];
  r.peak_force = r.mean_force[r.peak_index];
  r.force_angle = d.wave_number() * r.peak_x0;
  return r;
}

double attraction_force_value(const MotorDesign& d, const FieldCoefficients& c) {
  check_geometry(d, c);
  double sum = 0.0;
  for (int i = 0; i < c.count(); ++i) {
    const double a = FieldCoefficients::order(i) * c.wave_number();
    const double v = a * a1_laplace(c, i);
    sum += v * v;
  }
  return 2.0 * kMu0 * d.depth() * sum * d.lambda() / 2.0;
}

NormalForceResult attraction_force(const MotorDesign& d, const FieldCoefficients& c, int points) {
  NormalForceResult r;
  r.x = Eigen::VectorXd::LinSpaced(points, 0.0, d.lambda() * (points - 1) / points);
  r.tyy = Eigen::VectorXd::Zero(points);
  for (int j = 0; j < points; ++j) {
    double by = 0.0;
    for (int i = 0; i < c.count(); ++i) {
      const double a = FieldCoefficients::order(i) * c.wave_number();
      by += -2.0 * kMu0 * a * a1_laplace(c, i) * std::sin(a * r.x[j]);
    }
    r.tyy[j] = by * by / (2.0 * kMu0);
  }
  r.fy = attraction_force_value(d, c);
  r.fy_top = r.fy;
  r.fy_bottom = r.fy;
  r.fy_total = 0.0;
  return r;
}

NormalForceResult misalignment_force(const MotorDesign& d, const HarmonicSource& source,
                                     const HarmonicTruncation& trunc, double g0, int points) {
  if (!(g0 >= 0.0) || g0 >= d.gap()) {
    std::ostringstream os;
    os << "airgap offset " << g0 << " m must satisfy 0 <= g0 < g = " << d.gap() << " m";
    throw Error(ErrorCode::OffsetExceedsGap, os.str());
  }
  const MotorDesign top = d.with_gap(d.gap() - g0);
  const MotorDesign bottom = d.with_gap(d.gap() + g0);
  const auto ct = solve_coefficients(top, source, trunc);
  const auto cb = solve_coefficients(bottom, source, trunc);
  NormalForceResult r = attraction_force(top, ct, points);
  r.fy_top = r.fy;
  r.fy_bottom = attraction_force_value(bottom, cb);
  r.fy_total = r.fy_top - r.fy_bottom;
  return r;
}

double misalignment_stiffness(const MotorDesign& d, const HarmonicSource& source, const HarmonicTruncation& trunc) {
  using Dual = Eigen::AutoDiffScalar<Eigen::Matrix<double, 1, 1>>;
  using Sys = BoundarySystem<Dual>;
  if (source.count() < trunc.count()) throw Error(ErrorCode::InvalidTruncation, "source shorter than truncation");
  const Topology topo = topology_of(d);
  const double ge = d.effective_gap();
  double dfdg = 0.0;
  for (int i = 0; i < trunc.count(); ++i) {
    const double a = HarmonicTruncation::order(i) * source.wave_number;
    const Dual gd(ge, 1, 0);
    const Sys sys = boundary_system<Dual>(Model::Laplace, topo, Dual(a), gd, Dual(d.pm_height()),
                                          Dual(source.current[i]), Dual(source.charge[i]), BasisForm::Scaled);
    const Eigen::Index size = sys.matrix.rows();
    Eigen::MatrixXd m0(size, size), m1(size, size);
    Eigen::VectorXd b0(size), b1(size);
    for (Eigen::Index r = 0; r < size; ++r) {
      b0(r) = sys.rhs(r).value();
      b1(r) = sys.rhs(r).derivatives().size() ? sys.rhs(r).derivatives()(0) : 0.0;
      for (Eigen::Index col = 0; col < size; ++col) {
        m0(r, col) = sys.matrix(r, col).value();
        m1(r, col) = sys.matrix(r, col).derivatives().size() ? sys.matrix(r, col).derivatives()(0) : 0.0;
      }
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(m0);
    const Eigen::VectorXd c = lu.solve(b0);
    const Eigen::VectorXd dc = lu.solve(b1 - m1 * c);
    const double e = std::exp(-a * ge);
    const double a1 = c(0) * e;
    const double da1 = (dc(0) - a * c(0)) * e;
    dfdg += 2.0 * a * a * a1 * da1;
  }
  dfdg *= kMu0 * d.depth() * d.lambda();
  return -2.0 * dfdg;
}

EmfResult back_emf(const MotorDesign& d, const FieldCoefficients& c, const OperatingPoint& op,
                   const Eigen::VectorXd& t) {
  check_geometry(d, c);
  const int nph = d.phases();
  const double u = op.velocity(d);
  const double area = d.coil_height() * coil_width(d);
  EmfResult r;
  r.t = t;
  r.flux = Eigen::MatrixXd::Zero(t.size(), nph);
  r.emf = Eigen::MatrixXd::Zero(t.size(), nph);
  for (int i = 0; i < c.count(); ++i) {
    const double a = FieldCoefficients::order(i) * c.wave_number();
    const double base = 8.0 * kMu0 * d.depth() * a1_sinh_hc(d, c, i) / a;
    if (base == 0.0) continue;
    for (int m = 1; m <= nph; ++m) {
      const auto [x1, x2] = coil_span(d, m);
      for (Eigen::Index j = 0; j < t.size(); ++j) {
        const double s = a * (u * t[j] + op.x0);
        r.flux(j, m - 1) += base / a * (std::sin(a * x1 - s) - std::sin(a * x2 - s));
        r.emf(j, m - 1) += -base * u * (std::cos(a * x1 - s) - std::cos(a * x2 - s));
      }
    }
  }
  r.flux /= area;
  r.linkage = d.turns() * r.flux;
  r.emf *= d.turns() / area;
  return r;
}

double emf_thd(const MotorDesign& d, const FieldCoefficients& c) {
  check_geometry(d, c);
  double fundamental = 0.0, rest = 0.0;
  for (int i = 0; i < c.count(); ++i) {
    const int n = FieldCoefficients::order(i);
    const double a = n * c.wave_number();
    const double amp = std::abs(a1_sinh_hc(d, c, i) / a * std::sin(n * kPi / (2.0 * d.phases())));
    if (i == 0) fundamental = amp;
    else rest += amp * amp;
  }
  return fundamental > 0.0 ? std::sqrt(rest) / fundamental : 0.0;
}

PowerBalanceReport power_balance(const MotorDesign& d, const FieldCoefficients& c, const OperatingPoint& op,
                                 const Eigen::VectorXd& t) {
  const double u = op.velocity(d);
  if (u == 0.0) throw Error(ErrorCode::ZeroVelocity, "power balance needs a moving mover (u = 0)");
  const auto emf = back_emf(d, c, op, t);
  const auto force = thrust(d, c, op, t);
  PowerBalanceReport r;
  r.t = t;
  r.force_direct = force.total;
  r.force_from_power = Eigen::VectorXd::Zero(t.size());
  const double area = d.coil_height() * coil_width(d);
  for (int m = 1; m <= d.phases(); ++m) {
    for (Eigen::Index j = 0; j < t.size(); ++j) {
      const double current = area * phase_current_density(d, m, t[j]) / d.turns();
      r.force_from_power[j] += emf.emf(j, m - 1) * current / u;
    }
  }
  const double scale = t.size() ? r.force_direct.cwiseAbs().maxCoeff() : 0.0;
  r.max_rel_deviation =
      scale > 0.0 ? (r.force_from_power - r.force_direct).cwiseAbs().maxCoeff() / scale
                  : (r.force_from_power - r.force_direct).cwiseAbs().maxCoeff();
  return r;
}

}  // namespace halbach
