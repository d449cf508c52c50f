#include "halbach/verification.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "halbach/error.hpp"
#include "halbach/field_poisson.hpp"
#include "halbach/machine_quantities.hpp"

namespace halbach {

namespace {

double scaled_max(const ScaledCoefficients& s) {
  return std::max({std::abs(s.a1), std::abs(s.b1), std::abs(s.a2), std::abs(s.b2), std::abs(s.b3)});
}

double ratio(double num, double den) { return den > 0.0 ? num / den : num; }

std::string case_label(const MotorDesign& d) {
  std::ostringstream os;
  os << "Nm=" << d.magnets_per_pole() << (d.back_iron() ? " back-iron" : " open");
  return os.str();
}

}  // namespace

double BoundaryReport::worst() const {
  return std::max({stator_bx, lower_hy_jump, lower_bx_jump, lower_by_continuity, upper_hy_jump, upper_bx_jump,
                   upper_by_continuity, iron_hx});
}

BoundaryReport boundary_residuals(const FieldCoefficients& c, int points) {
  const double lambda = 2.0 * kPi / c.wave_number();
  const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(points, 0.0, lambda * (points - 1) / points);
  const auto prof = source_profiles(c.source(), x);
  const double ge = c.effective_gap(), top = c.array_top();
  const bool iron = c.topology() == Topology::BackIron;

  BoundaryReport r;
  double bx0 = 0, bx_ref = 0;
  double hy_lo = 0, bx_lo = 0, by_lo = 0, hy_lo_max = 0, bx_lo_max = 0, by_lo_max = 0;
  double hy_up = 0, bx_up = 0, by_up = 0, hy_up_max = 0, bx_up_max = 0, by_up_max = 0;
  double hx_iron = 0, hx_iron_ref = 0;
  for (int i = 0; i < points; ++i) {
    const double xi = x[i];
    const auto s0 = evaluate_in_region(c, xi, 0.0, Region::I);
    const auto a = evaluate_in_region(c, xi, ge, Region::I);
    const auto b = evaluate_in_region(c, xi, ge, Region::II);
    bx0 = std::max(bx0, std::abs(s0.bx));
    bx_ref = std::max({bx_ref, std::abs(a.bx)});
    hy_lo = std::max(hy_lo, std::abs((b.hy - a.hy) - prof.charge[i] / kMu0));
    bx_lo = std::max(bx_lo, std::abs((a.bx - b.bx) - kMu0 * prof.current[i]));
    by_lo = std::max(by_lo, std::abs(b.by - a.by));
    hy_lo_max = std::max({hy_lo_max, std::abs(a.hy), std::abs(b.hy)});
    bx_lo_max = std::max({bx_lo_max, std::abs(a.bx), std::abs(b.bx)});
    by_lo_max = std::max({by_lo_max, std::abs(a.by), std::abs(b.by)});
    const auto u = evaluate_in_region(c, xi, top, Region::II);
    if (iron) {
      hx_iron = std::max({hx_iron, std::abs(u.hx), std::abs(u.bx + kMu0 * prof.current[i])});
      hx_iron_ref = std::max({hx_iron_ref, std::abs(u.bx), std::abs(kMu0 * u.hy)});
    } else {
      const auto v = evaluate_in_region(c, xi, top, Region::III);
      hy_up = std::max(hy_up, std::abs((v.hy - u.hy) + prof.charge[i] / kMu0));
      bx_up = std::max(bx_up, std::abs((u.bx - v.bx) + kMu0 * prof.current[i]));
      by_up = std::max(by_up, std::abs(v.by - u.by));
      hy_up_max = std::max({hy_up_max, std::abs(u.hy), std::abs(v.hy)});
      bx_up_max = std::max({bx_up_max, std::abs(u.bx), std::abs(v.bx)});
      by_up_max = std::max({by_up_max, std::abs(u.by), std::abs(v.by)});
    }
  }
  r.stator_bx = ratio(bx0, bx_ref);
  r.lower_hy_jump = ratio(hy_lo, hy_lo_max);
  r.lower_bx_jump = ratio(bx_lo, bx_lo_max);
  r.lower_by_continuity = ratio(by_lo, by_lo_max);
  if (iron) {
    r.iron_hx = ratio(hx_iron, hx_iron_ref);
  } else {
    r.upper_hy_jump = ratio(hy_up, hy_up_max);
    r.upper_bx_jump = ratio(bx_up, bx_up_max);
    r.upper_by_continuity = ratio(by_up, by_up_max);
  }
  return r;
}

double closed_form_deviation(const FieldCoefficients& solved, const FieldCoefficients& closed) {
  double worst = 0.0;
  for (int i = 0; i < std::min(solved.count(), closed.count()); ++i) {
    const auto& s = solved.scaled(i);
    const auto& q = closed.scaled(i);
    const double scale = scaled_max(s);
    if (scale == 0.0) continue;
    for (double d : {s.a1 - q.a1, s.b1 - q.b1, s.a2 - q.a2, s.b2 - q.b2, s.b3 - q.b3}) {
      worst = std::max(worst, std::abs(d) / scale);
    }
  }
  return worst;
}

double coefficient_map_deviation(const FieldCoefficients& m1, const FieldCoefficients& m2,
                                 const FieldCoefficients& m3) {
  double worst = 0.0;
  for (int i = 0; i < m1.count(); ++i) {
    const auto& a = m1.scaled(i);
    const auto& b = m2.scaled(i);
    const auto& v = m3.scaled(i);
    const double scale = scaled_max(a);
    if (scale == 0.0) continue;
    const double d2[] = {b.a1 - a.a1, b.b1 - a.b1, b.a2 - a.a2, b.b2 - a.b2, b.b3 - a.b3};
    const double d3[] = {v.a1 + kMu0 * a.a1, v.b1 - kMu0 * a.b1, v.a2 + kMu0 * a.a2, v.b2 - kMu0 * a.b2,
                         v.b3 - kMu0 * a.b3};
    for (double d : d2) worst = std::max(worst, std::abs(d) / scale);
    for (double d : d3) worst = std::max(worst, std::abs(d) / (kMu0 * scale));
  }
  return worst;
}

double tri_model_deviation(const FieldCoefficients& m1, const FieldCoefficients& m2, const FieldCoefficients& m3,
                           int points, unsigned seed) {
  std::mt19937_64 rng(seed);
  const double lambda = 2.0 * kPi / m1.wave_number();
  const double y_hi = m1.topology() == Topology::BackIron ? m1.array_top() : m1.array_top() + 0.25 * lambda;
  std::uniform_real_distribution<double> ux(0.0, lambda), uy(0.0, y_hi);
  Eigen::MatrixXd f(points, 12);
  for (int p = 0; p < points; ++p) {
    const double x = ux(rng), y = uy(rng);
    int col = 0;
    for (const auto* c : {&m1, &m2, &m3}) {
      const auto s = evaluate(*c, x, y);
      f.row(p).segment<4>(col) << s.bx, s.by, s.hx, s.hy;
      col += 4;
    }
  }
  double worst = 0.0;
  for (int comp = 0; comp < 4; ++comp) {
    const double scale = f.col(comp).cwiseAbs().maxCoeff();
    for (int model = 1; model < 3; ++model) {
      worst = std::max(worst, ratio((f.col(4 * model + comp) - f.col(comp)).cwiseAbs().maxCoeff(), scale));
    }
  }
  return worst;
}

double fd_midgap_error(const MotorDesign& d, const FieldCoefficients& c, const FdGrid& grid, int points) {
  const FdFields f = fd_fields(grid, d);
  const double y = d.effective_gap() / 2.0;
  double err = 0.0, peak = 0.0;
  for (int i = 0; i < points; ++i) {
    const double x = d.lambda() * i / points;
    const double exact = evaluate(c, x, y).by;
    err = std::max(err, std::abs(f.sample(grid, f.by, x, y) - exact));
    peak = std::max(peak, std::abs(exact));
  }
  return ratio(err, peak);
}

std::vector<CheckResult> run_verification(const MotorConfig& cfg, const VerifyOptions& options) {
  std::vector<CheckResult> out;
  std::vector<bool> irons{cfg.design.back_iron()};
  if (options.both_topologies) irons = {false, true};
  for (bool iron : irons) {
    for (int nm : options.magnet_counts) {
      MotorParameters p = cfg.design.params();
      p.back_iron = iron;
      p.magnets_per_pole = nm;
      const MotorDesign d(p);
      const auto& trunc = cfg.truncation;
      const std::string tag = " [" + case_label(d) + "]";
      try {
      const auto source = fourier_coefficients(d, trunc);
      SolveOptions so;
      so.corrupt_row = options.corrupt_row;
      const auto m1 = solve_coefficients(d, source, trunc, so);
      const auto m2 = solve_model2(d, source, trunc);
      const auto m3 = solve_model3(d, source, trunc);

      auto add = [&](const std::string& name, double value, double limit) {
        out.push_back({name + tag, value <= limit, value, limit});
      };
      add("closed-form vs dense solve", closed_form_deviation(m1, closed_form_coefficients(d, source, trunc)), 1e-10);
      add("coefficient maps", coefficient_map_deviation(m1, m2, m3), 1e-12);
      add("tri-model fields", tri_model_deviation(m1, m2, m3), 1e-10);
      add("boundary residuals", boundary_residuals(m1).worst(), 1e-2);
      const OperatingPoint op{0.0, optimal_x0(d, m1), {}};
      add("power balance", power_balance(d, m1, op, period_grid(d)).max_rel_deviation, 1e-9);
      if (!options.skip_fd) {
        const auto grid = solve_scalar_poisson(d, options.fd_grid);
        add("FD mid-gap B_y", fd_midgap_error(d, m1, grid), 3e-2);
      }
      } catch (const Error& e) {
        out.push_back({std::string("solve failed: ") + e.what() + tag, false, 1.0, 0.0});
      }
    }
  }
  return out;
}

}  // namespace halbach
