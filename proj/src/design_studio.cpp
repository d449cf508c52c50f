#include "halbach/design_studio.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "halbach/error.hpp"
#include "halbach/field_laplace.hpp"
#include "halbach/halbach_source.hpp"
#include "halbach/machine_quantities.hpp"

namespace halbach {

namespace {

void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) throw Error(code, what);
}

}  // namespace

int StageSpec::stator_unit_count(const MotorDesign& d) const {
  if (stator_units) return *stator_units;
  return static_cast<int>(std::ceil(mover_units(d) - 1e-9)) + 1;
}

void validate(const StageSpec& s) {
  require(s.length > 0 && std::isfinite(s.length), ErrorCode::NonPositiveLength, "stage length must be > 0");
  require(s.depth > 0 && std::isfinite(s.depth), ErrorCode::NonPositiveLength, "stage depth must be > 0");
  require(s.mass > 0 && std::isfinite(s.mass), ErrorCode::InvalidValue, "stage mass must be > 0");
  require(!s.stator_units || *s.stator_units >= 1, ErrorCode::InvalidValue, "stator units must be >= 1");
}

void validate(const ObjectiveConfig& o) {
  require(o.alpha > 0, ErrorCode::InvalidValue, "objective alpha must be > 0");
  require(o.beta >= 0, ErrorCode::InvalidValue, "objective beta must be >= 0");
  if (o.extended) {
    require(o.extended->cost_drive > 0, ErrorCode::InvalidValue,
            "extended objective needs a positive drive cost");
  }
}

StageMetrics stage_metrics(const MotorDesign& d, const StageSpec& stage, double thrust_mean) {
  validate(stage);
  StageMetrics m;
  m.mover_units = stage.mover_units(d);
  require(m.mover_units >= 1.0 - 1e-12, ErrorCode::InvalidValue, "stage shorter than one motor unit");
  m.stator_units = stage.stator_unit_count(d);
  m.thrust = thrust_mean;
  m.shear = thrust_mean / (d.lambda() * d.depth());
  const double unit_volume = 4.0 * m.mover_units * d.lambda() * stage.depth;
  m.moving_mass = stage.moving == MovingMember::MovingPm ? unit_volume * d.params().rho_pm * d.pm_height()
                                                         : unit_volume * d.params().rho_cu * d.coil_height();
  m.acceleration = 2.0 * m.mover_units * thrust_mean / (stage.mass + m.moving_mass);
  m.copper_loss =
      4.0 * m.stator_units * d.lambda() * stage.depth * d.coil_height() * d.j_max() * d.j_max() / d.params().sigma_cu;
  return m;
}

double objective(const MotorDesign&, const StageSpec&, const ObjectiveConfig& obj, const StageMetrics& m) {
  validate(obj);
  if (obj.beta > 0 && !(m.copper_loss > 0)) {
    throw Error(ErrorCode::ZeroLoss, "objective needs positive copper loss");
  }
  double score = std::pow(m.acceleration, obj.alpha);
  if (obj.beta > 0) score /= std::pow(m.copper_loss, obj.beta);
  if (obj.extended) {
    const auto& w = *obj.extended;
    require(m.thd.has_value() && m.ripple_pct.has_value(), ErrorCode::InvalidValue,
            "extended objective needs THD and ripple metrics");
    score /= std::pow(*m.thd, w.thd) * std::pow(*m.ripple_pct, w.ripple) * std::pow(w.cost_drive, w.cost);
  }
  return score;
}

StageMetrics evaluate_design(const MotorDesign& d, const HarmonicTruncation& trunc, const StageSpec& stage,
                             const ObjectiveConfig& obj) {
  const auto source = fourier_coefficients(d, trunc);
  const auto c = solve_coefficients(d, source, trunc);
  StageMetrics m = stage_metrics(d, stage, peak_mean_thrust(d, c));
  if (obj.extended) {
    m.thd = emf_thd(d, c);
    m.ripple_pct = thrust(d, c, OperatingPoint{0.0, optimal_x0(d, c), {}}, period_grid(d)).ripple_pct;
  }
  return m;
}

MotorDesign design_at(const MotorDesign& tmpl, double lambda, double pm_height, double coil_height) {
  MotorParameters p = tmpl.params();
  p.lambda = lambda;
  p.pm_height = pm_height;
  p.coil_height = coil_height;
  return MotorDesign(p);
}

SweepResult sweep(const MotorDesign& tmpl, const HarmonicTruncation& trunc, const StageSpec& stage,
                  const ObjectiveConfig& obj, const SweepAxes& axes) {
  validate(obj);
  const std::size_t total = axes.lambda.size() * axes.pm_height.size() * axes.coil_height.size();
  require(total > 0, ErrorCode::EmptyBounds, "sweep axes must each hold at least one value");
  if (total > kMaxSweepPoints) {
    throw Error(ErrorCode::InvalidValue,
                "sweep of " + std::to_string(total) + " points exceeds the limit of " + std::to_string(kMaxSweepPoints));
  }
  SweepResult out;
  out.rows.reserve(total);
  for (double lambda : axes.lambda) {
    for (double hm : axes.pm_height) {
      for (double hc : axes.coil_height) {
        const MotorDesign d = design_at(tmpl, lambda, hm, hc);
        SweepRow row{lambda, hm, hc, evaluate_design(d, trunc, stage, obj), 0.0};
        row.score = objective(d, stage, obj, row.metrics);
        if (out.rows.empty() || row.score > out.rows[out.best].score) out.best = out.rows.size();
        out.rows.push_back(row);
      }
    }
  }
  return out;
}

void validate(const Bounds& b) {
  for (const auto* r : {&b.lambda, &b.pm_height, &b.coil_height}) {
    const double lo = (*r)[0], hi = (*r)[1];
    if (!(std::isfinite(lo) && std::isfinite(hi) && lo > 0 && lo <= hi)) {
      std::ostringstream os;
      os << "bounds [" << lo << ", " << hi << "] are empty or non-positive";
      throw Error(ErrorCode::EmptyBounds, os.str());
    }
  }
}

int lattice_points(const OptimizeOptions& opt) { return (opt.coarse_points - 1) * (1 << opt.refinements) + 1; }

double lattice_value(const std::array<double, 2>& range, int index, int points) {
  if (range[1] == range[0] || points < 2) return range[0];
  if (index == points - 1) return range[1];
  return range[0] + (range[1] - range[0]) * index / (points - 1);
}

OptimizeResult optimize(const MotorDesign& tmpl, const HarmonicTruncation& trunc, const StageSpec& stage,
                        const ObjectiveConfig& obj, const Bounds& bounds, const OptimizeOptions& opt) {
  validate(bounds);
  validate(obj);
  require(opt.coarse_points >= 2 && opt.refinements >= 0 && opt.radius >= 1, ErrorCode::InvalidValue,
          "optimizer options out of range");
  const int n = lattice_points(opt);
  const std::array<const std::array<double, 2>*, 3> ranges{&bounds.lambda, &bounds.pm_height, &bounds.coil_height};
  std::array<bool, 3> varies{};
  for (int a = 0; a < 3; ++a) varies[a] = (*ranges[a])[1] > (*ranges[a])[0];

  OptimizeResult res;
  std::map<std::array<int, 3>, SweepRow> cache;
  bool have_best = false;

  auto visit = [&](const std::array<int, 3>& idx, int pass) {
    auto it = cache.find(idx);
    if (it == cache.end()) {
      const double lambda = lattice_value(bounds.lambda, idx[0], n);
      const double hm = lattice_value(bounds.pm_height, idx[1], n);
      const double hc = lattice_value(bounds.coil_height, idx[2], n);
      const MotorDesign d = design_at(tmpl, lambda, hm, hc);
      SweepRow row{lambda, hm, hc, evaluate_design(d, trunc, stage, obj), 0.0};
      row.score = objective(d, stage, obj, row.metrics);
      it = cache.emplace(idx, row).first;
      res.trace.push_back({pass, idx, row});
      ++res.evaluations;
    }
    if (!have_best || it->second.score > res.best.score) {
      res.best = it->second;
      res.best_lattice = idx;
      have_best = true;
    }
  };

  // Every pass walks a tensor grid around a centre with a given lattice step.
  auto scan = [&](const std::array<int, 3>& centre, int step, int reach, int pass) {
    std::array<std::vector<int>, 3> axis;
    for (int a = 0; a < 3; ++a) {
      if (!varies[a]) {
        axis[a] = {0};
        continue;
      }
      for (int r = -reach; r <= reach; ++r) {
        const int i = centre[a] + r * step;
        if (i >= 0 && i < n) axis[a].push_back(i);
      }
    }
    for (int i0 : axis[0])
      for (int i1 : axis[1])
        for (int i2 : axis[2]) visit({i0, i1, i2}, pass);
    res.pass_best.push_back(res.best.score);
  };

  const int coarse_step = 1 << opt.refinements;
  {
    std::array<std::vector<int>, 3> axis;
    for (int a = 0; a < 3; ++a) {
      if (!varies[a]) axis[a] = {0};
      else
        for (int i = 0; i < n; i += coarse_step) axis[a].push_back(i);
    }
    for (int i0 : axis[0])
      for (int i1 : axis[1])
        for (int i2 : axis[2]) visit({i0, i1, i2}, 0);
    res.pass_best.push_back(res.best.score);
  }
  for (int p = 1; p <= opt.refinements; ++p) {
    scan(res.best_lattice, coarse_step >> p, opt.radius, p);
  }
  return res;
}

SizingResult initial_sizing(double b_av, double j_av, const MotorDesign& d) {
  require(b_av > 0 && std::isfinite(b_av), ErrorCode::InvalidValue, "B_av must be > 0");
  require(j_av > 0 && std::isfinite(j_av), ErrorCode::InvalidValue, "J_av must be > 0");
  SizingResult r;
  r.shear = d.coil_height() * j_av * b_av;
  r.force = d.lambda() * d.depth() * r.shear;
  r.loss_density = j_av * j_av / d.params().sigma_cu;
  return r;
}

}  // namespace halbach
