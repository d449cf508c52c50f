#include "halbach/cli.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "halbach/design_studio.hpp"
#include "halbach/error.hpp"
#include "halbach/fd_oracle.hpp"
#include "halbach/field_poisson.hpp"
#include "halbach/machine_quantities.hpp"
#include "halbach/verification.hpp"

#ifndef HALBACH_VERSION
#define HALBACH_VERSION "0.0.0"
#endif

namespace halbach {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class Csv {
 public:
  Csv(const fs::path& path, const std::vector<std::string>& header) : f_(path) {
    if (!f_) throw Error(ErrorCode::InvalidValue, "cannot write " + path.string());
    f_ << std::setprecision(12);
    for (std::size_t i = 0; i < header.size(); ++i) f_ << (i ? "," : "") << header[i];
    f_ << '\n';
  }

  template <typename... Ts>
  void row(const Ts&... vals) {
    bool first = true;
    ((f_ << (first ? "" : ",") << vals, first = false), ...);
    f_ << '\n';
  }

  void row(const std::vector<double>& vals) {
    for (std::size_t i = 0; i < vals.size(); ++i) f_ << (i ? "," : "") << vals[i];
    f_ << '\n';
  }

 private:
  std::ofstream f_;
};

struct Common {
  std::string config_path;
  std::string out_dir = "out";
  int nmax = 0;
};

struct StageFlags {
  double length = 0.6, mass = 100.0, depth = 0.3;
  std::string moving = "pm";
  int stator_units = 0;
  double alpha = 1.0, beta = 0.2;
  bool extended = false;
  double w_thd = 1.0, w_ripple = 1.0, w_cost = 1.0, cost_drive = 0.0;
};

// Bookkeeping for one subcommand run: output files and the manifest.
class Run {
 public:
  Run(std::string command, const Common& common, MotorConfig cfg)
      : command_(std::move(command)), common_(common), cfg_(std::move(cfg)), start_(std::chrono::steady_clock::now()) {
    fs::create_directories(common_.out_dir);
  }

  const MotorConfig& cfg() const { return cfg_; }
  fs::path file(const std::string& name) {
    outputs_.push_back(name);
    return fs::path(common_.out_dir) / name;
  }
  json& options() { return options_; }
  const std::string& out_dir() const { return common_.out_dir; }

  void write_json(const std::string& name, const json& j) {
    std::ofstream f(file(name));
    f << j.dump(2) << '\n';
  }

  void finish() {
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    json m;
    m["command"] = command_;
    m["config_path"] = common_.config_path;
    m["parameters"] = to_key_values(cfg_);
    m["options"] = options_;
    m["output_dir"] = common_.out_dir;
    outputs_.push_back("manifest.json");
    m["outputs"] = outputs_;
    m["version"] = HALBACH_VERSION;
    m["duration_s"] = secs;
    std::ofstream f(fs::path(common_.out_dir) / "manifest.json");
    f << m.dump(2) << '\n';
  }

 private:
  std::string command_;
  Common common_;
  MotorConfig cfg_;
  json options_ = json::object();
  std::vector<std::string> outputs_;
  std::chrono::steady_clock::time_point start_;
};

MotorConfig load(const Common& c) {
  MotorConfig cfg = c.config_path.empty() ? MotorConfig{MotorDesign(MotorParameters{}), HarmonicTruncation{}}
                                          : load_config_file(c.config_path);
  if (c.nmax != 0) cfg.truncation = HarmonicTruncation(c.nmax);
  return cfg;
}

std::pair<int, int> parse_grid(const std::string& spec, std::pair<int, int> fallback) {
  if (spec.empty()) return fallback;
  const auto x = spec.find_first_of("xX");
  try {
    if (x == std::string::npos) throw std::invalid_argument(spec);
    const int nx = std::stoi(spec.substr(0, x));
    const int ny = std::stoi(spec.substr(x + 1));
    if (nx < 1 || ny < 1) throw std::invalid_argument(spec);
    return {nx, ny};
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidValue, "grid must look like NXxNY, got '" + spec + "'");
  }
}

std::vector<double> split_numbers(const std::string& spec) {
  std::vector<double> v;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ':')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidValue, "bad number '" + part + "' in '" + spec + "'");
    }
  }
  return v;
}

// "v" or "lo:hi:n" (inclusive, n points).
std::vector<double> parse_axis(const std::string& spec, double fallback) {
  if (spec.empty()) return {fallback};
  const auto v = split_numbers(spec);
  if (v.size() == 1) return v;
  if (v.size() != 3 || v[2] < 1 || v[2] != std::floor(v[2])) {
    throw Error(ErrorCode::InvalidValue, "axis must be 'value' or 'lo:hi:count', got '" + spec + "'");
  }
  const int n = static_cast<int>(v[2]);
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = n == 1 ? v[0] : v[0] + (v[1] - v[0]) * i / (n - 1);
  return out;
}

std::array<double, 2> parse_bounds(const std::string& spec, std::array<double, 2> fallback) {
  if (spec.empty()) return fallback;
  const auto v = split_numbers(spec);
  if (v.size() == 1) return {v[0], v[0]};
  if (v.size() != 2) throw Error(ErrorCode::InvalidValue, "bounds must be 'lo:hi', got '" + spec + "'");
  return {v[0], v[1]};
}

StageSpec make_stage(const StageFlags& f) {
  StageSpec s;
  s.length = f.length;
  s.mass = f.mass;
  s.depth = f.depth;
  if (f.moving == "pm") s.moving = MovingMember::MovingPm;
  else if (f.moving == "stator") s.moving = MovingMember::MovingStator;
  else throw Error(ErrorCode::InvalidValue, "--moving must be pm or stator");
  if (f.stator_units > 0) s.stator_units = f.stator_units;
  validate(s);
  return s;
}

ObjectiveConfig make_objective(const StageFlags& f) {
  ObjectiveConfig o;
  o.alpha = f.alpha;
  o.beta = f.beta;
  if (f.extended) o.extended = ExtendedWeights{f.w_thd, f.w_ripple, f.w_cost, f.cost_drive};
  validate(o);
  return o;
}

json stage_json(const StageFlags& f) {
  return {{"stage_length_m", f.length}, {"stage_mass_kg", f.mass},   {"stage_depth_m", f.depth},
          {"moving", f.moving},         {"stator_units", f.stator_units}, {"alpha", f.alpha},
          {"beta", f.beta},             {"extended", f.extended},     {"w_thd", f.w_thd},
          {"w_ripple", f.w_ripple},     {"w_cost", f.w_cost},         {"cost_drive", f.cost_drive}};
}

std::vector<std::string> phase_header(const std::string& first, const std::string& prefix, int n,
                                      std::vector<std::string> tail = {}) {
  std::vector<std::string> h{first};
  for (int m = 1; m <= n; ++m) h.push_back(prefix + std::to_string(m));
  h.insert(h.end(), tail.begin(), tail.end());
  return h;
}

FieldCoefficients solve_for(Model model, const MotorConfig& cfg) {
  const auto source = fourier_coefficients(cfg.design, cfg.truncation);
  return solve_model(model, cfg.design, source, cfg.truncation);
}

std::string opt_str(const std::optional<double>& v) {
  if (!v) return "";
  std::ostringstream os;
  os << std::setprecision(12) << *v;
  return os.str();
}

// ---------------------------------------------------------------- commands

int cmd_fields(Run& run, const std::string& model_name, const std::string& grid_spec, double y_max, bool with_fd,
               const std::string& fd_grid_spec, std::ostream& out) {
  const auto& d = run.cfg().design;
  const Model model = parse_model(model_name);
  const auto [nx, ny] = parse_grid(grid_spec, {256, 128});
  const double top = y_max > 0 ? y_max : (d.back_iron() ? d.array_top() : d.array_top() + d.lambda() / 4.0);
  run.options() = {{"model", model_name}, {"grid", std::to_string(nx) + "x" + std::to_string(ny)}, {"y_max", top},
                   {"fd", with_fd}};
  const auto c = solve_for(model, run.cfg());
  const auto& src = c.source();

  // Validate the whole grid before writing anything.
  for (int j = 0; j < ny; ++j) region_of(c, ny == 1 ? 0.0 : top * j / (ny - 1));

  Csv fields(run.file("fields.csv"), {"x", "y", "region", "Bx", "By", "Hx", "Hy", "psi", "Az", "model"});
  for (int j = 0; j < ny; ++j) {
    const double y = ny == 1 ? 0.0 : top * j / (ny - 1);
    for (int i = 0; i < nx; ++i) {
      const double x = d.lambda() * i / nx;
      const auto s = evaluate_fields(d, c, x, y);
      fields.row(x, y, to_string(s.region), s.bx, s.by, s.hx, s.hy, opt_str(s.psi), opt_str(s.az), to_string(model));
    }
  }
  Csv harm(run.file("harmonics.csv"), {"n", "k_n", "sigma_n", "M_xn", "M_yn"});
  for (int i = 0; i < src.count(); ++i) harm.row(2 * i + 1, src.current[i], src.charge[i], src.mx(i), src.my(i));
  const Eigen::VectorXd xs = Eigen::VectorXd::LinSpaced(nx, 0.0, d.lambda() * (nx - 1) / nx);
  const auto prof = source_profiles(src, xs);
  Csv profiles(run.file("profiles.csv"), {"x", "K_m", "sigma_m", "M_x", "M_y"});
  for (int i = 0; i < nx; ++i) profiles.row(xs[i], prof.current[i], prof.charge[i], prof.mx[i], prof.my[i]);

  if (with_fd) {
    const auto [fx, fy] = parse_grid(fd_grid_spec, {1024, 512});
    const auto grid = solve_scalar_poisson(d, FdGridSpec{fx, fy});
    const auto f = fd_fields(grid, d);
    Csv fdcsv(run.file("fd_fields.csv"), {"x", "y", "region", "Bx", "By", "Hx", "Hy", "psi", "Az", "model"});
    for (int j = 0; j < ny; ++j) {
      const double y = ny == 1 ? 0.0 : top * j / (ny - 1);
      if (y > grid.y_max) continue;
      for (int i = 0; i < nx; ++i) {
        const double x = d.lambda() * i / nx;
        fdcsv.row(x, y, to_string(region_of(c, y)), f.sample(grid, f.bx, x, y), f.sample(grid, f.by, x, y),
                  f.sample(grid, f.hx, x, y), f.sample(grid, f.hy, x, y), f.sample(grid, grid.psi, x, y), "", "fd");
      }
    }
    Csv res(run.file("fd_residuals.csv"), {"iteration", "residual"});
    for (const auto& [it, r] : grid.residual_log) res.row(it, r);
    out << "FD mid-gap B_y deviation: " << 100.0 * fd_midgap_error(d, solve_for(Model::Laplace, run.cfg()), grid)
        << " %\n";
  }
  out << "wrote " << nx * ny << " field samples (" << to_string(model) << ") to " << run.out_dir()
      << '\n';
  return 0;
}

int cmd_force(Run& run, int samples, int angle_points, std::optional<double> x0_opt, std::ostream& out) {
  const auto& d = run.cfg().design;
  const auto c = solve_for(Model::Laplace, run.cfg());
  const auto fa = force_angle(d, c, angle_points);
  const double x0 = x0_opt.value_or(fa.peak_x0);
  run.options() = {{"samples", samples}, {"angle_points", angle_points}, {"x0", x0}};
  const auto f = thrust(d, c, OperatingPoint{0.0, x0, {}}, period_grid(d, samples));
  Csv prof(run.file("force.csv"), phase_header("t", "F_phase_", d.phases(), {"F_total", "tau"}));
  for (int j = 0; j < f.t.size(); ++j) {
    std::vector<double> row{f.t[j]};
    for (int m = 0; m < d.phases(); ++m) row.push_back(f.phase(j, m));
    row.push_back(f.total[j]);
    row.push_back(f.shear[j]);
    prof.row(row);
  }
  Csv angle(run.file("force_angle.csv"), {"x0", "F_mean"});
  for (int j = 0; j < fa.x0.size(); ++j) angle.row(fa.x0[j], fa.mean_force[j]);
  run.write_json("force_summary.json", {{"x0_m", x0},
                                        {"mean_force_N", f.mean_force},
                                        {"mean_shear_N_m2", f.mean_force / (d.lambda() * d.depth())},
                                        {"ripple_pct", f.ripple_pct},
                                        {"peak_mean_force_N", fa.peak_force},
                                        {"force_angle_rad", fa.force_angle}});
  out << std::setprecision(6) << "mean thrust " << f.mean_force << " N, shear "
      << f.mean_force / (d.lambda() * d.depth()) << " N/m^2, ripple " << f.ripple_pct << " %, force angle "
      << fa.force_angle << " rad\n";
  return 0;
}

int cmd_emf(Run& run, int samples, double x0, std::optional<double> velocity, std::ostream& out) {
  const auto& d = run.cfg().design;
  const auto c = solve_for(Model::Laplace, run.cfg());
  OperatingPoint op{0.0, x0, velocity};
  run.options() = {{"samples", samples}, {"x0", x0}, {"velocity", op.velocity(d)}};
  const auto e = back_emf(d, c, op, period_grid(d, samples));
  Csv emf(run.file("emf.csv"), phase_header("t", "E_", d.phases()));
  Csv link(run.file("linkage.csv"), phase_header("t", "lambda_", d.phases()));
  for (int j = 0; j < e.t.size(); ++j) {
    std::vector<double> a{e.t[j]}, b{e.t[j]};
    for (int m = 0; m < d.phases(); ++m) {
      a.push_back(e.emf(j, m));
      b.push_back(e.linkage(j, m));
    }
    emf.row(a);
    link.row(b);
  }
  out << std::setprecision(6) << "peak EMF " << e.emf.cwiseAbs().maxCoeff() << " V per phase, THD "
      << 100.0 * emf_thd(d, c) << " %\n";
  return 0;
}

int cmd_normal(Run& run, int points, std::ostream& out) {
  const auto& d = run.cfg().design;
  const auto& trunc = run.cfg().truncation;
  const auto source = fourier_coefficients(d, trunc);
  const double g0_max = d.gap_offset();
  run.options() = {{"points", points}, {"gap_offset_m", g0_max}};
  Csv normal(run.file("normal.csv"), {"g0", "Fy_top", "Fy_bottom", "Fy_net"});
  for (int i = 0; i <= 10; ++i) {
    const double g0 = g0_max * i / 10.0;
    const auto r = misalignment_force(d, source, trunc, g0, points);
    normal.row(g0, r.fy_top, r.fy_bottom, r.fy_total);
  }
  const auto c = solve_coefficients(d, source, trunc);
  const auto a = attraction_force(d, c, points);
  Csv tyy(run.file("tyy.csv"), {"x", "Tyy"});
  for (int j = 0; j < a.x.size(); ++j) tyy.row(a.x[j], a.tyy[j]);
  out << std::setprecision(6) << "attraction per side " << a.fy << " N, misalignment stiffness "
      << misalignment_stiffness(d, source, trunc) << " N/m\n";
  return 0;
}

std::vector<std::string> metric_header(bool extended) {
  std::vector<std::string> h{"F_t", "tau", "m_moving", "a", "P_cu", "score"};
  if (extended) {
    h.push_back("thd");
    h.push_back("ripple_pct");
  }
  return h;
}

void append_metrics(std::vector<double>& row, const SweepRow& r, bool extended) {
  row.insert(row.end(), {r.metrics.thrust, r.metrics.shear, r.metrics.moving_mass, r.metrics.acceleration,
                         r.metrics.copper_loss, r.score});
  if (extended) {
    row.push_back(r.metrics.thd.value_or(0.0));
    row.push_back(r.metrics.ripple_pct.value_or(0.0));
  }
}

json row_json(const SweepRow& r) {
  return {{"lambda_m", r.lambda},        {"pm_height_m", r.pm_height},   {"coil_height_m", r.coil_height},
          {"thrust_N", r.metrics.thrust}, {"shear_N_m2", r.metrics.shear}, {"acceleration_m_s2", r.metrics.acceleration},
          {"copper_loss_W", r.metrics.copper_loss}, {"score", r.score}};
}

int cmd_sweep(Run& run, const StageFlags& sf, const std::string& la, const std::string& hm, const std::string& hc,
              std::ostream& out) {
  const auto& d = run.cfg().design;
  const auto stage = make_stage(sf);
  const auto obj = make_objective(sf);
  SweepAxes axes{parse_axis(la, d.lambda()), parse_axis(hm, d.pm_height()), parse_axis(hc, d.coil_height())};
  run.options() = stage_json(sf);
  run.options()["lambda"] = axes.lambda;
  run.options()["pm_height"] = axes.pm_height;
  run.options()["coil_height"] = axes.coil_height;
  const auto res = sweep(d, run.cfg().truncation, stage, obj, axes);
  const bool ext = obj.extended.has_value();
  std::vector<std::string> header{"lambda", "hm", "hc"};
  for (auto& h : metric_header(ext)) header.push_back(h);
  Csv csv(run.file("sweep.csv"), header);
  for (const auto& r : res.rows) {
    std::vector<double> row{r.lambda, r.pm_height, r.coil_height};
    append_metrics(row, r, ext);
    csv.row(row);
  }
  const auto& best = res.rows[res.best];
  run.write_json("sweep_summary.json", {{"points", res.rows.size()}, {"best", row_json(best)}});
  out << std::setprecision(6) << res.rows.size() << " points; best lambda " << best.lambda << " h_m "
      << best.pm_height << " h_c " << best.coil_height << " score " << best.score << '\n';
  return 0;
}

int cmd_optimize(Run& run, const StageFlags& sf, const std::string& la, const std::string& hm, const std::string& hc,
                 std::ostream& out) {
  const auto& d = run.cfg().design;
  const auto stage = make_stage(sf);
  const auto obj = make_objective(sf);
  Bounds b;
  b.lambda = parse_bounds(la, {d.lambda(), d.lambda()});
  b.pm_height = parse_bounds(hm, b.pm_height);
  b.coil_height = parse_bounds(hc, b.coil_height);
  run.options() = stage_json(sf);
  run.options()["bounds"] = {{"lambda", b.lambda}, {"pm_height", b.pm_height}, {"coil_height", b.coil_height}};
  const auto res = optimize(d, run.cfg().truncation, stage, obj, b);
  const bool ext = obj.extended.has_value();
  std::vector<std::string> header{"pass", "i_lambda", "i_hm", "i_hc", "lambda", "hm", "hc"};
  for (auto& h : metric_header(ext)) header.push_back(h);
  Csv csv(run.file("optimize_trace.csv"), header);
  for (const auto& t : res.trace) {
    std::vector<double> row{double(t.pass), double(t.lattice[0]), double(t.lattice[1]), double(t.lattice[2]),
                            t.row.lambda, t.row.pm_height, t.row.coil_height};
    append_metrics(row, t.row, ext);
    csv.row(row);
  }
  run.write_json("optimize_summary.json",
                 {{"evaluations", res.evaluations}, {"pass_best", res.pass_best}, {"best", row_json(res.best)}});
  out << std::setprecision(6) << res.evaluations << " evaluations; best lambda " << res.best.lambda << " h_m "
      << res.best.pm_height << " h_c " << res.best.coil_height << " score " << res.best.score << '\n';
  return 0;
}

int cmd_sizing(Run& run, double b_av, double j_av, std::ostream& out) {
  const auto& d = run.cfg().design;
  const double j = j_av > 0 ? j_av : d.j_max();
  run.options() = {{"B_av", b_av}, {"J_av", j}};
  const auto s = initial_sizing(b_av, j, d);
  run.write_json("sizing.json", {{"tau_av_N_m2", s.shear}, {"F_av_N", s.force}, {"P_W_m3", s.loss_density}});
  out << std::setprecision(6) << "tau_av = " << s.shear << " N/m^2\nF_av = " << s.force
      << " N\nP = " << s.loss_density << " W/m^3\n";
  return 0;
}

int cmd_verify(Run& run, bool skip_fd, const std::string& fd_grid, int corrupt_row, std::ostream& out) {
  VerifyOptions vo;
  vo.skip_fd = skip_fd;
  vo.corrupt_row = corrupt_row;
  const auto [fx, fy] = parse_grid(fd_grid, {1024, 512});
  vo.fd_grid = {fx, fy};
  run.options() = {{"skip_fd", skip_fd}, {"fd_grid", std::to_string(fx) + "x" + std::to_string(fy)}};
  const auto checks = run_verification(run.cfg(), vo);
  Csv csv(run.file("verify.csv"), {"check", "pass", "value", "limit"});
  int failed = 0;
  for (const auto& c : checks) {
    out << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << std::setprecision(3) << c.value << " (limit "
        << c.limit << ")\n";
    csv.row('"' + c.name + '"', c.pass ? 1 : 0, c.value, c.limit);
    failed += !c.pass;
  }
  if (skip_fd) out << "SKIP FD oracle checks\n";
  out << checks.size() - failed << "/" << checks.size() << " checks passed\n";
  return failed ? 1 : 0;
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::SingularSystem:
    case ErrorCode::NoConvergence:
    case ErrorCode::ZeroVelocity:
    case ErrorCode::ZeroLoss:
      return 1;
    default:
      return 2;
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Analytic field, force and design tools for slotless Halbach linear motors", "halbach_lsm"};
  app.set_version_flag("--version", HALBACH_VERSION);
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config_path, "motor config file (key = value)")->check(CLI::ExistingFile);
    sub->add_option("--out", common.out_dir, "output directory")->capture_default_str();
    sub->add_option("--nmax", common.nmax, "highest odd harmonic (overrides config)");
  };

  std::string model = "laplace", grid, fd_grid;
  double y_max = 0.0;
  bool with_fd = false;
  auto* fields = app.add_subcommand("fields", "field map CSV for one model");
  add_common(fields);
  fields->add_option("--model", model, "laplace | poisson-scalar | poisson-vector")->capture_default_str();
  fields->add_option("--grid", grid, "sample grid NXxNY over one wavelength (default 256x128)");
  fields->add_option("--y-max", y_max, "top of the sampled band [m]");
  fields->add_flag("--fd", with_fd, "also solve the finite-difference oracle");
  fields->add_option("--fd-grid", fd_grid, "FD grid NXxNY (default 1024x512)");

  int samples = 720, angle_points = 360;
  std::optional<double> x0_force;
  auto* force = app.add_subcommand("force", "thrust profile, ripple and force-angle curve");
  add_common(force);
  force->add_option("--samples", samples, "time samples per period")->capture_default_str();
  force->add_option("--angle-points", angle_points, "x0 points over one wavelength")->capture_default_str();
  force->add_option("--x0", x0_force, "mover offset [m] (default: force-angle peak)");

  double x0_emf = 0.0;
  std::optional<double> velocity;
  auto* emf = app.add_subcommand("emf", "back-EMF and flux linkage per phase");
  add_common(emf);
  emf->add_option("--samples", samples, "time samples per period")->capture_default_str();
  emf->add_option("--x0", x0_emf, "mover offset [m]")->capture_default_str();
  emf->add_option("--velocity", velocity, "mover speed [m/s] (default synchronous)");

  int tyy_points = 256;
  auto* normal = app.add_subcommand("normal", "attraction and misalignment forces");
  add_common(normal);
  normal->add_option("--points", tyy_points, "x samples of the normal stress")->capture_default_str();

  StageFlags sf;
  std::string ax_lambda, ax_hm, ax_hc;
  auto add_stage = [&](CLI::App* sub) {
    sub->add_option("--stage-length", sf.length, "stage length [m]")->capture_default_str();
    sub->add_option("--stage-mass", sf.mass, "stage mass [kg]")->capture_default_str();
    sub->add_option("--stage-depth", sf.depth, "stage in-depth length [m]")->capture_default_str();
    sub->add_option("--moving", sf.moving, "moving member: pm | stator")->capture_default_str();
    sub->add_option("--stator-units", sf.stator_units, "stator unit count (default ceil(N_u) + 1)");
    sub->add_option("--alpha", sf.alpha, "acceleration exponent")->capture_default_str();
    sub->add_option("--beta", sf.beta, "copper-loss exponent")->capture_default_str();
    sub->add_flag("--extended", sf.extended, "include THD, ripple and drive cost in the objective");
    sub->add_option("--w-thd", sf.w_thd, "THD exponent")->capture_default_str();
    sub->add_option("--w-ripple", sf.w_ripple, "ripple exponent")->capture_default_str();
    sub->add_option("--w-cost", sf.w_cost, "drive-cost exponent")->capture_default_str();
    sub->add_option("--cost-drive", sf.cost_drive, "drive cost (required with --extended)");
  };
  auto* sweep_cmd = app.add_subcommand("sweep", "full-factorial sensitivity sweep");
  add_common(sweep_cmd);
  add_stage(sweep_cmd);
  sweep_cmd->add_option("--lambda", ax_lambda, "value or lo:hi:count [m]");
  sweep_cmd->add_option("--hm", ax_hm, "value or lo:hi:count [m]");
  sweep_cmd->add_option("--hc", ax_hc, "value or lo:hi:count [m]");

  auto* opt_cmd = app.add_subcommand("optimize", "grid search with two refinement passes");
  add_common(opt_cmd);
  add_stage(opt_cmd);
  opt_cmd->add_option("--lambda", ax_lambda, "value or lo:hi [m] (default: config value)");
  opt_cmd->add_option("--hm", ax_hm, "lo:hi [m] (default 2e-3:20e-3)");
  opt_cmd->add_option("--hc", ax_hc, "lo:hi [m] (default 1e-3:12e-3)");

  double b_av = 0.5, j_av = 0.0;
  auto* sizing = app.add_subcommand("sizing", "initial sizing from average flux and current densities");
  add_common(sizing);
  sizing->add_option("--b-av", b_av, "average flux density [T]")->capture_default_str();
  sizing->add_option("--j-av", j_av, "average current density [A/m^2] (default j_max)");

  bool skip_fd = false;
  int corrupt_row = -1;
  auto* verify = app.add_subcommand("verify", "run the invariant suites");
  add_common(verify);
  verify->add_flag("--skip-fd", skip_fd, "skip the finite-difference oracle");
  verify->add_option("--fd-grid", fd_grid, "FD grid NXxNY (default 1024x512)");
  verify->add_option("--corrupt-row", corrupt_row, "flip one boundary-row source sign")->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    const MotorConfig cfg = load(common);
    CLI::App* sub = app.get_subcommands().front();
    Run run(sub->get_name(), common, cfg);
    int rc = 0;
    if (sub == fields) rc = cmd_fields(run, model, grid, y_max, with_fd, fd_grid, out);
    else if (sub == force) rc = cmd_force(run, samples, angle_points, x0_force, out);
    else if (sub == emf) rc = cmd_emf(run, samples, x0_emf, velocity, out);
    else if (sub == normal) rc = cmd_normal(run, tyy_points, out);
    else if (sub == sweep_cmd) rc = cmd_sweep(run, sf, ax_lambda, ax_hm, ax_hc, out);
    else if (sub == opt_cmd) rc = cmd_optimize(run, sf, ax_lambda, ax_hm, ax_hc, out);
    else if (sub == sizing) rc = cmd_sizing(run, b_av, j_av, out);
    else if (sub == verify) rc = cmd_verify(run, skip_fd, fd_grid, corrupt_row, out);
    run.finish();
    return rc;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace halbach
