#include "halbach/fd_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include <unsupported/Eigen/FFT>

#include "halbach/error.hpp"
#include "halbach/field_laplace.hpp"
#include "halbach/machine_quantities.hpp"

namespace halbach {

namespace {

using cd = std::complex<double>;

double hat_antiderivative(double u) {
  u = std::clamp(u, -1.0, 1.0);
  return u <= 0.0 ? 0.5 * (u + 1.0) * (u + 1.0) : 0.5 + u - 0.5 * u * u;
}

double hat_value(double c, double h, double x) { return std::max(0.0, 1.0 - std::abs(x - c) / h); }

// Hat centred on node x_i of a periodic row, integrated over [p, q].
double periodic_hat_integral(double c, double h, double period, double p, double q) {
  double sum = 0.0;
  for (int s = -2; s <= 2; ++s) sum += hat_integral(c + s * period, h, p, q);
  return sum;
}

double periodic_hat_value(double c, double h, double period, double x) {
  double d = std::fmod(x - c, period);
  if (d < -period / 2) d += period;
  if (d > period / 2) d -= period;
  return hat_value(0.0, h, d);
}

// Direct solve of the five-point system: FFT along x, then a tridiagonal
// solve in y for each Fourier mode.
Eigen::MatrixXd direct_solve(const FdGrid& g, const Eigen::MatrixXd& rhs) {
  const int nx = g.nx, ny = g.ny;
  Eigen::FFT<double> fft;
  Eigen::MatrixXcd spec(ny + 1, nx);
  std::vector<double> row(nx);
  std::vector<cd> out;
  for (int j = 1; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) row[i] = rhs(j, i);
    fft.fwd(out, row);
    for (int i = 0; i < nx; ++i) spec(j, i) = out[i];
  }
  const double cy = 1.0 / (g.dy * g.dy);
  std::vector<cd> dprime(ny + 1);
  Eigen::MatrixXcd sol = Eigen::MatrixXcd::Zero(ny + 1, nx);
  for (int m = 0; m < nx; ++m) {
    const double s = std::sin(kPi * m / nx);
    const double diag = -2.0 * cy - 4.0 * s * s / (g.dx * g.dx);
    // Thomas algorithm on rows 1..ny-1, off-diagonals cy.
    double c_prev = 0.0;
    cd d_prev = 0.0;
    std::vector<double> cp(ny + 1);
    for (int j = 1; j < ny; ++j) {
      const double denom = diag - cy * c_prev;
      cp[j] = cy / denom;
      dprime[j] = (spec(j, m) - cy * d_prev) / denom;
      c_prev = cp[j];
      d_prev = dprime[j];
    }
    cd next = 0.0;
    for (int j = ny - 1; j >= 1; --j) {
      next = dprime[j] - cp[j] * next;
      sol(j, m) = next;
    }
  }
  Eigen::MatrixXd psi = Eigen::MatrixXd::Zero(ny + 1, nx);
  std::vector<cd> in(nx);
  std::vector<double> back;
  for (int j = 1; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) in[i] = sol(j, i);
    fft.inv(back, in);
    for (int i = 0; i < nx; ++i) psi(j, i) = back[i];
  }
  return psi;
}

}  // namespace

double hat_integral(double c, double h, double p, double q) {
  if (q <= p) return 0.0;
  return h * (hat_antiderivative((q - c) / h) - hat_antiderivative((p - c) / h));
}

double fd_domain_height(const MotorDesign& d, const FdOptions& options) {
  return d.back_iron() ? d.array_top() : d.array_top() + options.far_field_margin_wavelengths * d.lambda();
}

Eigen::MatrixXd fd_source(const MotorDesign& d, const HalbachLayout& layout, const FdGridSpec& spec,
                          double y_max) {
  const int nx = spec.nx, ny = spec.ny;
  const double lambda = d.lambda();
  const double dx = lambda / nx, dy = y_max / ny;
  const double k = d.wave_number();
  const double mag = d.magnetization();
  const double ge = d.effective_gap(), top = d.array_top();

  // x-projections of M_y, and the vertical magnetic charge at each piece edge.
  Eigen::VectorXd my_proj = Eigen::VectorXd::Zero(nx);
  Eigen::VectorXd mx_jump = Eigen::VectorXd::Zero(nx);
  const auto& pieces = layout.pieces();
  for (std::size_t p = 0; p < pieces.size(); ++p) {
    const auto& pc = pieces[p];
    const auto& prev = pieces[(p + pieces.size() - 1) % pieces.size()];
    const double xl = pc.theta_left / k, xr = pc.theta_right / k;
    const double my = mag * std::sin(pc.magnetization_angle);
    const double jump = mag * (std::cos(pc.magnetization_angle) - std::cos(prev.magnetization_angle));
    for (int i = 0; i < nx; ++i) {
      my_proj[i] += my * periodic_hat_integral(i * dx, dx, lambda, xl, xr);
      if (jump != 0.0) mx_jump[i] += jump * periodic_hat_value(i * dx, dx, lambda, xl);
    }
  }

  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(ny + 1, nx);
  for (int j = 1; j < ny; ++j) {
    const double yj = j * dy;
    // div M holds +M_y on the array's lower face, -M_y on its upper face.
    const double w_sheet = hat_value(yj, dy, ge) - hat_value(yj, dy, top);
    const double w_band = hat_integral(yj, dy, ge, top);
    if (w_sheet == 0.0 && w_band == 0.0) continue;
    f.row(j) = (w_sheet * my_proj + w_band * mx_jump).transpose() / (dx * dy);
  }
  return f;
}

Eigen::MatrixXd fd_laplacian(const FdGrid& g, const Eigen::MatrixXd& psi) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(g.ny + 1, g.nx);
  const double cx = 1.0 / (g.dx * g.dx), cy = 1.0 / (g.dy * g.dy);
  for (int i = 0; i < g.nx; ++i) {
    const int il = (i + g.nx - 1) % g.nx, ir = (i + 1) % g.nx;
    for (int j = 1; j < g.ny; ++j) {
      out(j, i) = cx * (psi(j, il) - 2.0 * psi(j, i) + psi(j, ir)) +
                  cy * (psi(j - 1, i) - 2.0 * psi(j, i) + psi(j + 1, i));
    }
  }
  return out;
}

FdGrid solve_scalar_poisson(const MotorDesign& d, const HalbachLayout& layout, const FdGridSpec& spec,
                            const FdOptions& options) {
  if (spec.nx < 4 || spec.ny < 4) throw Error(ErrorCode::InvalidValue, "FD grid needs at least 4x4 cells");
  FdGrid g;
  g.nx = spec.nx;
  g.ny = spec.ny;
  g.y_max = fd_domain_height(d, options);
  g.dx = d.lambda() / spec.nx;
  g.dy = g.y_max / spec.ny;
  g.topology = topology_of(d);
  const double cells = d.pm_height() / g.dy;
  if (cells < 16.0 - 1e-9) {
    std::ostringstream os;
    os << "FD grid resolves the magnet height with " << cells << " cells (need >= 16); raise ny";
    throw Error(ErrorCode::InvalidValue, os.str());
  }
  g.source = fd_source(d, layout, spec, g.y_max);
  g.psi = Eigen::MatrixXd::Zero(g.ny + 1, g.nx);

  const double fnorm = g.source.norm();
  if (fnorm == 0.0) {
    g.residual_log.emplace_back(0, 0.0);
    return g;
  }
  g.residual_log.emplace_back(0, 1.0);
  Eigen::MatrixXd r = g.source;
  double rel = 1.0;
  for (int it = 1; it <= options.max_iterations; ++it) {
    g.psi += direct_solve(g, r);
    r = g.source - fd_laplacian(g, g.psi);
    r.row(0).setZero();
    r.row(g.ny).setZero();
    rel = r.norm() / fnorm;
    g.residual_log.emplace_back(it, rel);
    if (rel <= options.tolerance) return g;
  }
  std::ostringstream os;
  os << "FD solve stalled at relative residual " << rel << " after " << options.max_iterations << " iterations";
  throw Error(ErrorCode::NoConvergence, os.str());
}

FdGrid solve_scalar_poisson(const MotorDesign& d, const FdGridSpec& spec, const FdOptions& options) {
  return solve_scalar_poisson(d, build_layout(d.magnets_per_pole()), spec, options);
}

double FdFields::sample(const FdGrid& g, const Eigen::MatrixXd& field, double x, double y) const {
  const double lambda = g.nx * g.dx;
  double xs = std::fmod(x, lambda);
  if (xs < 0.0) xs += lambda;
  const double u = xs / g.dx;
  const int i0 = std::min(static_cast<int>(u), g.nx - 1);
  const double fx = u - i0;
  const int i1 = (i0 + 1) % g.nx;
  const double v = std::clamp(y / g.dy, 0.0, static_cast<double>(g.ny));
  const int j0 = std::min(static_cast<int>(v), g.ny - 1);
  const double fy = v - j0;
  return (1 - fx) * (1 - fy) * field(j0, i0) + fx * (1 - fy) * field(j0, i1) + (1 - fx) * fy * field(j0 + 1, i0) +
         fx * fy * field(j0 + 1, i1);
}

FdFields fd_fields(const FdGrid& g, const MotorDesign& d) {
  FdFields f;
  const int nx = g.nx, ny = g.ny;
  f.hx.resize(ny + 1, nx);
  f.hy.resize(ny + 1, nx);
  for (int i = 0; i < nx; ++i) {
    const int il = (i + nx - 1) % nx, ir = (i + 1) % nx;
    for (int j = 0; j <= ny; ++j) {
      f.hx(j, i) = -(g.psi(j, ir) - g.psi(j, il)) / (2.0 * g.dx);
      double dpsi;
      if (j == 0) dpsi = -3.0 * g.psi(0, i) + 4.0 * g.psi(1, i) - g.psi(2, i);
      else if (j == ny) dpsi = 3.0 * g.psi(ny, i) - 4.0 * g.psi(ny - 1, i) + g.psi(ny - 2, i);
      else dpsi = g.psi(j + 1, i) - g.psi(j - 1, i);
      f.hy(j, i) = -dpsi / (2.0 * g.dy);
    }
  }
  const auto layout = build_layout(d.magnets_per_pole());
  f.bx = kMu0 * f.hx;
  f.by = kMu0 * f.hy;
  for (int j = 0; j <= ny; ++j) {
    const double y = g.y(j);
    if (y < d.effective_gap() || y >= d.array_top()) continue;
    for (int i = 0; i < nx; ++i) {
      const auto m = exact_magnetization(layout, d.magnetization(), d.wave_number(), g.x(i));
      f.bx(j, i) += kMu0 * m.x();
      f.by(j, i) += kMu0 * m.y();
    }
  }
  return f;
}

std::pair<double, double> fd_block_flux(const FdGrid& g, int i0, int i1, int j0, int j1) {
  const Eigen::MatrixXd lap = fd_laplacian(g, g.psi);
  double net = 0.0, scale = 0.0;
  for (int j = std::max(j0, 1); j <= std::min(j1, g.ny - 1); ++j) {
    for (int i = i0; i <= i1; ++i) {
      const int ii = ((i % g.nx) + g.nx) % g.nx;
      net += kMu0 * (g.source(j, ii) - lap(j, ii)) * g.dx * g.dy;
      scale += kMu0 * std::abs(g.source(j, ii)) * g.dx * g.dy;
    }
  }
  return {net, scale};
}

FdForceReport fd_force_check(const MotorDesign& d, const FdGrid& g, const OperatingPoint& op,
                             const HarmonicTruncation& trunc) {
  const FdFields f = fd_fields(g, d);
  const double lambda = d.lambda();
  const double shift = std::fmod(op.velocity(d) * op.t + op.x0, lambda);
  Eigen::VectorXd wy(g.ny + 1);
  for (int j = 0; j <= g.ny; ++j) wy[j] = hat_integral(g.y(j), g.dy, 0.0, d.coil_height());
  FdForceReport r;
  for (int m = 1; m <= d.phases(); ++m) {
    const auto [x1, x2] = coil_span(d, m);
    Eigen::VectorXd wx(g.nx);
    for (int i = 0; i < g.nx; ++i) wx[i] = periodic_hat_integral(g.x(i), g.dx, lambda, x1 - shift, x2 - shift);
    const double flux = wy.dot(f.by * wx);
    r.fd_force += 4.0 * d.depth() * phase_current_density(d, m, op.t) * flux;
  }
  const auto source = fourier_coefficients(d, trunc);
  const auto c = solve_coefficients(d, source, trunc);
  Eigen::VectorXd t(1);
  t << op.t;
  r.analytic_force = thrust(d, c, op, t).total[0];
  r.rel_gap = r.analytic_force != 0.0 ? std::abs(r.fd_force - r.analytic_force) / std::abs(r.analytic_force)
                                      : std::abs(r.fd_force);
  return r;
}

}  // namespace halbach
