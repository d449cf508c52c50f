#include "halbach/halbach_source.hpp"

#include <algorithm>

#include "halbach/error.hpp"

namespace halbach {

namespace {

double wrap_angle(double theta) {
  double t = std::fmod(theta, 2.0 * kPi);
  if (t < 0.0) t += 2.0 * kPi;
  if (t >= 2.0 * kPi) t = 0.0;
  return t;
}

}  // namespace

HalbachLayout build_layout(int magnets_per_pole) {
  if (magnets_per_pole < 2) {
    throw Error(ErrorCode::InvalidMagnetCount,
                "n_magnets_per_pole = " + std::to_string(magnets_per_pole) + " (need >= 2)");
  }
  const int nm = magnets_per_pole;
  const double dtheta = kPi / nm;
  std::vector<MagnetPiece> left;
  const bool even = nm % 2 == 0;
  const int i_max = even ? nm / 2 : (nm - 1) / 2;
  for (int i = -i_max; i <= i_max; ++i) {
    MagnetPiece p{};
    p.index = i;
    p.pole = 0;
    p.magnetization_angle = kPi / 2.0 - i * dtheta;
    p.theta_left = kPi / 2.0 + (i - 0.5) * dtheta;
    p.theta_right = kPi / 2.0 + (i + 0.5) * dtheta;
    p.half_width = even && (i == -i_max || i == i_max);
    // Clip the edge pieces of an even array to the pole pitch.
    p.theta_left = std::max(p.theta_left, 0.0);
    p.theta_right = std::min(p.theta_right, kPi);
    left.push_back(p);
  }
  std::vector<MagnetPiece> all = left;
  for (auto p : left) {
    p.pole = 1;
    p.theta_left += kPi;
    p.theta_right += kPi;
    p.magnetization_angle += kPi;
    all.push_back(p);
  }
  return HalbachLayout(nm, std::move(all));
}

std::vector<MagnetPiece> HalbachLayout::left_pole() const {
  std::vector<MagnetPiece> out;
  std::copy_if(pieces_.begin(), pieces_.end(), std::back_inserter(out),
               [](const MagnetPiece& p) { return p.pole == 0; });
  return out;
}

const MagnetPiece& HalbachLayout::piece_at(double theta) const {
  const double t = wrap_angle(theta);
  for (const auto& p : pieces_) {
    if (t >= p.theta_left && t < p.theta_right) return p;
  }
  return pieces_.back();
}

Eigen::Vector2d HalbachLayout::direction_at(double theta) const {
  const auto& p = piece_at(theta);
  return {std::cos(p.magnetization_angle), std::sin(p.magnetization_angle)};
}

double HarmonicSource::current_of(int n) const {
  if (n < 1 || n % 2 == 0 || n > n_max()) return 0.0;
  return current[(n - 1) / 2];
}

double HarmonicSource::charge_of(int n) const {
  if (n < 1 || n % 2 == 0 || n > n_max()) return 0.0;
  return charge[(n - 1) / 2];
}

HarmonicSource fourier_coefficients(const MotorDesign& design, const HarmonicTruncation& trunc) {
  HarmonicSource s;
  s.wave_number = design.wave_number();
  s.magnetization = design.magnetization();
  s.magnets_per_pole = design.magnets_per_pole();
  const int count = trunc.count();
  s.current.resize(count);
  s.charge.resize(count);
  for (int i = 0; i < count; ++i) {
    const int n = HarmonicTruncation::order(i);
    s.current[i] = current_harmonic<double>(s.magnets_per_pole, n, s.magnetization);
    s.charge[i] = charge_harmonic<double>(s.magnets_per_pole, n, s.magnetization);
  }
  return s;
}

SourceProfiles source_profiles(const HarmonicSource& source, const Eigen::Ref<const Eigen::VectorXd>& x) {
  SourceProfiles out;
  out.x = x;
  const auto size = x.size();
  out.current = Eigen::VectorXd::Zero(size);
  out.charge = Eigen::VectorXd::Zero(size);
  for (int i = 0; i < source.count(); ++i) {
    const double nk = HarmonicTruncation::order(i) * source.wave_number;
    out.current.array() += source.current[i] * (nk * x.array()).cos();
    out.charge.array() += source.charge[i] * (nk * x.array()).sin();
  }
  out.mx = -out.current;
  out.my = -out.charge / kMu0;
  return out;
}

SourceProfiles source_profiles(const MotorDesign& design, const HarmonicTruncation& trunc,
                               const Eigen::Ref<const Eigen::VectorXd>& x) {
  return source_profiles(fourier_coefficients(design, trunc), x);
}

Eigen::Vector2d fourier_magnetization(const HarmonicSource& source, double x) {
  Eigen::Vector2d m = Eigen::Vector2d::Zero();
  for (int i = 0; i < source.count(); ++i) {
    const double arg = HarmonicTruncation::order(i) * source.wave_number * x;
    m.x() += source.mx(i) * std::cos(arg);
    m.y() += source.my(i) * std::sin(arg);
  }
  return m;
}

Eigen::Vector2d exact_magnetization(const HalbachLayout& layout, double magnetization, double wave_number,
                                    double x) {
  return magnetization * layout.direction_at(wave_number * x);
}

}  // namespace halbach
