#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Core>

#include "halbach/constants.hpp"
#include "halbach/motor_config.hpp"

namespace halbach {

// One segment of the array, in electrical angle theta = k x.
struct MagnetPiece {
  int index;            // i in theta_m = pi/2 - i * dtheta_m (left pole numbering)
  int pole;             // 0 = left pole [0, pi), 1 = right pole [pi, 2 pi)
  double theta_left;
  double theta_right;
  double magnetization_angle;
  bool half_width;      // edge pieces of an even array
};

class HalbachLayout {
 public:
  HalbachLayout(int magnets_per_pole, std::vector<MagnetPiece> pieces)
      : magnets_per_pole_(magnets_per_pole), pieces_(std::move(pieces)) {}

  int magnets_per_pole() const noexcept { return magnets_per_pole_; }
  const std::vector<MagnetPiece>& pieces() const noexcept { return pieces_; }
  // Pieces of the left pole only, i.e. the ones named by the index i.
  std::vector<MagnetPiece> left_pole() const;

  // Piece containing theta (wrapped into [0, 2 pi)); pieces are half-open.
  const MagnetPiece& piece_at(double theta) const;
  // Unit magnetization direction (cos, sin) at theta.
  Eigen::Vector2d direction_at(double theta) const;

 private:
  int magnets_per_pole_;
  std::vector<MagnetPiece> pieces_;
};

// Pieces over one full wavelength. The left pole carries magnetization
// angles pi/2 - i pi/N_m; the right pole repeats it rotated by pi.
HalbachLayout build_layout(int magnets_per_pole);

// Closed-form Fourier amplitudes of the bottom-surface sources for odd n:
//   K_m(theta)     = sum k_n cos(n theta)       [A/m]
//   sigma_m(theta) = sum sigma_n sin(n theta)   [T]  (mu0 included)
// Even n vanish by half-wave antisymmetry.
template <typename Scalar>
Scalar current_harmonic(int magnets_per_pole, int n, Scalar magnetization) {
  using std::cos;
  using std::sin;
  if (n % 2 == 0) return Scalar(0);
  const Scalar pi = Scalar(kPi);
  const Scalar dtheta = pi / Scalar(magnets_per_pole);
  const Scalar scale = Scalar(-4) * magnetization / (Scalar(n) * pi);
  const Scalar half_span = sin(Scalar(n) * dtheta / Scalar(2));
  Scalar sum(0);
  int i_lo, i_hi;
  if (magnets_per_pole % 2 == 1) {
    i_lo = -(magnets_per_pole - 1) / 2;
    i_hi = -i_lo;
  } else {
    // Two half-width horizontal edge pieces (theta_m = pi and 0).
    sum += Scalar(4) * magnetization / (Scalar(n) * pi) * sin(Scalar(n) * pi / Scalar(2 * magnets_per_pole));
    i_lo = -magnets_per_pole / 2 + 1;
    i_hi = -i_lo;
  }
  for (int i = i_lo; i <= i_hi; ++i) {
    const Scalar theta_m = pi / Scalar(2) - Scalar(i) * dtheta;
    const Scalar center = pi / Scalar(2) + Scalar(i) * dtheta;
    sum += scale * cos(theta_m) * cos(Scalar(n) * center) * half_span;
  }
  return sum;
}

template <typename Scalar>
Scalar charge_harmonic(int magnets_per_pole, int n, Scalar magnetization) {
  using std::cos;
  using std::sin;
  if (n % 2 == 0) return Scalar(0);
  const Scalar pi = Scalar(kPi);
  const Scalar dtheta = pi / Scalar(magnets_per_pole);
  const Scalar scale = Scalar(-4) * Scalar(kMu0) * magnetization / (Scalar(n) * pi);
  const Scalar half_span = sin(Scalar(n) * dtheta / Scalar(2));
  // Horizontal edge pieces of an even array carry no charge.
  const int i_hi = magnets_per_pole % 2 == 1 ? (magnets_per_pole - 1) / 2 : magnets_per_pole / 2 - 1;
  Scalar sum(0);
  for (int i = -i_hi; i <= i_hi; ++i) {
    const Scalar theta_m = pi / Scalar(2) - Scalar(i) * dtheta;
    const Scalar center = pi / Scalar(2) + Scalar(i) * dtheta;
    sum += scale * sin(theta_m) * sin(Scalar(n) * center) * half_span;
  }
  return sum;
}

// Per-odd-harmonic source amplitudes; entry i holds harmonic n = 2 i + 1.
struct HarmonicSource {
  double wave_number = 0.0;
  double magnetization = 0.0;
  int magnets_per_pole = 0;
  Eigen::VectorXd current;  // k_n
  Eigen::VectorXd charge;   // sigma_n

  int count() const noexcept { return static_cast<int>(current.size()); }
  int n_max() const noexcept { return 2 * count() - 1; }
  double mx(int i) const { return -current[i]; }
  double my(int i) const { return -charge[i] / kMu0; }
  // Amplitudes by harmonic order; zero for even or truncated orders.
  double current_of(int n) const;
  double charge_of(int n) const;
};

HarmonicSource fourier_coefficients(const MotorDesign& design, const HarmonicTruncation& trunc);

// Partial-sum reconstructions on an x grid.
struct SourceProfiles {
  Eigen::VectorXd x;
  Eigen::VectorXd current;  // K_m(x)
  Eigen::VectorXd charge;   // sigma_m(x)
  Eigen::VectorXd mx;
  Eigen::VectorXd my;
};

SourceProfiles source_profiles(const HarmonicSource& source, const Eigen::Ref<const Eigen::VectorXd>& x);
SourceProfiles source_profiles(const MotorDesign& design, const HarmonicTruncation& trunc,
                               const Eigen::Ref<const Eigen::VectorXd>& x);

// Truncated Fourier magnetization at x, (M_x, M_y).
Eigen::Vector2d fourier_magnetization(const HarmonicSource& source, double x);

// Exact piecewise magnetization [A/m] inside the array at position x.
Eigen::Vector2d exact_magnetization(const HalbachLayout& layout, double magnetization, double wave_number,
                                    double x);

}  // namespace halbach
