#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace halbach {

// Raw machine description in SI units. One motor unit spans one pole-pair
// pitch `lambda`; the stator iron surface of one side sits at y = 0.
struct MotorParameters {
  double lambda = 0.04;        // pole-pair pitch [m]
  double gap = 0.5e-3;         // mechanical airgap [m]
  double coil_height = 4e-3;   // [m]
  double pm_height = 7e-3;     // [m]
  double depth = 0.04;         // in-depth length of the unit cell [m]
  int magnets_per_pole = 2;
  int phases = 3;
  bool back_iron = false;
  double remanence = 1.1;      // [T]
  double j_max = 1e7;          // [A/m^2]
  double frequency = 50.0;     // [Hz]
  double phi0 = 0.0;           // initial current phase [rad]
  int turns = 1;               // turns per coil area
  double rho_pm = 7000.0;      // [kg/m^3]
  double rho_cu = 9000.0;      // [kg/m^3]
  double sigma_cu = 5.8e7;     // [S/m]
  double gap_offset = 0.0;     // airgap misalignment [m]
};

// Validated, immutable machine description with derived quantities.
class MotorDesign {
 public:
  explicit MotorDesign(const MotorParameters& p);

  const MotorParameters& params() const noexcept { return p_; }

  double lambda() const noexcept { return p_.lambda; }
  double gap() const noexcept { return p_.gap; }
  double coil_height() const noexcept { return p_.coil_height; }
  double pm_height() const noexcept { return p_.pm_height; }
  double depth() const noexcept { return p_.depth; }
  int magnets_per_pole() const noexcept { return p_.magnets_per_pole; }
  int phases() const noexcept { return p_.phases; }
  bool back_iron() const noexcept { return p_.back_iron; }
  double remanence() const noexcept { return p_.remanence; }
  double j_max() const noexcept { return p_.j_max; }
  double frequency() const noexcept { return p_.frequency; }
  double phi0() const noexcept { return p_.phi0; }
  int turns() const noexcept { return p_.turns; }
  double gap_offset() const noexcept { return p_.gap_offset; }

  double wave_number() const noexcept { return k_; }
  double pole_pitch() const noexcept { return p_.lambda / 2.0; }
  double omega() const noexcept { return omega_; }
  double magnetization() const noexcept { return magnetization_; }
  // Height of region I (coil plus airgap): stator iron to magnet bottom.
  double effective_gap() const noexcept { return p_.coil_height + p_.gap; }
  // Magnet top surface.
  double array_top() const noexcept { return effective_gap() + p_.pm_height; }
  double synchronous_velocity() const noexcept { return p_.frequency * p_.lambda; }
  double piece_width() const noexcept { return pole_pitch() / p_.magnets_per_pole; }
  double piece_span() const noexcept;
  double rotation_step() const noexcept { return piece_span(); }

  // Same design with one side's airgap replaced (misalignment solves).
  MotorDesign with_gap(double gap) const;
  MotorDesign with(const MotorParameters& p) const { return MotorDesign(p); }

 private:
  MotorParameters p_;
  double k_;
  double omega_;
  double magnetization_;
};

struct OperatingPoint {
  double t = 0.0;
  double x0 = 0.0;
  std::optional<double> u_override;

  double velocity(const MotorDesign& d) const {
    return u_override.value_or(d.synchronous_velocity());
  }
};

// Highest odd harmonic retained in every Fourier partial sum.
class HarmonicTruncation {
 public:
  explicit HarmonicTruncation(int n_max = 199);

  int n_max() const noexcept { return n_max_; }
  int count() const noexcept { return (n_max_ + 1) / 2; }
  // Harmonic order of the i-th retained term (1, 3, 5, ...).
  static constexpr int order(int i) noexcept { return 2 * i + 1; }

 private:
  int n_max_;
};

struct MotorConfig {
  MotorDesign design;
  HarmonicTruncation truncation;
};

// Flat `key = value` text; '#' starts a comment. Unknown keys are rejected.
MotorConfig parse_config(std::string_view text);
MotorConfig load_config_file(const std::string& path);
MotorDesign load_design(std::string_view text);

// Key/value snapshot in config syntax (used for run manifests).
std::map<std::string, std::string> to_key_values(const MotorConfig& cfg);
std::string to_config_text(const MotorConfig& cfg);

// The documented config keys, in canonical order.
const std::vector<std::string>& config_keys();

// Signed phase-slot current density J_m(t), m = 1..phases, in the slot order
// of the first pole pitch (a, c', b for three phases; a, d', b, e', c for five).
double phase_current_density(const MotorDesign& d, int m, double t);

// Sign and electrical phase offset of slot m, so that
// J_m(t) = sign * j_max * cos(omega t + offset + phi0).
struct SlotCurrent {
  int sign;
  double offset;
};
SlotCurrent slot_current(int phases, int m);

}  // namespace halbach
