#pragma once

#include <cmath>
#include <optional>
#include <string_view>
#include <vector>

#include "halbach/halbach_source.hpp"
#include "halbach/motor_config.hpp"

namespace halbach {

enum class Model { Laplace, PoissonScalar, PoissonVector };
enum class Topology { NoBackIron, BackIron };
enum class Region { I, II, III };

std::string_view to_string(Model m);
std::string_view to_string(Topology t);
std::string_view to_string(Region r);
Model parse_model(std::string_view name);

inline Topology topology_of(const MotorDesign& d) {
  return d.back_iron() ? Topology::BackIron : Topology::NoBackIron;
}

// Coefficients exactly as they multiply e^{+nky} / e^{-nky}.
struct PaperCoefficients {
  double a1, b1, a2, b2, b3;
};

// Per-harmonic amplitudes stored against region-local exponentials so that
// every basis function is bounded by one inside its region:
//   region I   : a1 e^{nk(y - g_e)} + b1 e^{-nky}
//   region II  : a2 e^{nk(y - y_top)} + b2 e^{-nk(y - g_e)}
//   region III : b3 e^{-nk(y - y_top)}
// with y_top = g_e + h_m. b3 is zero for the back-iron topology.
struct ScaledCoefficients {
  double a1 = 0, b1 = 0, a2 = 0, b2 = 0, b3 = 0;
};

class FieldCoefficients {
 public:
  FieldCoefficients(Model model, Topology topology, double effective_gap, double pm_height,
                    HarmonicSource source, std::vector<ScaledCoefficients> scaled);

  static FieldCoefficients from_paper(Model model, Topology topology, double effective_gap, double pm_height,
                                      HarmonicSource source, const std::vector<PaperCoefficients>& paper);

  Model model() const noexcept { return model_; }
  Topology topology() const noexcept { return topology_; }
  double wave_number() const noexcept { return source_.wave_number; }
  double effective_gap() const noexcept { return effective_gap_; }
  double pm_height() const noexcept { return pm_height_; }
  double array_top() const noexcept { return effective_gap_ + pm_height_; }
  const HarmonicSource& source() const noexcept { return source_; }

  int count() const noexcept { return static_cast<int>(scaled_.size()); }
  static constexpr int order(int i) noexcept { return 2 * i + 1; }
  const ScaledCoefficients& scaled(int i) const { return scaled_[i]; }
  const std::vector<ScaledCoefficients>& scaled() const noexcept { return scaled_; }

  // Unscaled form; may overflow to inf for very large n k (g_e + h_m).
  PaperCoefficients paper(int i) const;
  double a1(int i) const;
  // A_1n * sinh(n k h), evaluated without forming either factor alone.
  double a1_sinh(int i, double h) const;

 private:
  Model model_;
  Topology topology_;
  double effective_gap_;
  double pm_height_;
  HarmonicSource source_;
  std::vector<ScaledCoefficients> scaled_;
};

struct FieldSample {
  double x = 0.0;
  double y = 0.0;
  Region region = Region::I;
  double bx = 0.0;
  double by = 0.0;
  double hx = 0.0;
  double hy = 0.0;
  std::optional<double> psi;  // scalar potential [A], Models 1-2
  std::optional<double> az;   // vector potential [T m], Model 3
};

// Region containing y; throws OutOfDomain below the stator or above the
// back-iron.
Region region_of(const FieldCoefficients& c, double y);

// Partial-sum fields using the coefficients' own model. Evaluates the
// region's expansion at y even when y lies outside that region, which is how
// one-sided interface limits are taken.
FieldSample evaluate_in_region(const FieldCoefficients& c, double x, double y, Region region);
FieldSample evaluate(const FieldCoefficients& c, double x, double y);

}  // namespace halbach
