#include "halbach/field_types.hpp"

#include <sstream>

#include "halbach/error.hpp"

namespace halbach {

std::string_view to_string(Model m) {
  switch (m) {
    case Model::Laplace: return "laplace";
    case Model::PoissonScalar: return "poisson-scalar";
    case Model::PoissonVector: return "poisson-vector";
  }
  return "?";
}

std::string_view to_string(Topology t) {
  return t == Topology::BackIron ? "back-iron" : "no-back-iron";
}

std::string_view to_string(Region r) {
  switch (r) {
    case Region::I: return "I";
    case Region::II: return "II";
    case Region::III: return "III";
  }
  return "?";
}

Model parse_model(std::string_view name) {
  for (Model m : {Model::Laplace, Model::PoissonScalar, Model::PoissonVector}) {
    if (name == to_string(m)) return m;
  }
  throw Error(ErrorCode::InvalidValue,
              "unknown model '" + std::string(name) + "' (laplace|poisson-scalar|poisson-vector)");
}

FieldCoefficients::FieldCoefficients(Model model, Topology topology, double effective_gap, double pm_height,
                                     HarmonicSource source, std::vector<ScaledCoefficients> scaled)
    : model_(model),
      topology_(topology),
      effective_gap_(effective_gap),
      pm_height_(pm_height),
      source_(std::move(source)),
      scaled_(std::move(scaled)) {}

FieldCoefficients FieldCoefficients::from_paper(Model model, Topology topology, double effective_gap,
                                                double pm_height, HarmonicSource source,
                                                const std::vector<PaperCoefficients>& paper) {
  std::vector<ScaledCoefficients> scaled(paper.size());
  const double top = effective_gap + pm_height;
  for (std::size_t i = 0; i < paper.size(); ++i) {
    const double a = order(static_cast<int>(i)) * source.wave_number;
    const auto& p = paper[i];
    scaled[i] = {p.a1 * std::exp(a * effective_gap), p.b1, p.a2 * std::exp(a * top),
                 p.b2 * std::exp(-a * effective_gap), p.b3 * std::exp(-a * top)};
  }
  return FieldCoefficients(model, topology, effective_gap, pm_height, std::move(source), std::move(scaled));
}

PaperCoefficients FieldCoefficients::paper(int i) const {
  const double a = order(i) * wave_number();
  const auto& s = scaled_[i];
  return {s.a1 * std::exp(-a * effective_gap_), s.b1, s.a2 * std::exp(-a * array_top()),
          s.b2 * std::exp(a * effective_gap_), s.b3 * std::exp(a * array_top())};
}

double FieldCoefficients::a1(int i) const {
  return scaled_[i].a1 * std::exp(-order(i) * wave_number() * effective_gap_);
}

double FieldCoefficients::a1_sinh(int i, double h) const {
  const double a = order(i) * wave_number();
  return 0.5 * scaled_[i].a1 * (std::exp(-a * (effective_gap_ - h)) - std::exp(-a * (effective_gap_ + h)));
}

Region region_of(const FieldCoefficients& c, double y) {
  if (!(y >= 0.0)) {
    std::ostringstream os;
    os << "y = " << y << " m lies below the stator surface";
    throw Error(ErrorCode::OutOfDomain, os.str());
  }
  if (y <= c.effective_gap()) return Region::I;
  if (y <= c.array_top()) return Region::II;
  if (c.topology() == Topology::BackIron) {
    std::ostringstream os;
    os << "y = " << y << " m lies inside the back-iron (top at " << c.array_top() << " m)";
    throw Error(ErrorCode::OutOfDomain, os.str());
  }
  return Region::III;
}

FieldSample evaluate_in_region(const FieldCoefficients& c, double x, double y, Region region) {
  if (region == Region::III && c.topology() == Topology::BackIron) {
    throw Error(ErrorCode::OutOfDomain, "region III does not exist with back-iron");
  }
  const auto& src = c.source();
  const double k = c.wave_number();
  const double ge = c.effective_gap();
  const double top = c.array_top();
  const bool magnet = region == Region::II;

  // Per region: growing basis e^{a(y - ra)}, decaying basis e^{-a(y - rb)}.
  double ra = ge, rb = 0.0;
  if (region == Region::II) ra = top, rb = ge;
  if (region == Region::III) rb = top;

  double psi = 0, az = 0, bx = 0, by = 0, hx = 0, hy = 0;
  for (int i = 0; i < c.count(); ++i) {
    const double a = FieldCoefficients::order(i) * k;
    const auto& s = c.scaled(i);
    double amp_a = s.a1, amp_b = s.b1;
    if (region == Region::II) amp_a = s.a2, amp_b = s.b2;
    if (region == Region::III) amp_a = 0.0, amp_b = s.b3;
    const double fp = amp_a == 0.0 ? 0.0 : amp_a * std::exp(a * (y - ra));
    const double fm = amp_b == 0.0 ? 0.0 : amp_b * std::exp(-a * (y - rb));
    const double val = fp + fm;
    const double der = fp - fm;
    const double cs = std::cos(a * x);
    const double sn = std::sin(a * x);
    const double mx = magnet ? src.mx(i) : 0.0;
    const double my = magnet ? src.my(i) : 0.0;

    switch (c.model()) {
      case Model::Laplace: {
        psi += val * sn;
        const double bxn = -kMu0 * a * val * cs;
        const double hyn = -a * der * sn;
        bx += bxn;
        hy += hyn;
        hx += bxn / kMu0 - mx * cs;
        by += kMu0 * (hyn + my * sn);
        break;
      }
      case Model::PoissonScalar: {
        psi += (val + mx / a) * sn;
        const double hxn = -a * val * cs - mx * cs;
        const double hyn = -a * der * sn;
        hx += hxn;
        hy += hyn;
        bx += kMu0 * (hxn + mx * cs);
        by += kMu0 * (hyn + my * sn);
        break;
      }
      case Model::PoissonVector: {
        const double pot = val + kMu0 * my / a;
        az += pot * cs;
        const double bxn = a * der * cs;
        const double byn = a * pot * sn;
        bx += bxn;
        by += byn;
        hx += bxn / kMu0 - mx * cs;
        hy += byn / kMu0 - my * sn;
        break;
      }
    }
  }

  FieldSample out;
  out.x = x;
  out.y = y;
  out.region = region;
  out.bx = bx;
  out.by = by;
  out.hx = hx;
  out.hy = hy;
  if (c.model() == Model::PoissonVector) out.az = az;
  else out.psi = psi;
  return out;
}

FieldSample evaluate(const FieldCoefficients& c, double x, double y) {
  return evaluate_in_region(c, x, y, region_of(c, y));
}

}  // namespace halbach
