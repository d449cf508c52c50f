#include "halbach/field_laplace.hpp"

#include <cmath>
#include <string>

#include <Eigen/LU>

#include "halbach/error.hpp"

namespace halbach {

namespace {

HarmonicSource truncate(const HarmonicSource& source, const HarmonicTruncation& trunc) {
  if (source.count() < trunc.count()) {
    throw Error(ErrorCode::InvalidTruncation, "source holds harmonics up to n = " +
                                                  std::to_string(source.n_max()) + ", requested n_max = " +
                                                  std::to_string(trunc.n_max()));
  }
  HarmonicSource out = source;
  out.current.conservativeResize(trunc.count());
  out.charge.conservativeResize(trunc.count());
  return out;
}

}  // namespace

BoundarySystem<double> assemble_system(const MotorDesign& design, const HarmonicSource& source, int n) {
  if (n < 1 || n % 2 == 0) {
    throw Error(ErrorCode::IndexOutOfRange, "harmonic order must be odd and positive, got " + std::to_string(n));
  }
  const double a = n * design.wave_number();
  return boundary_system<double>(Model::Laplace, topology_of(design), a, design.effective_gap(),
                                 design.pm_height(), source.current_of(n), source.charge_of(n),
                                 BasisForm::Paper);
}

FieldCoefficients solve_harmonics(Model model, const MotorDesign& design, const HarmonicSource& source,
                                  const HarmonicTruncation& trunc, const SolveOptions& options) {
  HarmonicSource src = truncate(source, trunc);
  const Topology topo = topology_of(design);
  std::vector<ScaledCoefficients> scaled(src.count());
  for (int i = 0; i < src.count(); ++i) {
    const int n = HarmonicTruncation::order(i);
    const double a = n * src.wave_number;
    auto sys = boundary_system<double>(model, topo, a, design.effective_gap(), design.pm_height(),
                                       src.current[i], src.charge[i], BasisForm::Scaled);
    if (options.corrupt_row >= 0 && options.corrupt_row < sys.matrix.rows()) {
      sys.rhs(options.corrupt_row) = -sys.rhs(options.corrupt_row);
    }
    Eigen::PartialPivLU<BoundarySystem<double>::Matrix> lu(sys.matrix);
    const double rcond = lu.rcond();
    if (!(rcond > 1e-14)) {
      throw Error(ErrorCode::SingularSystem,
                  "boundary system singular at n = " + std::to_string(n) + " (rcond " + std::to_string(rcond) + ")");
    }
    const BoundarySystem<double>::Vector c = lu.solve(sys.rhs);
    if (!c.allFinite()) {
      throw Error(ErrorCode::SingularSystem, "non-finite coefficients at n = " + std::to_string(n));
    }
    scaled[i] = {c(0), c(1), c(2), c(3), topo == Topology::BackIron ? 0.0 : c(4)};
  }
  return FieldCoefficients(model, topo, design.effective_gap(), design.pm_height(), std::move(src),
                           std::move(scaled));
}

FieldCoefficients solve_coefficients(const MotorDesign& design, const HarmonicSource& source,
                                     const HarmonicTruncation& trunc, const SolveOptions& options) {
  return solve_harmonics(Model::Laplace, design, source, trunc, options);
}

FieldCoefficients closed_form_coefficients(const MotorDesign& design, const HarmonicSource& source,
                                           const HarmonicTruncation& trunc) {
  HarmonicSource src = truncate(source, trunc);
  const double ge = design.effective_gap();
  const double hm = design.pm_height();
  const double top = ge + hm;
  const double mu0 = kMu0;
  std::vector<PaperCoefficients> paper(src.count());
  for (int i = 0; i < src.count(); ++i) {
    const double a = HarmonicTruncation::order(i) * src.wave_number;
    const double kn = src.current[i];
    const double sg = src.charge[i];
    PaperCoefficients p{};
    if (!design.back_iron()) {
      const double mix = sg - mu0 * kn;
      p.a1 = (std::exp(-a * ge) - std::exp(-a * top)) * mix / (2 * mu0 * a);
      p.b1 = -p.a1;
      p.a2 = -std::exp(-a * top) * mix / (2 * mu0 * a);
      p.b2 = kn / (2 * a) * (2 * std::cosh(a * ge) - std::exp(-a * top)) +
             sg / (2 * mu0 * a) * (2 * std::sinh(a * ge) + std::exp(-a * top));
      p.b3 = sg / (mu0 * a) * (std::sinh(a * ge) - std::sinh(a * top)) +
             kn / a * (std::cosh(a * ge) - std::cosh(a * top));
    } else {
      const double sh = std::sinh(a * top);
      p.a1 = (sg * std::sinh(a * hm) / sh + mu0 * kn * (1 - std::cosh(a * hm)) / sh) / (2 * mu0 * a);
      p.b1 = -p.a1;
      p.a2 = -(sg * std::exp(-a * top) * std::sinh(a * ge) / sh +
               mu0 * kn * (std::exp(-a * top) * std::cosh(a * ge) - 1) / sh) /
             (2 * mu0 * a);
      p.b2 = (sg * std::exp(a * top) * std::sinh(a * ge) / sh +
              mu0 * kn * (std::exp(a * top) * std::cosh(a * ge) - 1) / sh) /
             (2 * mu0 * a);
      p.b3 = 0.0;
    }
    paper[i] = p;
  }
  return FieldCoefficients::from_paper(Model::Laplace, topology_of(design), ge, hm, std::move(src), paper);
}

void check_geometry(const MotorDesign& design, const FieldCoefficients& coeffs) {
  const double tol = 1e-12 * design.array_top();
  if (std::abs(design.effective_gap() - coeffs.effective_gap()) > tol ||
      std::abs(design.pm_height() - coeffs.pm_height()) > tol || topology_of(design) != coeffs.topology()) {
    throw Error(ErrorCode::InvalidValue, "field coefficients were solved for a different geometry");
  }
}

FieldSample evaluate_fields(const MotorDesign& design, const FieldCoefficients& coeffs, double x, double y) {
  check_geometry(design, coeffs);
  return evaluate(coeffs, x, y);
}

}  // namespace halbach
