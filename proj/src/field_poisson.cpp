#include "halbach/field_poisson.hpp"

#include <string>

#include "halbach/error.hpp"

namespace halbach {

namespace {

void require_model(const FieldCoefficients& c, Model expected) {
  if (c.model() != expected) {
    throw Error(ErrorCode::InvalidValue, "expected " + std::string(to_string(expected)) + " coefficients, got " +
                                             std::string(to_string(c.model())));
  }
}

}  // namespace

FieldCoefficients solve_model2(const MotorDesign& design, const HarmonicSource& source,
                               const HarmonicTruncation& trunc, const SolveOptions& options) {
  return solve_harmonics(Model::PoissonScalar, design, source, trunc, options);
}

FieldCoefficients solve_model3(const MotorDesign& design, const HarmonicSource& source,
                               const HarmonicTruncation& trunc, const SolveOptions& options) {
  return solve_harmonics(Model::PoissonVector, design, source, trunc, options);
}

FieldSample evaluate_fields_model2(const MotorDesign& design, const FieldCoefficients& coeffs, double x, double y) {
  require_model(coeffs, Model::PoissonScalar);
  return evaluate_fields(design, coeffs, x, y);
}

FieldSample evaluate_fields_model3(const MotorDesign& design, const FieldCoefficients& coeffs, double x, double y) {
  require_model(coeffs, Model::PoissonVector);
  return evaluate_fields(design, coeffs, x, y);
}

FieldCoefficients solve_model(Model model, const MotorDesign& design, const HarmonicSource& source,
                              const HarmonicTruncation& trunc, const SolveOptions& options) {
  return solve_harmonics(model, design, source, trunc, options);
}

}  // namespace halbach
