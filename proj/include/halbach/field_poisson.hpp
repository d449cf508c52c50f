#pragma once

#include "halbach/field_laplace.hpp"

namespace halbach {

// Scalar potential with a particular solution inside the array:
// region-II psi carries an extra M_xn/(nk) sin(nkx) per harmonic.
FieldCoefficients solve_model2(const MotorDesign& design, const HarmonicSource& source,
                               const HarmonicTruncation& trunc, const SolveOptions& options = {});

// Vector potential A_z; region II carries mu0 M_yn/(nk) cos(nkx).
FieldCoefficients solve_model3(const MotorDesign& design, const HarmonicSource& source,
                               const HarmonicTruncation& trunc, const SolveOptions& options = {});

FieldSample evaluate_fields_model2(const MotorDesign& design, const FieldCoefficients& coeffs, double x, double y);
FieldSample evaluate_fields_model3(const MotorDesign& design, const FieldCoefficients& coeffs, double x, double y);

FieldCoefficients solve_model(Model model, const MotorDesign& design, const HarmonicSource& source,
                              const HarmonicTruncation& trunc, const SolveOptions& options = {});

}  // namespace halbach
