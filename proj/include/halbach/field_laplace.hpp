#pragma once

#include "halbach/boundary_system.hpp"
#include "halbach/field_types.hpp"
#include "halbach/halbach_source.hpp"
#include "halbach/motor_config.hpp"

namespace halbach {

struct SolveOptions {
  // Fault injection for the verification suite: flips the sign of the source
  // term of this boundary row (0-based; row 0 has none). Negative disables.
  int corrupt_row = -1;
};

// Boundary system of harmonic n for the hybrid Laplace model, in the raw
// e^{+-nky} basis.
BoundarySystem<double> assemble_system(const MotorDesign& design, const HarmonicSource& source, int n);

// Dense per-harmonic solve for any of the three models. Solves in the scaled
// basis; throws SingularSystem naming the offending harmonic.
FieldCoefficients solve_harmonics(Model model, const MotorDesign& design, const HarmonicSource& source,
                                  const HarmonicTruncation& trunc, const SolveOptions& options = {});

FieldCoefficients solve_coefficients(const MotorDesign& design, const HarmonicSource& source,
                                     const HarmonicTruncation& trunc, const SolveOptions& options = {});

// Printed closed-form expressions, for cross-checking the dense solve.
FieldCoefficients closed_form_coefficients(const MotorDesign& design, const HarmonicSource& source,
                                           const HarmonicTruncation& trunc);

FieldSample evaluate_fields(const MotorDesign& design, const FieldCoefficients& coeffs, double x, double y);

// Throws InvalidValue if the coefficients were solved for another geometry.
void check_geometry(const MotorDesign& design, const FieldCoefficients& coeffs);

}  // namespace halbach
