#pragma once

#include <array>
#include <cmath>

#include <Eigen/Core>

#include "halbach/constants.hpp"
#include "halbach/field_types.hpp"

namespace halbach {

// Unknowns are ordered (A1, B1, A2, B2, B3); the back-iron system drops B3.
// Paper form uses the raw e^{+-nky} basis. Scaled form shifts every basis
// function to a reference height inside its own region (see
// ScaledCoefficients), which keeps all matrix entries in (0, 1].
enum class BasisForm { Paper, Scaled };

template <typename Scalar>
struct BoundarySystem {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, 0, 5, 5>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, 0, 5, 1>;
  Matrix matrix;
  Vector rhs;
};

namespace detail {

enum class Trace { Value, Slope };

template <typename Scalar>
class RowBuilder {
 public:
  RowBuilder(int size, Scalar a, Scalar ge, Scalar top, BasisForm form) : a_(a) {
    sys.matrix = BoundarySystem<Scalar>::Matrix::Zero(size, size);
    sys.rhs = BoundarySystem<Scalar>::Vector::Zero(size);
    if (form == BasisForm::Scaled) ref_ = {ge, Scalar(0), top, ge, top};
    else ref_ = {Scalar(0), Scalar(0), Scalar(0), Scalar(0), Scalar(0)};
  }

  // Adds sign * (value or slope/a) of the region's expansion at height y.
  void add(int row, Trace trace, Region region, Scalar y, int sign) {
    int first = 0, last = 1;
    if (region == Region::II) first = 2, last = 3;
    if (region == Region::III) first = 4, last = 4;
    for (int col = first; col <= last; ++col) {
      const int grow = col == 0 || col == 2 ? 1 : -1;
      using std::exp;
      Scalar v = exp(Scalar(grow) * a_ * (y - ref_[col]));
      if (trace == Trace::Slope) v *= Scalar(grow);
      sys.matrix(row, col) += Scalar(sign) * v;
    }
  }

  BoundarySystem<Scalar> sys;

 private:
  Scalar a_;
  std::array<Scalar, 5> ref_;
};

}  // namespace detail

// Interface conditions of one harmonic with wave number a = n k for the
// given source amplitudes (k_n in A/m, sigma_n in T).
template <typename Scalar>
BoundarySystem<Scalar> boundary_system(Model model, Topology topology, Scalar a, Scalar ge, Scalar hm,
                                       Scalar kn, Scalar sigman, BasisForm form) {
  using detail::Trace;
  const bool iron = topology == Topology::BackIron;
  const Scalar top = ge + hm;
  const Scalar mu0 = Scalar(kMu0);
  detail::RowBuilder<Scalar> b(iron ? 4 : 5, a, ge, top, form);
  auto& rhs = b.sys.rhs;

  if (model != Model::PoissonVector) {
    // psi = 0 on the stator iron; H_y jumps by the charge, H_x by the current.
    // The scalar Poisson model lands on the same rows once its particular
    // solution is moved to the right-hand side.
    b.add(0, Trace::Value, Region::I, Scalar(0), 1);
    b.add(1, Trace::Slope, Region::I, ge, 1);
    b.add(1, Trace::Slope, Region::II, ge, -1);
    rhs(1) = sigman / (mu0 * a);
    b.add(2, Trace::Value, Region::I, ge, -1);
    b.add(2, Trace::Value, Region::II, ge, 1);
    rhs(2) = kn / a;
    if (iron) {
      b.add(3, Trace::Value, Region::II, top, -1);
      rhs(3) = -kn / a;
    } else {
      b.add(3, Trace::Slope, Region::II, top, 1);
      b.add(3, Trace::Slope, Region::III, top, -1);
      rhs(3) = -sigman / (mu0 * a);
      b.add(4, Trace::Value, Region::II, top, -1);
      b.add(4, Trace::Value, Region::III, top, 1);
      rhs(4) = -kn / a;
    }
  } else {
    b.add(0, Trace::Slope, Region::I, Scalar(0), -1);
    b.add(1, Trace::Value, Region::I, ge, -1);
    b.add(1, Trace::Value, Region::II, ge, 1);
    rhs(1) = sigman / a;
    b.add(2, Trace::Slope, Region::I, ge, 1);
    b.add(2, Trace::Slope, Region::II, ge, -1);
    rhs(2) = mu0 * kn / a;
    if (iron) {
      b.add(3, Trace::Slope, Region::II, top, 1);
      rhs(3) = -mu0 * kn / a;
    } else {
      b.add(3, Trace::Value, Region::II, top, -1);
      b.add(3, Trace::Value, Region::III, top, 1);
      rhs(3) = -sigman / a;
      b.add(4, Trace::Slope, Region::II, top, 1);
      b.add(4, Trace::Slope, Region::III, top, -1);
      rhs(4) = -mu0 * kn / a;
    }
  }
  return b.sys;
}

}  // namespace halbach
