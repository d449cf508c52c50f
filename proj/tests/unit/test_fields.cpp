#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "halbach/field_laplace.hpp"
#include "halbach/field_poisson.hpp"
#include "oracles.hpp"

using namespace halbach;

namespace {

struct Solved {
  MotorDesign d;
  HarmonicTruncation t;
  HarmonicSource src;
  FieldCoefficients m1, m2, m3;
};

Solved solve_all(int nm, bool back_iron, int nmax = 199) {
  const auto d = fixture::design(nm, back_iron);
  const HarmonicTruncation t(nmax);
  const auto src = fourier_coefficients(d, t);
  return {d, t, src, solve_coefficients(d, src, t), solve_model2(d, src, t), solve_model3(d, src, t)};
}

double profile(const HarmonicSource& src, double x, bool charge) {
  Eigen::VectorXd xv(1);
  xv << x;
  const auto p = source_profiles(src, xv);
  return charge ? p.charge[0] : p.current[0];
}

}  // namespace

TEST_CASE("assembled systems have the documented rows") {
  const auto d = fixture::design(2, false);
  const auto src = fourier_coefficients(d, HarmonicTruncation(19));
  for (int n : {1, 3, 7}) {
    const auto sys = assemble_system(d, src, n);
    REQUIRE(sys.matrix.rows() == 5);
    CHECK(sys.matrix.row(0).isApprox(Eigen::RowVectorXd::Map(std::array<double, 5>{1, 1, 0, 0, 0}.data(), 5)));
    CHECK(sys.rhs[0] == 0.0);
  }
  const auto db = fixture::design(2, true);
  const auto srcb = fourier_coefficients(db, HarmonicTruncation(19));
  const double k = db.wave_number();
  for (int n : {1, 5}) {
    const auto sys = assemble_system(db, srcb, n);
    REQUIRE(sys.matrix.rows() == 4);
    const int i = (n - 1) / 2;
    CHECK(sys.rhs[0] == 0.0);
    CHECK(sys.rhs[1] == doctest::Approx(srcb.charge[i] / (n * k * oracle::mu0)));
    CHECK(sys.rhs[2] == doctest::Approx(srcb.current[i] / (n * k)));
    CHECK(sys.rhs[3] == doctest::Approx(-srcb.current[i] / (n * k)));
  }
  CHECK(fixture::error_of([&] { assemble_system(d, src, 2); }) == ErrorCode::IndexOutOfRange);
}

TEST_CASE("dense solve satisfies the assembled system") {
  for (bool bi : {false, true}) {
    for (int nm = 2; nm <= 5; ++nm) {
      const auto s = solve_all(nm, bi, 19);
      for (int i = 0; i < s.m1.count(); ++i) {
        const int n = 2 * i + 1;
        const auto sys = assemble_system(s.d, s.src, n);
        const auto p = s.m1.paper(i);
        Eigen::VectorXd c(sys.matrix.cols());
        if (bi) c << p.a1, p.b1, p.a2, p.b2;
        else c << p.a1, p.b1, p.a2, p.b2, p.b3;
        if (sys.rhs.norm() == 0.0) continue;
        CHECK((sys.matrix * c - sys.rhs).norm() <= 1e-12 * sys.rhs.norm());
      }
    }
  }
}

TEST_CASE("zero sources give zero coefficients and fields") {
  auto p = fixture::table1(3);
  p.remanence = 0.0;
  const MotorDesign d(p);
  const HarmonicTruncation t(49);
  const auto src = fourier_coefficients(d, t);
  for (Model m : {Model::Laplace, Model::PoissonScalar, Model::PoissonVector}) {
    const auto c = solve_model(m, d, src, t);
    for (int i = 0; i < c.count(); ++i) {
      const auto& s = c.scaled(i);
      CHECK(s.a1 == 0.0);
      CHECK(s.b1 == 0.0);
      CHECK(s.a2 == 0.0);
      CHECK(s.b2 == 0.0);
      CHECK(s.b3 == 0.0);
    }
    const auto f = evaluate_fields(d, c, 0.003, 0.006);
    CHECK(f.bx == 0.0);
    CHECK(f.by == 0.0);
  }
}

TEST_CASE("a vanishing magnet leaves no field in the airgap") {
  double prev = 1e300;
  for (double hm : {1e-3, 1e-4, 1e-5, 1e-6}) {
    auto p = fixture::table1(2);
    p.pm_height = hm;
    const MotorDesign d(p);
    const HarmonicTruncation t(199);
    const auto c = solve_coefficients(d, fourier_coefficients(d, t), t);
    double peak = 0.0;
    for (int i = 0; i < 64; ++i) peak = std::max(peak, std::abs(evaluate_fields(d, c, d.lambda() * i / 64, d.effective_gap() / 2).by));
    CHECK(peak < prev);
    prev = peak;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("closed forms agree with the dense solve") {
  for (bool bi : {false, true}) {
    for (int nm = 2; nm <= 5; ++nm) {
      const auto d = fixture::design(nm, bi);
      const HarmonicTruncation t(99);
      const auto src = fourier_coefficients(d, t);
      const auto dense = solve_coefficients(d, src, t);
      const auto closed = closed_form_coefficients(d, src, t);
      for (int i = 0; i < dense.count(); ++i) {
        const auto& a = dense.scaled(i);
        const auto& b = closed.scaled(i);
        // Normalised per harmonic: A_1n cancels to roundoff for some n.
        const double scale = std::max({std::abs(a.a1), std::abs(a.b1), std::abs(a.a2), std::abs(a.b2), std::abs(a.b3)});
        if (scale == 0.0) continue;
        CAPTURE(bi);
        CAPTURE(nm);
        CAPTURE(i);
        CHECK(std::abs(a.a1 - b.a1) <= 1e-10 * scale);
        CHECK(std::abs(a.b1 - b.b1) <= 1e-10 * scale);
        CHECK(std::abs(a.a2 - b.a2) <= 1e-10 * scale);
        CHECK(std::abs(a.b2 - b.b2) <= 1e-10 * scale);
        CHECK(std::abs(a.b3 - b.b3) <= 1e-10 * scale);
      }
    }
  }
}

double harmonic_scale(const FieldCoefficients& c, int i) {
  const auto& s = c.scaled(i);
  return std::max({std::abs(s.a1), std::abs(s.b1), std::abs(s.a2), std::abs(s.b2), std::abs(s.b3)});
}

TEST_CASE("stator conditions on the region-I coefficients") {
  for (bool bi : {false, true}) {
    const auto s = solve_all(3, bi, 21);
    for (int i = 0; i < s.m1.count(); ++i) {
      const auto p1 = s.m1.paper(i), p2 = s.m2.paper(i), p3 = s.m3.paper(i);
      CHECK(std::abs(p1.b1 + p1.a1) <= 1e-12 * harmonic_scale(s.m1, i));
      CHECK(std::abs(p2.b1 + p2.a1) <= 1e-12 * harmonic_scale(s.m2, i));
      CHECK(std::abs(p3.b1 - p3.a1) <= 1e-12 * harmonic_scale(s.m3, i));
    }
  }
}

// The maps are linear and every model shares the same exponential scaling,
// so they are checked on the scaled amplitudes.
TEST_CASE("coefficient maps between the three models") {
  for (bool bi : {false, true}) {
    for (int nm = 2; nm <= 5; ++nm) {
      const auto s = solve_all(nm, bi);
      for (int i = 0; i < s.m1.count(); ++i) {
        const auto &a = s.m1.scaled(i), &b = s.m2.scaled(i), &c = s.m3.scaled(i);
        const double sc = harmonic_scale(s.m1, i);
        CAPTURE(i);
        CHECK(std::abs(b.a1 - a.a1) <= 1e-12 * sc);
        CHECK(std::abs(b.b3 - a.b3) <= 1e-12 * sc);
        CHECK(std::abs(b.a2 - a.a2) <= 1e-12 * sc);
        CHECK(std::abs(b.b2 - a.b2) <= 1e-12 * sc);
        CHECK(std::abs(c.a1 + oracle::mu0 * a.a1) <= 1e-12 * oracle::mu0 * sc);
        CHECK(std::abs(c.b1 - oracle::mu0 * a.b1) <= 1e-12 * oracle::mu0 * sc);
        CHECK(std::abs(c.a2 + oracle::mu0 * a.a2) <= 1e-12 * oracle::mu0 * sc);
        CHECK(std::abs(c.b2 - oracle::mu0 * a.b2) <= 1e-12 * oracle::mu0 * sc);
        CHECK(std::abs(c.b3 - oracle::mu0 * a.b3) <= 1e-12 * oracle::mu0 * sc);
      }
    }
  }
}

TEST_CASE("the three models give the same fields") {
  for (bool bi : {false, true}) {
    for (int nm = 2; nm <= 5; ++nm) {
      const auto s = solve_all(nm, bi);
      std::mt19937 rng(7 + nm);
      const double top = bi ? s.d.array_top() : s.d.array_top() + s.d.lambda() / 2;
      std::uniform_real_distribution<double> ux(0, s.d.lambda()), uy(0, top);
      std::array<double, 4> worst{}, peak{};
      for (int k = 0; k < 200; ++k) {
        const double x = ux(rng), y = uy(rng);
        const auto f1 = evaluate_fields(s.d, s.m1, x, y);
        const auto f2 = evaluate_fields_model2(s.d, s.m2, x, y);
        const auto f3 = evaluate_fields_model3(s.d, s.m3, x, y);
        const std::array<double, 4> v1{f1.bx, f1.by, f1.hx, f1.hy};
        const std::array<double, 4> v2{f2.bx, f2.by, f2.hx, f2.hy};
        const std::array<double, 4> v3{f3.bx, f3.by, f3.hx, f3.hy};
        for (int c = 0; c < 4; ++c) {
          peak[c] = std::max(peak[c], std::abs(v1[c]));
          worst[c] = std::max({worst[c], std::abs(v1[c] - v2[c]), std::abs(v1[c] - v3[c])});
        }
      }
      for (int c = 0; c < 4; ++c) CHECK(worst[c] <= 1e-10 * peak[c]);
    }
  }
}

TEST_CASE("model tags are enforced") {
  const auto s = solve_all(2, false, 9);
  CHECK(fixture::error_of([&] { evaluate_fields_model2(s.d, s.m1, 0, 0.001); }) == ErrorCode::InvalidValue);
  CHECK(fixture::error_of([&] { evaluate_fields_model3(s.d, s.m2, 0, 0.001); }) == ErrorCode::InvalidValue);
  auto p = fixture::table1(2);
  p.gap = 0.8e-3;
  const MotorDesign other(p);
  CHECK(fixture::error_of([&] { evaluate_fields(other, s.m1, 0, 0.001); }) == ErrorCode::InvalidValue);
}

TEST_CASE("stator surface, back-iron face and far field") {
  for (int nm = 2; nm <= 5; ++nm) {
    const auto s = solve_all(nm, false);
    for (double x : {0.0, 0.0031, 0.017}) CHECK(std::abs(evaluate_fields(s.d, s.m1, x, 0.0).bx) < 1e-14);
    const double y_far = s.d.array_top() + 5 * s.d.lambda();
    double near = 0.0, far = 0.0;
    for (int i = 0; i < 32; ++i) {
      const double x = s.d.lambda() * i / 32;
      const auto a = evaluate_fields(s.d, s.m1, x, s.d.effective_gap());
      const auto b = evaluate_fields(s.d, s.m1, x, y_far);
      near = std::max(near, std::hypot(a.bx, a.by));
      far = std::max(far, std::hypot(b.bx, b.by));
    }
    CHECK(far < 1e-6 * near);

    const auto b = solve_all(nm, true);
    const double top = b.d.array_top();
    for (double x : {0.001, 0.0047, 0.013, 0.029}) {
      const auto f = evaluate_fields(b.d, b.m1, x, top);
      const double kx = profile(b.src, x, false);
      CHECK(std::abs(f.hx) <= 1e-9 * b.d.magnetization());
      CHECK(f.bx == doctest::Approx(-oracle::mu0 * kx).epsilon(1e-9).scale(oracle::mu0 * b.d.magnetization()));
    }
    CHECK(fixture::error_of([&] { evaluate_fields(b.d, b.m1, 0.0, top + 1e-6); }) == ErrorCode::OutOfDomain);
    CHECK(fixture::error_of([&] { evaluate_fields(s.d, s.m1, 0.0, -1e-6); }) == ErrorCode::OutOfDomain);
  }
}

TEST_CASE("region-II fields obey the constitutive relation") {
  const auto s = solve_all(3, false);
  const double y = s.d.effective_gap() + 0.3 * s.d.pm_height();
  for (double x : {0.0021, 0.011, 0.034}) {
    const auto f = evaluate_fields(s.d, s.m1, x, y);
    const Eigen::Vector2d m = fourier_magnetization(s.src, x);
    CHECK(f.bx == doctest::Approx(oracle::mu0 * (f.hx + m.x())).epsilon(1e-12));
    CHECK(f.by == doctest::Approx(oracle::mu0 * (f.hy + m.y())).epsilon(1e-12));
    const auto g = evaluate_fields(s.d, s.m1, x, 0.5 * s.d.effective_gap());
    CHECK(g.bx == doctest::Approx(oracle::mu0 * g.hx).epsilon(1e-12));
  }
}

TEST_CASE("interface jumps follow the surface sources") {
  for (bool bi : {false, true}) {
    for (int nm = 2; nm <= 5; ++nm) {
      const auto s = solve_all(nm, bi);
      const double ge = s.d.effective_gap(), top = s.d.array_top();
      double max_hy = 0, max_bx = 0, jump_hy = 0, jump_bx = 0, cont_by = 0, max_by = 0;
      double top_hy = 0, top_bx = 0, top_by = 0;
      for (int i = 0; i < 256; ++i) {
        const double x = s.d.lambda() * i / 256;
        const double sigma = profile(s.src, x, true), kcur = profile(s.src, x, false);
        const auto f1 = evaluate_in_region(s.m1, x, ge, Region::I);
        const auto f2 = evaluate_in_region(s.m1, x, ge, Region::II);
        max_hy = std::max({max_hy, std::abs(f1.hy), std::abs(f2.hy)});
        max_bx = std::max({max_bx, std::abs(f1.bx), std::abs(f2.bx)});
        max_by = std::max({max_by, std::abs(f1.by)});
        jump_hy = std::max(jump_hy, std::abs((f2.hy - f1.hy) - sigma / oracle::mu0));
        jump_bx = std::max(jump_bx, std::abs((f1.bx - f2.bx) - oracle::mu0 * kcur));
        cont_by = std::max(cont_by, std::abs(f1.by - f2.by));
        if (!bi) {
          const auto g2 = evaluate_in_region(s.m1, x, top, Region::II);
          const auto g3 = evaluate_in_region(s.m1, x, top, Region::III);
          top_hy = std::max(top_hy, std::abs((g3.hy - g2.hy) + sigma / oracle::mu0));
          top_bx = std::max(top_bx, std::abs((g2.bx - g3.bx) + oracle::mu0 * kcur));
          top_by = std::max(top_by, std::abs(g2.by - g3.by));
        }
      }
      CAPTURE(bi);
      CAPTURE(nm);
      CHECK(jump_hy <= 0.01 * max_hy);
      CHECK(jump_bx <= 0.01 * max_bx);
      CHECK(cont_by <= 1e-9 * max_by);
      CHECK(top_hy <= 0.01 * max_hy);
      CHECK(top_bx <= 0.01 * max_bx);
      CHECK(top_by <= 1e-9 * max_by);
    }
  }
}

TEST_CASE("potentials: parity and continuity") {
  for (bool bi : {false, true}) {
    const auto s = solve_all(4, bi);
    for (double y : {0.001, s.d.effective_gap() + 0.002, s.d.array_top() - 1e-4}) {
      for (double x : {0.0017, 0.009}) {
        const auto p = evaluate_fields(s.d, s.m1, x, y), q = evaluate_fields(s.d, s.m1, -x, y);
        CHECK(*p.psi == doctest::Approx(-*q.psi).epsilon(1e-12));
        const auto a = evaluate_fields(s.d, s.m3, x, y), b = evaluate_fields(s.d, s.m3, -x, y);
        CHECK(*a.az == doctest::Approx(*b.az).epsilon(1e-12));
        CHECK(!a.psi.has_value());
        CHECK(!p.az.has_value());
      }
    }
    for (double y : {s.d.effective_gap(), s.d.array_top()}) {
      if (bi && y == s.d.array_top()) continue;
      const Region lo = y == s.d.effective_gap() ? Region::I : Region::II;
      const Region hi = y == s.d.effective_gap() ? Region::II : Region::III;
      double psi_scale = 0, az_scale = 0, psi_gap = 0, az_gap = 0;
      for (int i = 0; i < 64; ++i) {
        const double x = s.d.lambda() * i / 64;
        const auto p1 = evaluate_in_region(s.m2, x, y, lo), p2 = evaluate_in_region(s.m2, x, y, hi);
        const auto a1 = evaluate_in_region(s.m3, x, y, lo), a2 = evaluate_in_region(s.m3, x, y, hi);
        psi_scale = std::max(psi_scale, std::abs(*p1.psi));
        az_scale = std::max(az_scale, std::abs(*a1.az));
        psi_gap = std::max(psi_gap, std::abs(*p1.psi - *p2.psi));
        az_gap = std::max(az_gap, std::abs(*a1.az - *a2.az));
      }
      CHECK(psi_gap <= 1e-9 * psi_scale);
      CHECK(az_gap <= 1e-9 * az_scale);
    }
  }
}

TEST_CASE("scalar potentials of models 1 and 2 differ by the particular term in region II") {
  const auto s = solve_all(3, false);
  const double y = s.d.effective_gap() + 0.4 * s.d.pm_height();
  const double k = s.d.wave_number();
  for (double x : {0.0013, 0.0101, 0.027}) {
    double particular = 0.0;
    for (int i = 0; i < s.src.count(); ++i) {
      const int n = 2 * i + 1;
      particular += s.src.mx(i) / (n * k) * std::sin(n * k * x);
    }
    const auto a = evaluate_fields(s.d, s.m1, x, y), b = evaluate_fields_model2(s.d, s.m2, x, y);
    CHECK(*b.psi - *a.psi == doctest::Approx(particular).epsilon(1e-10).scale(s.d.magnetization() / k));
  }
}

TEST_CASE("vector potential derivatives reproduce B") {
  // Inside the array the magnetization series decays only like 1/n, so the
  // truncation is kept where the stencil resolves every retained harmonic.
  for (bool bi : {false, true}) {
    const auto s = solve_all(2, bi, 49);
    const double h = s.d.lambda() / 4096;
    for (double y : {0.0012, s.d.effective_gap() + 0.0021, s.d.array_top() - 0.001}) {
      for (double x : {0.0031, 0.0117, 0.0263}) {
        const auto f = evaluate_fields_model3(s.d, s.m3, x, y);
        auto az = [&](double xx, double yy) { return *evaluate_in_region(s.m3, xx, yy, f.region).az; };
        // Fourth-order central stencil: the second-order one carries a
        // (n k h)^2 / 6 truncation error that already exceeds 1e-6 for n = 1.
        auto d4 = [&](auto f) { return (-f(2 * h) + 8 * f(h) - 8 * f(-h) + f(-2 * h)) / (12 * h); };
        const double dax = d4([&](double e) { return az(x + e, y); });
        const double day = d4([&](double e) { return az(x, y + e); });
        const double scale = std::hypot(f.bx, f.by);
        CHECK(std::abs(f.bx - day) <= 1e-6 * scale);
        CHECK(std::abs(f.by + dax) <= 1e-6 * scale);
      }
    }
  }
}

TEST_CASE("model 2 region-I H equals model 1 at random points") {
  const auto s = solve_all(5, false);
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> ux(0, s.d.lambda()), uy(0, s.d.effective_gap());
  double worst = 0, peak = 0;
  for (int k = 0; k < 100; ++k) {
    const double x = ux(rng), y = uy(rng);
    const auto a = evaluate_fields(s.d, s.m1, x, y), b = evaluate_fields_model2(s.d, s.m2, x, y);
    peak = std::max({peak, std::abs(a.hx), std::abs(a.hy)});
    worst = std::max({worst, std::abs(a.hx - b.hx), std::abs(a.hy - b.hy)});
  }
  CHECK(worst <= 1e-10 * peak);
}

TEST_CASE("coefficients decay with harmonic order") {
  const auto s = solve_all(3, false);
  double first = std::abs(s.m1.a1(0));
  for (int i = 5; i < 20; ++i) CHECK(std::abs(s.m1.a1(i)) < first);
  for (int i = 0; i < s.m1.count(); ++i) {
    const auto& c = s.m1.scaled(i);
    CHECK(std::isfinite(c.a1 + c.b1 + c.a2 + c.b2 + c.b3));
  }
}

TEST_CASE("model names round trip") {
  for (Model m : {Model::Laplace, Model::PoissonScalar, Model::PoissonVector}) CHECK(parse_model(to_string(m)) == m);
  CHECK(fixture::error_of([] { parse_model("fem"); }) == ErrorCode::InvalidValue);
}
