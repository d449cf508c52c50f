#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "halbach/design_studio.hpp"
#include "halbach/field_laplace.hpp"
#include "halbach/machine_quantities.hpp"

using namespace halbach;

namespace {

MotorDesign stage_machine() { return fixture::design(5, false, 5); }

const HarmonicTruncation kTrunc(199);

}  // namespace

TEST_CASE("stage metrics of the reference stage") {
  const auto d = stage_machine();
  StageSpec s;
  const auto m = stage_metrics(d, s, 40.0);
  CHECK(m.mover_units == doctest::Approx(15.0));
  CHECK(m.stator_units == 16);
  CHECK(m.moving_mass == doctest::Approx(4 * 15 * 7000 * 0.04 * 0.3 * 0.007));
  CHECK(m.moving_mass == doctest::Approx(35.28));
  CHECK(m.acceleration == doctest::Approx(2 * 15 * 40.0 / (100 + 35.28)));
  CHECK(m.copper_loss == doctest::Approx(4 * 16 * 0.04 * 0.3 * 0.004 * 1e14 / 5.8e7));
  CHECK(m.shear == doctest::Approx(40.0 / (0.04 * 0.04)));
  CHECK(stage_metrics(d, s, 80.0).acceleration == doctest::Approx(2 * m.acceleration));

  s.moving = MovingMember::MovingStator;
  s.stator_units = 20;
  const auto ms = stage_metrics(d, s, 40.0);
  CHECK(ms.moving_mass == doctest::Approx(4 * 15 * 9000 * 0.04 * 0.3 * 0.004));
  CHECK(ms.stator_units == 20);

  auto p = fixture::table1(5, false, 5);
  p.j_max = 0.0;
  const MotorDesign d0(p);
  const auto m0 = evaluate_design(d0, kTrunc, StageSpec{}, ObjectiveConfig{});
  CHECK(m0.copper_loss == 0.0);
  CHECK(m0.acceleration == 0.0);
}

TEST_CASE("stage validation") {
  const auto d = stage_machine();
  StageSpec s;
  s.length = 0.02;
  CHECK(fixture::error_of([&] { stage_metrics(d, s, 1.0); }) == ErrorCode::InvalidValue);
  s = StageSpec{};
  s.mass = 0.0;
  CHECK(fixture::error_of([&] { stage_metrics(d, s, 1.0); }) == ErrorCode::InvalidValue);
  s = StageSpec{};
  s.depth = -1;
  CHECK(fixture::error_of([&] { stage_metrics(d, s, 1.0); }) == ErrorCode::NonPositiveLength);
}

TEST_CASE("objective") {
  const auto d = stage_machine();
  StageMetrics m;
  m.acceleration = 12.0;
  m.copper_loss = 5000.0;
  ObjectiveConfig o;
  o.alpha = 1.0;
  o.beta = 0.0;
  CHECK(objective(d, StageSpec{}, o, m) == doctest::Approx(12.0));
  o.beta = 0.2;
  const double base = objective(d, StageSpec{}, o, m);
  CHECK(base == doctest::Approx(12.0 / std::pow(5000.0, 0.2)));
  auto m3 = m;
  m3.copper_loss *= 3.0;
  CHECK(objective(d, StageSpec{}, o, m3) == doctest::Approx(base * std::pow(3.0, -0.2)));
  CHECK(objective(d, StageSpec{}, o, m3) < base);
  m3.copper_loss = 0.0;
  CHECK(fixture::error_of([&] { objective(d, StageSpec{}, o, m3); }) == ErrorCode::ZeroLoss);
  o.alpha = 0.0;
  CHECK(fixture::error_of([&] { objective(d, StageSpec{}, o, m); }) == ErrorCode::InvalidValue);

  o = ObjectiveConfig{};
  o.extended = ExtendedWeights{1.0, 0.5, 2.0, 0.0};
  CHECK(fixture::error_of([&] { objective(d, StageSpec{}, o, m); }) == ErrorCode::InvalidValue);
  o.extended->cost_drive = 3.0;
  m.thd = 0.02;
  m.ripple_pct = 0.4;
  CHECK(objective(d, StageSpec{}, o, m) ==
        doctest::Approx(12.0 / std::pow(5000.0, 0.2) / (0.02 * std::sqrt(0.4) * 9.0)));
}

TEST_CASE("extended metrics are filled on request") {
  ObjectiveConfig o;
  o.extended = ExtendedWeights{1, 1, 1, 2.0};
  const auto m = evaluate_design(stage_machine(), kTrunc, StageSpec{}, o);
  REQUIRE(m.thd.has_value());
  REQUIRE(m.ripple_pct.has_value());
  CHECK(*m.thd > 0);
  CHECK(*m.ripple_pct > 0);
  CHECK(!evaluate_design(stage_machine(), kTrunc, StageSpec{}, ObjectiveConfig{}).thd.has_value());
}

TEST_CASE("sweep trends over the magnet height") {
  const auto d = stage_machine();
  SweepAxes axes{{0.04}, {}, {0.004}};
  for (int i = 0; i <= 18; ++i) axes.pm_height.push_back(2e-3 + i * 1e-3);
  const auto r = sweep(d, kTrunc, StageSpec{}, ObjectiveConfig{}, axes);
  REQUIRE(r.rows.size() == 19);
  for (std::size_t i = 1; i < r.rows.size(); ++i) CHECK(r.rows[i].metrics.shear >= r.rows[i - 1].metrics.shear);
  std::size_t imax = 0;
  for (std::size_t i = 0; i < r.rows.size(); ++i)
    if (r.rows[i].metrics.acceleration > r.rows[imax].metrics.acceleration) imax = i;
  CHECK(imax > 0);
  CHECK(imax + 1 < r.rows.size());
  MESSAGE("acceleration peaks at h_m = " << r.rows[imax].pm_height);
}

TEST_CASE("sweep bookkeeping") {
  const auto d = stage_machine();
  const SweepAxes one{{0.04}, {0.007}, {0.004}};
  const auto r = sweep(d, kTrunc, StageSpec{}, ObjectiveConfig{}, one);
  REQUIRE(r.rows.size() == 1);
  const auto c = solve_coefficients(d, fourier_coefficients(d, kTrunc), kTrunc);
  const auto m = stage_metrics(d, StageSpec{}, peak_mean_thrust(d, c));
  CHECK(r.rows[0].metrics.acceleration == m.acceleration);
  CHECK(r.rows[0].metrics.copper_loss == m.copper_loss);

  const SweepAxes axes{{0.03, 0.04}, {0.005, 0.009}, {0.002, 0.004, 0.006}};
  const auto a = sweep(d, kTrunc, StageSpec{}, ObjectiveConfig{}, axes);
  const auto b = sweep(d, kTrunc, StageSpec{}, ObjectiveConfig{}, axes);
  REQUIRE(a.rows.size() == 12);
  for (std::size_t i = 0; i < a.rows.size(); ++i) CHECK(a.rows[i].score == b.rows[i].score);
  CHECK(a.rows[1].coil_height == 0.004);
  CHECK(a.rows[3].pm_height == 0.009);
  CHECK(a.rows[6].lambda == 0.04);
  for (const auto& row : a.rows) CHECK(row.score <= a.rows[a.best].score);

  SweepAxes big{std::vector<double>(100, 0.04), std::vector<double>(100, 0.007), std::vector<double>(11, 0.004)};
  CHECK(fixture::error_of([&] { sweep(d, kTrunc, StageSpec{}, ObjectiveConfig{}, big); }) == ErrorCode::InvalidValue);
  CHECK(fixture::error_of([&] { sweep(d, kTrunc, StageSpec{}, ObjectiveConfig{}, SweepAxes{{}, {0.007}, {0.004}}); }) ==
        ErrorCode::EmptyBounds);
}

TEST_CASE("heavier loss weighting lowers the optimal coil height on a sweep") {
  const auto d = stage_machine();
  SweepAxes axes{{0.04}, {0.007}, {}};
  for (int i = 0; i <= 22; ++i) axes.coil_height.push_back(1e-3 + i * 0.5e-3);
  ObjectiveConfig lo, hi;
  lo.beta = 0.2;
  hi.beta = 0.3;
  const auto a = sweep(d, kTrunc, StageSpec{}, lo, axes), b = sweep(d, kTrunc, StageSpec{}, hi, axes);
  CHECK(b.rows[b.best].coil_height <= a.rows[a.best].coil_height);
}

TEST_CASE("optimizer against the exhaustive lattice") {
  const auto d = stage_machine();
  const Bounds bounds;
  const OptimizeOptions opt;
  const int n = lattice_points(opt);
  CHECK(n == 33);
  SweepAxes dense{{bounds.lambda[0]}, {}, {}};
  for (int i = 0; i < n; ++i) {
    dense.pm_height.push_back(lattice_value(bounds.pm_height, i, n));
    dense.coil_height.push_back(lattice_value(bounds.coil_height, i, n));
  }
  for (double beta : {0.2, 0.3}) {
    ObjectiveConfig o;
    o.beta = beta;
    const auto res = optimize(d, kTrunc, StageSpec{}, o, bounds, opt);
    const auto all = sweep(d, kTrunc, StageSpec{}, o, dense);
    const auto& best = all.rows[all.best];
    CAPTURE(beta);
    CHECK(res.best.pm_height == best.pm_height);
    CHECK(res.best.coil_height == best.coil_height);
    CHECK(res.best.score == best.score);
    CHECK(static_cast<int>(res.trace.size()) == res.evaluations);
    for (std::size_t p = 1; p < res.pass_best.size(); ++p) CHECK(res.pass_best[p] >= res.pass_best[p - 1]);
    double coarse = 0.0;
    for (const auto& t : res.trace) {
      if (t.pass == 0) coarse = std::max(coarse, t.row.score);
      CHECK(t.row.pm_height >= bounds.pm_height[0]);
      CHECK(t.row.pm_height <= bounds.pm_height[1]);
      CHECK(t.row.coil_height >= bounds.coil_height[0]);
      CHECK(t.row.coil_height <= bounds.coil_height[1]);
    }
    CHECK(res.best.score >= coarse);
    MESSAGE("beta " << beta << ": h_m " << res.best.pm_height << ", h_c " << res.best.coil_height << ", "
                    << res.evaluations << " evaluations");
  }
}

TEST_CASE("optimizer edge cases") {
  const auto d = stage_machine();
  Bounds b{{0.04, 0.04}, {0.007, 0.007}, {0.004, 0.004}};
  const auto r = optimize(d, kTrunc, StageSpec{}, ObjectiveConfig{}, b);
  CHECK(r.evaluations == 1);
  CHECK(r.best.pm_height == 0.007);
  CHECK(r.best.coil_height == 0.004);
  b.coil_height = {0.005, 0.004};
  CHECK(fixture::error_of([&] { optimize(d, kTrunc, StageSpec{}, ObjectiveConfig{}, b); }) == ErrorCode::EmptyBounds);
  CHECK(lattice_value({1.0, 2.0}, 32, 33) == 2.0);
}

TEST_CASE("initial sizing") {
  const auto d = fixture::design();
  const auto s = initial_sizing(0.5, 1e7, d);
  CHECK(s.shear == doctest::Approx(2.0e4));
  CHECK(s.force == doctest::Approx(0.04 * 0.04 * 2.0e4));
  CHECK(s.loss_density == doctest::Approx(1.724e6).epsilon(1e-3));
  CHECK(fixture::error_of([&] { initial_sizing(0.0, 1e7, d); }) == ErrorCode::InvalidValue);
}
