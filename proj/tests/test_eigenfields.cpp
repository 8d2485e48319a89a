#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bernlab/eigenfields.hpp"
#include "bernlab/frequency.hpp"
#include "bernlab/rng.hpp"
#include "bernlab/sweep.hpp"

using namespace bernlab;
using namespace bernlab::eigenfields;

TEST_CASE("torus eigenfunctions") {
  SUBCASE("single sine mode") {
    auto phi = make_torus_eigenfunction(2, {{{3, 0}, 0.0, 1.0}});
    CHECK(phi->lambda() == doctest::Approx(9.0));
    CHECK(phi->value(Vec{0.2, 1.0}) == doctest::Approx(std::sin(0.6)));
    CHECK(phi->riemannian_gradient(Vec{0.0, 0.0}).norm() == doctest::Approx(3.0));
  }
  SUBCASE("two modes share the eigenvalue") {
    auto phi = make_torus_eigenfunction(2, {{{3, 4}, 1.0, 0.0}, {{5, 0}, 0.0, 1.0}});
    CHECK(phi->lambda() == doctest::Approx(25.0));
  }
  SUBCASE("mixed eigenvalues rejected") {
    CHECK_THROWS_AS(make_torus_eigenfunction(2, {{{1, 0}, 1.0, 0.0}, {{2, 0}, 1.0, 0.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_torus_eigenfunction(2, {}), std::invalid_argument);
  }
  SUBCASE("random combination satisfies the eigen equation") {
    Rng rng(2024);
    auto reps = integer_modes_with_norm2(2, 50);
    REQUIRE(!reps.empty());
    std::vector<TorusMode> modes;
    for (size_t i = 0; i < std::min<size_t>(5, reps.size()); ++i)
      modes.push_back({reps[i], rng.normal(), rng.normal()});
    auto phi = make_torus_eigenfunction(2, modes);
    CHECK(phi->lambda() == doctest::Approx(50.0));
    double sup = 0;
    for (int i = 0; i < 400; ++i)
      sup = std::max(sup, std::abs(phi->value(Vec{kTwoPi * (i % 20) / 20, kTwoPi * (i / 20) / 20})));
    for (int t = 0; t < 20; ++t) {
      Vec p{rng.uniform(0, kTwoPi), rng.uniform(0, kTwoPi)};
      double lap = fd_laplacian(phi->domain(), [&](const Vec& x) { return phi->value(x); }, p, 1e-4);
      CHECK(std::abs(lap + 50.0 * phi->value(p)) < 1e-6 * 50.0 * sup);
    }
  }
}

TEST_CASE("sphere eigenfunctions") {
  SUBCASE("zonal degree 1 is cos(geodesic distance to the pole)") {
    auto phi = make_zonal_sphere_eigenfunction(2, 1);
    CHECK(phi->lambda() == doctest::Approx(2.0));
    for (double th : {0.0, 0.4, 1.2, 2.8}) {
      Vec x{std::sin(th), 0.0, std::cos(th)};
      CHECK(phi->value(x) == doctest::Approx(std::cos(th)).epsilon(1e-12));
    }
    CHECK(phi->riemannian_gradient(Vec{1.0, 0.0, 0.0}).norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("eigenvalue formulas") {
    int dk4 = sphharm::dim_harmonics(3, 4);
    std::vector<double> c4(dk4, 0.0);
    c4[0] = 1.0;
    CHECK(make_sphere_eigenfunction(2, 4, c4)->lambda() == doctest::Approx(20.0));
    int dk2 = sphharm::dim_harmonics(4, 2);
    std::vector<double> c2(dk2, 0.0);
    c2[1] = 1.0;
    CHECK(make_sphere_eigenfunction(3, 2, c2)->lambda() == doctest::Approx(8.0));
  }
  SUBCASE("coefficient length is checked") {
    CHECK_THROWS_AS(make_sphere_eigenfunction(2, 3, {1.0, 2.0}), std::invalid_argument);
  }
  SUBCASE("gradient matches geodesic differences") {
    Rng rng(77);
    auto phi = make_zonal_sphere_eigenfunction(2, 4);
    for (int t = 0; t < 10; ++t) {
      Vec v{rng.normal(), rng.normal(), rng.normal()};
      Vec p = v.normalized();
      Vec g = phi->riemannian_gradient(p);
      Vec fd = fd_gradient(phi->domain(), [&](const Vec& x) { return phi->value(x); }, p, 1e-5);
      CHECK((g - fd).norm() < 1e-6 * std::max(1.0, std::sqrt(phi->lambda())));
    }
  }
}

TEST_CASE("harmonic lift") {
  SUBCASE("single mode lift is harmonic") {
    auto phi = make_torus_eigenfunction(2, {{{1, 0}, 0.0, 1.0}});
    auto lf = lift(phi);
    Vec p{0.3, 0.9, 0.2};
    CHECK(lf.field.value(p) == doctest::Approx(std::sin(0.3) * std::exp(0.2)));
    double lap = fd_laplacian(lf.field.domain(), [&](const Vec& x) { return lf.field.value(x); },
                              p, 1e-4);
    CHECK(std::abs(lap) < 1e-6 * std::abs(lf.field.value(p)));
  }
  SUBCASE("two-mode lift harmonic by finite differences") {
    Rng rng(31);
    auto phi = make_torus_eigenfunction(2, {{{3, 4}, 0.6, 0.0}, {{0, 5}, 0.0, 1.0}});
    auto lf = lift(phi);
    for (int t = 0; t < 15; ++t) {
      Vec p{rng.uniform(0, kTwoPi), rng.uniform(0, kTwoPi), rng.uniform(-0.3, 0.3)};
      double lap = fd_laplacian(lf.field.domain(), [&](const Vec& x) { return lf.field.value(x); },
                                p, 1e-4);
      double u = std::abs(lf.field.value(p));
      CHECK(std::abs(lap) <= 1e-6 * lf.lambda * std::max(u, 1e-2));
    }
  }
  SUBCASE("frequency grows like sqrt(lambda)") {
    // phase-averaged frequency (smoke version of the acceptance measurement)
    CoefficientField id = CoefficientField::identity(3);
    std::vector<double> lx, ly;
    for (int m : {1, 2, 3, 5, 7, 10}) {  // lambda in {1, 4, 9, 25, 49, 100}
      auto phi = make_torus_eigenfunction(2, {{{m, 0}, 0.0, 1.0}});
      auto lf = lift(phi);
      const int nph = 8;
      double acc = 0;
      for (int j = 0; j < nph; ++j) {
        Vec ctr{kPi * (j + 0.5) / nph / m, 0.0, 0.0};
        acc += frequency_numeric(lf.field, id, ctr, 0.5);
      }
      lx.push_back(std::log((double)m * m));
      ly.push_back(std::log(acc / nph));
    }
    auto reg = sweep::ols("lift", lx, ly);
    CHECK(reg.slope > 0.4);
    CHECK(reg.slope < 0.62);
  }
  SUBCASE("nonpositive eigenvalue rejected") {
    auto flat = make_torus_eigenfunction(2, {{{0, 0}, 1.0, 0.0}});
    CHECK_THROWS_AS(lift(flat), std::invalid_argument);
  }
  SUBCASE("sphere lift is harmonic for the product metric") {
    auto zon = make_zonal_sphere_eigenfunction(2, 4);  // lambda = 20
    auto lf = lift(zon);
    Rng rng(55);
    for (int t = 0; t < 10; ++t) {
      Vec v{rng.normal(), rng.normal(), rng.normal()};
      Vec x = v.normalized();
      Vec p{x[0], x[1], x[2], rng.uniform(-0.3, 0.3)};
      double lap = fd_laplacian(lf.field.domain(), [&](const Vec& y) { return lf.field.value(y); },
                                p, 1e-4);
      double u = std::abs(lf.field.value(p));
      CHECK(std::abs(lap) <= 1e-6 * lf.lambda * std::max(u, 1e-2));
    }
  }
}

TEST_CASE("dong quantities") {
  SUBCASE("q frozen values") {
    auto phi = make_torus_eigenfunction(2, {{{2, 0}, 0.0, 1.0}});
    CHECK(dong_q(*phi, Vec{0.0, 0.7}) == doctest::Approx(4.0));
    CHECK(dong_q(*phi, Vec{kPi / 4, -2.0}) == doctest::Approx(2.0));
    auto zon = make_zonal_sphere_eigenfunction(2, 1);
    CHECK(dong_q(*zon, Vec{0.0, 0.0, 1.0}) == doctest::Approx(1.0));
  }
  SUBCASE("rejects non-2d manifolds") {
    auto phi3 = make_torus_eigenfunction(3, {{{1, 0, 0}, 1.0, 0.0}});
    CHECK_THROWS_AS(dong_q(*phi3, Vec::zero(3)), std::invalid_argument);
  }
  SUBCASE("log q Laplacian bound on the torus") {
    auto phi = make_torus_eigenfunction(2, {{{1, 0}, 0.0, 1.0}, {{0, 1}, 1.0, 0.0}});
    Rng rng(8);
    std::vector<Vec> pts;
    for (int i = 0; i < 100; ++i) pts.push_back(Vec{rng.uniform(0, kTwoPi), rng.uniform(0, kTwoPi)});
    auto rep = dong_log_q_laplacian_check(phi, pts, 1e-3);
    CHECK(rep.bound == doctest::Approx(-1.0));
    CHECK(rep.min_margin >= -1e-4);
  }
  SUBCASE("log q Laplacian bound on the sphere") {
    auto zon = make_zonal_sphere_eigenfunction(2, 3);
    Rng rng(9);
    std::vector<Vec> pts;
    for (int i = 0; i < 200; ++i) {
      Vec v{rng.normal(), rng.normal(), rng.normal()};
      pts.push_back(v.normalized());
    }
    auto rep = dong_log_q_laplacian_check(zon, pts, 1e-3);
    CHECK(rep.min_margin >= -1e-4 * std::max(1.0, rep.lambda));
  }
  SUBCASE("single-mode symbolic oracle") {
    // for sin(m x): q = m^2 (1 + cos^2(m x)) / 2 up to the constant factor,
    // and Delta log q = m^2 (-2 cos(2u)(1 + cos^2 u) - sin^2(2u)) / (1 + cos^2 u)^2
    int m = 1;
    auto phi = make_torus_eigenfunction(2, {{{m, 0}, 0.0, 1.0}});
    auto logq = [&](const Vec& x) { return std::log(dong_q(*phi, x)); };
    Rng rng(10);
    for (int t = 0; t < 25; ++t) {
      double x = rng.uniform(0, kTwoPi);
      double u = m * x;
      double h = 1.0 + std::cos(u) * std::cos(u);
      double symbolic =
          m * m * (-2.0 * std::cos(2 * u) * h - std::pow(std::sin(2 * u), 2)) / (h * h);
      double fd = fd_laplacian(phi->domain(), logq, Vec{x, rng.uniform(0, kTwoPi)}, 1e-3);
      CHECK(std::abs(fd - symbolic) < 1e-5);
    }
  }
}

TEST_CASE("dong F profile") {
  auto phi = make_torus_eigenfunction(2, {{{3, 4}, 0.8, 0.2}, {{5, 0}, -0.4, 0.9}});
  DongState state = make_dong_state(phi);
  CHECK(state.curvature_bound == 0.0);
  std::vector<double> grid;
  for (int i = 0; i < 8; ++i) grid.push_back(0.08 * std::pow(0.5 / 0.08, i / 7.0));
  DongProfile p = dong_F_profile(state, Vec{0.3, 0.4}, grid);
  for (size_t i = 1; i < p.F.size(); ++i) {
    CHECK(p.F[i] >= p.F[i - 1] - 1e-12);
    CHECK(p.t[i] > p.t[i - 1]);
  }
  CHECK(p.t[0] == 0.0);
  // discrete convexity margin: d2F/dt2 >= -c lambda rho0(rmax)^2 with small c
  double floor = 0;
  for (size_t i = 1; i + 1 < p.r.size(); ++i) floor = std::min(floor, p.d2F_dt2[i]);
  double scale = phi->lambda() * std::pow(rho0(grid.back(), 0.0), 2);
  CHECK(floor >= -50.0 * scale);
  std::string csv = p.to_csv();
  CHECK(csv.find("r,t,M,F,second_diff") == 0);

  DongState sph = make_dong_state(make_zonal_sphere_eigenfunction(2, 3));
  CHECK(sph.curvature_bound == 1.0);
  CHECK(rho0(0.2, 1.0) == doctest::Approx(std::sinh(0.2)).epsilon(1e-14));
  CHECK(rho0(0.2, 0.0) == 0.2);
}

TEST_CASE("integer mode enumeration") {
  auto reps = integer_modes_with_norm2(2, 25);
  CHECK(reps.size() == 6);  // (5,0) (0,5) (3,4) (3,-4) (4,3) (4,-3)
  for (const auto& m : reps) CHECK(m[0] * m[0] + m[1] * m[1] == 25);
  CHECK(integer_modes_with_norm2(2, 3).empty());  // 3 is not a sum of two squares
}
