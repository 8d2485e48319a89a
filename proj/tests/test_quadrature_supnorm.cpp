#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bernlab/eigenfields.hpp"
#include "bernlab/quadrature.hpp"
#include "bernlab/supnorm.hpp"
#include "test_util.hpp"

using namespace bernlab;

TEST_CASE("sphere rule basics") {
  SUBCASE("degree-1 orthonormality at order 3") {
    Quadrature q = sphere_rule(3, 3);
    std::vector<double> vals;
    double gram[3][3] = {};
    for (size_t j = 0; j < q.size(); ++j) {
      sphharm::eval_solid_basis(3, 1, q.nodes[j], vals, nullptr);
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) gram[a][b] += q.weights[j] / q.total_weight * vals[1 + a] * vals[1 + b];
    }
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) CHECK(std::abs(gram[a][b] - (a == b ? 1.0 : 0.0)) < 1e-12);
  }
  SUBCASE("circle average of cos^2(4 theta)") {
    Quadrature q = sphere_rule(2, 8);
    double acc = q.average([](const Vec& p) {
      double th = std::atan2(p[1], p[0]);
      double c = std::cos(4 * th);
      return c * c;
    });
    CHECK(acc == doctest::Approx(0.5).epsilon(1e-13));
  }
  SUBCASE("S^3 average of (xi . e1)^2") {
    Quadrature q = sphere_rule(4, 10);
    double acc = q.average([](const Vec& p) { return p[0] * p[0]; });
    CHECK(acc == doctest::Approx(0.25).epsilon(1e-13));
  }
  SUBCASE("rejects bad arguments") {
    CHECK_THROWS_AS(sphere_rule(1, 4), std::invalid_argument);
    CHECK_THROWS_AS(sphere_rule(3, 0), std::invalid_argument);
  }
}

TEST_CASE("ball rule basics") {
  SUBCASE("unit average") {
    Quadrature b = ball_rule(3, 5, 5, 0.7);
    CHECK(b.average([](const Vec&) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-14));
    double vol = sphere_surface_area(3) / 3 * std::pow(0.7, 3);
    CHECK(b.total_weight == doctest::Approx(vol).epsilon(1e-13));
  }
  SUBCASE("degree-1 harmonic mean square is 3/5") {
    sphharm::HarmonicExpansion e(3);
    e.set_coeff(1, 0, 1.0);
    Quadrature b = ball_rule(3, 6, 6, 1.0);
    double acc = b.average([&](const Vec& x) {
      double v = e.eval(x);
      return v * v;
    });
    CHECK(acc == doctest::Approx(0.6).epsilon(1e-13));
  }
  SUBCASE("radial moment in d = 3") {
    double r = 1.3;
    Quadrature b = ball_rule(3, 6, 6, r);
    double acc = b.average([](const Vec& x) { return x.norm2(); });
    CHECK(acc == doctest::Approx(3.0 * r * r / 5.0).epsilon(1e-13));
  }
}

TEST_CASE("gauss rules integrate exactly") {
  std::vector<double> x, w;
  gauss_legendre(6, -1.0, 1.0, x, w);
  double acc = 0;
  for (size_t i = 0; i < x.size(); ++i) acc += w[i] * std::pow(x[i], 10);
  CHECK(acc == doctest::Approx(2.0 / 11).epsilon(1e-13));
  gauss_chebyshev2(5, x, w);
  acc = 0;  // integral of t^2 sqrt(1-t^2) over [-1,1] = pi/8
  for (size_t i = 0; i < x.size(); ++i) acc += w[i] * x[i] * x[i];
  CHECK(acc == doctest::Approx(kPi / 8).epsilon(1e-13));
}

TEST_CASE("sup norm on flat regions") {
  SUBCASE("linear harmonic on the unit ball") {
    auto e = std::make_shared<sphharm::HarmonicExpansion>(sphharm::coordinate_expansion(3, 0));
    GeodesicBall ball(Domain::euclidean_space(3), Vec::zero(3), 1.0);
    SupResult s = sup_norm(expansion_field(e), ball);
    CHECK(s.sup == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(s.argmax[0] == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(s.error_factor >= 1.0);
    CHECK(s.grid_spacing > 0);
  }
  SUBCASE("full torus sup of sin(3 x1)") {
    auto phi = eigenfields::make_torus_eigenfunction(2, {{{3, 0}, 0.0, 1.0}});
    ScalarField f = eigenfields::eigen_field(phi);
    SupResult s = sup_norm(f, Region::full_torus(Domain::torus(2)));
    CHECK(s.sup == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("generic euclidean ball path") {
    ScalarField f(
        Domain::euclidean_space(2),
        [](const Vec& x) { return FieldEval{x[0] + 0.2 * x[1], true, Vec{1.0, 0.2}}; }, 1.0,
        "linear");
    GeodesicBall ball(Domain::euclidean_space(2), Vec{0.5, 0.0}, 0.75);
    SupResult s = sup_norm(f, ball);
    // max of x0 + 0.2 x1 over the disc: value at center + 0.75 |(1, 0.2)|
    CHECK(s.sup == doctest::Approx(0.5 + 0.75 * std::sqrt(1.04)).epsilon(1e-7));
  }
}

TEST_CASE("sup norm on a spherical cap matches 1-d zonal search") {
  auto zon = eigenfields::make_zonal_sphere_eigenfunction(2, 6);
  ScalarField f = eigenfields::eigen_field(zon);
  GeodesicBall cap(Domain::sphere(2), Vec{0.0, 0.0, 1.0}, 0.4);
  SupResult s = sup_norm(f, cap);
  // golden-section maximization of |profile(theta)| on [0, 0.4]
  auto profile = [&](double th) {
    return std::abs(zon->value(Vec{std::sin(th), 0.0, std::cos(th)}));
  };
  double a = 0.0, b = 0.4;
  const double gr = (std::sqrt(5.0) - 1) / 2;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  for (int it = 0; it < 200; ++it) {
    if (profile(c) < profile(d)) a = c;
    else b = d;
    c = b - gr * (b - a);
    d = a + gr * (b - a);
  }
  double oracle = std::max({profile(a), profile(b), profile(0.0), profile(0.4)});
  CHECK(s.sup == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("sup norm policy handling") {
  ScalarField nolimit(
      Domain::euclidean_space(2), [](const Vec& x) { return FieldEval{std::sin(x[0]), false, {}}; },
      std::nullopt, "unbanded");
  nolimit.has_gradient_ = false;
  GeodesicBall ball(Domain::euclidean_space(2), Vec::zero(2), 1.0);
  CHECK_THROWS_WITH_AS(sup_norm(nolimit, ball), doctest::Contains("unresolved supremum"),
                       std::runtime_error);
  ResolutionPolicy forced;
  forced.force = true;
  CHECK(sup_norm(nolimit, ball, forced).sup == doctest::Approx(std::sin(1.0)).epsilon(1e-6));
}

TEST_CASE("refinement monotone in resolution") {
  Rng rng(3);
  auto e = std::make_shared<sphharm::HarmonicExpansion>(testutil::random_expansion(rng, 2, 9, 8));
  ScalarField f = expansion_field(e);
  GeodesicBall ball(Domain::euclidean_space(2), Vec::zero(2), 0.9);
  double prev = -1;
  for (double gf : {0.5, 0.25, 0.125}) {
    ResolutionPolicy pol;
    pol.grid_factor = gf;
    double sup = sup_norm(f, ball, pol).sup;
    // nondecreasing up to the refinement stop tolerance
    CHECK(sup >= prev * (1 - 3e-9));
    prev = sup;
  }
}
