#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bernlab/bernstein.hpp"
#include "bernlab/sweep.hpp"
#include "test_util.hpp"

using namespace bernlab;
using sphharm::HarmonicExpansion;

TEST_CASE("bound set") {
  auto b = bernstein::bounds_for(100.0, 0.5, 2, 1.0);
  CHECK(b.b_global == doctest::Approx(10.0));
  CHECK(b.b_df == doctest::Approx(std::pow(100.0, 2.0) / 0.5));
  CHECK(b.b_conj == doctest::Approx(20.0));
  CHECK(b.b_dong == doctest::Approx(std::max(20.0, std::pow(100.0, 0.75))));
  double lg = std::log(100.0);
  CHECK(b.b_2d == doctest::Approx(std::max(20.0, 10.0 * lg)));
  CHECK(b.b_main == doctest::Approx(std::max(10.0 * std::pow(lg, 3) / 0.5, 100.0 * std::pow(lg, 3))));
  // log factors clamp below at 1 so bounds stay positive for small lambda
  auto small = bernstein::bounds_for(1.0, 0.5, 2, 1.0);
  CHECK(small.b_main > 0);
  CHECK(small.b_2d > 0);
}

TEST_CASE("bernstein ratio reports") {
  SUBCASE("single torus mode at its gradient maximum") {
    auto phi = eigenfields::make_torus_eigenfunction(2, {{{3, 0}, 0.0, 1.0}});
    GeodesicBall ball(Domain::torus(2), Vec{0.0, 0.0}, kPi / 2);
    auto rep = bernstein::bernstein_ratio(phi, ball);
    CHECK(rep.grad_sup == doctest::Approx(3.0).epsilon(1e-8));
    CHECK(rep.val_sup == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rep.ratio == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(rep.c_global == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("zonal degree 1 on a polar cap") {
    auto zon = eigenfields::make_zonal_sphere_eigenfunction(2, 1);
    GeodesicBall cap(Domain::sphere(2), Vec{0.0, 0.0, 1.0}, kPi / 4);
    auto rep = bernstein::bernstein_ratio(zon, cap);
    CHECK(rep.val_sup == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.grad_sup == doctest::Approx(std::sin(kPi / 4)).epsilon(1e-6));
    CHECK(rep.ratio <= std::sqrt(2.0) + 1e-9);
  }
  SUBCASE("sub-wavelength random corpus stays under the conjectural bound") {
    // lambda = 100, r = 0.05 (below the wavelength 0.1)
    double fitted = 0;
    for (int seed = 1; seed <= 20; ++seed) {
      Rng rng(seed);
      auto reps = eigenfields::integer_modes_with_norm2(2, 100);
      std::vector<eigenfields::TorusMode> modes;
      for (const auto& m : reps) modes.push_back({m, rng.normal(), rng.normal()});
      auto phi = eigenfields::make_torus_eigenfunction(2, modes);
      GeodesicBall ball(Domain::torus(2), Vec{rng.uniform(0, kTwoPi), rng.uniform(0, kTwoPi)},
                        0.05);
      auto rep = bernstein::bernstein_ratio(phi, ball);
      fitted = std::max(fitted, rep.c_conj);  // ratio / (sqrt(lambda)/r)
    }
    CHECK(fitted <= 5.0);
    CHECK(fitted > 0.0);
  }
}

TEST_CASE("growth check") {
  SUBCASE("homogeneous degree N") {
    int N = 9;
    auto e = std::make_shared<HarmonicExpansion>(3);
    e->set_coeff(N, 4, 1.0);
    double ratio = bernstein::growth_check(expansion_field(e), Vec::zero(3), 0.6, (double)N);
    CHECK(ratio == doctest::Approx(std::pow(1.0 + 1.0 / N, N)).epsilon(1e-6));
    CHECK(ratio <= std::exp(1.0) + 1e-9);
  }
  SUBCASE("constant field") {
    auto e = std::make_shared<HarmonicExpansion>(3);
    e->set_coeff(0, 0, 5.0);
    CHECK(bernstein::growth_check(expansion_field(e), Vec::zero(3), 0.5, 10.0) ==
          doctest::Approx(1.0));
  }
  SUBCASE("torus eigenfunction at the Prop-3.1 scale") {
    auto phi = eigenfields::make_torus_eigenfunction(2, {{{7, 0}, 0.0, 1.0}});  // lambda 49
    ScalarField f = eigenfields::eigen_field(phi);
    double lam = phi->lambda();
    double L = std::sqrt(lam) * std::pow(std::log(lam), 3);
    double ratio = bernstein::growth_check(f, Vec{0.3, 0.1}, 0.1, L);
    CHECK(ratio >= 1.0 - 1e-8);
    CHECK(ratio <= 3.0);
  }
}

TEST_CASE("polynomial Lp Bernstein") {
  SUBCASE("linear polynomial, sup norm") {
    HarmonicExpansion e = sphharm::coordinate_expansion(3, 0);
    auto rep = bernstein::polynomial_bernstein_lp(e, 1.0, std::numeric_limits<double>::infinity());
    CHECK(rep.lhs == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(rep.rhs == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(rep.constant == doctest::Approx(1.0).epsilon(1e-7));
  }
  SUBCASE("planar Re z^N saturates the sup bound") {
    int N = 8;
    HarmonicExpansion e(2);
    e.set_coeff(N, 0, 1.0 / std::sqrt(2.0));  // Re z^N
    auto rep = bernstein::polynomial_bernstein_lp(e, 1.0, std::numeric_limits<double>::infinity());
    CHECK(rep.lhs == doctest::Approx((double)N).epsilon(1e-7));
    CHECK(rep.rhs == doctest::Approx((double)N).epsilon(1e-7));
    CHECK(rep.constant == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("pure degree closed form for p = 2") {
    int N = 6;
    HarmonicExpansion e(3);
    e.set_coeff(N, 2, 1.4);
    auto rep = bernstein::polynomial_bernstein_lp(e, 0.8, 2.0);
    CHECK(rep.constant == doctest::Approx(std::sqrt((2.0 * N + 3.0) / N)).epsilon(1e-10));
  }
  SUBCASE("unsupported p rejected") {
    HarmonicExpansion e = sphharm::coordinate_expansion(3, 0);
    CHECK_THROWS_AS(bernstein::polynomial_bernstein_lp(e, 1.0, 3.0), std::invalid_argument);
  }
}

TEST_CASE("Lp growth ratios") {
  int N = 6;
  HarmonicExpansion e(3);
  e.set_coeff(N, 1, 2.0);
  // averaged solid-ball norms: a degree-N homogeneous term scales as s^N
  CHECK(bernstein::lp_growth_check(e, 0.9, N, 2.0) ==
        doctest::Approx(std::pow(1.0 + 1.0 / N, N)).epsilon(1e-10));
  CHECK(bernstein::lp_growth_check(e, 0.9, N, 1.0) ==
        doctest::Approx(std::pow(1.0 + 1.0 / N, N)).epsilon(1e-10));
  CHECK(bernstein::lp_growth_check(e, 0.9, N, 2.0) <= std::exp(1.0 + 1.5 / N));
  HarmonicExpansion c(3);
  c.set_coeff(0, 0, 2.0);
  CHECK(bernstein::lp_growth_check(c, 0.5, 10, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("truncation approximation") {
  SUBCASE("polynomial fields reproduce exactly") {
    Rng rng(5);
    auto e = std::make_shared<HarmonicExpansion>(testutil::random_expansion(rng, 3, 20, 15));
    ScalarField f = expansion_field(e);
    auto res = bernstein::approximate_by_truncation(f, Vec::zero(3), 0.4, 11);
    GeodesicBall ball(Domain::euclidean_space(3), Vec::zero(3), 0.44);
    double scale = sup_norm(f, ball).sup;
    CHECK(res.tail_sup < 1e-8 * scale);
    CHECK(res.head.max_degree() <= 55);
  }
  SUBCASE("lifted torus field has a small relative tail") {
    auto phi = eigenfields::make_torus_eigenfunction(2, {{{60, 80}, 0.0, 1.0}});  // sqrt(l) = 100
    auto lf = eigenfields::lift(phi);
    auto res = bernstein::approximate_by_truncation(lf.field, Vec::zero(3), 0.3, 12);
    CHECK(res.relative_tail <= 0.5);
    CHECK(res.relative_tail > 0.0);
  }
  SUBCASE("moderate eigenvalue lift is captured almost exactly") {
    auto phi = eigenfields::make_torus_eigenfunction(2, {{{3, 4}, 0.0, 1.0}});  // lambda = 25
    auto lf = eigenfields::lift(phi);
    auto res = bernstein::approximate_by_truncation(lf.field, Vec::zero(3), 0.3, 10);
    CHECK(res.relative_tail <= 0.5);
  }
  SUBCASE("under-resolved fit is reported") {
    auto e = std::make_shared<HarmonicExpansion>(3);
    e->set_coeff(80, 40, 1.0);
    ScalarField f = expansion_field(e);
    CHECK_THROWS_WITH_AS(bernstein::approximate_by_truncation(f, Vec::zero(3), 0.4, 11, 40),
                         doctest::Contains("not resolved"), std::runtime_error);
  }
  SUBCASE("N below the supported floor rejected") {
    auto e = std::make_shared<HarmonicExpansion>(3);
    e->set_coeff(1, 0, 1.0);
    CHECK_THROWS_AS(bernstein::approximate_by_truncation(expansion_field(e), Vec::zero(3), 0.5, 9),
                    std::invalid_argument);
  }
}

TEST_CASE("report sups are nondecreasing in the radius") {
  auto phi = eigenfields::make_torus_eigenfunction(2, {{{3, 4}, 0.7, -0.2}, {{5, 0}, 0.4, 0.9}});
  double prev_g = -1, prev_v = -1;
  for (double r : {0.1, 0.2, 0.4, 0.8, 1.4}) {
    GeodesicBall ball(Domain::torus(2), Vec{0.5, 1.0}, r);
    auto rep = bernstein::bernstein_ratio(phi, ball);
    CHECK(rep.grad_sup >= prev_g * (1 - 3e-9));
    CHECK(rep.val_sup >= prev_v * (1 - 3e-9));
    prev_g = rep.grad_sup;
    prev_v = rep.val_sup;
  }
}

TEST_CASE("classical baselines") {
  auto [t1, m1] = bernstein::classical_baselines(1);
  CHECK(t1 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(m1 == doctest::Approx(1.0).epsilon(1e-9));
  auto [t5, m5] = bernstein::classical_baselines(5);
  CHECK(t5 == doctest::Approx(5.0).epsilon(1e-7));
  CHECK(m5 == doctest::Approx(25.0).epsilon(1e-7));
  auto [t12, m12] = bernstein::classical_baselines(12);
  CHECK(t12 == doctest::Approx(12.0).epsilon(1e-6));
  CHECK(m12 == doctest::Approx(144.0).epsilon(1e-6));
  CHECK_THROWS_AS(bernstein::classical_baselines(0), std::invalid_argument);
}

TEST_CASE("sweep harness") {
  SUBCASE("config validation") {
    sweep::SweepConfig cfg;
    cfg.lambdas = {16.0};
    cfg.r_grid = {};
    CHECK_THROWS_AS(sweep::run_sweep(cfg), std::invalid_argument);
    cfg.r_grid = {0.1};
    cfg.lambdas = {};
    CHECK_THROWS_AS(sweep::run_sweep(cfg), std::invalid_argument);
  }
  SUBCASE("canonical sub-wavelength sweep and thread determinism") {
    sweep::SweepConfig cfg;
    cfg.manifold = "torus2";
    cfg.lambdas = {16.0};
    cfg.r_grid = sweep::log_spaced(0.05, 0.15, 6);
    cfg.centers = {Vec{0.0, 0.0}};
    cfg.style = sweep::FieldStyle::canonical;
    cfg.seed = 11;
    cfg.threads = 1;
    auto res1 = sweep::run_sweep(cfg);
    cfg.threads = 4;
    auto res4 = sweep::run_sweep(cfg);
    CHECK(res1.csv == res4.csv);
    CHECK(res1.rows.size() == 6);
    for (const auto& row : res1.rows) CHECK(row.ok);
    CHECK(res1.subwavelength_slope > 0.8);
    CHECK(res1.subwavelength_slope < 1.2);
    CHECK(res1.csv.find("manifold,lambda,r,center_id,grad_sup,val_sup,ratio,") == 0);
    CHECK(res1.summary_json.find("subwavelength") != std::string::npos);
  }
}
