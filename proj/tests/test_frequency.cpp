#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bernlab/eigenfields.hpp"
#include "bernlab/frequency.hpp"
#include "test_util.hpp"

using namespace bernlab;
using sphharm::HarmonicExpansion;

TEST_CASE("mu weight") {
  CoefficientField id = CoefficientField::identity(3);
  CHECK(mu_weight(id, Vec{0.2, 0.3, -0.4}) == doctest::Approx(1.0));
  CHECK(mu_weight(id, Vec::zero(3)) == doctest::Approx(1.0));  // identity at the origin
  CoefficientField diag = CoefficientField::diagonal({2.0, 1.0});
  CHECK(mu_weight(diag, Vec{1.0, 0.0}) == doctest::Approx(2.0));
  double c = 1.0 / std::sqrt(2.0);
  CHECK(mu_weight(diag, Vec{c, c}) == doctest::Approx(1.5));
  CHECK(diag.ellipticity() >= 2.0);
  CHECK(diag.check_ellipticity(7, 100, 2.0));
  CHECK_THROWS_AS(mu_weight(diag, Vec::zero(2)), std::domain_error);
}

TEST_CASE("general coefficient field frequency") {
  // u = x1 solves div(A grad u) = 0 for constant A = diag(2,1,1); the
  // weighted frequency has the closed form
  //   r * 2 |B_r| / int_dB mu y1^2 = (2/3) / (8/15) = 5/4
  CoefficientField A = CoefficientField::diagonal({2.0, 1.0, 1.0});
  ScalarField u(
      Domain::euclidean_space(3),
      [](const Vec& x) { return FieldEval{x[0], true, Vec{1.0, 0.0, 0.0}}; }, 1.0, "x1");
  for (double r : {0.5, 1.0, 1.7})
    CHECK(frequency_numeric(u, A, Vec::zero(3), r, {12, 12}) ==
          doctest::Approx(1.25).epsilon(1e-12));
  // reduces to the plain frequency 1 when A is the identity
  CoefficientField id = CoefficientField::identity(3);
  CHECK(frequency_numeric(u, id, Vec::zero(3), 1.0, {12, 12}) == doctest::Approx(1.0));
}

TEST_CASE("numeric frequency") {
  CoefficientField id = CoefficientField::identity(3);
  SUBCASE("pure degree gives the degree") {
    for (int k : {1, 3, 7, 12}) {
      auto e = std::make_shared<HarmonicExpansion>(3);
      e->set_coeff(k, 1 % sphharm::dim_harmonics(3, k), 0.7);
      ScalarField f = expansion_field(e);
      for (double r : {0.4, 1.0})
        CHECK(frequency_numeric(f, id, Vec::zero(3), r) == doctest::Approx((double)k).epsilon(1e-8));
    }
  }
  SUBCASE("constant field has zero frequency") {
    auto e = std::make_shared<HarmonicExpansion>(3);
    e->set_coeff(0, 0, 4.2);
    CHECK(frequency_numeric(expansion_field(e), id, Vec::zero(3), 0.8) == doctest::Approx(0.0));
  }
  SUBCASE("mixed expansion matches the closed form") {
    auto e = std::make_shared<HarmonicExpansion>(3);
    e->set_coeff(0, 0, 1.0);
    e->set_coeff(2, 0, 1.0);
    double num = frequency_numeric(expansion_field(e), id, Vec::zero(3), 1.0);
    CHECK(num == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(num == doctest::Approx(e->exact_frequency(1.0)).epsilon(1e-8));
  }
  SUBCASE("generic node-wise path agrees with the slice path") {
    Rng rng(19);
    auto e = std::make_shared<HarmonicExpansion>(testutil::random_expansion(rng, 3, 8, 10));
    ScalarField fast = expansion_field(e);
    // strip the fast-path hooks to force generic quadrature
    ScalarField slow(fast.domain(), [e](const Vec& x) {
      FieldEval out;
      out.has_grad = true;
      out.value = e->eval(x, &out.grad);
      return out;
    }, fast.band_limit(), "generic");
    double a = frequency_numeric(fast, id, Vec::zero(3), 0.9);
    double b = frequency_numeric(slow, id, Vec::zero(3), 0.9);
    CHECK(a == doctest::Approx(b).epsilon(1e-10));
  }
  SUBCASE("vanishing boundary mass is reported") {
    auto e = std::make_shared<HarmonicExpansion>(3);  // zero expansion
    CHECK_THROWS_AS(frequency_numeric(expansion_field(e), id, Vec::zero(3), 1.0),
                    std::domain_error);
  }
  SUBCASE("scaled reference radius feeds the slice path correctly") {
    Rng rng(29);
    auto e = std::make_shared<HarmonicExpansion>(testutil::random_expansion(rng, 3, 9, 10, 2.5));
    ScalarField f = expansion_field(e);
    for (double r : {0.4, 0.8, 2.0})
      CHECK(frequency_numeric(f, id, Vec::zero(3), r) ==
            doctest::Approx(e->exact_frequency(r)).epsilon(1e-9));
    double di = doubling_index(f, Vec::zero(3), 0.7);
    double oracle = 0.5 * std::log2(e->ball_mean_square(1.4) / e->ball_mean_square(0.7));
    CHECK(di == doctest::Approx(oracle).epsilon(1e-9));
  }
  SUBCASE("tiny radii stay well posed") {
    HarmonicExpansion e(3);
    e.set_coeff(2, 1, 3.0);
    e.set_coeff(7, 0, 1.0);
    CHECK(e.exact_frequency(1e-150) == doctest::Approx(2.0));
    CHECK(e.exact_frequency(1e150) == doctest::Approx(7.0));
  }
}

TEST_CASE("frequency profiles") {
  CoefficientField id = CoefficientField::identity(3);
  SUBCASE("harmonic profiles are monotone to 1e-7") {
    Rng rng(23);
    for (int t = 0; t < 4; ++t) {
      auto e = std::make_shared<HarmonicExpansion>(testutil::random_expansion(rng, 3, 10, 10));
      std::vector<double> grid;
      for (int i = 0; i < 20; ++i) grid.push_back(0.1 * std::pow(15.0, i / 19.0));
      FrequencyProfile p = frequency_profile(expansion_field(e), id, Vec::zero(3), grid);
      CHECK(p.max_downward_step() <= 1e-7);
    }
  }
  SUBCASE("single degree profile is constant") {
    auto e = std::make_shared<HarmonicExpansion>(3);
    e->set_coeff(5, 3, 1.0);
    FrequencyProfile p = frequency_profile(expansion_field(e), id, Vec::zero(3), {0.2, 0.5, 1.0, 2.0});
    for (double v : p.values) CHECK(v == doctest::Approx(5.0).epsilon(1e-9));
  }
  SUBCASE("lifted eigenfunction frequency stays of order sqrt(lambda)") {
    auto phi = eigenfields::make_torus_eigenfunction(2, {{{1, 0}, 0.0, 1.0}});
    auto lf = eigenfields::lift(phi);
    CoefficientField id3 = CoefficientField::identity(3);
    FrequencyProfile p =
        frequency_profile(lf.field, id3, Vec::zero(3), {0.2, 0.4, 0.6, 0.8, 1.0});
    for (double v : p.values) CHECK(v <= 3.0 * std::sqrt(lf.lambda));
    CHECK(p.values.back() > 0);
  }
  SUBCASE("grid validation") {
    auto e = std::make_shared<HarmonicExpansion>(3);
    e->set_coeff(1, 0, 1.0);
    CHECK_THROWS_AS(frequency_profile(expansion_field(e), id, Vec::zero(3), {}),
                    std::invalid_argument);
    CHECK_THROWS_AS(frequency_profile(expansion_field(e), id, Vec::zero(3), {0.5, 0.4}),
                    std::invalid_argument);
  }
  SUBCASE("profile csv shape") {
    auto e = std::make_shared<HarmonicExpansion>(3);
    e->set_coeff(2, 1, 1.0);
    FrequencyProfile p = frequency_profile(expansion_field(e), id, Vec::zero(3), {0.5, 1.0});
    std::string csv = p.to_csv();
    CHECK(csv.find("center_coords,r,N,weight,quad_order") == 0);
    CHECK(csv.find("identity") != std::string::npos);
  }
}

TEST_CASE("doubling index") {
  SUBCASE("pure degree equals the degree") {
    for (int k : {0, 2, 6}) {
      auto e = std::make_shared<HarmonicExpansion>(3);
      e->set_coeff(k, 0, 1.1);
      double di = doubling_index(expansion_field(e), Vec::zero(3), 0.5);
      CHECK(di == doctest::Approx((double)k).epsilon(1e-8));
    }
  }
  SUBCASE("mixed expansion bounded by the frequency") {
    auto e = std::make_shared<HarmonicExpansion>(3);
    e->set_coeff(0, 0, 1.0);
    e->set_coeff(3, 2, 1.0);
    double di = doubling_index(expansion_field(e), Vec::zero(3), 0.5);
    CHECK(di > 0.0);
    CHECK(di < 3.0);
    CHECK(di <= e->exact_frequency(1.0) + 1e-8);
    // closed-form oracle
    double oracle = 0.5 * std::log2(e->ball_mean_square(1.0) / e->ball_mean_square(0.5));
    CHECK(di == doctest::Approx(oracle).epsilon(1e-10));
  }
  SUBCASE("zero inner mass rejected") {
    auto e = std::make_shared<HarmonicExpansion>(3);
    CHECK_THROWS_AS(doubling_index(expansion_field(e), Vec::zero(3), 0.5), std::domain_error);
  }
}

TEST_CASE("sup versus boundary L2") {
  SUBCASE("constant field") {
    auto e = std::make_shared<HarmonicExpansion>(3);
    e->set_coeff(0, 0, 3.0);
    auto rep = sup_vs_boundary_l2(expansion_field(e), Vec::zero(3), 1.0, 10.0);
    CHECK(rep.ratio == doctest::Approx(std::pow(10.0, -1.5)).epsilon(1e-9));
  }
  SUBCASE("pure zonal degree") {
    int k = 6;
    auto e = std::make_shared<HarmonicExpansion>(3);
    e->set_coeff(k, 0, 1.0);
    auto rep = sup_vs_boundary_l2(expansion_field(e), Vec::zero(3), 1.0, (double)k);
    // boundary rms of a unit-coefficient degree-k term is 1, so the ratio is
    // sup |Y_k| / k^{3/2}; for the zonal function sup |Y_k| = sqrt(2k+1)
    CHECK(rep.boundary_rms == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.ratio == doctest::Approx(std::sqrt(2.0 * k + 1) / std::pow((double)k, 1.5)).epsilon(1e-6));
    CHECK(rep.ratio < 1.0);
  }
}
