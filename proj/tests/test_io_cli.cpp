#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "bernlab/eigenfields.hpp"
#include "bernlab/frequency.hpp"
#include "bernlab/io.hpp"
#include "bernlab/supnorm.hpp"
#include "test_util.hpp"

using namespace bernlab;

TEST_CASE("expansion json round trip keeps full precision") {
  Rng rng(71);
  sphharm::HarmonicExpansion e = testutil::random_expansion(rng, 3, 9, 12, 1.3);
  e.set_coeff(4, 2, 0.12345678901234567);
  std::string text = io::expansion_to_json(e);
  sphharm::HarmonicExpansion back = io::expansion_from_json(text);
  CHECK(back.dim() == 3);
  CHECK(back.r_ref() == doctest::Approx(1.3));
  CHECK(back.coeff(4, 2) == doctest::Approx(0.12345678901234567).epsilon(1e-15));
  Vec x{0.2, -0.4, 0.5};
  CHECK(back.eval(x) == doctest::Approx(e.eval(x)).epsilon(1e-13));
  CHECK_THROWS_AS(io::expansion_from_json("{\"terms\": []}"), io::IoError);
}

TEST_CASE("eigenfunction spec round trip") {
  auto phi = eigenfields::make_torus_eigenfunction(2, {{{3, 4}, 0.5, -0.25}, {{5, 0}, 0.0, 1.0}});
  auto back = io::eigenfunction_from_json(io::eigenfunction_to_json(*phi));
  CHECK(back->lambda() == doctest::Approx(25.0));
  Vec p{1.1, 0.3};
  CHECK(back->value(p) == doctest::Approx(phi->value(p)).epsilon(1e-15));
}

TEST_CASE("csv ingest") {
  SUBCASE("three sample rows") {
    std::string text =
        "# domain=torus dim=2 period=6.283185307179586 band=1 provenance=unit-test\n"
        "x0,x1,value\n"
        "0,0,0\n"
        "1.5707963267948966,0,1\n"
        "3.141592653589793,1.0,0\n";
    io::SampledField s = io::ingest_csv_text(text);
    CHECK(s.points.size() == 3);
    CHECK(s.values[1] == doctest::Approx(1.0));
    CHECK(s.band_limit.has_value());
    CHECK(!s.has_gradients());
    // scattered fallback interpolation reproduces the sample values
    ScalarField f = s.field();
    CHECK(f.value(Vec{0.0, 0.0}) == doctest::Approx(0.0));
    CHECK(f.value(Vec{1.5707963267948966, 0.0}) == doctest::Approx(1.0));
  }
  SUBCASE("NaN row rejected with its line number") {
    std::string text = "# domain=torus dim=2 band=1\nx0,x1,value\n0,0,0\n0.5,nan,1\n";
    CHECK_THROWS_WITH_AS(io::ingest_csv_text(text), doctest::Contains("line 4"), io::IoError);
  }
  SUBCASE("duplicate points rejected") {
    std::string text = "# domain=torus dim=2 band=1\nx0,x1,value\n0,0,0\n0,0,1\n";
    CHECK_THROWS_WITH_AS(io::ingest_csv_text(text), doctest::Contains("duplicate"), io::IoError);
  }
  SUBCASE("json ingest") {
    std::string text = R"({"domain": "torus", "dim": 2, "band": 2,
      "points": [[0, 0], [1, 0], [0, 1]], "values": [0.5, 0.1, -0.2]})";
    io::SampledField s = io::ingest_json_text(text);
    CHECK(s.points.size() == 3);
    CHECK(s.values[2] == doctest::Approx(-0.2));
  }
}

TEST_CASE("grid interpolation against the analytic field") {
  auto phi = eigenfields::make_torus_eigenfunction(2, {{{1, 0}, 0.0, 1.0}});
  io::SampledField sf;
  sf.domain = Domain::torus(2);
  sf.band_limit = 1.0;
  sf.provenance = "grid-test";
  int n = 50;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Vec p{kTwoPi * i / n, kTwoPi * j / n};
      sf.points.push_back(p);
      sf.values.push_back(phi->value(p));
      sf.gradients.push_back(phi->riemannian_gradient(p));
    }
  std::string csv = io::sampled_to_csv(sf);
  io::SampledField back = io::ingest_csv_text(csv);
  ScalarField interp = back.field();
  CHECK(interp.has_gradient());
  GeodesicBall ball(Domain::torus(2), Vec{2.0, 0.5}, 0.6);
  double si = sup_norm(interp, ball).sup;
  double se = sup_norm(eigenfields::eigen_field(phi), ball).sup;
  CHECK(std::abs(si - se) / se < 1e-3);
}

TEST_CASE("gradient-free sampled fields reject gradient operations") {
  io::SampledField s = io::ingest_csv_text(
      "# domain=torus dim=2 band=1\nx0,x1,value\n0,0,0\n1,0,0.8\n2,0,0.9\n0,1,0.1\n");
  ScalarField f = s.field();
  CHECK(!f.has_gradient());
  CoefficientField id = CoefficientField::identity(2);
  CHECK_THROWS_AS(frequency_numeric(f, id, Vec{1.0, 0.5}, 0.3), std::domain_error);
}

TEST_CASE("sha256 and manifests") {
  CHECK(io::sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(io::sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  std::string path = "manifest_unit_test_artifact.csv";
  io::RunManifest man;
  man.start();
  man.config_snapshot = R"({"cmd": "unit"})";
  man.seed = 99;
  io::write_text_file(path, "a,b\n1,2\n");
  man.add_artifact(path);
  man.finish();
  std::string j = man.to_json();
  CHECK(j.find(io::sha256_hex("a,b\n1,2\n")) != std::string::npos);
  CHECK(j.find("\"seed\": 99") != std::string::npos);
  std::remove(path.c_str());
}
