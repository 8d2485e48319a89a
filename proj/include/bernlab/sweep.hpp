#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bernlab/bernstein.hpp"

namespace bernlab::sweep {

enum class FieldStyle { random, canonical };  // canonical: sin(m1 x1) / zonal

struct SweepConfig {
  std::string manifold = "torus2";  // torus2 | sphere2
  std::vector<double> lambdas;
  std::vector<double> r_grid;
  std::vector<Vec> centers;   // fixed centers; when empty, n_random_centers seeded draws
  int n_random_centers = 1;
  double delta = 1.0;
  FieldStyle style = FieldStyle::random;
  ResolutionPolicy policy;
  std::uint64_t seed = 1;
  int threads = 1;

  void validate() const;
};

struct SweepRow {
  double lambda = 0;
  double r = 0;
  int center_id = 0;
  bool ok = false;
  std::string error;
  bernstein::BernsteinReport rep;
};

struct Regression {
  std::string regime;
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
  int n_points = 0;
};

Regression ols(const std::string& regime, const std::vector<double>& x, const std::vector<double>& y);

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<Regression> regressions;
  std::string csv;          // byte-stable for a fixed config + seed
  std::string summary_json;
  double max_c_main = 0;
  double max_c_2d = 0;
  double max_c_df = 0;
  double subwavelength_slope = 0;  // n-weighted mean of per-lambda slopes
};

/// Run the (lambda, center, r) grid of Bernstein reports. Rows are computed
/// in parallel but stored and serialized in configuration order, so the CSV
/// bytes do not depend on the thread count.
SweepResult run_sweep(const SweepConfig& cfg);

std::vector<double> log_spaced(double lo, double hi, int n);

}  // namespace bernlab::sweep
