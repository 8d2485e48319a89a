#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bernlab/scalar_field.hpp"
#include "bernlab/supnorm.hpp"

namespace bernlab {

/// Symmetric, uniformly elliptic coefficient matrix A(x).
class CoefficientField {
 public:
  using MatFn = std::function<void(const Vec&, double*)>;  // fills d*d row-major

  CoefficientField(int d, MatFn fn, double ellipticity, bool identity_at_origin)
      : d_(d), fn_(std::move(fn)), lambda_(ellipticity), id_origin_(identity_at_origin) {
    if (d < 1) throw std::invalid_argument("CoefficientField: bad dimension");
    if (!(ellipticity >= 1.0)) throw std::invalid_argument("CoefficientField: ellipticity must be >= 1");
  }
  static CoefficientField identity(int d);
  static CoefficientField diagonal(const std::vector<double>& diag);

  int dim() const { return d_; }
  double ellipticity() const { return lambda_; }
  bool identity_at_origin() const { return id_origin_; }
  bool is_identity() const { return identity_; }

  void matrix(const Vec& x, double* out) const { fn_(x, out); }
  Vec apply(const Vec& x, const Vec& v) const;
  double quadratic_form(const Vec& x, const Vec& v) const;

  /// Spot-check of the declared ellipticity bounds on random (x, xi) pairs.
  bool check_ellipticity(std::uint64_t seed, int samples, double box_halfwidth) const;

  bool identity_ = false;

 private:
  int d_;
  MatFn fn_;
  double lambda_;
  bool id_origin_;
};

/// mu(x) = A(x) x . x / |x|^2; equals 1 at x = 0 for identity-at-origin A.
double mu_weight(const CoefficientField& A, const Vec& x);

struct QuadratureOrders {
  int sphere = 0;  // 0 = derived from the field band limit / expansion degree
  int radial = 0;
};

/// Numeric frequency r * int_B A grad u . grad u / int_dB mu u^2 via ball and
/// sphere quadrature. Expansion-backed fields centered at the expansion
/// origin use per-degree slice tables; everything else evaluates node-wise.
double frequency_numeric(const ScalarField& field, const CoefficientField& A, const Vec& center,
                         double r, QuadratureOrders orders = {});

struct FrequencyProfile {
  Vec center;
  std::vector<double> radii;
  std::vector<double> values;
  std::string weight;
  int quad_order = 0;

  double max_downward_step() const;
  std::string to_csv() const;
};

/// Frequency sampled on an increasing radius grid (slice tables shared across
/// radii for expansion-backed fields).
FrequencyProfile frequency_profile(const ScalarField& field, const CoefficientField& A,
                                   const Vec& center, const std::vector<double>& r_grid,
                                   QuadratureOrders orders = {});

/// log2 of the ball mean-square ratio between radii 2r and r, halved so that
/// it is directly comparable to the frequency.
double doubling_index(const ScalarField& field, const Vec& center, double r,
                      QuadratureOrders orders = {});

struct SupBoundaryReport {
  double sup = 0;
  double boundary_rms = 0;  // sqrt of the boundary mean square
  double ratio = 0;         // sup / (N^{d/2} boundary_rms)
};

/// sup_B |u| against N^{d/2} (avg_dB u^2)^{1/2}.
SupBoundaryReport sup_vs_boundary_l2(const ScalarField& field, const Vec& center, double r,
                                     double N_declared, const ResolutionPolicy& policy = {},
                                     QuadratureOrders orders = {});

}  // namespace bernlab
