#pragma once

#include <memory>
#include <string>
#include <vector>

#include "bernlab/scalar_field.hpp"
#include "bernlab/supnorm.hpp"

namespace bernlab::eigenfields {

/// Laplace-Beltrami eigenfunction on a model manifold: Delta phi + lambda phi = 0.
class Eigenfunction {
 public:
  virtual ~Eigenfunction() = default;
  virtual Domain domain() const = 0;
  virtual double lambda() const = 0;
  virtual double value(const Vec& x) const = 0;
  /// Riemannian gradient as an ambient vector (tangential on spheres).
  virtual Vec riemannian_gradient(const Vec& x) const = 0;
  double riemannian_gradient_norm(const Vec& x) const { return riemannian_gradient(x).norm(); }
};

struct TorusMode {
  std::vector<int> m;
  double cos_coeff = 0;
  double sin_coeff = 0;
};

/// phi(x) = sum over modes of c cos(m.x) + s sin(m.x) on the 2*pi-periodic
/// torus; all modes share |m|^2 = lambda.
class TorusEigenfunction final : public Eigenfunction {
 public:
  TorusEigenfunction(int d, std::vector<TorusMode> modes);
  Domain domain() const override { return Domain::torus(d_); }
  double lambda() const override { return lambda_; }
  double value(const Vec& x) const override;
  Vec riemannian_gradient(const Vec& x) const override;
  const std::vector<TorusMode>& modes() const { return modes_; }
  int dim() const { return d_; }
  double coeff_abs_sum() const;

 private:
  int d_;
  std::vector<TorusMode> modes_;
  double lambda_;
};

/// Restriction of a degree-k solid harmonic in R^{n+1} to S^n;
/// lambda = k (k + n - 1).
class SphereEigenfunction final : public Eigenfunction {
 public:
  SphereEigenfunction(int n, int k, const std::vector<double>& coefficients);
  Domain domain() const override { return Domain::sphere(n_); }
  double lambda() const override { return (double)k_ * (k_ + n_ - 1); }
  double value(const Vec& x) const override;
  Vec riemannian_gradient(const Vec& x) const override;
  int sphere_dim() const { return n_; }
  int degree() const { return k_; }
  const sphharm::HarmonicExpansion& polynomial() const { return *poly_; }

 private:
  int n_;
  int k_;
  std::shared_ptr<sphharm::HarmonicExpansion> poly_;
};

std::shared_ptr<TorusEigenfunction> make_torus_eigenfunction(int d, const std::vector<TorusMode>& modes);
std::shared_ptr<SphereEigenfunction> make_sphere_eigenfunction(int n, int k,
                                                               const std::vector<double>& coefficients);
/// Zonal (polar-axis) degree-k eigenfunction normalized to value 1 at the pole.
std::shared_ptr<SphereEigenfunction> make_zonal_sphere_eigenfunction(int n, int k);

/// Integer mode vectors with |m|^2 = norm2, one representative per +-m pair.
std::vector<std::vector<int>> integer_modes_with_norm2(int d, int norm2);

/// phi as a ScalarField on its torus/sphere domain (band limit ~ sqrt(lambda)).
ScalarField eigen_field(std::shared_ptr<const Eigenfunction> phi);

/// Dong's q = |grad phi|^2 + (lambda/2) phi^2 on 2-d manifolds.
double dong_q(const Eigenfunction& phi, const Vec& x);
ScalarField dong_q_field(std::shared_ptr<const Eigenfunction> phi);

/// The harmonic lift u(x,t) = phi(x) e^{sqrt(lambda) t} on M x R.
struct LiftedField {
  std::shared_ptr<const Eigenfunction> base;
  double lambda = 0;
  ScalarField field;
};
LiftedField lift(std::shared_ptr<const Eigenfunction> phi);

/// sinh(sqrt(H) r)/sqrt(H); equals r when H = 0.
double rho0(double r, double curvature_bound);

struct DongState {
  std::shared_ptr<const Eigenfunction> phi;
  double curvature_bound = 0;  // H >= |sectional curvature|
  double gauss_curvature = 0;  // K of the model surface
};
DongState make_dong_state(std::shared_ptr<const Eigenfunction> phi);

struct DongLogQReport {
  double lambda = 0;
  double bound = 0;  // -lambda + 2 min(K, 0)
  int used = 0;
  int skipped = 0;
  double min_margin = 0;  // min over points of fd_laplacian(log q) - bound
};

/// Finite-difference Laplacian of log q at the given points; points where q
/// falls below q_floor_rel * (estimated sup q) are skipped.
DongLogQReport dong_log_q_laplacian_check(std::shared_ptr<const Eigenfunction> phi,
                                          const std::vector<Vec>& points, double h_fd,
                                          double q_floor_rel = 1e-8);

struct DongProfile {
  std::vector<double> r, t, M, F, d2F_dt2;
  std::string to_csv() const;
};

/// M(r) = sup of q over the geodesic ball B(x0, r), F = log M, t(r) the
/// Dong time change integral of 1/rho0 from the first grid radius.
DongProfile dong_F_profile(const DongState& state, const Vec& x0, const std::vector<double>& r_grid,
                           const ResolutionPolicy& policy = {});

}  // namespace bernlab::eigenfields
