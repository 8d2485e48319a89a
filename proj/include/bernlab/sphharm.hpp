#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "bernlab/geometry.hpp"
#include "bernlab/quadrature.hpp"

namespace bernlab::sphharm {

/// Dimension of the space of degree-k spherical harmonics on S^{d-1}.
int dim_harmonics(int d, int k);

/// Number of basis functions of degree <= kmax (kmax < 0 gives 0).
int basis_count(int d, int kmax);

/// Reproducing kernel of the degree-k harmonic space under the
/// average-over-sphere pairing, as a function of xi.eta. Z_k(xi,xi) = dim H_k.
double zonal_kernel(int d, int k, double cosine);

/// Within-degree basis index of the coordinate function x_axis (degree 1).
int coordinate_basis_index(int d, int axis);

/// Evaluate all solid harmonics S_{k,m}(x) = |x|^k Y_{k,m}(x/|x|) for
/// k <= kmax at x, in flat (degree-major, then basis-index) order.
/// values has basis_count(d,kmax) entries; grads, when requested, holds the
/// ambient gradient of each entry (idx*d + i). Stable up to degree ~250.
void eval_solid_basis(int d, int kmax, const Vec& x, std::vector<double>& values,
                      std::vector<double>* grads);

/// Normalized polar factor chain for dimension d: fills
/// p[n] = P_{l+n,l}(cos theta) for n = 0..nmax (the theta-factor of the basis,
/// scaled so that the full product basis is average-orthonormal), and
/// optionally its theta-derivative.
void polar_chain(int d, int l, double cos_theta, int nmax, double* p, double* pdot);

struct Term {
  int degree = 0;
  int index = 0;
  double coeff = 0;
};

/// Harmonic function h(x) = sum a_{k,m} Y_{k,m}(x/|x|) |x|^k stored as dense
/// per-degree coefficient blocks. Internally coefficients are kept scaled by
/// r_ref^k so that evaluation near |x| ~ r_ref stays well-conditioned for
/// degrees into the hundreds. Immutable in spirit: build once, then evaluate.
class HarmonicExpansion {
 public:
  explicit HarmonicExpansion(int d, double r_ref = 1.0);
  static HarmonicExpansion from_terms(int d, const std::vector<Term>& terms, double r_ref = 1.0);

  int dim() const { return d_; }
  double r_ref() const { return r_ref_; }
  bool zero() const;
  int max_degree() const;          // -1 when zero
  int min_degree_present() const;  // -1 when zero

  void set_coeff(int k, int m, double a);          // mathematical coefficient a_{k,m}
  double coeff(int k, int m) const;                // mathematical coefficient
  void set_amplitude(int k, int m, double a_ref);  // a_{k,m} * r_ref^k
  double amplitude(int k, int m) const;
  double degree_amplitude2(int k) const;  // A_k at r_ref: sum_m amplitude^2
  const std::vector<std::vector<double>>& blocks() const { return blocks_; }
  std::vector<Term> terms() const;  // mathematical coefficients, nonzero only

  /// Value and (optionally) ambient gradient at x (expansion coordinates).
  double eval(const Vec& x, Vec* grad = nullptr) const;

  /// Mean of h^2 over the sphere of radius rho: sum_k A_k rho^{2k}.
  double sphere_mean_square(double rho) const;
  /// Mean of h^2 over the solid ball of radius r: sum_k d/(2k+d) A_k r^{2k}.
  double ball_mean_square(double r) const;
  /// Coefficient-side frequency sum k A_k r^{2k} / sum A_k r^{2k}.
  /// Throws std::domain_error on the zero expansion.
  double exact_frequency(double r) const;

  /// Split into degrees <= K and degrees > K; head + tail == *this termwise.
  std::pair<HarmonicExpansion, HarmonicExpansion> truncate(int K) const;

 private:
  int d_;
  double r_ref_;
  std::vector<std::vector<double>> blocks_;  // blocks_[k][m] = a_{k,m} r_ref^k
};

/// Per-direction, per-degree partial sums of an expansion: for unit xi,
/// value(c + rho xi) = sum_k v_k(xi) (rho/r_ref)^k and
/// grad(c + rho xi) = sum_k g_k(xi) (rho/r_ref)^{k-1} / r_ref.
struct SphereSlices {
  int d = 0;
  int kmax = -1;
  size_t n_dirs = 0;
  std::vector<double> v;  // [j*(kmax+1) + k]
  std::vector<double> g;  // [(j*(kmax+1) + k)*d + i]
  bool with_grad = false;
};
SphereSlices sphere_slices(const HarmonicExpansion& e, const std::vector<Vec>& dirs, bool with_grad);

/// Dense evaluation of a d=3 expansion on a theta x phi product grid of the
/// sphere of given radius, via azimuthal-order contraction. Optionally also
/// fills the Riemannian-plus-radial gradient norm |grad h| at each node.
/// theta nodes are pi*(i+1/2)/n_theta, phi nodes 2*pi*j/n_phi.
void dense_sphere_values(const HarmonicExpansion& e, double radius, int n_theta, int n_phi,
                         std::vector<double>& values, std::vector<double>* grad_norm);

/// Project a function given on the unit sphere S^{d-1} (as a callable on unit
/// directions) onto the average-orthonormal basis up to degree K, using a
/// product rule exact to `order`. Returns coefficients in flat basis order.
std::vector<double> project_on_sphere(int d, int K, int order,
                                      const std::function<double(const Vec&)>& f);

/// Expansion of the coordinate function x_axis (degree-1, coefficient 1/sqrt(d)).
HarmonicExpansion coordinate_expansion(int d, int axis, double r_ref = 1.0);

}  // namespace bernlab::sphharm
