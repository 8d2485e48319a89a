#pragma once

#include <memory>
#include <utility>

#include "bernlab/eigenfields.hpp"
#include "bernlab/frequency.hpp"
#include "bernlab/supnorm.hpp"

namespace bernlab::bernstein {

/// Right-hand sides of the comparable gradient bounds, evaluated at (lambda, r).
/// Log factors are clamped below at 1 so every bound stays positive at small
/// lambda.
struct BoundSet {
  double b_global = 0;  // sqrt(lambda)
  double b_df = 0;      // lambda^{(d+2)/2} / r
  double b_dong = 0;    // max(sqrt(lambda)/r, lambda^{3/4})
  double b_main = 0;    // max(sqrt(lambda) log^{2+delta} / r, lambda log^{2+delta})
  double b_2d = 0;      // max(sqrt(lambda)/r, sqrt(lambda) log)
  double b_conj = 0;    // sqrt(lambda)/r
};
BoundSet bounds_for(double lambda, double r, int manifold_dim, double delta);

struct BernsteinReport {
  double lambda = 0;
  double r = 0;
  double grad_sup = 0;
  double val_sup = 0;
  double ratio = 0;
  BoundSet bounds;
  double c_global = 0, c_df = 0, c_dong = 0, c_main = 0, c_2d = 0, c_conj = 0;
  double resolution_h = 0;
  int refine_depth = 0;
};

/// Measure sup|grad phi| / sup|phi| over a geodesic ball and evaluate every
/// bound's implied constant.
BernsteinReport bernstein_ratio(std::shared_ptr<const eigenfields::Eigenfunction> phi,
                                const GeodesicBall& ball, const ResolutionPolicy& policy = {},
                                double delta = 1.0);

/// sup over B(c, (1 + 1/L) r) divided by sup over B(c, r).
double growth_check(const ScalarField& field, const Vec& center, double r, double L,
                    const ResolutionPolicy& policy = {});

struct LpBernsteinReport {
  double lhs = 0;       // |grad P|_p over B(0, r)
  double rhs = 0;       // (N / r) |P|_p
  double constant = 0;  // lhs / rhs
};

/// L^p Bernstein ratio for a harmonic expansion; p in {1, 2} uses ball
/// quadrature, p = infinity the sup machinery.
LpBernsteinReport polynomial_bernstein_lp(const sphharm::HarmonicExpansion& P, double r, double p,
                                          const ResolutionPolicy& policy = {});

/// Ratio of solid-ball L^p norms at radii (1 + 1/N) r and r.
double lp_growth_check(const sphharm::HarmonicExpansion& P, double r, int N, double p);

struct TruncationResult {
  sphharm::HarmonicExpansion head;
  double tail_sup = 0;
  double ball_mean_abs = 0;
  double relative_tail = 0;
  int fit_order = 0;

  TruncationResult() : head(2) {}
};

/// Fit the field on the sphere of radius 1.5 r around `center`, keep degrees
/// <= 5 N_declared, and measure sup|field - head| over B(center, (1+1/N) r)
/// against the ball average of |field|.
TruncationResult approximate_by_truncation(const ScalarField& field, const Vec& center, double r,
                                           int N_declared, int fit_order = 0,
                                           const ResolutionPolicy& policy = {});

/// Extremal ratios of the classical displays: sin(N theta) on the circle
/// (gives N) and the degree-N Chebyshev polynomial on [-1, 1] (gives N^2),
/// both measured by the 1-d sup machinery.
std::pair<double, double> classical_baselines(int N);

}  // namespace bernlab::bernstein
