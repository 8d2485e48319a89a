#pragma once

#include <vector>

#include "bernlab/geometry.hpp"

namespace bernlab {

/// Nodes and positive weights on a region. Weights sum to the region measure
/// (surface area for spheres, volume for balls); use average() for the
/// mean-value pairing.
struct Quadrature {
  std::vector<Vec> nodes;
  std::vector<double> weights;
  double total_weight = 0;
  int exactness_degree = 0;

  size_t size() const { return nodes.size(); }

  template <class F>
  double integrate(F&& f) const {
    double s = 0;
    for (size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
  template <class F>
  double average(F&& f) const {
    return integrate(f) / total_weight;
  }
};

/// Gauss-Legendre rule on [a, b]: n nodes, exact for degree <= 2n-1.
void gauss_legendre(int n, double a, double b, std::vector<double>& nodes, std::vector<double>& weights);

/// Gauss-Chebyshev rule of the second kind on [-1, 1] for weight sqrt(1-t^2):
/// closed-form nodes/weights, exact for degree <= 2n-1.
void gauss_chebyshev2(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Rule on [-1,1] for the weight (1-t^2)^((d-3)/2) (the polar factor of the
/// d-sphere), exact for polynomial degree <= order.
void polar_rule(int d, int order, std::vector<double>& nodes, std::vector<double>& weights);

/// Surface area of the unit sphere S^{d-1} in R^d.
double sphere_surface_area(int d);

/// Product rule on the unit sphere S^{d-1} in R^d, exact for spherical
/// polynomials of degree <= order. Weights sum to the surface area.
Quadrature sphere_rule(int d, int order);

/// Rule on the ball B(0, r) in R^d: radial Gauss (with the r^{d-1} factor
/// absorbed into the weights) tensor sphere_rule. Exact for products of a
/// radial polynomial of degree <= radial_order with a spherical polynomial of
/// degree <= sphere_order. Weights sum to the ball volume.
Quadrature ball_rule(int d, int radial_order, int sphere_order, double r);

}  // namespace bernlab
