#include "bernlab/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace bernlab {

void gauss_legendre(int n, double a, double b, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const int m = (n + 1) / 2;
  const double xm = 0.5 * (b + a), xl = 0.5 * (b - a);
  for (int i = 0; i < m; ++i) {
    // Newton from the Chebyshev-angle initial guess.
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    double p1 = 1.0, p2 = 0.0;
    for (int j = 0; j < n; ++j) {
      double p3 = p2;
      p2 = p1;
      p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
    }
    pp = n * (z * p1 - p2) / (z * z - 1.0);
    nodes[i] = xm - xl * z;
    nodes[n - 1 - i] = xm + xl * z;
    weights[i] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
    weights[n - 1 - i] = weights[i];
  }
}

void gauss_chebyshev2(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_chebyshev2: n must be >= 1");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 1; i <= n; ++i) {
    double th = kPi * i / (n + 1.0);
    nodes[i - 1] = std::cos(th);
    double s = std::sin(th);
    weights[i - 1] = kPi / (n + 1.0) * s * s;
  }
}

void polar_rule(int d, int order, std::vector<double>& nodes, std::vector<double>& weights) {
  if (d < 3) throw std::invalid_argument("polar_rule: needs d >= 3");
  if (order < 1) order = 1;
  if (d % 2 == 1) {
    // (1-t^2)^{(d-3)/2} is a polynomial of degree d-3: absorb it into the
    // integrand and bump the Gauss-Legendre order accordingly.
    int n = (order + d - 2 + 1) / 2;
    gauss_legendre(n, -1.0, 1.0, nodes, weights);
    for (size_t i = 0; i < nodes.size(); ++i) {
      double w = 1.0;
      double u = 1.0 - nodes[i] * nodes[i];
      for (int p = 0; p < (d - 3) / 2; ++p) w *= u;
      weights[i] *= w;
    }
  } else {
    // (1-t^2)^{(d-3)/2} = sqrt(1-t^2) * (1-t^2)^{(d-4)/2}: Chebyshev-U rule
    // with the polynomial remainder folded into the weights.
    int n = (order + d - 3 + 1) / 2;
    if (n < 1) n = 1;
    gauss_chebyshev2(n, nodes, weights);
    for (size_t i = 0; i < nodes.size(); ++i) {
      double w = 1.0;
      double u = 1.0 - nodes[i] * nodes[i];
      for (int p = 0; p < (d - 4) / 2; ++p) w *= u;
      weights[i] *= w;
    }
  }
}

double sphere_surface_area(int d) {
  if (d < 1) throw std::invalid_argument("sphere_surface_area: d must be >= 1");
  return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d);
}

Quadrature sphere_rule(int d, int order) {
  if (d < 2) throw std::invalid_argument("sphere_rule: d must be >= 2");
  if (order < 1) throw std::invalid_argument("sphere_rule: order must be >= 1");
  Quadrature q;
  q.exactness_degree = order;
  if (d == 2) {
    int n = order + 1;
    double w = kTwoPi / n;
    q.nodes.reserve(n);
    q.weights.assign(n, w);
    for (int j = 0; j < n; ++j) {
      double ph = kTwoPi * j / n;
      q.nodes.push_back(Vec{std::cos(ph), std::sin(ph)});
    }
    q.total_weight = kTwoPi;
    return q;
  }
  std::vector<double> t, wt;
  polar_rule(d, order, t, wt);
  Quadrature sub = sphere_rule(d - 1, order);
  q.nodes.reserve(t.size() * sub.size());
  q.weights.reserve(t.size() * sub.size());
  double tot = 0;
  for (size_t i = 0; i < t.size(); ++i) {
    double s = std::sqrt(std::max(0.0, 1.0 - t[i] * t[i]));
    for (size_t j = 0; j < sub.size(); ++j) {
      Vec p(d);
      for (int a = 0; a < d - 1; ++a) p[a] = s * sub.nodes[j][a];
      p[d - 1] = t[i];
      q.nodes.push_back(p);
      double w = wt[i] * sub.weights[j];
      q.weights.push_back(w);
      tot += w;
    }
  }
  q.total_weight = tot;
  return q;
}

Quadrature ball_rule(int d, int radial_order, int sphere_order, double r) {
  if (d < 1) throw std::invalid_argument("ball_rule: d must be >= 1");
  if (!(r > 0)) throw std::invalid_argument("ball_rule: r must be positive");
  if (radial_order < 1 || sphere_order < 1) throw std::invalid_argument("ball_rule: orders must be >= 1");
  Quadrature q;
  q.exactness_degree = std::min(radial_order, sphere_order);
  std::vector<double> rho, wr;
  int n = (radial_order + d - 1 + 1 + 1) / 2;  // exact for g(rho)*rho^{d-1}, deg g <= radial_order
  gauss_legendre(n, 0.0, r, rho, wr);
  if (d == 1) {
    // interval [-r, r]
    Quadrature q1;
    q1.exactness_degree = radial_order;
    std::vector<double> x, w;
    gauss_legendre(n, -r, r, x, w);
    for (size_t i = 0; i < x.size(); ++i) {
      q1.nodes.push_back(Vec{x[i]});
      q1.weights.push_back(w[i]);
      q1.total_weight += w[i];
    }
    return q1;
  }
  Quadrature sph = sphere_rule(d, sphere_order);
  q.nodes.reserve(rho.size() * sph.size());
  q.weights.reserve(rho.size() * sph.size());
  double tot = 0;
  for (size_t i = 0; i < rho.size(); ++i) {
    double wrad = wr[i] * std::pow(rho[i], d - 1);
    for (size_t j = 0; j < sph.size(); ++j) {
      q.nodes.push_back(sph.nodes[j] * rho[i]);
      double w = wrad * sph.weights[j];
      q.weights.push_back(w);
      tot += w;
    }
  }
  q.total_weight = tot;
  return q;
}

}  // namespace bernlab
