#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bernlab {

inline constexpr int kMaxCoordDim = 8;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Fixed-capacity coordinate vector. Points on every supported manifold fit
/// in kMaxCoordDim coordinates; keeping it on the stack keeps grid scans
/// allocation-free.
struct Vec {
  std::array<double, kMaxCoordDim> c{};
  int n = 0;

  Vec() = default;
  explicit Vec(int dim) : n(dim) {
    if (dim < 0 || dim > kMaxCoordDim) throw std::invalid_argument("Vec: bad dimension");
  }
  Vec(std::initializer_list<double> xs) {
    if ((int)xs.size() > kMaxCoordDim) throw std::invalid_argument("Vec: too many coords");
    n = (int)xs.size();
    int i = 0;
    for (double v : xs) c[i++] = v;
  }
  static Vec from(std::span<const double> xs) {
    Vec v((int)xs.size());
    for (int i = 0; i < v.n; ++i) v.c[i] = xs[i];
    return v;
  }
  static Vec zero(int dim) { return Vec(dim); }
  static Vec axis(int dim, int i, double scale = 1.0) {
    Vec v(dim);
    v.c[i] = scale;
    return v;
  }

  int size() const { return n; }
  double operator[](int i) const { return c[i]; }
  double& operator[](int i) { return c[i]; }
  std::span<const double> span() const { return {c.data(), (size_t)n}; }

  double dot(const Vec& o) const {
    double s = 0;
    for (int i = 0; i < n; ++i) s += c[i] * o.c[i];
    return s;
  }
  double norm2() const { return dot(*this); }
  double norm() const { return std::sqrt(norm2()); }
  Vec operator+(const Vec& o) const {
    Vec r = *this;
    for (int i = 0; i < n; ++i) r.c[i] += o.c[i];
    return r;
  }
  Vec operator-(const Vec& o) const {
    Vec r = *this;
    for (int i = 0; i < n; ++i) r.c[i] -= o.c[i];
    return r;
  }
  Vec operator*(double a) const {
    Vec r = *this;
    for (int i = 0; i < n; ++i) r.c[i] *= a;
    return r;
  }
  Vec& axpy(double a, const Vec& o) {
    for (int i = 0; i < n; ++i) c[i] += a * o.c[i];
    return *this;
  }
  Vec normalized() const {
    double m = norm();
    if (m == 0) throw std::domain_error("Vec: cannot normalize zero vector");
    return *this * (1.0 / m);
  }
};

enum class Manifold { euclidean, torus, sphere, product_lift };

/// Domain of a scalar field. `dim` is the manifold dimension; points carry
/// coord_dim() coordinates (spheres are embedded, lifts append a t-axis).
struct Domain {
  Manifold kind = Manifold::euclidean;
  int dim = 1;
  double period = kTwoPi;               // torus only
  Manifold base = Manifold::euclidean;  // product_lift only

  static Domain euclidean_space(int d) {
    if (d < 1 || d > kMaxCoordDim) throw std::invalid_argument("euclidean_space: bad d");
    return {Manifold::euclidean, d};
  }
  static Domain torus(int d, double period = kTwoPi) {
    if (d < 1 || d > kMaxCoordDim) throw std::invalid_argument("torus: bad d");
    if (!(period > 0)) throw std::invalid_argument("torus: period must be positive");
    return {Manifold::torus, d, period};
  }
  static Domain sphere(int n) {
    if (n < 1 || n + 1 > kMaxCoordDim) throw std::invalid_argument("sphere: bad n");
    return {Manifold::sphere, n};
  }
  static Domain lift_of(const Domain& b) {
    if (b.kind == Manifold::product_lift) throw std::invalid_argument("lift_of: already a lift");
    Domain d;
    d.kind = Manifold::product_lift;
    d.dim = b.dim + 1;
    d.period = b.period;
    d.base = b.kind;
    return d;
  }

  int coord_dim() const {
    switch (kind) {
      case Manifold::euclidean:
      case Manifold::torus: return dim;
      case Manifold::sphere: return dim + 1;
      case Manifold::product_lift: return base == Manifold::sphere ? dim + 1 : dim;
    }
    return dim;
  }
  int base_dim() const { return dim - 1; }  // product_lift only
  bool flat() const {
    return kind == Manifold::euclidean || kind == Manifold::torus ||
           (kind == Manifold::product_lift && base == Manifold::torus);
  }
  std::string tag() const {
    switch (kind) {
      case Manifold::euclidean: return "euclidean" + std::to_string(dim);
      case Manifold::torus: return "torus" + std::to_string(dim);
      case Manifold::sphere: return "sphere" + std::to_string(dim);
      case Manifold::product_lift:
        return (base == Manifold::sphere ? "sphere" : "torus") + std::to_string(dim - 1) + "xR";
    }
    return "?";
  }
};

inline double wrap_delta(double d, double period) {
  d = std::fmod(d, period);
  if (d > 0.5 * period) d -= period;
  if (d < -0.5 * period) d += period;
  return d;
}

/// Geodesic distance between points of the same domain.
inline double geodesic_distance(const Domain& dom, const Vec& x, const Vec& y) {
  switch (dom.kind) {
    case Manifold::euclidean: return (x - y).norm();
    case Manifold::torus: {
      double s = 0;
      for (int i = 0; i < dom.dim; ++i) {
        double d = wrap_delta(x[i] - y[i], dom.period);
        s += d * d;
      }
      return std::sqrt(s);
    }
    case Manifold::sphere: {
      double c = x.dot(y);
      c = std::max(-1.0, std::min(1.0, c));
      return std::acos(c);
    }
    case Manifold::product_lift: {
      int nb = dom.coord_dim() - 1;
      Vec xb = Vec::from(std::span<const double>(x.c.data(), (size_t)nb));
      Vec yb = Vec::from(std::span<const double>(y.c.data(), (size_t)nb));
      Domain bd = dom.base == Manifold::sphere ? Domain::sphere(dom.dim - 1)
                                               : Domain::torus(dom.dim - 1, dom.period);
      double db = geodesic_distance(bd, xb, yb);
      double dt = x[nb] - y[nb];
      return std::sqrt(db * db + dt * dt);
    }
  }
  return 0;
}

/// Orthonormal tangent basis at a point (identity frame on flat domains,
/// Gram-Schmidt completion against the position vector on spheres).
std::vector<Vec> tangent_basis(const Domain& dom, const Vec& p);

/// Exponential map: p moved along tangent vector v (geodesic).
/// v is expressed in ambient coordinates for spheres (must be tangent at p).
Vec exp_map(const Domain& dom, const Vec& p, const Vec& v);

/// Geodesic ball on a model manifold.
struct GeodesicBall {
  Domain domain;
  Vec center;
  double radius = 0;

  GeodesicBall() = default;
  GeodesicBall(const Domain& dom, const Vec& c, double r) : domain(dom), center(c), radius(r) {
    if (!(r > 0)) throw std::invalid_argument("GeodesicBall: radius must be positive");
    if (c.size() != dom.coord_dim()) throw std::invalid_argument("GeodesicBall: center dimension mismatch");
    if (dom.kind == Manifold::sphere && !(r < 0.99 * kPi))
      throw std::invalid_argument("GeodesicBall: sphere radius exceeds injectivity slack");
    if (dom.kind == Manifold::torus && !(r < 0.5 * dom.period))
      throw std::invalid_argument("GeodesicBall: torus radius exceeds half period");
    if (dom.kind == Manifold::product_lift && dom.base == Manifold::torus && !(r < 0.5 * dom.period))
      throw std::invalid_argument("GeodesicBall: lifted torus radius exceeds half period");
    if (dom.kind == Manifold::product_lift && dom.base == Manifold::sphere && !(r < 0.99 * kPi))
      throw std::invalid_argument("GeodesicBall: lifted sphere radius exceeds injectivity slack");
    if (dom.kind == Manifold::sphere) {
      double m = c.norm();
      if (std::abs(m - 1.0) > 1e-9) throw std::invalid_argument("GeodesicBall: sphere center not unit");
    }
  }

  bool contains(const Vec& p) const { return geodesic_distance(domain, center, p) <= radius * (1 + 1e-12); }
};

/// Search region for sup-norm estimation: a geodesic ball or a whole torus.
struct Region {
  enum class Kind { ball, full_torus };
  Kind kind = Kind::ball;
  GeodesicBall ball;
  Domain torus_domain;

  static Region over(const GeodesicBall& b) {
    Region r;
    r.kind = Kind::ball;
    r.ball = b;
    return r;
  }
  static Region full_torus(const Domain& dom) {
    if (dom.kind != Manifold::torus) throw std::invalid_argument("Region::full_torus: not a torus domain");
    Region r;
    r.kind = Kind::full_torus;
    r.torus_domain = dom;
    return r;
  }
  const Domain& domain() const { return kind == Kind::ball ? ball.domain : torus_domain; }
  double scale() const { return kind == Kind::ball ? ball.radius : 0.5 * torus_domain.period; }
};

}  // namespace bernlab
