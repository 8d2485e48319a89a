#include "bernlab/scalar_field.hpp"

#include <cmath>

namespace bernlab {

std::vector<Vec> tangent_basis(const Domain& dom, const Vec& p) {
  int cd = dom.coord_dim();
  std::vector<Vec> basis;
  if (dom.kind == Manifold::euclidean || dom.kind == Manifold::torus) {
    for (int i = 0; i < cd; ++i) basis.push_back(Vec::axis(cd, i));
    return basis;
  }
  if (dom.kind == Manifold::sphere) {
    Vec n = p.normalized();
    for (int i = 0; i < cd && (int)basis.size() < dom.dim; ++i) {
      Vec v = Vec::axis(cd, i);
      v.axpy(-v.dot(n), n);
      for (const Vec& b : basis) v.axpy(-v.dot(b), b);
      double m = v.norm();
      if (m > 1e-6) basis.push_back(v * (1.0 / m));
    }
    return basis;
  }
  // product lift: base frame extended by zero t-component, plus the t axis
  int nb = cd - 1;
  Domain bd = dom.base == Manifold::sphere ? Domain::sphere(dom.dim - 1)
                                           : Domain::torus(dom.dim - 1, dom.period);
  Vec pb = Vec::from(std::span<const double>(p.c.data(), (size_t)nb));
  for (const Vec& b : tangent_basis(bd, pb)) {
    Vec v(cd);
    for (int i = 0; i < nb; ++i) v[i] = b[i];
    basis.push_back(v);
  }
  basis.push_back(Vec::axis(cd, cd - 1));
  return basis;
}

Vec exp_map(const Domain& dom, const Vec& p, const Vec& v) {
  switch (dom.kind) {
    case Manifold::euclidean:
    case Manifold::torus: return p + v;
    case Manifold::sphere: {
      double m = v.norm();
      if (m == 0) return p;
      Vec u = v * (1.0 / m);
      return p * std::cos(m) + u * std::sin(m);
    }
    case Manifold::product_lift: {
      int nb = dom.coord_dim() - 1;
      Domain bd = dom.base == Manifold::sphere ? Domain::sphere(dom.dim - 1)
                                               : Domain::torus(dom.dim - 1, dom.period);
      Vec pb = Vec::from(std::span<const double>(p.c.data(), (size_t)nb));
      Vec vb = Vec::from(std::span<const double>(v.c.data(), (size_t)nb));
      Vec qb = exp_map(bd, pb, vb);
      Vec q(nb + 1);
      for (int i = 0; i < nb; ++i) q[i] = qb[i];
      q[nb] = p[nb] + v[nb];
      return q;
    }
  }
  return p;
}

ScalarField expansion_field(std::shared_ptr<const sphharm::HarmonicExpansion> e, Vec center,
                            std::optional<double> band_limit) {
  int d = e->dim();
  if (center.size() == 0) center = Vec::zero(d);
  if (!band_limit && e->max_degree() >= 0)
    band_limit = std::max(1.0, (double)e->max_degree() / e->r_ref());
  auto eptr = e;
  Vec c = center;
  ScalarField f(
      Domain::euclidean_space(d),
      [eptr, c](const Vec& x) {
        FieldEval out;
        out.has_grad = true;
        out.value = eptr->eval(x - c, &out.grad);
        return out;
      },
      band_limit, "harmonic_expansion");
  f.expansion = e;
  f.view = ExpansionView::value;
  f.expansion_center = c;
  f.abs_subharmonic = true;
  return f;
}

ScalarField expansion_grad_norm_field(std::shared_ptr<const sphharm::HarmonicExpansion> e, Vec center,
                                      std::optional<double> band_limit) {
  int d = e->dim();
  if (center.size() == 0) center = Vec::zero(d);
  if (!band_limit && e->max_degree() >= 0)
    band_limit = std::max(1.0, (double)e->max_degree() / e->r_ref());
  auto eptr = e;
  Vec c = center;
  ScalarField f(
      Domain::euclidean_space(d),
      [eptr, c](const Vec& x) {
        FieldEval out;
        Vec g;
        eptr->eval(x - c, &g);
        out.value = g.norm();
        out.has_grad = false;
        return out;
      },
      band_limit, "harmonic_expansion_grad_norm");
  f.expansion = e;
  f.view = ExpansionView::grad_norm;
  f.expansion_center = c;
  f.abs_subharmonic = true;  // |grad h|^2 is subharmonic
  f.has_gradient_ = false;
  return f;
}

double fd_laplacian(const Domain& dom, const std::function<double(const Vec&)>& f, const Vec& p,
                    double h) {
  double lap = 0;
  double fp = f(p);
  for (const Vec& e : tangent_basis(dom, p)) {
    double fpl = f(exp_map(dom, p, e * h));
    double fmi = f(exp_map(dom, p, e * (-h)));
    lap += (fpl - 2.0 * fp + fmi) / (h * h);
  }
  return lap;
}

Vec fd_gradient(const Domain& dom, const std::function<double(const Vec&)>& f, const Vec& p,
                double h) {
  Vec g(dom.coord_dim());
  for (const Vec& e : tangent_basis(dom, p)) {
    double df = (f(exp_map(dom, p, e * h)) - f(exp_map(dom, p, e * (-h)))) / (2.0 * h);
    g.axpy(df, e);
  }
  return g;
}

}  // namespace bernlab
