#include "bernlab/supnorm.hpp"

#include <cmath>
#include <stdexcept>

namespace bernlab {

namespace {

struct Best {
  double val = -1;
  Vec point;
};

void consider(Best& b, double v, const Vec& p) {
  v = std::abs(v);
  if (v > b.val) {
    b.val = v;
    b.point = p;
  }
}

// Compass refinement. `move` produces a candidate point from (base, axis,
// signed step) clamped into the region; axes run over the chart dimension.
template <class MoveFn, class EvalFn>
void refine(Best& b, int axes, double step0, double stop_step, double stop_rel, MoveFn&& move,
            EvalFn&& eval, int& depth, size_t& evals) {
  double step = step0;
  depth = 0;
  int quiet = 0;  // a single zero-gain round at a coarse step is not terminal
  while (true) {
    double before = b.val;
    bool improved = true;
    while (improved) {
      improved = false;
      for (int i = 0; i < axes; ++i) {
        for (double sgn : {1.0, -1.0}) {
          Vec cand = move(b.point, i, sgn * step);
          double v = std::abs(eval(cand));
          ++evals;
          if (v > b.val) {
            b.val = v;
            b.point = cand;
            improved = true;
          }
        }
      }
    }
    double gain = (b.val - before) / (b.val > 0 ? b.val : 1.0);
    quiet = gain < stop_rel ? quiet + 1 : 0;
    if (step < stop_step && quiet >= 3) break;
    if (step < 1e-13 * std::max(stop_step, 1e-300)) break;
    step *= 0.5;
    ++depth;
  }
}

// step below which a quadratic maximum is resolved to refine_rel, given the
// oscillation scale implied by the coarse grid spacing
double fine_stop(double coarse_h, double tol_scale, const ResolutionPolicy& policy) {
  return std::min(policy.refine_tol * tol_scale,
                  0.5 * std::sqrt(policy.refine_rel) * coarse_h / policy.grid_factor);
}

double pick_spacing(const ScalarField& field, double scale, const ResolutionPolicy& policy) {
  double inv_b = field.band_limit() ? 1.0 / std::max(*field.band_limit(), 1e-12) : scale;
  if (!field.band_limit() && !policy.force)
    throw std::runtime_error(
        "sup_norm: unresolved supremum: field declares no band limit (use force to override)");
  return policy.grid_factor * std::min(scale, inv_b);
}

// Dense boundary scan for expansion-backed fields on a concentric Euclidean
// ball; the sup of |h| or |grad h| over the closed ball sits on the sphere.
SupResult boundary_sup_d3(const ScalarField& field, const GeodesicBall& ball,
                          const ResolutionPolicy& policy) {
  const auto& e = *field.expansion;
  SupResult out;
  int kmax = std::max(e.max_degree(), 1);
  int n_theta = std::max<int>(12, (int)std::ceil(kmax / (2.0 * policy.grid_factor)));
  int n_phi = 2 * n_theta;
  std::vector<double> vals, gnorm;
  bool grad_view = field.view == ExpansionView::grad_norm;
  dense_sphere_values(e, ball.radius, n_theta, n_phi, vals, grad_view ? &gnorm : nullptr);
  const std::vector<double>& scan = grad_view ? gnorm : vals;
  Best b;
  int besti = 0;
  for (int i = 0; i < (int)scan.size(); ++i)
    if (std::abs(scan[i]) > b.val) {
      b.val = std::abs(scan[i]);
      besti = i;
    }
  out.evaluations = scan.size();
  double th = kPi * (besti / n_phi + 0.5) / n_theta;
  double ph = kTwoPi * (besti % n_phi) / n_phi;
  b.point = Vec{th, ph};
  auto to_point = [&](const Vec& ang) {
    double st = std::sin(ang[0]), ct = std::cos(ang[0]);
    Vec p{st * std::cos(ang[1]), st * std::sin(ang[1]), ct};
    return ball.center + p * ball.radius;
  };
  auto eval_ang = [&](const Vec& ang) { return field.value(to_point(ang)); };
  auto move = [&](const Vec& p, int axis, double s) {
    Vec q = p;
    q[axis] += s;
    return q;
  };
  double h_ang = kPi / n_theta;
  b.val = std::abs(eval_ang(b.point));  // re-evaluate through the field path
  // angular step * radius is the arc step, so the scale for refine_tol is 1
  refine(b, 2, h_ang, fine_stop(h_ang, 1.0, policy), policy.refine_rel, move, eval_ang,
         out.refine_depth, out.evaluations);
  out.sup = b.val;
  out.argmax = to_point(b.point);
  out.grid_spacing = h_ang * ball.radius;
  if (field.band_limit()) {
    double bh = *field.band_limit() * out.grid_spacing;
    out.error_factor = 1.0 + bh * bh;
  }
  return out;
}

SupResult boundary_sup_d2(const ScalarField& field, const GeodesicBall& ball,
                          const ResolutionPolicy& policy) {
  const auto& e = *field.expansion;
  SupResult out;
  int kmax = std::max(e.max_degree(), 1);
  int n = std::max<int>(32, (int)std::ceil(kmax / policy.grid_factor));
  auto at = [&](double ph) {
    Vec p{ball.center[0] + ball.radius * std::cos(ph), ball.center[1] + ball.radius * std::sin(ph)};
    return field.value(p);
  };
  Best b;
  for (int j = 0; j < n; ++j) {
    double ph = kTwoPi * j / n;
    consider(b, at(ph), Vec{ph});
    ++out.evaluations;
  }
  auto move = [](const Vec& p, int, double s) { return Vec{p[0] + s}; };
  auto eval_ang = [&](const Vec& ang) { return at(ang[0]); };
  double h = kTwoPi / n;
  refine(b, 1, h, fine_stop(h, 1.0, policy), policy.refine_rel, move, eval_ang, out.refine_depth,
         out.evaluations);
  out.sup = b.val;
  out.argmax = Vec{ball.center[0] + ball.radius * std::cos(b.point[0]),
                   ball.center[1] + ball.radius * std::sin(b.point[0])};
  out.grid_spacing = h * ball.radius;
  if (field.band_limit()) {
    double bh = *field.band_limit() * out.grid_spacing;
    out.error_factor = 1.0 + bh * bh;
  }
  return out;
}

SupResult flat_ball_sup(const ScalarField& field, const GeodesicBall& ball,
                        const ResolutionPolicy& policy) {
  SupResult out;
  int cd = ball.domain.coord_dim();
  double r = ball.radius;
  double h = pick_spacing(field, r, policy);
  size_t per_axis = (size_t)std::ceil(2.0 * r / h) + 1;
  double total = std::pow((double)per_axis, cd);
  while (total > (double)policy.max_grid_points) {
    h *= 2;
    per_axis = (size_t)std::ceil(2.0 * r / h) + 1;
    total = std::pow((double)per_axis, cd);
  }
  out.grid_spacing = h;
  Best b;
  std::vector<size_t> idx(cd, 0);
  Vec p(cd);
  bool done = false;
  while (!done) {
    for (int i = 0; i < cd; ++i)
      p[i] = ball.center[i] - r + (2.0 * r) * (per_axis == 1 ? 0.5 : (double)idx[i] / (per_axis - 1));
    if ((p - ball.center).norm() <= r * (1 + 1e-12)) {
      consider(b, field.value(p), p);
      ++out.evaluations;
    }
    int ax = 0;
    while (ax < cd && ++idx[ax] == per_axis) idx[ax++] = 0;
    done = (ax == cd);
  }
  if (b.val < 0) {
    consider(b, field.value(ball.center), ball.center);
    ++out.evaluations;
  }
  auto move = [&](const Vec& q, int axis, double s) {
    Vec c = q;
    c[axis] += s;
    Vec off = c - ball.center;
    double m = off.norm();
    if (m > r) c = ball.center + off * (r / m);
    return c;
  };
  refine(
      b, cd, h, fine_stop(h, r, policy), policy.refine_rel, move,
      [&](const Vec& q) { return field.value(q); }, out.refine_depth, out.evaluations);
  out.sup = b.val;
  out.argmax = b.point;
  if (field.band_limit()) {
    double bh = *field.band_limit() * h;
    out.error_factor = 1.0 + bh * bh;
  }
  return out;
}

SupResult cap_sup(const ScalarField& field, const GeodesicBall& ball, const ResolutionPolicy& policy) {
  SupResult out;
  const Domain& dom = ball.domain;
  int n = dom.dim;  // chart dimension
  std::vector<Vec> frame = tangent_basis(dom, ball.center);
  double r = ball.radius;
  double h = pick_spacing(field, r, policy);
  size_t per_axis = (size_t)std::ceil(2.0 * r / h) + 1;
  double total = std::pow((double)per_axis, n);
  while (total > (double)policy.max_grid_points) {
    h *= 2;
    per_axis = (size_t)std::ceil(2.0 * r / h) + 1;
    total = std::pow((double)per_axis, n);
  }
  out.grid_spacing = h;
  auto to_point = [&](const Vec& v) {
    Vec t(dom.coord_dim());
    for (int i = 0; i < n; ++i) t.axpy(v[i], frame[i]);
    return exp_map(dom, ball.center, t);
  };
  Best b;
  std::vector<size_t> idx(n, 0);
  Vec v(n);
  bool done = false;
  while (!done) {
    for (int i = 0; i < n; ++i)
      v[i] = -r + 2.0 * r * (per_axis == 1 ? 0.5 : (double)idx[i] / (per_axis - 1));
    if (v.norm() <= r * (1 + 1e-12)) {
      consider(b, field.value(to_point(v)), v);
      ++out.evaluations;
    }
    int ax = 0;
    while (ax < n && ++idx[ax] == per_axis) idx[ax++] = 0;
    done = (ax == n);
  }
  if (b.val < 0) {
    consider(b, field.value(ball.center), Vec::zero(n));
    ++out.evaluations;
  }
  auto move = [&](const Vec& q, int axis, double s) {
    Vec c = q;
    c[axis] += s;
    double m = c.norm();
    if (m > r) c = c * (r / m);
    return c;
  };
  refine(
      b, n, h, fine_stop(h, r, policy), policy.refine_rel, move,
      [&](const Vec& q) { return field.value(to_point(q)); }, out.refine_depth, out.evaluations);
  out.sup = b.val;
  out.argmax = to_point(b.point);
  if (field.band_limit()) {
    double bh = *field.band_limit() * h;
    out.error_factor = 1.0 + bh * bh;
  }
  return out;
}

SupResult torus_full_sup(const ScalarField& field, const Domain& dom, const ResolutionPolicy& policy) {
  SupResult out;
  int d = dom.dim;
  double L = dom.period;
  double h = pick_spacing(field, 0.5 * L, policy);
  size_t per_axis = (size_t)std::ceil(L / h);
  double total = std::pow((double)per_axis, d);
  while (total > (double)policy.max_grid_points) {
    h *= 2;
    per_axis = (size_t)std::ceil(L / h);
    total = std::pow((double)per_axis, d);
  }
  out.grid_spacing = h;
  Best b;
  std::vector<size_t> idx(d, 0);
  Vec p(d);
  bool done = false;
  while (!done) {
    for (int i = 0; i < d; ++i) p[i] = L * (double)idx[i] / per_axis;
    consider(b, field.value(p), p);
    ++out.evaluations;
    int ax = 0;
    while (ax < d && ++idx[ax] == per_axis) idx[ax++] = 0;
    done = (ax == d);
  }
  auto move = [](const Vec& q, int axis, double s) {
    Vec c = q;
    c[axis] += s;
    return c;
  };
  refine(
      b, d, h, fine_stop(h, 0.5 * L, policy), policy.refine_rel, move,
      [&](const Vec& q) { return field.value(q); }, out.refine_depth, out.evaluations);
  out.sup = b.val;
  out.argmax = b.point;
  if (field.band_limit()) {
    double bh = *field.band_limit() * h;
    out.error_factor = 1.0 + bh * bh;
  }
  return out;
}

}  // namespace

SupResult sup_norm(const ScalarField& field, const Region& region, const ResolutionPolicy& policy) {
  if (region.kind == Region::Kind::full_torus) {
    if (field.domain().kind != Manifold::torus)
      throw std::invalid_argument("sup_norm: full-torus region over a non-torus field");
    return torus_full_sup(field, region.torus_domain, policy);
  }
  const GeodesicBall& ball = region.ball;
  if (field.domain().kind != ball.domain.kind || field.domain().dim != ball.domain.dim)
    throw std::invalid_argument("sup_norm: region outside field domain");
  if (field.expansion && field.abs_subharmonic && ball.domain.kind == Manifold::euclidean) {
    const Vec& c0 = field.expansion_center;
    if ((ball.center - c0).norm() <= 1e-13 * std::max(1.0, ball.radius)) {
      int kd = field.expansion->dim();
      if (field.expansion->max_degree() <= 0) {
        SupResult out;
        out.sup = std::abs(field.value(ball.center));
        out.argmax = ball.center;
        out.evaluations = 1;
        return out;
      }
      if (kd == 3) return boundary_sup_d3(field, ball, policy);
      if (kd == 2) return boundary_sup_d2(field, ball, policy);
    }
  }
  switch (ball.domain.kind) {
    case Manifold::euclidean:
    case Manifold::torus: return flat_ball_sup(field, ball, policy);
    case Manifold::product_lift:
      if (ball.domain.base == Manifold::torus) return flat_ball_sup(field, ball, policy);
      return cap_sup(field, ball, policy);
    case Manifold::sphere: return cap_sup(field, ball, policy);
  }
  throw std::logic_error("sup_norm: unhandled region");
}

double band_limit_ratio(const ScalarField& field, const Region& region,
                        const ResolutionPolicy& policy) {
  if (!field.band_limit()) throw std::domain_error("band_limit_ratio: no declared band limit");
  if (!field.has_gradient()) throw std::domain_error("band_limit_ratio: field lacks gradients");
  double B = *field.band_limit();
  SupResult vs = sup_norm(field, region, policy);
  ScalarField gn(
      field.domain(), [&field](const Vec& x) { return FieldEval{field.gradient(x).norm(), false, {}}; },
      field.band_limit(), field.name() + "_gradnorm");
  gn.has_gradient_ = false;
  SupResult gs = sup_norm(gn, region, policy);
  if (vs.sup == 0) return 0;
  return gs.sup / (B * vs.sup);
}

}  // namespace bernlab
