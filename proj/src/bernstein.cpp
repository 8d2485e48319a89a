#include "bernlab/bernstein.hpp"

#include <cmath>
#include <stdexcept>

#include "bernlab/quadrature.hpp"
#include "bernlab/rng.hpp"

namespace bernlab::bernstein {

using sphharm::HarmonicExpansion;

BoundSet bounds_for(double lambda, double r, int manifold_dim, double delta) {
  if (!(lambda > 0) || !(r > 0)) throw std::invalid_argument("bounds_for: lambda and r must be positive");
  BoundSet b;
  double sq = std::sqrt(lambda);
  double lg = std::max(std::log(lambda), 1.0);
  double lgd = std::pow(lg, 2.0 + delta);
  b.b_global = sq;
  b.b_df = std::pow(lambda, 0.5 * (manifold_dim + 2)) / r;
  b.b_dong = std::max(sq / r, std::pow(lambda, 0.75));
  b.b_main = std::max(sq * lgd / r, lambda * lgd);
  b.b_2d = std::max(sq / r, sq * lg);
  b.b_conj = sq / r;
  return b;
}

BernsteinReport bernstein_ratio(std::shared_ptr<const eigenfields::Eigenfunction> phi,
                                const GeodesicBall& ball, const ResolutionPolicy& policy,
                                double delta) {
  BernsteinReport rep;
  rep.lambda = phi->lambda();
  rep.r = ball.radius;
  ScalarField vf = eigenfields::eigen_field(phi);
  ScalarField gf(
      phi->domain(),
      [phi](const Vec& x) { return FieldEval{phi->riemannian_gradient(x).norm(), false, {}}; },
      vf.band_limit(), "eigen_grad_norm");
  gf.has_gradient_ = false;
  SupResult vs = sup_norm(vf, ball, policy);
  SupResult gs = sup_norm(gf, ball, policy);
  rep.val_sup = vs.sup;
  rep.grad_sup = gs.sup;
  if (rep.val_sup <= 0) throw std::domain_error("bernstein_ratio: field vanishes on the ball");
  rep.ratio = rep.grad_sup / rep.val_sup;
  rep.bounds = bounds_for(rep.lambda, rep.r, phi->domain().dim, delta);
  rep.c_global = rep.ratio / rep.bounds.b_global;
  rep.c_df = rep.ratio / rep.bounds.b_df;
  rep.c_dong = rep.ratio / rep.bounds.b_dong;
  rep.c_main = rep.ratio / rep.bounds.b_main;
  rep.c_2d = rep.ratio / rep.bounds.b_2d;
  rep.c_conj = rep.ratio / rep.bounds.b_conj;
  rep.resolution_h = vs.grid_spacing;
  rep.refine_depth = std::max(vs.refine_depth, gs.refine_depth);
  return rep;
}

double growth_check(const ScalarField& field, const Vec& center, double r, double L,
                    const ResolutionPolicy& policy) {
  if (!(L > 0)) throw std::invalid_argument("growth_check: L must be positive");
  GeodesicBall inner(field.domain(), center, r);
  GeodesicBall outer(field.domain(), center, (1.0 + 1.0 / L) * r);
  double si = sup_norm(field, inner, policy).sup;
  double so = sup_norm(field, outer, policy).sup;
  if (si <= 0) throw std::domain_error("growth_check: field vanishes on the inner ball");
  return so / si;
}

namespace {

// True L^p norms (p = 1 or 2) of P and |grad P| over B(0, r), slice-based.
void ball_lp_norms(const HarmonicExpansion& P, double r, double p, double* norm_p,
                   double* grad_norm_p) {
  const int d = P.dim();
  const int kmax = std::max(P.max_degree(), 0);
  const int order = 2 * std::max(kmax, 1) + 4;
  Quadrature sph = sphere_rule(d, order);
  sphharm::SphereSlices sl = sphharm::sphere_slices(P, sph.nodes, grad_norm_p != nullptr);
  const size_t stride = (size_t)kmax + 1;
  std::vector<double> rho, wr;
  int nrad = (order + d + 1) / 2;
  gauss_legendre(nrad, 0.0, r, rho, wr);
  const double rref = P.r_ref();
  double accv = 0, accg = 0;
  for (int i = 0; i < nrad; ++i) {
    double q = rho[i] / rref;
    double wrad = wr[i] * std::pow(rho[i], d - 1);
    double sv = 0, sg = 0;
    for (size_t j = 0; j < sph.size(); ++j) {
      const double* v = sl.v.data() + j * stride;
      double u = 0, qpow = 1.0;
      for (int k = 0; k <= kmax; ++k) {
        u += v[k] * qpow;
        qpow *= q;
      }
      sv += sph.weights[j] * (p == 2.0 ? u * u : std::abs(u));
      if (grad_norm_p) {
        const double* g = sl.g.data() + (j * stride) * d;
        double comp[kMaxCoordDim] = {0};
        double qp = 1.0;
        for (int k = 1; k <= kmax; ++k) {
          double f = qp / rref;
          for (int a = 0; a < d; ++a) comp[a] += g[(size_t)k * d + a] * f;
          qp *= q;
        }
        double g2 = 0;
        for (int a = 0; a < d; ++a) g2 += comp[a] * comp[a];
        sg += sph.weights[j] * (p == 2.0 ? g2 : std::sqrt(g2));
      }
    }
    accv += wrad * sv;
    accg += wrad * sg;
  }
  if (norm_p) *norm_p = p == 2.0 ? std::sqrt(accv) : accv;
  if (grad_norm_p) *grad_norm_p = p == 2.0 ? std::sqrt(accg) : accg;
}

}  // namespace

LpBernsteinReport polynomial_bernstein_lp(const HarmonicExpansion& P, double r, double p,
                                          const ResolutionPolicy& policy) {
  if (!(r > 0)) throw std::invalid_argument("polynomial_bernstein_lp: r must be positive");
  int N = P.max_degree();
  if (N < 0) throw std::domain_error("polynomial_bernstein_lp: zero expansion");
  LpBernsteinReport rep;
  double np = 0, gp = 0;
  if (p == 1.0 || p == 2.0) {
    ball_lp_norms(P, r, p, &np, &gp);
  } else if (std::isinf(p)) {
    auto e = std::make_shared<HarmonicExpansion>(P);
    GeodesicBall ball(Domain::euclidean_space(P.dim()), Vec::zero(P.dim()), r);
    np = sup_norm(expansion_field(e), ball, policy).sup;
    gp = sup_norm(expansion_grad_norm_field(e), ball, policy).sup;
  } else {
    throw std::invalid_argument("polynomial_bernstein_lp: p must be 1, 2 or infinity");
  }
  rep.lhs = gp;
  rep.rhs = std::max(N, 1) / r * np;
  if (rep.rhs == 0) throw std::domain_error("polynomial_bernstein_lp: vanishing norm");
  rep.constant = rep.lhs / rep.rhs;
  return rep;
}

double lp_growth_check(const HarmonicExpansion& P, double r, int N, double p) {
  if (N < 1) throw std::invalid_argument("lp_growth_check: N must be >= 1");
  if (!(p == 1.0 || p == 2.0)) throw std::invalid_argument("lp_growth_check: p must be 1 or 2");
  double inner = 0, outer = 0;
  double ro = (1.0 + 1.0 / N) * r;
  ball_lp_norms(P, r, p, &inner, nullptr);
  ball_lp_norms(P, ro, p, &outer, nullptr);
  if (inner == 0) throw std::domain_error("lp_growth_check: vanishing inner norm");
  // mean-integral convention: divide out the volume growth so that a
  // constant has ratio exactly 1
  double vol_ratio = std::pow(ro / r, P.dim() / p);
  return outer / inner / vol_ratio;
}

TruncationResult approximate_by_truncation(const ScalarField& field, const Vec& center, double r,
                                           int N_declared, int fit_order,
                                           const ResolutionPolicy& policy) {
  if (N_declared < 10)
    throw std::invalid_argument("approximate_by_truncation: N_declared must be at least 10");
  if (!(r > 0)) throw std::invalid_argument("approximate_by_truncation: r must be positive");
  if (!field.domain().flat() && field.domain().kind != Manifold::euclidean)
    throw std::invalid_argument("approximate_by_truncation: needs a flat coordinate domain");
  const int d = field.domain().coord_dim();
  const int K = 5 * N_declared;
  if (K > 300)
    throw std::invalid_argument("approximate_by_truncation: truncation degree 5N exceeds the supported basis range");
  // The fit sphere sits just above the evaluation radius (1 + 1/N) r. Pulling
  // it closer than the doubled ball keeps the dynamic range of e^{sqrt(l) t}
  // style fields between fit and evaluation radii within double precision.
  const double rho_fit = 1.15 * r;
  double band = field.band_limit() ? *field.band_limit() : 1.0;
  int order = fit_order > 0 ? fit_order : 2 * K + 2 * (int)std::ceil(band * rho_fit) + 8;

  auto on_fit_sphere = [&](const Vec& xi) { return field.value(center + xi * rho_fit); };
  std::vector<double> coeffs = sphharm::project_on_sphere(d, K, order, on_fit_sphere);

  // Resolution checks: fitted energy may not exceed the sphere mean square
  // (aliasing inflates it), and the reconstruction must track the field at
  // probe directions that are not quadrature nodes.
  Quadrature sph = sphere_rule(d, std::min(order, 2 * K + 16));
  double msq = 0;
  for (size_t j = 0; j < sph.size(); ++j) {
    double u = on_fit_sphere(sph.nodes[j]);
    msq += sph.weights[j] * u * u;
  }
  msq /= sph.total_weight;
  double fitted = 0;
  for (double c : coeffs) fitted += c * c;
  if (msq <= 0 || fitted > msq * (1.0 + 1e-6) + 1e-300)
    throw std::runtime_error("approximate_by_truncation: field not resolved by fit_order");

  TruncationResult out;
  out.fit_order = order;
  HarmonicExpansion head(d, rho_fit);
  {
    int idx = 0;
    for (int k = 0; k <= K; ++k) {
      int dk = sphharm::dim_harmonics(d, k);
      for (int m = 0; m < dk; ++m, ++idx)
        if (coeffs[idx] != 0.0) head.set_amplitude(k, m, coeffs[idx]);
    }
  }
  {
    Rng probe_rng(424242);
    double res2 = 0, ref2 = 0;
    for (int p = 0; p < 48; ++p) {
      Vec xi(d);
      for (int i = 0; i < d; ++i) xi[i] = probe_rng.normal();
      xi = xi.normalized();
      double got = head.eval(xi * rho_fit);
      double want = on_fit_sphere(xi);
      res2 += (got - want) * (got - want);
      ref2 += want * want;
    }
    if (ref2 > 0 && std::sqrt(res2 / ref2) > 0.45)
      throw std::runtime_error("approximate_by_truncation: field not resolved by fit_order");
  }

  const double r_eval = (1.0 + 1.0 / N_declared) * r;
  // Both the field and the head are harmonic, so the sup of the difference
  // over the closed ball is attained on the boundary sphere.
  double tail = 0;
  if (d == 3) {
    int n_theta = std::max<int>(48, (int)std::ceil(K / (2.0 * policy.grid_factor)));
    int n_phi = 2 * n_theta;
    std::vector<double> hv;
    sphharm::dense_sphere_values(head, r_eval, n_theta, n_phi, hv, nullptr);
    double best = -1;
    double bth = 0, bph = 0;
    for (int i = 0; i < n_theta; ++i) {
      double th = kPi * (i + 0.5) / n_theta;
      double st = std::sin(th), ct = std::cos(th);
      for (int j = 0; j < n_phi; ++j) {
        double ph = kTwoPi * j / n_phi;
        Vec xi{st * std::cos(ph), st * std::sin(ph), ct};
        double diff = std::abs(field.value(center + xi * r_eval) - hv[(size_t)i * n_phi + j]);
        if (diff > best) {
          best = diff;
          bth = th;
          bph = ph;
        }
      }
    }
    // local polish around the best cell
    double step = kPi / n_theta;
    auto eval_ang = [&](double th, double ph) {
      double st = std::sin(th), ct = std::cos(th);
      Vec xi{st * std::cos(ph), st * std::sin(ph), ct};
      Vec x = center + xi * r_eval;
      return std::abs(field.value(x) - head.eval(xi * r_eval));
    };
    best = eval_ang(bth, bph);
    while (step > policy.refine_tol) {
      bool moved = true;
      while (moved) {
        moved = false;
        for (auto [dth, dph] : {std::pair{step, 0.0}, {-step, 0.0}, {0.0, step}, {0.0, -step}}) {
          double v = eval_ang(bth + dth, bph + dph);
          if (v > best) {
            best = v;
            bth += dth;
            bph += dph;
            moved = true;
          }
        }
      }
      step *= 0.5;
    }
    tail = best;
  } else {
    auto hptr = std::make_shared<HarmonicExpansion>(head);
    Vec c = center;
    const ScalarField* fp = &field;
    ScalarField diff(
        Domain::euclidean_space(d),
        [hptr, c, fp](const Vec& x) {
          return FieldEval{fp->value(x) - hptr->eval(x - c), false, {}};
        },
        std::max(band, (double)K / r_eval), "truncation_tail");
    diff.has_gradient_ = false;
    GeodesicBall ball(Domain::euclidean_space(d), center, r_eval);
    tail = sup_norm(diff, ball, policy).sup;
  }
  out.tail_sup = tail;

  // ball average of |field| over B(center, r)
  int mean_order = std::max(16, 2 * (int)std::ceil(band * r) + 8);
  Quadrature ball = ball_rule(d, mean_order, mean_order, r);
  double mean = 0;
  for (size_t i = 0; i < ball.size(); ++i)
    mean += ball.weights[i] * std::abs(field.value(center + ball.nodes[i]));
  mean /= ball.total_weight;
  out.ball_mean_abs = mean;
  out.relative_tail = mean > 0 ? tail / mean : 0.0;
  out.head = std::move(head);
  return out;
}

std::pair<double, double> classical_baselines(int N) {
  if (N < 1) throw std::invalid_argument("classical_baselines: N must be >= 1");
  // trigonometric: sin(N theta) on the circle
  ScalarField trig(
      Domain::torus(1),
      [N](const Vec& x) {
        return FieldEval{std::sin(N * x[0]), true, Vec{(double)N * std::cos(N * x[0])}};
      },
      (double)N, "trig");
  ScalarField trig_d(
      Domain::torus(1),
      [N](const Vec& x) { return FieldEval{(double)N * std::cos(N * x[0]), false, {}}; }, (double)N,
      "trig_deriv");
  trig_d.has_gradient_ = false;
  Region full = Region::full_torus(Domain::torus(1));
  double trig_ratio = sup_norm(trig_d, full).sup / sup_norm(trig, full).sup;

  // algebraic: Chebyshev T_N on [-1, 1]
  auto cheb = [N](double x) {
    double tp = 1.0, tc = x;
    double up = 1.0, uc = 2.0 * x;  // U_0, U_1
    if (N == 1) return std::pair{x, 1.0};
    for (int k = 2; k <= N; ++k) {
      double tn = 2.0 * x * tc - tp;
      tp = tc;
      tc = tn;
      if (k < N) {
        double un = 2.0 * x * uc - up;
        up = uc;
        uc = un;
      }
    }
    return std::pair{tc, (double)N * uc};
  };
  double bandc = (double)N * N;
  ScalarField chv(
      Domain::euclidean_space(1),
      [cheb](const Vec& x) {
        auto [t, dt] = cheb(x[0]);
        return FieldEval{t, true, Vec{dt}};
      },
      bandc, "chebyshev");
  ScalarField chd(
      Domain::euclidean_space(1),
      [cheb](const Vec& x) {
        auto [t, dt] = cheb(x[0]);
        (void)t;
        return FieldEval{dt, false, {}};
      },
      bandc, "chebyshev_deriv");
  chd.has_gradient_ = false;
  GeodesicBall interval(Domain::euclidean_space(1), Vec{0.0}, 1.0);
  double markov_ratio = sup_norm(chd, interval).sup / sup_norm(chv, interval).sup;
  return {trig_ratio, markov_ratio};
}

}  // namespace bernlab::bernstein
