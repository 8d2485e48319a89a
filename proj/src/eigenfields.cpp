#include "bernlab/eigenfields.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "bernlab/quadrature.hpp"

namespace bernlab::eigenfields {

TorusEigenfunction::TorusEigenfunction(int d, std::vector<TorusMode> modes)
    : d_(d), modes_(std::move(modes)) {
  if (d < 1 || d > kMaxCoordDim) throw std::invalid_argument("TorusEigenfunction: bad dimension");
  if (modes_.empty()) throw std::invalid_argument("TorusEigenfunction: empty mode list");
  long long n2 = -1;
  for (const auto& md : modes_) {
    if ((int)md.m.size() != d) throw std::invalid_argument("TorusEigenfunction: mode dimension mismatch");
    long long s = 0;
    for (int mi : md.m) s += (long long)mi * mi;
    if (n2 < 0) n2 = s;
    if (s != n2) throw std::invalid_argument("TorusEigenfunction: mixed eigenvalues across modes");
  }
  lambda_ = (double)n2;
}

double TorusEigenfunction::value(const Vec& x) const {
  double v = 0;
  for (const auto& md : modes_) {
    double ph = 0;
    for (int i = 0; i < d_; ++i) ph += md.m[i] * x[i];
    v += md.cos_coeff * std::cos(ph) + md.sin_coeff * std::sin(ph);
  }
  return v;
}

Vec TorusEigenfunction::riemannian_gradient(const Vec& x) const {
  Vec g(d_);
  for (const auto& md : modes_) {
    double ph = 0;
    for (int i = 0; i < d_; ++i) ph += md.m[i] * x[i];
    double dv = -md.cos_coeff * std::sin(ph) + md.sin_coeff * std::cos(ph);
    for (int i = 0; i < d_; ++i) g[i] += dv * md.m[i];
  }
  return g;
}

double TorusEigenfunction::coeff_abs_sum() const {
  double s = 0;
  for (const auto& md : modes_) s += std::abs(md.cos_coeff) + std::abs(md.sin_coeff);
  return s;
}

SphereEigenfunction::SphereEigenfunction(int n, int k, const std::vector<double>& coefficients)
    : n_(n), k_(k) {
  if (n < 1 || n + 1 > kMaxCoordDim) throw std::invalid_argument("SphereEigenfunction: bad sphere dim");
  if (k < 0) throw std::invalid_argument("SphereEigenfunction: bad degree");
  int dk = sphharm::dim_harmonics(n + 1, k);
  if ((int)coefficients.size() != dk)
    throw std::invalid_argument("SphereEigenfunction: coefficient length != dim H_k");
  auto e = std::make_shared<sphharm::HarmonicExpansion>(n + 1);
  for (int m = 0; m < dk; ++m)
    if (coefficients[m] != 0.0) e->set_coeff(k, m, coefficients[m]);
  poly_ = std::move(e);
}

double SphereEigenfunction::value(const Vec& x) const { return poly_->eval(x); }

Vec SphereEigenfunction::riemannian_gradient(const Vec& x) const {
  Vec g;
  poly_->eval(x, &g);
  Vec n = x.normalized();
  g.axpy(-g.dot(n), n);
  return g;
}

std::shared_ptr<TorusEigenfunction> make_torus_eigenfunction(int d, const std::vector<TorusMode>& modes) {
  return std::make_shared<TorusEigenfunction>(d, modes);
}

std::shared_ptr<SphereEigenfunction> make_sphere_eigenfunction(int n, int k,
                                                               const std::vector<double>& coefficients) {
  return std::make_shared<SphereEigenfunction>(n, k, coefficients);
}

std::shared_ptr<SphereEigenfunction> make_zonal_sphere_eigenfunction(int n, int k) {
  int dk = sphharm::dim_harmonics(n + 1, k);
  std::vector<double> c(dk, 0.0);
  // zonal basis function is index 0 (l = 0 block); normalize to 1 at the pole
  Vec pole = Vec::axis(n + 1, n);
  std::vector<double> vals;
  sphharm::eval_solid_basis(n + 1, k, pole, vals, nullptr);
  double y0 = vals[sphharm::basis_count(n + 1, k - 1)];
  c[0] = 1.0 / y0;
  return std::make_shared<SphereEigenfunction>(n, k, c);
}

std::vector<std::vector<int>> integer_modes_with_norm2(int d, int norm2) {
  if (d < 1) throw std::invalid_argument("integer_modes_with_norm2: bad d");
  if (norm2 < 0) throw std::invalid_argument("integer_modes_with_norm2: bad norm");
  std::vector<std::vector<int>> out;
  std::vector<int> cur(d, 0);
  int bound = (int)std::floor(std::sqrt((double)norm2) + 0.5);
  std::function<void(int, int)> rec = [&](int pos, int rem) {
    if (pos == d) {
      if (rem == 0) {
        // keep one representative per +-m pair: first nonzero positive
        for (int v : cur) {
          if (v > 0) {
            out.push_back(cur);
            return;
          }
          if (v < 0) return;
        }
        if (norm2 == 0) out.push_back(cur);
      }
      return;
    }
    for (int v = -bound; v <= bound; ++v) {
      if (v * v > rem) continue;
      cur[pos] = v;
      rec(pos + 1, rem - v * v);
    }
    cur[pos] = 0;
  };
  rec(0, norm2);
  return out;
}

ScalarField eigen_field(std::shared_ptr<const Eigenfunction> phi) {
  double band = std::max(1.0, std::sqrt(2.0 * phi->lambda()));
  return ScalarField(
      phi->domain(),
      [phi](const Vec& x) {
        return FieldEval{phi->value(x), true, phi->riemannian_gradient(x)};
      },
      band, "eigenfunction");
}

double dong_q(const Eigenfunction& phi, const Vec& x) {
  if (phi.domain().dim != 2)
    throw std::invalid_argument("dong_q: defined on 2-d manifolds only");
  Vec g = phi.riemannian_gradient(x);
  double v = phi.value(x);
  return g.norm2() + 0.5 * phi.lambda() * v * v;
}

ScalarField dong_q_field(std::shared_ptr<const Eigenfunction> phi) {
  if (phi->domain().dim != 2)
    throw std::invalid_argument("dong_q_field: defined on 2-d manifolds only");
  double band = std::max(1.0, 2.0 * std::sqrt(phi->lambda()) + 1.0);
  ScalarField f(
      phi->domain(), [phi](const Vec& x) { return FieldEval{dong_q(*phi, x), false, {}}; }, band,
      "dong_q");
  f.has_gradient_ = false;
  return f;
}

LiftedField lift(std::shared_ptr<const Eigenfunction> phi) {
  double lam = phi->lambda();
  if (!(lam > 0)) throw std::invalid_argument("lift: requires lambda > 0");
  double sq = std::sqrt(lam);
  Domain dom = Domain::lift_of(phi->domain());
  int cd = dom.coord_dim();
  ScalarField f(
      dom,
      [phi, sq, cd](const Vec& p) {
        int nb = cd - 1;
        Vec x = Vec::from(std::span<const double>(p.c.data(), (size_t)nb));
        double ex = std::exp(sq * p[nb]);
        FieldEval out;
        out.value = phi->value(x) * ex;
        out.has_grad = true;
        Vec gb = phi->riemannian_gradient(x);
        out.grad = Vec(cd);
        for (int i = 0; i < nb; ++i) out.grad[i] = gb[i] * ex;
        out.grad[nb] = sq * out.value;
        return out;
      },
      std::max(1.0, std::sqrt(2.0 * lam)), "harmonic_lift");
  return LiftedField{phi, lam, std::move(f)};
}

double rho0(double r, double H) {
  if (H < 0) throw std::invalid_argument("rho0: curvature bound must be >= 0");
  if (H == 0) return r;
  double x = std::sqrt(H) * r;
  return std::sinh(x) / std::sqrt(H);
}

DongState make_dong_state(std::shared_ptr<const Eigenfunction> phi) {
  if (phi->domain().dim != 2)
    throw std::invalid_argument("make_dong_state: 2-d manifolds only");
  DongState st;
  st.phi = std::move(phi);
  bool sphere = st.phi->domain().kind == Manifold::sphere;
  st.curvature_bound = sphere ? 1.0 : 0.0;
  st.gauss_curvature = sphere ? 1.0 : 0.0;
  return st;
}

DongLogQReport dong_log_q_laplacian_check(std::shared_ptr<const Eigenfunction> phi,
                                          const std::vector<Vec>& points, double h_fd,
                                          double q_floor_rel) {
  if (phi->domain().dim != 2)
    throw std::invalid_argument("dong_log_q_laplacian_check: 2-d manifolds only");
  DongLogQReport rep;
  rep.lambda = phi->lambda();
  double K = phi->domain().kind == Manifold::sphere ? 1.0 : 0.0;
  rep.bound = -rep.lambda + 2.0 * std::min(K, 0.0);
  // coarse sup-q estimate for the near-zero filter
  double qsup = 0;
  if (phi->domain().kind == Manifold::sphere) {
    Quadrature s = sphere_rule(3, 48);
    for (const Vec& xi : s.nodes) qsup = std::max(qsup, dong_q(*phi, xi));
  } else {
    int n = 96;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        qsup = std::max(qsup, dong_q(*phi, Vec{kTwoPi * i / n, kTwoPi * j / n}));
  }
  for (const Vec& p : points) qsup = std::max(qsup, dong_q(*phi, p));
  double floor = q_floor_rel * qsup;
  Domain dom = phi->domain();
  auto logq = [&](const Vec& x) { return std::log(dong_q(*phi, x)); };
  rep.min_margin = std::numeric_limits<double>::infinity();
  for (const Vec& p : points) {
    if (dong_q(*phi, p) < floor) {
      ++rep.skipped;
      continue;
    }
    double lap = fd_laplacian(dom, logq, p, h_fd);
    rep.min_margin = std::min(rep.min_margin, lap - rep.bound);
    ++rep.used;
  }
  if (rep.used == 0) rep.min_margin = 0;
  return rep;
}

std::string DongProfile::to_csv() const {
  std::ostringstream os;
  os << "r,t,M,F,second_diff\n";
  for (size_t i = 0; i < r.size(); ++i) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g", r[i], t[i], M[i], F[i],
                  d2F_dt2[i]);
    os << buf << "\n";
  }
  return os.str();
}

DongProfile dong_F_profile(const DongState& state, const Vec& x0, const std::vector<double>& r_grid,
                           const ResolutionPolicy& policy) {
  if (r_grid.size() < 2) throw std::invalid_argument("dong_F_profile: need at least two radii");
  for (size_t i = 1; i < r_grid.size(); ++i)
    if (!(r_grid[i] > r_grid[i - 1]))
      throw std::invalid_argument("dong_F_profile: radii must be strictly increasing");
  DongProfile out;
  out.r = r_grid;
  ScalarField q = dong_q_field(state.phi);
  double running = 0;
  for (double r : r_grid) {
    GeodesicBall ball(state.phi->domain(), x0, r);
    double m = sup_norm(q, ball, policy).sup;
    running = std::max(running, m);  // M is a running max by construction
    out.M.push_back(running);
    out.F.push_back(std::log(running));
  }
  // t(r) by composite Gauss on each grid segment, anchored at r_grid[0]
  out.t.assign(r_grid.size(), 0.0);
  std::vector<double> gx, gw;
  gauss_legendre(8, 0.0, 1.0, gx, gw);
  for (size_t i = 1; i < r_grid.size(); ++i) {
    double a = r_grid[i - 1], b = r_grid[i], seg = 0;
    for (size_t j = 0; j < gx.size(); ++j) {
      double tau = a + (b - a) * gx[j];
      seg += gw[j] * (b - a) / rho0(tau, state.curvature_bound);
    }
    out.t[i] = out.t[i - 1] + seg;
  }
  out.d2F_dt2.assign(r_grid.size(), std::numeric_limits<double>::quiet_NaN());
  for (size_t i = 1; i + 1 < r_grid.size(); ++i) {
    double s1 = (out.F[i] - out.F[i - 1]) / (out.t[i] - out.t[i - 1]);
    double s2 = (out.F[i + 1] - out.F[i]) / (out.t[i + 1] - out.t[i]);
    out.d2F_dt2[i] = 2.0 * (s2 - s1) / (out.t[i + 1] - out.t[i - 1]);
  }
  return out;
}

}  // namespace bernlab::eigenfields
