#include "bernlab/frequency.hpp"

#include <cmath>
#include <sstream>

#include "bernlab/quadrature.hpp"
#include "bernlab/rng.hpp"

namespace bernlab {

CoefficientField CoefficientField::identity(int d) {
  CoefficientField A(
      d,
      [d](const Vec&, double* out) {
        for (int i = 0; i < d * d; ++i) out[i] = 0;
        for (int i = 0; i < d; ++i) out[i * d + i] = 1;
      },
      1.0, true);
  A.identity_ = true;
  return A;
}

CoefficientField CoefficientField::diagonal(const std::vector<double>& diag) {
  int d = (int)diag.size();
  double lo = diag[0], hi = diag[0];
  for (double v : diag) {
    if (!(v > 0)) throw std::invalid_argument("CoefficientField::diagonal: entries must be positive");
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  double lam = std::max(hi, 1.0 / lo);
  bool ident = true;
  for (double v : diag) ident = ident && v == 1.0;
  auto dd = diag;
  CoefficientField A(
      d,
      [d, dd](const Vec&, double* out) {
        for (int i = 0; i < d * d; ++i) out[i] = 0;
        for (int i = 0; i < d; ++i) out[i * d + i] = dd[i];
      },
      lam, ident);
  A.identity_ = ident;
  return A;
}

Vec CoefficientField::apply(const Vec& x, const Vec& v) const {
  double m[kMaxCoordDim * kMaxCoordDim];
  fn_(x, m);
  Vec out(d_);
  for (int i = 0; i < d_; ++i) {
    double s = 0;
    for (int j = 0; j < d_; ++j) s += m[i * d_ + j] * v[j];
    out[i] = s;
  }
  return out;
}

double CoefficientField::quadratic_form(const Vec& x, const Vec& v) const {
  return apply(x, v).dot(v);
}

bool CoefficientField::check_ellipticity(std::uint64_t seed, int samples, double box) const {
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    Vec x(d_), xi(d_);
    for (int i = 0; i < d_; ++i) {
      x[i] = rng.uniform(-box, box);
      xi[i] = rng.normal();
    }
    double q = quadratic_form(x, xi);
    double n2 = xi.norm2();
    if (q < n2 / lambda_ * (1 - 1e-9) || q > n2 * lambda_ * (1 + 1e-9)) return false;
  }
  if (id_origin_) {
    Vec x0 = Vec::zero(d_);
    double m[kMaxCoordDim * kMaxCoordDim];
    fn_(x0, m);
    for (int i = 0; i < d_; ++i)
      for (int j = 0; j < d_; ++j)
        if (std::abs(m[i * d_ + j] - (i == j ? 1.0 : 0.0)) > 1e-12) return false;
  }
  return true;
}

double mu_weight(const CoefficientField& A, const Vec& x) {
  double n2 = x.norm2();
  if (n2 == 0) {
    if (A.identity_at_origin()) return 1.0;
    throw std::domain_error("mu_weight: undefined at x = 0 without identity_at_origin");
  }
  return A.quadratic_form(x, x) / n2;
}

namespace {

int auto_order(const ScalarField& field, double r) {
  if (field.expansion && field.expansion->max_degree() >= 0)
    return 2 * std::max(field.expansion->max_degree(), 1) + 4;
  double b = field.band_limit() ? *field.band_limit() : 1.0;
  return std::max(12, 2 * (int)std::ceil(b * r) + 24);
}

// Slice-accelerated frequency for a centered harmonic expansion, A = Id.
std::vector<double> frequency_slices(const sphharm::HarmonicExpansion& e, double r_ref_unused,
                                     const std::vector<double>& radii, int sphere_order,
                                     int radial_order) {
  (void)r_ref_unused;
  const int d = e.dim();
  Quadrature sph = sphere_rule(d, sphere_order);
  std::vector<Vec> dirs = sph.nodes;
  sphharm::SphereSlices sl = sphharm::sphere_slices(e, dirs, true);
  const int kmax = sl.kmax;
  const size_t stride = (size_t)kmax + 1;
  std::vector<double> rho, wr;
  int nrad = (radial_order + d - 1 + 2) / 2;
  gauss_legendre(nrad, 0.0, 1.0, rho, wr);  // scaled to [0, r] per radius below
  const double r_ref = e.r_ref();

  std::vector<double> out;
  out.reserve(radii.size());
  for (double r : radii) {
    // Dirichlet integral over B(0, r)
    double D = 0;
    for (int i = 0; i < nrad; ++i) {
      double rr = rho[i] * r;
      double q = rr / r_ref;
      double rad_w = wr[i] * r * std::pow(rr, d - 1);
      double acc = 0;
      for (size_t j = 0; j < dirs.size(); ++j) {
        const double* g = sl.g.data() + (j * stride) * d;
        double comp[kMaxCoordDim] = {0};
        // k = 0 has zero gradient; degree k contributes g_k q^{k-1}/r_ref
        double qpow = 1.0;
        for (int k = 1; k <= kmax; ++k) {
          double f = qpow / r_ref;
          const double* gk = g + (size_t)k * d;
          for (int a = 0; a < d; ++a) comp[a] += gk[a] * f;
          qpow *= q;
        }
        double g2 = 0;
        for (int a = 0; a < d; ++a) g2 += comp[a] * comp[a];
        acc += sph.weights[j] * g2;
      }
      D += rad_w * acc;
    }
    // boundary mass on dB(0, r)
    double H = 0;
    double q = r / r_ref;
    for (size_t j = 0; j < dirs.size(); ++j) {
      const double* v = sl.v.data() + j * stride;
      double u = 0, qpow = 1.0;
      for (int k = 0; k <= kmax; ++k) {
        u += v[k] * qpow;
        qpow *= q;
      }
      H += sph.weights[j] * u * u;
    }
    H *= std::pow(r, d - 1);
    if (H <= 0) throw std::domain_error("frequency_numeric: undefined frequency (vanishing boundary mass)");
    out.push_back(D == 0 ? 0.0 : r * D / H);
  }
  return out;
}

std::vector<double> frequency_generic(const ScalarField& field, const CoefficientField& A,
                                      const Vec& center, const std::vector<double>& radii,
                                      int sphere_order, int radial_order) {
  const int d = field.domain().coord_dim();
  if (!field.has_gradient())
    throw std::domain_error("frequency_numeric: field does not provide gradients");
  Quadrature sph = sphere_rule(d, sphere_order);
  std::vector<double> out;
  out.reserve(radii.size());
  for (double r : radii) {
    Quadrature ball = ball_rule(d, radial_order, sphere_order, r);
    double D = 0;
    for (size_t i = 0; i < ball.size(); ++i) {
      Vec y = center + ball.nodes[i];
      FieldEval fe = field(y);
      if (!fe.has_grad) throw std::domain_error("frequency_numeric: gradient unavailable");
      double q = A.identity_ ? fe.grad.norm2() : A.quadratic_form(y, fe.grad);
      D += ball.weights[i] * q;
    }
    double H = 0;
    for (size_t j = 0; j < sph.size(); ++j) {
      Vec off = sph.nodes[j] * r;
      Vec y = center + off;
      double u = field.value(y);
      double mu = A.identity_ ? 1.0 : A.quadratic_form(y, off) / off.norm2();
      H += sph.weights[j] * mu * u * u;
    }
    H *= std::pow(r, d - 1);
    if (H <= 0) throw std::domain_error("frequency_numeric: undefined frequency (vanishing boundary mass)");
    out.push_back(D == 0 ? 0.0 : r * D / H);
  }
  return out;
}

std::vector<double> frequency_many(const ScalarField& field, const CoefficientField& A,
                                   const Vec& center, const std::vector<double>& radii,
                                   QuadratureOrders orders) {
  double rmax = 0;
  for (double r : radii) {
    if (!(r > 0)) throw std::invalid_argument("frequency: radii must be positive");
    rmax = std::max(rmax, r);
  }
  int so = orders.sphere > 0 ? orders.sphere : auto_order(field, rmax);
  int ro = orders.radial > 0 ? orders.radial : so;
  bool fast = field.expansion && field.view == ExpansionView::value && A.identity_ &&
              (center - field.expansion_center).norm() <= 1e-14;
  if (fast) return frequency_slices(*field.expansion, 0, radii, so, ro);
  return frequency_generic(field, A, center, radii, so, ro);
}

}  // namespace

double frequency_numeric(const ScalarField& field, const CoefficientField& A, const Vec& center,
                         double r, QuadratureOrders orders) {
  return frequency_many(field, A, center, {r}, orders)[0];
}

double FrequencyProfile::max_downward_step() const {
  double worst = 0;
  for (size_t i = 1; i < values.size(); ++i) worst = std::max(worst, values[i - 1] - values[i]);
  return worst;
}

std::string FrequencyProfile::to_csv() const {
  std::ostringstream os;
  os << "center_coords,r,N,weight,quad_order\n";
  std::ostringstream cs;
  for (int i = 0; i < center.size(); ++i) {
    if (i) cs << ';';
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", center[i]);
    cs << buf;
  }
  for (size_t i = 0; i < radii.size(); ++i) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g", radii[i], values[i]);
    os << cs.str() << ',' << buf << ',' << weight << ',' << quad_order << "\n";
  }
  return os.str();
}

FrequencyProfile frequency_profile(const ScalarField& field, const CoefficientField& A,
                                   const Vec& center, const std::vector<double>& r_grid,
                                   QuadratureOrders orders) {
  if (r_grid.empty()) throw std::invalid_argument("frequency_profile: empty radius grid");
  for (size_t i = 1; i < r_grid.size(); ++i)
    if (!(r_grid[i] > r_grid[i - 1]))
      throw std::invalid_argument("frequency_profile: radii must be strictly increasing");
  FrequencyProfile p;
  p.center = center;
  p.radii = r_grid;
  p.values = frequency_many(field, A, center, r_grid, orders);
  p.weight = A.identity_ ? "identity" : "coefficient_field";
  p.quad_order = orders.sphere > 0 ? orders.sphere : auto_order(field, r_grid.back());
  return p;
}

double doubling_index(const ScalarField& field, const Vec& center, double r, QuadratureOrders orders) {
  if (!(r > 0)) throw std::invalid_argument("doubling_index: r must be positive");
  int so = orders.sphere > 0 ? orders.sphere : auto_order(field, 2 * r);
  int ro = orders.radial > 0 ? orders.radial : so;
  const int d = field.domain().coord_dim();
  auto mean_sq = [&](double rr) {
    Quadrature ball = ball_rule(d, ro, so, rr);
    double s = 0;
    for (size_t i = 0; i < ball.size(); ++i) {
      double u = field.value(center + ball.nodes[i]);
      s += ball.weights[i] * u * u;
    }
    return s / ball.total_weight;
  };
  double inner = mean_sq(r);
  if (inner <= 0) throw std::domain_error("doubling_index: zero inner mass");
  double outer = mean_sq(2 * r);
  return 0.5 * std::log2(outer / inner);
}

SupBoundaryReport sup_vs_boundary_l2(const ScalarField& field, const Vec& center, double r,
                                     double N_declared, const ResolutionPolicy& policy,
                                     QuadratureOrders orders) {
  if (!(N_declared > 0)) throw std::invalid_argument("sup_vs_boundary_l2: N must be positive");
  const int d = field.domain().coord_dim();
  int so = orders.sphere > 0 ? orders.sphere : auto_order(field, r);
  Quadrature sph = sphere_rule(d, so);
  double ms = 0;
  for (size_t j = 0; j < sph.size(); ++j) {
    double u = field.value(center + sph.nodes[j] * r);
    ms += sph.weights[j] * u * u;
  }
  ms /= sph.total_weight;
  SupBoundaryReport rep;
  rep.boundary_rms = std::sqrt(ms);
  GeodesicBall ball(field.domain(), center, r);
  rep.sup = sup_norm(field, ball, policy).sup;
  if (rep.boundary_rms == 0) throw std::domain_error("sup_vs_boundary_l2: zero boundary mass");
  rep.ratio = rep.sup / (std::pow(N_declared, 0.5 * d) * rep.boundary_rms);
  return rep;
}

}  // namespace bernlab
