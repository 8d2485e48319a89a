#include "bernlab/sphharm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bernlab::sphharm {

namespace {

constexpr double kSqrtPiLog = 0.57236494292470008707;  // log(sqrt(pi))

unsigned long long binom(int n, int r) {
  if (r < 0 || r > n) return 0;
  r = std::min(r, n - r);
  unsigned long long acc = 1;
  for (int i = 1; i <= r; ++i) acc = acc * (unsigned long long)(n - r + i) / (unsigned long long)i;
  return acc;
}

// log of the Gegenbauer squared norm: integral of (1-t^2)^{alpha-1/2} C_0^2 = h_0.
double log_h0(double alpha) {
  return kSqrtPiLog + std::lgamma(alpha + 0.5) - std::lgamma(alpha + 1.0);
}

// log of omega_{d-1}/omega_{d-2}.
double log_W(int d) {
  return kSqrtPiLog + std::lgamma(0.5 * (d - 1)) - std::lgamma(0.5 * d);
}

// Ratio c_n / c_{n-1} of the per-degree normalization constants; together
// with the Gegenbauer three-term recurrence this keeps every intermediate of
// the scaled chains within a bounded dynamic range.
inline double c_ratio(double alpha, int n) {
  return std::sqrt((double)n * (n + alpha) / ((n - 1 + 2 * alpha) * (n - 1 + alpha)));
}

// Scaled solid chain. G[n] = c_n * (homogenized C_n^alpha)(xd, s); Gx, Gs are
// the derivatives in xd and in s = |x|^2. Buffers hold nmax+1 entries.
void solid_chain(double alpha, double c0, double xd, double s, int nmax, double* G, double* Gx, double* Gs) {
  G[0] = c0;
  if (Gx) Gx[0] = 0;
  if (Gs) Gs[0] = 0;
  double prev_ratio = 0;
  for (int n = 1; n <= nmax; ++n) {
    double r1 = c_ratio(alpha, n);
    double P = r1 * 2.0 * (n + alpha - 1) / n;
    double Q = (n >= 2) ? r1 * prev_ratio * (n + 2 * alpha - 2) / n : 0.0;
    double gm1 = G[n - 1], gm2 = (n >= 2) ? G[n - 2] : 0.0;
    G[n] = P * xd * gm1 - Q * s * gm2;
    if (Gx) Gx[n] = P * (gm1 + xd * Gx[n - 1]) - (n >= 2 ? Q * s * Gx[n - 2] : 0.0);
    if (Gs) Gs[n] = P * xd * Gs[n - 1] - (n >= 2 ? Q * (gm2 + s * Gs[n - 2]) : 0.0);
    prev_ratio = r1;
  }
}

struct Scratch {
  std::vector<double> vals[kMaxCoordDim + 1];
  std::vector<double> grads[kMaxCoordDim + 1];
  std::vector<double> chain;
  std::vector<double> basis_v, basis_g;
};
thread_local Scratch tls;

void eval_basis_impl(int d, int kmax, const double* x, std::vector<double>& values,
                     std::vector<double>* grads) {
  const int count = basis_count(d, kmax);
  values.resize(count);
  if (grads) grads->resize((size_t)count * d);
  if (d == 2) {
    values[0] = 1.0;
    if (grads) (*grads)[0] = (*grads)[1] = 0.0;
    const double rt2 = std::sqrt(2.0);
    double re_p = 1.0, im_p = 0.0;
    for (int k = 1; k <= kmax; ++k) {
      double re = x[0] * re_p - x[1] * im_p;
      double im = x[0] * im_p + x[1] * re_p;
      int ic = 2 * k - 1, is = 2 * k;
      values[ic] = rt2 * re;
      values[is] = rt2 * im;
      if (grads) {
        (*grads)[(size_t)ic * 2 + 0] = rt2 * k * re_p;
        (*grads)[(size_t)ic * 2 + 1] = -rt2 * k * im_p;
        (*grads)[(size_t)is * 2 + 0] = rt2 * k * im_p;
        (*grads)[(size_t)is * 2 + 1] = rt2 * k * re_p;
      }
      re_p = re;
      im_p = im;
    }
    return;
  }
  auto& sub_v = tls.vals[d - 1];
  auto& sub_g = tls.grads[d - 1];
  eval_basis_impl(d - 1, kmax, x, sub_v, grads ? &sub_g : nullptr);

  double s = 0;
  for (int i = 0; i < d; ++i) s += x[i] * x[i];
  const double xd = x[d - 1];
  const double lw = log_W(d);

  auto& chain = tls.chain;
  chain.resize(3 * (size_t)(kmax + 1));

  std::vector<int> offs((size_t)kmax + 2, 0);
  for (int k = 0; k <= kmax; ++k) offs[k + 1] = offs[k] + dim_harmonics(d, k);

  for (int l = 0; l <= kmax; ++l) {
    const double alpha = l + 0.5 * (d - 2);
    const int nmax = kmax - l;
    const double c0 = std::exp(0.5 * (lw - log_h0(alpha)));
    double* G = chain.data();
    double* Gx = G + (kmax + 1);
    double* Gs = Gx + (kmax + 1);
    solid_chain(alpha, c0, xd, s, nmax, G, grads ? Gx : nullptr, grads ? Gs : nullptr);
    const int suboff = basis_count(d - 1, l - 1);
    const int subdim = dim_harmonics(d - 1, l);
    for (int n = 0; n <= nmax; ++n) {
      const int k = l + n;
      const int out_base = offs[k] + suboff;
      for (int mu = 0; mu < subdim; ++mu) {
        const int idx = out_base + mu;
        const int sidx = suboff + mu;
        const double Sp = sub_v[sidx];
        values[idx] = G[n] * Sp;
        if (grads) {
          double* go = grads->data() + (size_t)idx * d;
          const double* gi = sub_g.data() + (size_t)sidx * (d - 1);
          const double gs2 = 2.0 * Gs[n];
          for (int i = 0; i < d - 1; ++i) go[i] = G[n] * gi[i] + gs2 * x[i] * Sp;
          go[d - 1] = (Gx[n] + gs2 * xd) * Sp;
        }
      }
    }
  }
}

}  // namespace

int dim_harmonics(int d, int k) {
  if (d < 2) throw std::invalid_argument("dim_harmonics: d must be >= 2");
  if (k < 0) throw std::invalid_argument("dim_harmonics: k must be >= 0");
  if (k == 0) return 1;
  if (k == 1) return d;
  return (int)(binom(k + d - 1, d - 1) - binom(k + d - 3, d - 1));
}

int basis_count(int d, int kmax) {
  if (kmax < 0) return 0;
  int c = 0;
  for (int k = 0; k <= kmax; ++k) c += dim_harmonics(d, k);
  return c;
}

double zonal_kernel(int d, int k, double cosine) {
  if (d < 2) throw std::invalid_argument("zonal_kernel: d must be >= 2");
  if (k < 0) throw std::invalid_argument("zonal_kernel: k must be >= 0");
  if (std::abs(cosine) > 1.0 + 1e-12) throw std::invalid_argument("zonal_kernel: |cosine| > 1");
  double t = std::max(-1.0, std::min(1.0, cosine));
  if (k == 0) return 1.0;
  if (d == 2) {
    double tp = 1.0, tc = t;
    for (int n = 2; n <= k; ++n) {
      double tn = 2.0 * t * tc - tp;
      tp = tc;
      tc = tn;
    }
    return 2.0 * tc;
  }
  const double alpha = 0.5 * (d - 2);
  double cp = 1.0, cc = 2.0 * alpha * t;
  double oc = 2.0 * alpha;  // value at t = 1
  for (int n = 2; n <= k; ++n) {
    double cn = (2.0 * t * (n + alpha - 1) * cc - (n + 2 * alpha - 2) * cp) / n;
    cp = cc;
    cc = cn;
    oc = oc * (n + 2 * alpha - 1) / n;
  }
  return dim_harmonics(d, k) * cc / oc;
}

int coordinate_basis_index(int d, int axis) {
  if (axis < 0 || axis >= d) throw std::invalid_argument("coordinate_basis_index: bad axis");
  if (d == 2) return axis;
  if (axis == d - 1) return 0;
  return 1 + coordinate_basis_index(d - 1, axis);
}

void eval_solid_basis(int d, int kmax, const Vec& x, std::vector<double>& values,
                      std::vector<double>* grads) {
  if (d < 2) throw std::invalid_argument("eval_solid_basis: d must be >= 2");
  if (x.size() != d) throw std::invalid_argument("eval_solid_basis: point dimension mismatch");
  if (kmax > 300) throw std::invalid_argument("eval_solid_basis: degree beyond supported range");
  eval_basis_impl(d, std::max(kmax, 0), x.c.data(), values, grads);
}

void polar_chain(int d, int l, double cos_theta, int nmax, double* p, double* pdot) {
  const double alpha = l + 0.5 * (d - 2);
  const double t = cos_theta;
  const double y2 = std::max(0.0, 1.0 - t * t);
  const double y = std::sqrt(y2);
  const double logc0 = 0.5 * (log_W(d) - log_h0(alpha));
  double p0, pd0;
  if (l == 0) {
    p0 = std::exp(logc0);
    pd0 = 0.0;
  } else if (y == 0.0) {
    p0 = 0.0;
    pd0 = (l == 1) ? std::exp(logc0) * t : 0.0;
  } else {
    p0 = std::exp(logc0 + l * std::log(y));
    pd0 = l * t * std::exp(logc0 + (l - 1) * std::log(y));
  }
  p[0] = p0;
  if (pdot) pdot[0] = pd0;
  double prev_ratio = 0;
  for (int n = 1; n <= nmax; ++n) {
    double r1 = c_ratio(alpha, n);
    double P = r1 * 2.0 * (n + alpha - 1) / n;
    double Q = (n >= 2) ? r1 * prev_ratio * (n + 2 * alpha - 2) / n : 0.0;
    p[n] = P * t * p[n - 1] - (n >= 2 ? Q * p[n - 2] : 0.0);
    if (pdot) pdot[n] = P * (-y * p[n - 1] + t * pdot[n - 1]) - (n >= 2 ? Q * pdot[n - 2] : 0.0);
    prev_ratio = r1;
  }
}

HarmonicExpansion::HarmonicExpansion(int d, double r_ref) : d_(d), r_ref_(r_ref) {
  if (d < 2) throw std::invalid_argument("HarmonicExpansion: d must be >= 2");
  if (!(r_ref > 0)) throw std::invalid_argument("HarmonicExpansion: r_ref must be positive");
}

HarmonicExpansion HarmonicExpansion::from_terms(int d, const std::vector<Term>& terms, double r_ref) {
  HarmonicExpansion e(d, r_ref);
  for (const Term& t : terms) {
    if (t.degree < (int)e.blocks_.size() && t.index < (int)e.blocks_[t.degree].size() &&
        e.blocks_[t.degree][t.index] != 0.0)
      throw std::invalid_argument("HarmonicExpansion: duplicate (degree, index) term");
    e.set_coeff(t.degree, t.index, t.coeff);
  }
  return e;
}

bool HarmonicExpansion::zero() const {
  for (const auto& b : blocks_)
    for (double a : b)
      if (a != 0.0) return false;
  return true;
}

int HarmonicExpansion::max_degree() const {
  for (int k = (int)blocks_.size() - 1; k >= 0; --k)
    for (double a : blocks_[k])
      if (a != 0.0) return k;
  return -1;
}

int HarmonicExpansion::min_degree_present() const {
  for (int k = 0; k < (int)blocks_.size(); ++k)
    for (double a : blocks_[k])
      if (a != 0.0) return k;
  return -1;
}

void HarmonicExpansion::set_coeff(int k, int m, double a) {
  if (!std::isfinite(a)) throw std::invalid_argument("HarmonicExpansion: non-finite coefficient");
  double scale = std::pow(r_ref_, k);
  if (!std::isfinite(a * scale))
    throw std::overflow_error("HarmonicExpansion: coefficient overflows at r_ref scale");
  set_amplitude(k, m, a * scale);
}

void HarmonicExpansion::set_amplitude(int k, int m, double a_ref) {
  if (k < 0) throw std::invalid_argument("HarmonicExpansion: degree must be >= 0");
  if (k > 300) throw std::invalid_argument("HarmonicExpansion: degree beyond supported range");
  int dk = dim_harmonics(d_, k);
  if (m < 0 || m >= dk) throw std::invalid_argument("HarmonicExpansion: basis index out of range");
  if (!std::isfinite(a_ref)) throw std::invalid_argument("HarmonicExpansion: non-finite amplitude");
  if ((int)blocks_.size() <= k) blocks_.resize(k + 1);
  if ((int)blocks_[k].size() < dk) blocks_[k].resize(dk, 0.0);
  blocks_[k][m] = a_ref;
}

double HarmonicExpansion::coeff(int k, int m) const { return amplitude(k, m) / std::pow(r_ref_, k); }

double HarmonicExpansion::amplitude(int k, int m) const {
  if (k < 0 || k >= (int)blocks_.size()) return 0.0;
  if (m < 0 || m >= (int)blocks_[k].size()) return 0.0;
  return blocks_[k][m];
}

double HarmonicExpansion::degree_amplitude2(int k) const {
  if (k < 0 || k >= (int)blocks_.size()) return 0.0;
  double s = 0;
  for (double a : blocks_[k]) s += a * a;
  return s;
}

std::vector<Term> HarmonicExpansion::terms() const {
  std::vector<Term> out;
  for (int k = 0; k < (int)blocks_.size(); ++k)
    for (int m = 0; m < (int)blocks_[k].size(); ++m)
      if (blocks_[k][m] != 0.0) out.push_back({k, m, coeff(k, m)});
  return out;
}

double HarmonicExpansion::eval(const Vec& x, Vec* grad) const {
  if (x.size() != d_) throw std::invalid_argument("HarmonicExpansion::eval: dimension mismatch");
  if (grad) *grad = Vec::zero(d_);
  int kmax = max_degree();
  if (kmax < 0) return 0.0;
  Vec xh = x * (1.0 / r_ref_);
  auto& bv = tls.basis_v;
  auto& bg = tls.basis_g;
  eval_basis_impl(d_, kmax, xh.c.data(), bv, grad ? &bg : nullptr);
  std::vector<int> offs((size_t)kmax + 2, 0);
  for (int k = 0; k <= kmax; ++k) offs[k + 1] = offs[k] + dim_harmonics(d_, k);
  double val = 0;
  for (int k = 0; k < (int)blocks_.size(); ++k) {
    for (int m = 0; m < (int)blocks_[k].size(); ++m) {
      double a = blocks_[k][m];
      if (a == 0.0) continue;
      int idx = offs[k] + m;
      val += a * bv[idx];
      if (grad)
        for (int i = 0; i < d_; ++i) (*grad)[i] += a * bg[(size_t)idx * d_ + i];
    }
  }
  if (grad) *grad = *grad * (1.0 / r_ref_);
  return val;
}

double HarmonicExpansion::sphere_mean_square(double rho) const {
  if (!(rho > 0)) throw std::invalid_argument("sphere_mean_square: rho must be positive");
  double q2 = (rho / r_ref_) * (rho / r_ref_);
  double s = 0, qk = 1;
  for (int k = 0; k < (int)blocks_.size(); ++k) {
    s += degree_amplitude2(k) * qk;
    qk *= q2;
  }
  return s;
}

double HarmonicExpansion::ball_mean_square(double r) const {
  if (!(r > 0)) throw std::invalid_argument("ball_mean_square: r must be positive");
  double q2 = (r / r_ref_) * (r / r_ref_);
  double s = 0, qk = 1;
  for (int k = 0; k < (int)blocks_.size(); ++k) {
    s += (double)d_ / (2.0 * k + d_) * degree_amplitude2(k) * qk;
    qk *= q2;
  }
  return s;
}

double HarmonicExpansion::exact_frequency(double r) const {
  if (!(r > 0)) throw std::invalid_argument("exact_frequency: r must be positive");
  int k0 = min_degree_present();
  if (k0 < 0) throw std::domain_error("exact_frequency: undefined frequency for the zero expansion");
  int k1 = max_degree();
  double q2 = (r / r_ref_) * (r / r_ref_);
  // Anchor the common power at whichever end dominates, so extreme radii
  // only underflow the negligible terms instead of overflowing.
  double num = 0, den = 0;
  if (q2 <= 1.0) {
    double qk = 1;
    for (int k = k0; k <= k1; ++k) {
      double A = degree_amplitude2(k);
      num += k * A * qk;
      den += A * qk;
      qk *= q2;
    }
  } else {
    double qk = 1;
    for (int k = k1; k >= k0; --k) {
      double A = degree_amplitude2(k);
      num += k * A * qk;
      den += A * qk;
      qk /= q2;
    }
  }
  if (den == 0.0) throw std::domain_error("exact_frequency: undefined frequency at this radius");
  return num / den;
}

std::pair<HarmonicExpansion, HarmonicExpansion> HarmonicExpansion::truncate(int K) const {
  if (K < 0) throw std::invalid_argument("truncate: K must be >= 0");
  HarmonicExpansion head(d_, r_ref_), tail(d_, r_ref_);
  for (int k = 0; k < (int)blocks_.size(); ++k)
    for (int m = 0; m < (int)blocks_[k].size(); ++m)
      if (blocks_[k][m] != 0.0) (k <= K ? head : tail).set_amplitude(k, m, blocks_[k][m]);
  return {std::move(head), std::move(tail)};
}

SphereSlices sphere_slices(const HarmonicExpansion& e, const std::vector<Vec>& dirs, bool with_grad) {
  SphereSlices out;
  out.d = e.dim();
  out.kmax = e.max_degree();
  out.n_dirs = dirs.size();
  out.with_grad = with_grad;
  if (out.kmax < 0) {
    out.v.assign(dirs.size(), 0.0);
    if (with_grad) out.g.assign(dirs.size() * e.dim(), 0.0);
    out.kmax = 0;
    return out;
  }
  const int d = e.dim(), kmax = out.kmax;
  const size_t stride = (size_t)kmax + 1;
  out.v.assign(dirs.size() * stride, 0.0);
  if (with_grad) out.g.assign(dirs.size() * stride * d, 0.0);
  std::vector<int> offs((size_t)kmax + 2, 0);
  for (int k = 0; k <= kmax; ++k) offs[k + 1] = offs[k] + dim_harmonics(d, k);
  auto& bv = tls.basis_v;
  auto& bg = tls.basis_g;
  const auto& blocks = e.blocks();
  for (size_t j = 0; j < dirs.size(); ++j) {
    eval_basis_impl(d, kmax, dirs[j].c.data(), bv, with_grad ? &bg : nullptr);
    for (int k = 0; k < (int)blocks.size(); ++k) {
      double vk = 0;
      double gk[kMaxCoordDim] = {0};
      bool any = false;
      for (int m = 0; m < (int)blocks[k].size(); ++m) {
        double a = blocks[k][m];
        if (a == 0.0) continue;
        any = true;
        int idx = offs[k] + m;
        vk += a * bv[idx];
        if (with_grad)
          for (int i = 0; i < d; ++i) gk[i] += a * bg[(size_t)idx * d + i];
      }
      if (!any) continue;
      out.v[j * stride + k] = vk;
      if (with_grad)
        for (int i = 0; i < d; ++i) out.g[(j * stride + k) * d + i] = gk[i];
    }
  }
  return out;
}
// dense_sphere_values and project_on_sphere live in sphharm_project.cpp.


HarmonicExpansion coordinate_expansion(int d, int axis, double r_ref) {
  HarmonicExpansion e(d, r_ref);
  e.set_coeff(1, coordinate_basis_index(d, axis), 1.0 / std::sqrt((double)d));
  return e;
}

}  // namespace bernlab::sphharm
