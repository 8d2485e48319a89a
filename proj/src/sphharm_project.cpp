#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bernlab/quadrature.hpp"
#include "bernlab/sphharm.hpp"

namespace bernlab::sphharm {

void dense_sphere_values(const HarmonicExpansion& e, double radius, int n_theta, int n_phi,
                         std::vector<double>& values, std::vector<double>* grad_norm) {
  if (e.dim() != 3) throw std::invalid_argument("dense_sphere_values: d = 3 only");
  if (n_theta < 2 || n_phi < 4) throw std::invalid_argument("dense_sphere_values: grid too small");
  const int kmax = std::max(e.max_degree(), 0);
  const double q = radius / e.r_ref();
  values.assign((size_t)n_theta * n_phi, 0.0);
  if (grad_norm) grad_norm->assign((size_t)n_theta * n_phi, 0.0);

  std::vector<double> qpow((size_t)kmax + 1);
  qpow[0] = 1.0;
  for (int k = 1; k <= kmax; ++k) qpow[k] = qpow[k - 1] * q;

  std::vector<double> cos_t((size_t)(kmax + 1) * n_phi), sin_t((size_t)(kmax + 1) * n_phi);
  for (int l = 0; l <= kmax; ++l)
    for (int j = 0; j < n_phi; ++j) {
      double ph = kTwoPi * j / n_phi * l;
      cos_t[(size_t)l * n_phi + j] = std::cos(ph);
      sin_t[(size_t)l * n_phi + j] = std::sin(ph);
    }

  std::vector<double> p((size_t)kmax + 1), pd((size_t)kmax + 1);
  std::vector<double> A((size_t)kmax + 1), B((size_t)kmax + 1), Ar((size_t)kmax + 1),
      Br((size_t)kmax + 1), At((size_t)kmax + 1), Bt((size_t)kmax + 1);
  const auto& blocks = e.blocks();
  const double rt2 = std::sqrt(2.0);

  for (int it = 0; it < n_theta; ++it) {
    double theta = kPi * (it + 0.5) / n_theta;
    double t = std::cos(theta), st = std::sin(theta);
    for (int l = 0; l <= kmax; ++l) {
      A[l] = B[l] = Ar[l] = Br[l] = At[l] = Bt[l] = 0;
      polar_chain(3, l, t, kmax - l, p.data(), grad_norm ? pd.data() : nullptr);
      int mc = (l == 0) ? 0 : 2 * l - 1;
      int ms = 2 * l;
      for (int n = 0; n + l <= kmax; ++n) {
        int k = l + n;
        if (k >= (int)blocks.size()) break;
        const auto& blk = blocks[k];
        double ac = (mc < (int)blk.size()) ? blk[mc] : 0.0;
        double as = (l > 0 && ms < (int)blk.size()) ? blk[ms] : 0.0;
        if (ac == 0.0 && as == 0.0) continue;
        double w = p[n] * qpow[k];
        A[l] += ac * w;
        if (l > 0) B[l] += as * w;
        if (grad_norm) {
          double wr = p[n] * qpow[k] * k / radius;
          double wt = pd[n] * qpow[k];
          Ar[l] += ac * wr;
          At[l] += ac * wt;
          if (l > 0) {
            Br[l] += as * wr;
            Bt[l] += as * wt;
          }
        }
      }
    }
    double* vrow = values.data() + (size_t)it * n_phi;
    double* grow = grad_norm ? grad_norm->data() + (size_t)it * n_phi : nullptr;
    for (int j = 0; j < n_phi; ++j) {
      double v = A[0];
      double dr = grad_norm ? Ar[0] : 0.0;
      double dth = grad_norm ? At[0] : 0.0;
      double dph = 0.0;
      for (int l = 1; l <= kmax; ++l) {
        double cl = cos_t[(size_t)l * n_phi + j], sl = sin_t[(size_t)l * n_phi + j];
        v += rt2 * (A[l] * cl + B[l] * sl);
        if (grad_norm) {
          dr += rt2 * (Ar[l] * cl + Br[l] * sl);
          dth += rt2 * (At[l] * cl + Bt[l] * sl);
          dph += rt2 * l * (-A[l] * sl + B[l] * cl);
        }
      }
      vrow[j] = v;
      if (grow) {
        double gth = dth / radius;
        double gph = dph / (radius * st);
        grow[j] = std::sqrt(dr * dr + gth * gth + gph * gph);
      }
    }
  }
}

std::vector<double> project_on_sphere(int d, int K, int order,
                                      const std::function<double(const Vec&)>& f) {
  if (d < 2) throw std::invalid_argument("project_on_sphere: d must be >= 2");
  if (K < 0 || order < 1) throw std::invalid_argument("project_on_sphere: bad K or order");
  std::vector<double> out((size_t)basis_count(d, K), 0.0);
  if (d == 2) {
    int n = std::max(order + 1, 2 * K + 2);
    const double rt2 = std::sqrt(2.0);
    for (int j = 0; j < n; ++j) {
      double ph = kTwoPi * j / n;
      double cph = std::cos(ph), sph = std::sin(ph);
      double val = f(Vec{cph, sph}) / n;
      out[0] += val;
      double c = 1.0, s = 0.0;
      for (int k = 1; k <= K; ++k) {
        double cn = c * cph - s * sph;
        double sn = s * cph + c * sph;
        c = cn;
        s = sn;
        out[2 * k - 1] += val * rt2 * c;
        out[2 * k] += val * rt2 * s;
      }
    }
    return out;
  }
  std::vector<double> t, wt;
  polar_rule(d, order, t, wt);
  double W = 0;
  for (double w : wt) W += w;
  std::vector<int> offs((size_t)K + 2, 0);
  for (int k = 0; k <= K; ++k) offs[k + 1] = offs[k] + dim_harmonics(d, k);
  std::vector<double> p((size_t)K + 1);
  for (size_t i = 0; i < t.size(); ++i) {
    double ti = t[i];
    double y = std::sqrt(std::max(0.0, 1.0 - ti * ti));
    auto slice = [&](const Vec& eta) {
      Vec xi(d);
      for (int a = 0; a < d - 1; ++a) xi[a] = y * eta[a];
      xi[d - 1] = ti;
      return f(xi);
    };
    std::vector<double> sub = project_on_sphere(d - 1, K, order, slice);
    double wi = wt[i] / W;
    for (int l = 0; l <= K; ++l) {
      polar_chain(d, l, ti, K - l, p.data(), nullptr);
      int suboff = basis_count(d - 1, l - 1);
      int subdim = dim_harmonics(d - 1, l);
      for (int n = 0; n + l <= K; ++n) {
        int base = offs[l + n] + suboff;
        double w = wi * p[n];
        for (int mu = 0; mu < subdim; ++mu) out[base + mu] += w * sub[suboff + mu];
      }
    }
  }
  return out;
}

}  // namespace bernlab::sphharm
