#include "bernlab/verify.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <sstream>

#include "bernlab/bernstein.hpp"
#include "bernlab/eigenfields.hpp"
#include "bernlab/frequency.hpp"
#include "bernlab/io.hpp"
#include "bernlab/quadrature.hpp"
#include "bernlab/rng.hpp"
#include "bernlab/supnorm.hpp"

namespace bernlab::verify {

namespace {

using sphharm::HarmonicExpansion;

struct Suite {
  bool quick;
  std::vector<CheckResult> results;

  void add(const std::string& name, bool pass, const std::string& detail = "") {
    results.push_back({name, pass, detail});
  }
  void run(const std::string& name, const std::function<std::pair<bool, std::string>()>& fn) {
    try {
      auto [ok, detail] = fn();
      add(name, ok, detail);
    } catch (const std::exception& ex) {
      add(name, false, std::string("exception: ") + ex.what());
    }
  }
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

HarmonicExpansion random_expansion(Rng& rng, int d, int kmax, int max_terms, double r_ref = 1.0) {
  HarmonicExpansion e(d, r_ref);
  e.set_coeff(kmax, rng.uniform_int(0, sphharm::dim_harmonics(d, kmax) - 1), rng.normal());
  for (int t = 0; t < max_terms - 1; ++t) {
    int k = rng.uniform_int(0, kmax);
    int m = rng.uniform_int(0, sphharm::dim_harmonics(d, k) - 1);
    e.set_coeff(k, m, rng.normal());
  }
  return e;
}

// average of prod x_i^{2a_i} over the unit sphere: prod (2a_i - 1)!! / prod_{j<|a|} (d + 2j)
double sphere_monomial_average(int d, const std::vector<int>& a) {
  double num = 1;
  int tot = 0;
  for (int ai : a) {
    for (int j = 1; j < 2 * ai; j += 2) num *= j;
    tot += ai;
  }
  double den = 1;
  for (int j = 0; j < tot; ++j) den *= (d + 2 * j);
  return num / den;
}

void check_sphharm(Suite& s) {
  s.run("sphharm.dim_formula", [&] {
    bool ok = sphharm::dim_harmonics(3, 2) == 5 && sphharm::dim_harmonics(2, 4) == 2 &&
              sphharm::dim_harmonics(4, 3) == 16 && sphharm::dim_harmonics(3, 0) == 1 &&
              sphharm::dim_harmonics(5, 1) == 5;
    for (int d = 3; d <= 6 && ok; ++d)
      for (int k = 0; k <= 12 && ok; ++k)
        ok = sphharm::dim_harmonics(d, k) == sphharm::basis_count(d - 1, k);
    return std::pair{ok, std::string()};
  });

  s.run("sphharm.gram_identity", [&] {
    double worst = 0;
    for (int d : {2, 3, 4}) {
      int kmax = s.quick ? 5 : (d == 4 ? 7 : 10);
      Quadrature q = sphere_rule(d, 2 * kmax + 1);
      int nb = sphharm::basis_count(d, kmax);
      std::vector<double> gram((size_t)nb * nb, 0.0), vals;
      for (size_t j = 0; j < q.size(); ++j) {
        sphharm::eval_solid_basis(d, kmax, q.nodes[j], vals, nullptr);
        double w = q.weights[j] / q.total_weight;
        for (int a = 0; a < nb; ++a)
          for (int b = a; b < nb; ++b) gram[(size_t)a * nb + b] += w * vals[a] * vals[b];
      }
      for (int a = 0; a < nb; ++a)
        for (int b = a; b < nb; ++b)
          worst = std::max(worst, std::abs(gram[(size_t)a * nb + b] - (a == b ? 1.0 : 0.0)));
    }
    return std::pair{worst < 1e-10, "max Gram deviation " + fmt(worst)};
  });

  s.run("sphharm.parseval_sphere", [&] {
    Rng rng(11);
    double worst = 0;
    int reps = s.quick ? 4 : 12;
    for (int t = 0; t < reps; ++t) {
      int d = 2 + t % 3;
      int kmax = s.quick ? 8 : (d == 4 ? 12 : 30);
      HarmonicExpansion e = random_expansion(rng, d, kmax, 20);
      double rho = 0.7 + 0.6 * rng.uniform();
      Quadrature q = sphere_rule(d, 2 * kmax + 1);
      double acc = 0;
      for (size_t j = 0; j < q.size(); ++j) {
        double v = e.eval(q.nodes[j] * rho);
        acc += q.weights[j] * v * v;
      }
      acc /= q.total_weight;
      double closed = e.sphere_mean_square(rho);
      worst = std::max(worst, std::abs(acc - closed) / closed);
    }
    return std::pair{worst < 1e-9, "max relative error " + fmt(worst)};
  });

  s.run("sphharm.frequency_pinching_and_monotone", [&] {
    Rng rng(12);
    bool ok = true;
    for (int t = 0; t < (s.quick ? 5 : 20) && ok; ++t) {
      int d = 2 + t % 3;
      HarmonicExpansion e = random_expansion(rng, d, 4 + t % 9, 8);
      int lo = e.min_degree_present(), hi = e.max_degree();
      double prev = -1;
      for (double r = 0.05; r < 3.0; r *= 1.5) {
        double f = e.exact_frequency(r);
        ok = ok && f >= lo - 1e-12 && f <= hi + 1e-12 && f >= prev - 1e-12;
        prev = f;
      }
    }
    return std::pair{ok, std::string()};
  });

  s.run("sphharm.doubling_identity", [&] {
    Rng rng(13);
    bool ok = true;
    std::string note;
    for (int t = 0; t < (s.quick ? 5 : 20) && ok; ++t) {
      int d = 2 + t % 3;
      HarmonicExpansion e = random_expansion(rng, d, 3 + t % 10, 6);
      double r = 0.3 + rng.uniform();
      double ratio = e.ball_mean_square(2 * r) / e.ball_mean_square(r);
      double bound = std::pow(2.0, 2.0 * e.exact_frequency(2 * r));
      ok = ratio <= bound * (1 + 1e-9);
      if (!ok) note = "ratio " + fmt(ratio) + " bound " + fmt(bound);
    }
    // equality exactly for a single degree
    HarmonicExpansion pure(3);
    pure.set_coeff(4, 2, 1.7);
    double r = 0.8;
    double ratio = pure.ball_mean_square(2 * r) / pure.ball_mean_square(r);
    double bound = std::pow(2.0, 2.0 * pure.exact_frequency(2 * r));
    bool eq = std::abs(ratio / bound - 1.0) < 1e-10;
    return std::pair{ok && eq, note};
  });

  s.run("sphharm.zonal_reproducing", [&] {
    double worst = 0;
    for (int d : {2, 3, 4}) {
      int k = d == 4 ? 4 : 6;
      Quadrature q = sphere_rule(d, 2 * k + 2);
      Rng rng(14);
      Vec xi(d);
      for (int i = 0; i < d; ++i) xi[i] = rng.normal();
      xi = xi.normalized();
      std::vector<double> vx, ve;
      sphharm::eval_solid_basis(d, k, xi, vx, nullptr);
      int off = sphharm::basis_count(d, k - 1);
      int dk = sphharm::dim_harmonics(d, k);
      std::vector<double> acc(dk, 0.0);
      for (size_t j = 0; j < q.size(); ++j) {
        sphharm::eval_solid_basis(d, k, q.nodes[j], ve, nullptr);
        double z = sphharm::zonal_kernel(d, k, xi.dot(q.nodes[j]));
        double w = q.weights[j] / q.total_weight;
        for (int m = 0; m < dk; ++m) acc[m] += w * ve[off + m] * z;
      }
      for (int m = 0; m < dk; ++m) worst = std::max(worst, std::abs(acc[m] - vx[off + m]));
      // zonal kernel agrees with the basis sum
      Vec eta(d);
      for (int i = 0; i < d; ++i) eta[i] = rng.normal();
      eta = eta.normalized();
      std::vector<double> vy;
      sphharm::eval_solid_basis(d, k, eta, vy, nullptr);
      double sum = 0;
      for (int m = 0; m < dk; ++m) sum += vx[off + m] * vy[off + m];
      worst = std::max(worst, std::abs(sum - sphharm::zonal_kernel(d, k, xi.dot(eta))));
    }
    return std::pair{worst < 1e-8, "max deviation " + fmt(worst)};
  });

  s.run("sphharm.pointwise_bound_fitted_C", [&] {
    double fitted = 0;
    for (int d : {2, 3, 4}) {
      int kmax = s.quick ? 8 : (d == 4 ? 12 : 30);
      Quadrature grid = sphere_rule(d, 40);
      std::vector<double> vals;
      std::vector<double> degmax((size_t)kmax + 1, 0.0);
      for (const Vec& xi : grid.nodes) {
        sphharm::eval_solid_basis(d, kmax, xi, vals, nullptr);
        int idx = 0;
        for (int k = 0; k <= kmax; ++k) {
          int dk = sphharm::dim_harmonics(d, k);
          for (int m = 0; m < dk; ++m, ++idx)
            degmax[k] = std::max(degmax[k], std::abs(vals[idx]));
        }
      }
      for (int k = 1; k <= kmax; ++k)
        fitted = std::max(fitted, degmax[k] / std::pow((double)k, 0.5 * (d - 2)));
    }
    return std::pair{fitted < 10.0, "fitted C = " + fmt(fitted)};
  });

  s.run("sphharm.gradient_vs_fd", [&] {
    Rng rng(15);
    double worst = 0;
    for (int t = 0; t < (s.quick ? 4 : 12); ++t) {
      int d = 2 + t % 3;
      HarmonicExpansion e = random_expansion(rng, d, 4 + t % 6, 8);
      for (int p = 0; p < 5; ++p) {
        Vec x(d);
        for (int i = 0; i < d; ++i) x[i] = rng.uniform(-0.7, 0.7);
        Vec g;
        e.eval(x, &g);
        double h = 1e-5;
        double scale = std::max(1.0, g.norm());
        for (int i = 0; i < d; ++i) {
          Vec xp = x, xm = x;
          xp[i] += h;
          xm[i] -= h;
          double fd = (e.eval(xp) - e.eval(xm)) / (2 * h);
          worst = std::max(worst, std::abs(fd - g[i]) / scale);
        }
      }
    }
    return std::pair{worst < 1e-6, "max relative error " + fmt(worst)};
  });

  s.run("sphharm.harmonicity", [&] {
    Rng rng(16);
    double worst = 0;
    for (int t = 0; t < (s.quick ? 3 : 9); ++t) {
      int d = 2 + t % 3;
      HarmonicExpansion e = random_expansion(rng, d, 3 + t % 4, 8);
      for (int p = 0; p < 4; ++p) {
        Vec x(d);
        for (int i = 0; i < d; ++i) x[i] = rng.uniform(-0.6, 0.6);
        double h = 1e-5;
        // divergence of the analytic gradient vs the full FD Hessian norm
        double div = 0, frob = 0;
        for (int j = 0; j < d; ++j) {
          Vec xp = x, xm = x;
          xp[j] += h;
          xm[j] -= h;
          Vec gp, gm;
          e.eval(xp, &gp);
          e.eval(xm, &gm);
          for (int i = 0; i < d; ++i) {
            double hij = (gp[i] - gm[i]) / (2 * h);
            frob += hij * hij;
            if (i == j) div += hij;
          }
        }
        frob = std::sqrt(frob);
        if (frob > 0) worst = std::max(worst, std::abs(div) / frob);
      }
    }
    return std::pair{worst < 1e-8, "max |div grad| / |Hess| " + fmt(worst)};
  });

  s.run("sphharm.truncation_majorant", [&] {
    Rng rng(17);
    HarmonicExpansion e(3);
    int kmax = s.quick ? 18 : 40;
    for (int t = 0; t < 25; ++t) {
      int k = rng.uniform_int(0, kmax);
      e.set_coeff(k, rng.uniform_int(0, sphharm::dim_harmonics(3, k) - 1), rng.normal());
    }
    int K = s.quick ? 10 : 25;
    auto [head, tail] = e.truncate(K);
    double rho = 1.2;
    // dense-grid sup of the tail on the sphere of radius rho
    auto tp = std::make_shared<HarmonicExpansion>(tail);
    GeodesicBall ball(Domain::euclidean_space(3), Vec::zero(3), rho);
    double tail_sup = sup_norm(expansion_field(tp), ball).sup;
    // closed-form majorant: sum_{k>K} sum_m |a_km| sup|Y_km| rho^k
    Quadrature grid = sphere_rule(3, 48);
    std::vector<double> vals;
    double major = 0;
    std::vector<double> supY((size_t)sphharm::basis_count(3, kmax), 0.0);
    for (const Vec& xi : grid.nodes) {
      sphharm::eval_solid_basis(3, kmax, xi, vals, nullptr);
      for (size_t i = 0; i < vals.size(); ++i) supY[i] = std::max(supY[i], std::abs(vals[i]));
    }
    int idx = 0;
    for (int k = 0; k <= kmax; ++k) {
      int dk = sphharm::dim_harmonics(3, k);
      for (int m = 0; m < dk; ++m, ++idx)
        if (k > K) major += std::abs(tail.coeff(k, m)) * supY[idx] * std::pow(rho, k);
    }
    // head + tail reproduces the input termwise
    bool split_ok = true;
    for (int k = 0; k <= kmax && split_ok; ++k) {
      int dk = sphharm::dim_harmonics(3, k);
      for (int m = 0; m < dk; ++m)
        split_ok = split_ok && head.amplitude(k, m) + tail.amplitude(k, m) == e.amplitude(k, m);
    }
    // the grid sup of |Y| slightly undershoots the true sup; 1.02 covers it
    bool ok = split_ok && tail_sup <= 1.02 * major;
    return std::pair{ok, "tail sup " + fmt(tail_sup) + " majorant " + fmt(major)};
  });
}

void check_quadrature(Suite& s) {
  s.run("quadrature.positivity_and_measure", [&] {
    bool ok = true;
    for (int d : {2, 3, 4, 5}) {
      Quadrature q = sphere_rule(d, 9);
      for (double w : q.weights) ok = ok && w > 0;
      ok = ok && std::abs(q.total_weight - sphere_surface_area(d)) < 1e-10 * q.total_weight;
      Quadrature b = ball_rule(d, 7, 7, 1.3);
      for (double w : b.weights) ok = ok && w > 0;
      double vol = sphere_surface_area(d) / d * std::pow(1.3, d);
      ok = ok && std::abs(b.total_weight - vol) < 1e-10 * vol;
    }
    return std::pair{ok, std::string()};
  });

  s.run("quadrature.sphere_exactness", [&] {
    Rng rng(21);
    double worst = 0;
    for (int d : {2, 3, 4, 5}) {
      int order = 11;
      Quadrature q = sphere_rule(d, order);
      for (int t = 0; t < 12; ++t) {
        std::vector<int> a(d, 0);
        int deg = 0;
        std::vector<int> odd(d, 0);
        for (int i = 0; i < d; ++i) {
          int e = rng.uniform_int(0, 2);
          if (2 * e + deg > order) e = 0;
          a[i] = e;
          deg += 2 * e;
        }
        int odd_axis = rng.uniform_int(0, d);
        double expect = odd_axis < d ? 0.0 : sphere_monomial_average(d, a);
        double acc = 0;
        for (size_t j = 0; j < q.size(); ++j) {
          double m = 1;
          for (int i = 0; i < d; ++i)
            for (int p = 0; p < 2 * a[i]; ++p) m *= q.nodes[j][i];
          if (odd_axis < d) m *= q.nodes[j][odd_axis];
          acc += q.weights[j] * m;
        }
        acc /= q.total_weight;
        worst = std::max(worst, std::abs(acc - expect));
      }
    }
    return std::pair{worst < 1e-12, "max deviation " + fmt(worst)};
  });

  s.run("quadrature.ball_exactness", [&] {
    double worst = 0;
    for (int d : {2, 3, 4}) {
      double r = 0.9;
      Quadrature b = ball_rule(d, 10, 10, r);
      // avg over ball of x_0^2: r^2 * d/(d+2) * (1/d) = r^2/(d+2)
      double acc = 0;
      for (size_t j = 0; j < b.size(); ++j) acc += b.weights[j] * b.nodes[j][0] * b.nodes[j][0];
      acc /= b.total_weight;
      worst = std::max(worst, std::abs(acc - r * r / (d + 2)));
      // avg of |x|^2 = r^2 d/(d+2)
      double acc2 = 0;
      for (size_t j = 0; j < b.size(); ++j) acc2 += b.weights[j] * b.nodes[j].norm2();
      acc2 /= b.total_weight;
      worst = std::max(worst, std::abs(acc2 - r * r * d / (d + 2.0)));
    }
    return std::pair{worst < 1e-12, "max deviation " + fmt(worst)};
  });

  s.run("supnorm.refinement_monotone", [&] {
    auto phi = eigenfields::make_torus_eigenfunction(
        2, {{{3, 1}, 0.7, -0.4}, {{1, 3}, 0.2, 1.1}});
    ScalarField f = eigenfields::eigen_field(phi);
    GeodesicBall ball(Domain::torus(2), Vec{1.0, 2.0}, 0.8);
    double prev = -1;
    bool ok = true;
    for (double gf : {0.5, 0.25, 0.125, 0.0625}) {
      ResolutionPolicy pol;
      pol.grid_factor = gf;
      double sup = sup_norm(f, ball, pol).sup;
      ok = ok && sup >= prev * (1 - 3e-9);  // up to the refinement stop tolerance
      prev = sup;
    }
    return std::pair{ok, std::string()};
  });

  s.run("supnorm.quadrature_vs_closed_form", [&] {
    Rng rng(22);
    double worst = 0;
    for (int t = 0; t < (s.quick ? 3 : 8); ++t) {
      int d = 2 + t % 3;
      int kmax = d == 4 ? 10 : (s.quick ? 10 : 30);
      HarmonicExpansion e = random_expansion(rng, d, kmax, 15);
      double r = 0.5 + rng.uniform();
      Quadrature b = ball_rule(d, 2 * kmax + 4, 2 * kmax + 4, r);
      double acc = 0;
      for (size_t j = 0; j < b.size(); ++j) {
        double v = e.eval(b.nodes[j]);
        acc += b.weights[j] * v * v;
      }
      acc /= b.total_weight;
      double closed = e.ball_mean_square(r);
      worst = std::max(worst, std::abs(acc - closed) / closed);
    }
    return std::pair{worst < 1e-8, "max relative error " + fmt(worst)};
  });

  s.run("supnorm.sup_bounds_mean", [&] {
    Rng rng(23);
    bool ok = true;
    for (int t = 0; t < (s.quick ? 3 : 8); ++t) {
      auto e = std::make_shared<HarmonicExpansion>(random_expansion(rng, 3, 6 + t, 10));
      double r = 0.4 + rng.uniform();
      GeodesicBall ball(Domain::euclidean_space(3), Vec::zero(3), r);
      double sup = sup_norm(expansion_field(e), ball).sup;
      ok = ok && sup >= std::sqrt(e->ball_mean_square(r)) * (1 - 1e-9);
    }
    return std::pair{ok, std::string()};
  });

  s.run("field.deterministic_eval", [&] {
    auto phi = eigenfields::make_torus_eigenfunction(2, {{{2, 1}, 0.3, 0.9}});
    ScalarField f = eigenfields::eigen_field(phi);
    Vec x{0.37, 1.41};
    FieldEval a = f(x), b = f(x);
    bool ok = a.value == b.value && a.grad[0] == b.grad[0] && a.grad[1] == b.grad[1];
    return std::pair{ok, std::string()};
  });

  s.run("field.band_limit_posteriori", [&] {
    auto phi = eigenfields::make_torus_eigenfunction(2, {{{4, 3}, 1.0, 0.5}});
    ScalarField f = eigenfields::eigen_field(phi);
    Region full = Region::full_torus(Domain::torus(2));
    double ratio = band_limit_ratio(f, full);
    return std::pair{ratio < 3.0, "grad sup / (B val sup) = " + fmt(ratio)};
  });
}

void check_frequency(Suite& s) {
  s.run("frequency.numeric_vs_exact", [&] {
    Rng rng(31);
    double worst = 0;
    CoefficientField id2 = CoefficientField::identity(2), id3 = CoefficientField::identity(3);
    for (int t = 0; t < (s.quick ? 4 : 10); ++t) {
      int d = 2 + t % 2;
      auto e = std::make_shared<HarmonicExpansion>(random_expansion(rng, d, 6 + t % 8, 10));
      ScalarField f = expansion_field(e);
      double r = 0.5 + 0.5 * rng.uniform();
      double num = frequency_numeric(f, d == 2 ? id2 : id3, Vec::zero(d), r);
      worst = std::max(worst, std::abs(num - e->exact_frequency(r)));
    }
    return std::pair{worst < 1e-8, "max |numeric - exact| " + fmt(worst)};
  });

  s.run("frequency.doubling_le_frequency", [&] {
    Rng rng(32);
    bool ok = true;
    for (int t = 0; t < (s.quick ? 4 : 10); ++t) {
      auto e = std::make_shared<HarmonicExpansion>(random_expansion(rng, 3, 4 + t % 6, 8));
      ScalarField f = expansion_field(e);
      double r = 0.3 + 0.3 * rng.uniform();
      double di = doubling_index(f, Vec::zero(3), r);
      ok = ok && di <= e->exact_frequency(2 * r) + 1e-7;
    }
    return std::pair{ok, std::string()};
  });

  s.run("frequency.scale_covariance", [&] {
    HarmonicExpansion e(3);
    e.set_coeff(0, 0, 0.6);
    e.set_coeff(3, 4, -1.2);
    double f1 = e.exact_frequency(0.8);
    HarmonicExpansion es(3, 2.5);  // same coefficients, domain rescaled
    es.set_amplitude(0, 0, e.amplitude(0, 0));
    es.set_amplitude(3, 4, e.amplitude(3, 4));
    double f2 = es.exact_frequency(0.8 * 2.5);
    bool ok = std::abs(f1 - f2) < 1e-9;
    return std::pair{ok, std::string()};
  });

  s.run("frequency.constant_invariance", [&] {
    HarmonicExpansion e(2);
    e.set_coeff(1, 0, 0.4);
    e.set_coeff(5, 1, 0.9);
    HarmonicExpansion e2(2);
    e2.set_coeff(1, 0, 0.4 * 77.0);
    e2.set_coeff(5, 1, 0.9 * 77.0);
    bool ok = std::abs(e.exact_frequency(1.1) - e2.exact_frequency(1.1)) < 1e-12;
    return std::pair{ok, std::string()};
  });

  s.run("frequency.sup_boundary_family", [&] {
    Rng rng(33);
    double fitted = 0;
    int draws = s.quick ? 8 : 32;
    for (int t = 0; t < draws; ++t) {
      int kmax = s.quick ? 10 : 20;
      auto e = std::make_shared<HarmonicExpansion>(random_expansion(rng, 3, kmax, 15));
      auto rep = sup_vs_boundary_l2(expansion_field(e), Vec::zero(3), 1.0, (double)kmax);
      fitted = std::max(fitted, rep.ratio);
    }
    return std::pair{fitted < 1.0, "family fitted C = " + fmt(fitted)};
  });

  s.run("frequency.mu_weight", [&] {
    CoefficientField id = CoefficientField::identity(3);
    CoefficientField diag = CoefficientField::diagonal({2.0, 1.0});
    bool ok = std::abs(mu_weight(id, Vec{0.3, -0.2, 0.9}) - 1.0) < 1e-14;
    ok = ok && std::abs(mu_weight(diag, Vec{1.0, 0.0}) - 2.0) < 1e-14;
    double c = 1.0 / std::sqrt(2.0);
    ok = ok && std::abs(mu_weight(diag, Vec{c, c}) - 1.5) < 1e-14;
    ok = ok && diag.check_ellipticity(5, 50, 1.0);
    return std::pair{ok, std::string()};
  });
}

void check_eigenfields(Suite& s) {
  s.run("eigenfields.eigen_residual", [&] {
    Rng rng(41);
    double worst = 0;
    std::vector<std::shared_ptr<const eigenfields::Eigenfunction>> corpus;
    corpus.push_back(eigenfields::make_torus_eigenfunction(2, {{{3, 4}, 0.8, -0.3}, {{5, 0}, 0.1, 0.7}}));
    corpus.push_back(eigenfields::make_zonal_sphere_eigenfunction(2, 5));
    {
      int dk = sphharm::dim_harmonics(3, 4);
      std::vector<double> c(dk);
      for (double& v : c) v = rng.normal();
      corpus.push_back(eigenfields::make_sphere_eigenfunction(2, 4, c));
    }
    int npts = s.quick ? 10 : 50;
    for (const auto& phi : corpus) {
      Domain dom = phi->domain();
      ScalarField f = eigenfields::eigen_field(phi);
      Region reg = dom.kind == Manifold::torus
                       ? Region::full_torus(dom)
                       : Region::over(GeodesicBall(dom, Vec::axis(3, 2), 3.0));
      double sup = sup_norm(f, reg).sup;
      for (int t = 0; t < npts; ++t) {
        Vec p;
        if (dom.kind == Manifold::torus) {
          p = Vec{rng.uniform(0, kTwoPi), rng.uniform(0, kTwoPi)};
        } else {
          Vec v{rng.normal(), rng.normal(), rng.normal()};
          p = v.normalized();
        }
        double lap = fd_laplacian(dom, [&](const Vec& x) { return phi->value(x); }, p, 1e-4);
        double resid = std::abs(lap + phi->lambda() * phi->value(p));
        worst = std::max(worst, resid / (phi->lambda() * sup));
      }
    }
    return std::pair{worst < 1e-6, "max residual " + fmt(worst)};
  });

  s.run("eigenfields.gradient_vs_fd", [&] {
    Rng rng(42);
    auto phi = eigenfields::make_torus_eigenfunction(2, {{{2, 3}, 0.5, 0.5}});
    auto zon = eigenfields::make_zonal_sphere_eigenfunction(2, 4);
    double worst = 0;
    for (int t = 0; t < (s.quick ? 8 : 30); ++t) {
      Vec p{rng.uniform(0, kTwoPi), rng.uniform(0, kTwoPi)};
      Vec g = phi->riemannian_gradient(p);
      Vec fd = fd_gradient(phi->domain(), [&](const Vec& x) { return phi->value(x); }, p, 1e-5);
      worst = std::max(worst, (g - fd).norm() / std::sqrt(phi->lambda()));
      Vec v{rng.normal(), rng.normal(), rng.normal()};
      Vec q = v.normalized();
      Vec gs = zon->riemannian_gradient(q);
      Vec fs = fd_gradient(zon->domain(), [&](const Vec& x) { return zon->value(x); }, q, 1e-5);
      worst = std::max(worst, (gs - fs).norm() / std::sqrt(zon->lambda()));
    }
    return std::pair{worst < 1e-6, "max scaled error " + fmt(worst)};
  });

  s.run("eigenfields.global_bernstein", [&] {
    // single mode: constant exactly 1
    auto single = eigenfields::make_torus_eigenfunction(2, {{{4, 0}, 0.0, 1.0}});
    Region full = Region::full_torus(Domain::torus(2));
    ScalarField sf = eigenfields::eigen_field(single);
    ScalarField sg(
        Domain::torus(2),
        [single](const Vec& x) {
          return FieldEval{single->riemannian_gradient(x).norm(), false, {}};
        },
        sf.band_limit(), "gradnorm");
    sg.has_gradient_ = false;
    double c1 = sup_norm(sg, full).sup / (std::sqrt(single->lambda()) * sup_norm(sf, full).sup);
    bool ok = std::abs(c1 - 1.0) < 1e-6;
    // random corpus: fitted constant <= 2
    Rng rng(43);
    double fitted = 0;
    for (int t = 0; t < (s.quick ? 3 : 8); ++t) {
      int n2 = 25;
      auto reps = eigenfields::integer_modes_with_norm2(2, n2);
      std::vector<eigenfields::TorusMode> modes;
      for (const auto& m : reps) modes.push_back({m, rng.normal(), rng.normal()});
      auto phi = eigenfields::make_torus_eigenfunction(2, modes);
      ScalarField f = eigenfields::eigen_field(phi);
      ScalarField g(
          Domain::torus(2),
          [phi](const Vec& x) { return FieldEval{phi->riemannian_gradient(x).norm(), false, {}}; },
          f.band_limit(), "gradnorm");
      g.has_gradient_ = false;
      fitted = std::max(fitted, sup_norm(g, full).sup /
                                    (std::sqrt(phi->lambda()) * sup_norm(f, full).sup));
    }
    ok = ok && fitted <= 2.0;
    return std::pair{ok, "single-mode c = " + fmt(c1) + ", corpus c = " + fmt(fitted)};
  });

  s.run("eigenfields.lift_frequency_window", [&] {
    CoefficientField id = CoefficientField::identity(3);
    bool ok = true;
    std::string note;
    for (int m : {2, 10, 20}) {
      if (s.quick && m == 20) continue;
      auto phi = eigenfields::make_torus_eigenfunction(2, {{{m, 0}, 0.0, 1.0}});
      auto lf = eigenfields::lift(phi);
      double N = frequency_numeric(lf.field, id, Vec::zero(3), 0.5);
      double sq = std::sqrt(lf.lambda);
      ok = ok && N >= 0.3 * sq && N <= 3.0 * sq;
      note += " N(" + std::to_string(m * m) + ")=" + fmt(N);
    }
    return std::pair{ok, note};
  });

  s.run("eigenfields.lift_harmonic", [&] {
    auto phi = eigenfields::make_torus_eigenfunction(2, {{{3, 4}, 1.0, 0.0}, {{5, 0}, 0.0, 1.0}});
    auto lf = eigenfields::lift(phi);
    Rng rng(44);
    double worst = 0;
    for (int t = 0; t < (s.quick ? 8 : 25); ++t) {
      Vec p{rng.uniform(0, kTwoPi), rng.uniform(0, kTwoPi), rng.uniform(-0.4, 0.4)};
      double lap = fd_laplacian(lf.field.domain(), [&](const Vec& x) { return lf.field.value(x); },
                                p, 1e-4);
      double u = std::abs(lf.field.value(p));
      worst = std::max(worst, std::abs(lap) / (lf.lambda * std::max(u, 1e-3)));
    }
    return std::pair{worst < 1e-6, "max scaled residual " + fmt(worst)};
  });

  s.run("eigenfields.rho0_series", [&] {
    bool ok = true;
    for (double H : {0.0, 0.5, 1.0, 4.0}) {
      for (double r = 0.01; H * r * r <= 0.1 && r < 3.0; r *= 1.7)
        ok = ok && std::abs(eigenfields::rho0(r, H) - r) <= H * r * r * r + 1e-15;
    }
    ok = ok && eigenfields::rho0(0.3, 0.0) == 0.3;
    return std::pair{ok, std::string()};
  });

  s.run("eigenfields.dong_q_values", [&] {
    auto phi = eigenfields::make_torus_eigenfunction(2, {{{2, 0}, 0.0, 1.0}});
    bool ok = std::abs(eigenfields::dong_q(*phi, Vec{0.0, 0.0}) - 4.0) < 1e-12;
    ok = ok && std::abs(eigenfields::dong_q(*phi, Vec{kPi / 4, 1.3}) - 2.0) < 1e-12;
    auto zon = eigenfields::make_zonal_sphere_eigenfunction(2, 1);
    ok = ok && std::abs(eigenfields::dong_q(*zon, Vec{0.0, 0.0, 1.0}) - 1.0) < 1e-10;
    return std::pair{ok, std::string()};
  });
}

void check_bernstein(Suite& s) {
  s.run("bernstein.bound_ordering", [&] {
    bool ok = true;
    for (double lam = std::exp(1.0); lam < 1e4; lam *= 2.3)
      for (double r = 0.01; r <= 1.0; r *= 3.1) {
        auto b = bernstein::bounds_for(lam, r, 2, 1.0);
        ok = ok && b.b_conj <= b.b_2d * (1 + 1e-12) && b.b_conj <= b.b_main * (1 + 1e-12);
        ok = ok && b.b_global > 0 && b.b_df > 0 && b.b_dong > 0 && b.b_main > 0 && b.b_2d > 0 &&
             b.b_conj > 0;
      }
    return std::pair{ok, std::string()};
  });

  s.run("bernstein.classical_baselines", [&] {
    double worst = 0;
    for (int N : s.quick ? std::vector<int>{1, 5, 12} : std::vector<int>{1, 2, 5, 12, 25, 50}) {
      auto [trig, markov] = bernstein::classical_baselines(N);
      worst = std::max(worst, std::abs(trig - N) / N);
      worst = std::max(worst, std::abs(markov - (double)N * N) / ((double)N * N));
    }
    return std::pair{worst < 1e-6, "max relative error " + fmt(worst)};
  });

  s.run("bernstein.growth_homogeneous", [&] {
    HarmonicExpansion e(3);
    int N = 7;
    e.set_coeff(N, 3, 1.0);
    auto ep = std::make_shared<HarmonicExpansion>(e);
    double ratio = bernstein::growth_check(expansion_field(ep), Vec::zero(3), 0.8, (double)N);
    double expect = std::pow(1.0 + 1.0 / N, N);
    bool ok = std::abs(ratio - expect) < 1e-6 * expect;
    return std::pair{ok, "ratio " + fmt(ratio) + " expected " + fmt(expect)};
  });

  s.run("bernstein.lp_growth_homogeneous", [&] {
    HarmonicExpansion e(3);
    int N = 6;
    e.set_coeff(N, 1, 2.0);
    double ratio = bernstein::lp_growth_check(e, 0.9, N, 2.0);
    double expect = std::pow(1.0 + 1.0 / N, N);  // averaged norms, degree N
    bool ok = std::abs(ratio - expect) < 1e-9 * expect;
    double r1 = bernstein::lp_growth_check(e, 0.9, N, 1.0);
    ok = ok && std::abs(r1 - expect) < 1e-9 * r1;
    return std::pair{ok, "p=2 ratio " + fmt(ratio)};
  });

  s.run("bernstein.lp_growth_corpus", [&] {
    Rng rng(52);
    double fitted = 0;
    int draws = s.quick ? 10 : 50;
    int N = 20;
    for (int t = 0; t < draws; ++t) {
      HarmonicExpansion e = random_expansion(rng, 3, N, 12);
      fitted = std::max(fitted, bernstein::lp_growth_check(e, 0.8, N, 1.0));
    }
    double e2 = std::exp(2.0);
    return std::pair{fitted <= e2, "fitted C = " + fmt(fitted) + " (bound e^2)"};
  });

  s.run("bernstein.df_bound_corpus", [&] {
    Rng rng(51);
    double fitted = 0;
    for (int t = 0; t < (s.quick ? 2 : 5); ++t) {
      auto reps = eigenfields::integer_modes_with_norm2(2, 25);
      std::vector<eigenfields::TorusMode> modes;
      for (const auto& m : reps) modes.push_back({m, rng.normal(), rng.normal()});
      auto phi = eigenfields::make_torus_eigenfunction(2, modes);
      GeodesicBall ball(Domain::torus(2), Vec{rng.uniform(0, kTwoPi), rng.uniform(0, kTwoPi)},
                        0.2 + 0.5 * rng.uniform());
      auto rep = bernstein::bernstein_ratio(phi, ball);
      fitted = std::max(fitted, rep.c_df);
    }
    return std::pair{fitted <= 10.0, "max c_df " + fmt(fitted)};
  });
}

void check_io(Suite& s) {
  s.run("io.expansion_roundtrip", [&] {
    Rng rng(61);
    HarmonicExpansion e = random_expansion(rng, 3, 9, 12, 1.25);
    HarmonicExpansion back = io::expansion_from_json(io::expansion_to_json(e));
    bool ok = back.dim() == e.dim() && back.r_ref() == e.r_ref();
    for (int k = 0; k <= 9 && ok; ++k) {
      int dk = sphharm::dim_harmonics(3, k);
      for (int m = 0; m < dk; ++m)
        ok = ok && std::abs(back.amplitude(k, m) - e.amplitude(k, m)) <=
                       1e-15 * std::abs(e.amplitude(k, m));
    }
    return std::pair{ok, std::string()};
  });

  s.run("io.sha256_known_vector", [&] {
    bool ok = io::sha256_hex("abc") ==
              "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad";
    ok = ok && io::sha256_hex("") ==
                   "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855";
    return std::pair{ok, std::string()};
  });

  s.run("io.eigenfunction_roundtrip", [&] {
    auto phi = eigenfields::make_torus_eigenfunction(2, {{{3, 4}, 0.25, -1.5}});
    auto back = io::eigenfunction_from_json(io::eigenfunction_to_json(*phi));
    Vec p{0.7, 1.9};
    bool ok = std::abs(back->value(p) - phi->value(p)) < 1e-15;
    auto zon = eigenfields::make_zonal_sphere_eigenfunction(2, 3);
    auto back2 = io::eigenfunction_from_json(io::eigenfunction_to_json(*zon));
    Vec q = Vec{0.3, -0.5, 0.81}.normalized();
    ok = ok && std::abs(back2->value(q) - zon->value(q)) < 1e-12;
    return std::pair{ok, std::string()};
  });

  s.run("io.sampled_roundtrip_interpolation", [&] {
    // 50x50 grid of sin(x1) on the torus, ingested and compared on a ball
    auto phi = eigenfields::make_torus_eigenfunction(2, {{{1, 0}, 0.0, 1.0}});
    io::SampledField sf;
    sf.domain = Domain::torus(2);
    sf.band_limit = 1.0;
    sf.provenance = "verify";
    int n = 50;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Vec p{kTwoPi * i / n, kTwoPi * j / n};
        sf.points.push_back(p);
        sf.values.push_back(phi->value(p));
        sf.gradients.push_back(phi->riemannian_gradient(p));
      }
    io::SampledField back = io::ingest_csv_text(io::sampled_to_csv(sf));
    ScalarField interp = back.field();
    GeodesicBall ball(Domain::torus(2), Vec{1.0, 1.0}, 0.5);
    double si = sup_norm(interp, ball).sup;
    ScalarField exact = eigenfields::eigen_field(phi);
    double se = sup_norm(exact, ball).sup;
    double rel = std::abs(si - se) / se;
    return std::pair{rel < 1e-3, "interp sup rel error " + fmt(rel)};
  });

  s.run("io.ingest_rejects_bad_rows", [&] {
    bool ok = false;
    try {
      io::ingest_csv_text("# domain=torus dim=2 period=6.283185307179586 band=1\n"
                          "x0,x1,value\n0,0,0\n1,nan,0.5\n");
    } catch (const std::exception& ex) {
      ok = std::string(ex.what()).find("2") != std::string::npos ||
           std::string(ex.what()).find("4") != std::string::npos;
    }
    bool ok2 = false;
    try {
      io::ingest_csv_text("# domain=torus dim=2 band=1\nx0,x1,value\n0,0,0\n0,0,1\n");
    } catch (const std::exception& ex) {
      ok2 = std::string(ex.what()).find("duplicate") != std::string::npos;
    }
    return std::pair{ok && ok2, std::string()};
  });
}

}  // namespace

std::vector<CheckResult> run_all(bool quick) {
  Suite s{quick, {}};
  check_sphharm(s);
  check_quadrature(s);
  check_frequency(s);
  check_eigenfields(s);
  check_bernstein(s);
  check_io(s);
  return s.results;
}

int exit_code(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return 1;
  return 0;
}

}  // namespace bernlab::verify
