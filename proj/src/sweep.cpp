#include "bernlab/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "bernlab/rng.hpp"

namespace bernlab::sweep {

using eigenfields::Eigenfunction;

void SweepConfig::validate() const {
  if (manifold != "torus2" && manifold != "sphere2")
    throw std::invalid_argument("sweep: manifold must be torus2 or sphere2");
  if (lambdas.empty()) throw std::invalid_argument("sweep: empty lambda list");
  if (r_grid.empty()) throw std::invalid_argument("sweep: empty radius grid");
  for (double l : lambdas)
    if (!(l > 0)) throw std::invalid_argument("sweep: lambdas must be positive");
  double rmax = *std::max_element(r_grid.begin(), r_grid.end());
  for (double r : r_grid)
    if (!(r > 0)) throw std::invalid_argument("sweep: radii must be positive");
  if (manifold == "torus2" && rmax >= kPi)
    throw std::invalid_argument("sweep: torus radii must stay below half the period");
  if (manifold == "sphere2" && rmax >= 0.99 * kPi)
    throw std::invalid_argument("sweep: sphere radii exceed the injectivity slack");
  if (centers.empty() && n_random_centers < 1)
    throw std::invalid_argument("sweep: need at least one center");
  if (!(delta > 0)) throw std::invalid_argument("sweep: delta must be positive");
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  if (!(lo > 0) || !(hi > lo) || n < 2) throw std::invalid_argument("log_spaced: bad range");
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = lo * std::pow(hi / lo, (double)i / (n - 1));
  return out;
}

Regression ols(const std::string& regime, const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("ols: need >= 2 points");
  Regression reg;
  reg.regime = regime;
  reg.n_points = (int)x.size();
  double n = (double)x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  double vx = sxx - sx * sx / n;
  double vy = syy - sy * sy / n;
  double cxy = sxy - sx * sy / n;
  if (vx <= 0) throw std::invalid_argument("ols: degenerate abscissa");
  reg.slope = cxy / vx;
  reg.intercept = (sy - reg.slope * sx) / n;
  reg.r2 = vy > 0 ? cxy * cxy / (vx * vy) : 1.0;
  return reg;
}

namespace {

std::shared_ptr<const Eigenfunction> build_field(const SweepConfig& cfg, double lambda,
                                                 std::uint64_t salt) {
  if (cfg.manifold == "torus2") {
    int n2 = (int)std::llround(lambda);
    if (std::abs(lambda - n2) > 1e-9)
      throw std::invalid_argument("sweep: torus lambda must be an integer |m|^2");
    auto reps = eigenfields::integer_modes_with_norm2(2, n2);
    if (reps.empty()) throw std::invalid_argument("sweep: lambda is not a sum of two squares");
    std::vector<eigenfields::TorusMode> modes;
    if (cfg.style == FieldStyle::canonical) {
      modes.push_back({reps.front(), 0.0, 1.0});
    } else {
      Rng rng(cfg.seed ^ salt);
      for (const auto& m : reps) modes.push_back({m, rng.normal(), rng.normal()});
    }
    return eigenfields::make_torus_eigenfunction(2, modes);
  }
  // sphere2: lambda = k (k + 1)
  double kk = 0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * lambda));
  int k = (int)std::llround(kk);
  if (std::abs(lambda - (double)k * (k + 1)) > 1e-9)
    throw std::invalid_argument("sweep: sphere lambda must equal k(k+1)");
  if (cfg.style == FieldStyle::canonical) return eigenfields::make_zonal_sphere_eigenfunction(2, k);
  int dk = sphharm::dim_harmonics(3, k);
  Rng rng(cfg.seed ^ salt);
  std::vector<double> c(dk);
  for (double& v : c) v = rng.normal();
  return eigenfields::make_sphere_eigenfunction(2, k, c);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  const bool sphere = cfg.manifold == "sphere2";
  Domain dom = sphere ? Domain::sphere(2) : Domain::torus(2);

  std::vector<Vec> centers = cfg.centers;
  if (centers.empty()) {
    Rng rng(cfg.seed * 0x9e3779b97f4a7c15ULL + 13);
    for (int i = 0; i < cfg.n_random_centers; ++i) {
      if (sphere) {
        Vec v{rng.normal(), rng.normal(), rng.normal()};
        centers.push_back(v.normalized());
      } else {
        centers.push_back(Vec{rng.uniform(0, kTwoPi), rng.uniform(0, kTwoPi)});
      }
    }
  }
  for (const Vec& c : centers)
    if (c.size() != dom.coord_dim()) throw std::invalid_argument("sweep: center dimension mismatch");

  // deterministic field construction, single-threaded
  std::vector<std::shared_ptr<const Eigenfunction>> fields;
  for (size_t li = 0; li < cfg.lambdas.size(); ++li)
    fields.push_back(build_field(cfg, cfg.lambdas[li], 0x51ed2701 + 7919 * li));

  SweepResult res;
  size_t total = cfg.lambdas.size() * centers.size() * cfg.r_grid.size();
  res.rows.assign(total, {});

  auto work = [&](size_t begin, size_t end) {
    for (size_t idx = begin; idx < end; ++idx) {
      size_t ri = idx % cfg.r_grid.size();
      size_t ci = (idx / cfg.r_grid.size()) % centers.size();
      size_t li = idx / (cfg.r_grid.size() * centers.size());
      SweepRow& row = res.rows[idx];
      row.lambda = cfg.lambdas[li];
      row.r = cfg.r_grid[ri];
      row.center_id = (int)ci;
      try {
        GeodesicBall ball(dom, centers[ci], row.r);
        row.rep = bernstein::bernstein_ratio(fields[li], ball, cfg.policy, cfg.delta);
        row.ok = true;
      } catch (const std::exception& ex) {
        row.ok = false;
        row.error = ex.what();
      }
    }
  };
  int nthreads = std::max(1, cfg.threads);
  if (nthreads == 1 || total < 2) {
    work(0, total);
  } else {
    std::vector<std::thread> pool;
    size_t chunk = (total + nthreads - 1) / nthreads;
    for (int t = 0; t < nthreads; ++t) {
      size_t b = std::min(total, (size_t)t * chunk);
      size_t e = std::min(total, b + chunk);
      if (b < e) pool.emplace_back(work, b, e);
    }
    for (auto& th : pool) th.join();
  }

  // CSV (config order; failed rows are skipped and listed in the summary)
  std::ostringstream csv;
  csv << "manifold,lambda,r,center_id,grad_sup,val_sup,ratio,b_global,b_df,b_dong,b_main,b_2d,"
         "b_conj,c_global,c_df,c_dong,c_main,c_2d,c_conj,resolution_h,refine_depth\n";
  for (const SweepRow& row : res.rows) {
    if (!row.ok) continue;
    const auto& p = row.rep;
    csv << cfg.manifold << ',' << fmt(row.lambda) << ',' << fmt(row.r) << ',' << row.center_id
        << ',' << fmt(p.grad_sup) << ',' << fmt(p.val_sup) << ',' << fmt(p.ratio) << ','
        << fmt(p.bounds.b_global) << ',' << fmt(p.bounds.b_df) << ',' << fmt(p.bounds.b_dong)
        << ',' << fmt(p.bounds.b_main) << ',' << fmt(p.bounds.b_2d) << ',' << fmt(p.bounds.b_conj)
        << ',' << fmt(p.c_global) << ',' << fmt(p.c_df) << ',' << fmt(p.c_dong) << ','
        << fmt(p.c_main) << ',' << fmt(p.c_2d) << ',' << fmt(p.c_conj) << ','
        << fmt(p.resolution_h) << ',' << p.refine_depth << "\n";
  }
  res.csv = csv.str();

  // regressions
  std::map<double, std::pair<std::vector<double>, std::vector<double>>> sub;  // lambda -> (log 1/r, log ratio)
  for (const SweepRow& row : res.rows) {
    if (!row.ok) continue;
    res.max_c_main = std::max(res.max_c_main, row.rep.c_main);
    res.max_c_2d = std::max(res.max_c_2d, row.rep.c_2d);
    res.max_c_df = std::max(res.max_c_df, row.rep.c_df);
    if (row.r * std::sqrt(row.lambda) <= 1.0 && row.rep.ratio > 0) {
      auto& v = sub[row.lambda];
      v.first.push_back(std::log(1.0 / row.r));
      v.second.push_back(std::log(row.rep.ratio));
    }
  }
  double slope_acc = 0;
  int slope_n = 0;
  for (auto& [lam, xy] : sub) {
    if (xy.first.size() < 3) continue;
    std::ostringstream name;
    name << "subwavelength_lambda_" << fmt(lam);
    Regression reg = ols(name.str(), xy.first, xy.second);
    res.regressions.push_back(reg);
    slope_acc += reg.slope * reg.n_points;
    slope_n += reg.n_points;
  }
  if (slope_n > 0) {
    res.subwavelength_slope = slope_acc / slope_n;
    Regression combined;
    combined.regime = "subwavelength";
    combined.slope = res.subwavelength_slope;
    combined.n_points = slope_n;
    // pooled intercept/r2 are not meaningful across lambdas; keep per-lambda entries
    res.regressions.push_back(combined);
  }
  // fixed r*sqrt(lambda) buckets: ratio growth in lambda
  std::map<long long, std::pair<std::vector<double>, std::vector<double>>> buckets;
  for (const SweepRow& row : res.rows) {
    if (!row.ok || row.rep.ratio <= 0) continue;
    double s = row.r * std::sqrt(row.lambda);
    long long key = (long long)std::llround(std::log(s) / 0.05);
    auto& v = buckets[key];
    v.first.push_back(std::log(row.lambda));
    v.second.push_back(std::log(row.rep.ratio));
  }
  for (auto& [key, xy] : buckets) {
    std::vector<double> ux = xy.first;
    std::sort(ux.begin(), ux.end());
    ux.erase(std::unique(ux.begin(), ux.end()), ux.end());
    if (ux.size() < 3) continue;
    std::ostringstream name;
    name << "fixed_rsqrtlambda_" << key;
    res.regressions.push_back(ols(name.str(), xy.first, xy.second));
  }

  nlohmann::json j = nlohmann::json::array();
  for (const Regression& reg : res.regressions)
    j.push_back({{"regime", reg.regime},
                 {"slope", reg.slope},
                 {"intercept", reg.intercept},
                 {"r2", reg.r2},
                 {"n_points", reg.n_points}});
  nlohmann::json failures = nlohmann::json::array();
  for (const SweepRow& row : res.rows)
    if (!row.ok)
      failures.push_back({{"lambda", row.lambda},
                          {"r", row.r},
                          {"center_id", row.center_id},
                          {"error", row.error}});
  nlohmann::json summary = {{"regressions", j},
                            {"failures", failures},
                            {"max_c_main", res.max_c_main},
                            {"max_c_2d", res.max_c_2d},
                            {"max_c_df", res.max_c_df}};
  res.summary_json = summary.dump(2);
  return res;
}

}  // namespace bernlab::sweep
