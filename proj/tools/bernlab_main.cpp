// bernlab command-line front end: frequency, doubling, Bernstein-ratio,
// sweep, truncation and verification experiments on model manifolds.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bernlab/bernstein.hpp"
#include "bernlab/eigenfields.hpp"
#include "bernlab/frequency.hpp"
#include "bernlab/io.hpp"
#include "bernlab/rng.hpp"
#include "bernlab/sweep.hpp"
#include "bernlab/verify.hpp"

using namespace bernlab;
using nlohmann::json;

namespace {

Vec parse_vec(const std::string& s) {
  Vec v;
  std::istringstream in(s);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    if ((size_t)v.size() >= (size_t)kMaxCoordDim) throw std::invalid_argument("too many coordinates");
    v.c[v.n++] = std::stod(cell);
  }
  return v;
}

// "lo:hi:n" log-spaced, "lo:hi:n:lin" linear, or a comma list
std::vector<double> parse_grid(const std::string& s) {
  if (s.find(':') == std::string::npos) {
    std::vector<double> out;
    std::istringstream in(s);
    std::string cell;
    while (std::getline(in, cell, ',')) out.push_back(std::stod(cell));
    return out;
  }
  std::vector<std::string> parts;
  std::istringstream in(s);
  std::string cell;
  while (std::getline(in, cell, ':')) parts.push_back(cell);
  if (parts.size() < 3) throw std::invalid_argument("grid spec must be lo:hi:n[:lin]");
  double lo = std::stod(parts[0]), hi = std::stod(parts[1]);
  int n = std::stoi(parts[2]);
  if (parts.size() >= 4 && parts[3] == "lin") {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
    return out;
  }
  return sweep::log_spaced(lo, hi, n);
}

// "3,0:0,1;5,0:1,0" -> modes (m1,m2):(cos,sin)
std::vector<eigenfields::TorusMode> parse_modes(const std::string& s) {
  std::vector<eigenfields::TorusMode> modes;
  std::istringstream in(s);
  std::string group;
  while (std::getline(in, group, ';')) {
    auto colon = group.find(':');
    eigenfields::TorusMode md;
    std::string mvec = colon == std::string::npos ? group : group.substr(0, colon);
    std::istringstream ms(mvec);
    std::string cell;
    while (std::getline(ms, cell, ',')) md.m.push_back(std::stoi(cell));
    if (colon == std::string::npos) {
      md.sin_coeff = 1.0;
    } else {
      std::string coeffs = group.substr(colon + 1);
      auto comma = coeffs.find(',');
      if (comma == std::string::npos) throw std::invalid_argument("mode needs cos,sin coefficients");
      md.cos_coeff = std::stod(coeffs.substr(0, comma));
      md.sin_coeff = std::stod(coeffs.substr(comma + 1));
    }
    modes.push_back(std::move(md));
  }
  if (modes.empty()) throw std::invalid_argument("empty mode list");
  return modes;
}

std::shared_ptr<const eigenfields::Eigenfunction> load_eigenfunction(const std::string& eigenspec,
                                                                     const std::string& manifold,
                                                                     const std::string& modes,
                                                                     int degree) {
  if (!eigenspec.empty()) return io::eigenfunction_from_json(io::read_text_file(eigenspec));
  if (!modes.empty()) {
    auto md = parse_modes(modes);
    int d = (int)md.front().m.size();
    return eigenfields::make_torus_eigenfunction(d, md);
  }
  if (degree > 0) {
    if (manifold != "sphere2")
      throw std::invalid_argument("--degree builds a zonal sphere2 eigenfunction; set --manifold sphere2");
    return eigenfields::make_zonal_sphere_eigenfunction(2, degree);
  }
  throw std::invalid_argument("provide --eigenspec, --modes or --degree");
}

void write_with_manifest(const std::string& out, const std::string& content, const json& config,
                         std::uint64_t seed, io::RunManifest manifest = {}) {
  manifest.config_snapshot = config.dump();
  manifest.seed = seed;
  if (manifest.started_at.empty()) manifest.start();
  io::write_text_file(out, content);
  manifest.add_artifact(out);
  manifest.finish();
  io::write_text_file(out + ".manifest.json", manifest.to_json());
}

struct PolicyFlags {
  double grid_factor = 0.125;
  double refine_tol = 1e-4;
  bool force = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--grid-factor", grid_factor, "grid spacing as a fraction of min(r, 1/B)");
    cmd->add_option("--refine-tol", refine_tol, "refinement stop as a fraction of r");
    cmd->add_flag("--force", force, "proceed without a declared band limit");
  }
  ResolutionPolicy policy() const {
    ResolutionPolicy p;
    p.grid_factor = grid_factor;
    p.refine_tol = refine_tol;
    p.force = force;
    return p;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "bernlab: frequency functions, doubling indices and Bernstein gradient-ratio\n"
      "experiments for harmonic expansions and Laplace eigenfunctions on model manifolds"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags remain valid after the subcommand name
  int threads = 1;
  app.add_option("--threads", threads, "worker threads for sweeps")->envname("BLAB_THREADS");

  // ---- freq ----
  auto* freq = app.add_subcommand("freq", "frequency of a harmonic expansion");
  std::string freq_expansion, freq_center = "", freq_rgrid = "", freq_out = "";
  double freq_r = 1.0;
  int freq_order = 0;
  freq->add_option("--expansion", freq_expansion, "expansion JSON file")->required();
  freq->add_option("--r", freq_r, "radius");
  freq->add_option("--r-grid", freq_rgrid, "radius grid lo:hi:n[:lin] or comma list");
  freq->add_option("--center", freq_center, "center coordinates (comma separated)");
  freq->add_option("--order", freq_order, "quadrature order override");
  freq->add_option("--out", freq_out, "write profile CSV here");
  double freq_mono_tol = -1.0;
  freq->add_option("--mono-tol", freq_mono_tol,
                   "fail (exit 1) when the profile steps down by more than this");

  // ---- doubling ----
  auto* doubling = app.add_subcommand("doubling", "doubling index of a harmonic expansion");
  std::string dbl_expansion, dbl_center = "";
  double dbl_r = 0.5;
  doubling->add_option("--expansion", dbl_expansion)->required();
  doubling->add_option("--r", dbl_r, "inner radius (outer is 2r)");
  doubling->add_option("--center", dbl_center);

  // ---- bernstein ----
  auto* bern = app.add_subcommand("bernstein", "gradient/sup ratio report over a geodesic ball");
  std::string b_manifold = "torus2", b_modes = "", b_eigenspec = "", b_center = "", b_out = "";
  std::string b_expansion = "", b_p = "";
  int b_degree = 0;
  double b_r = 0.5, b_delta = 1.0;
  PolicyFlags b_policy;
  bern->add_option("--manifold", b_manifold, "torus2 | sphere2");
  bern->add_option("--modes", b_modes, "torus modes m1,m2:cos,sin;...");
  bern->add_option("--degree", b_degree, "zonal sphere degree");
  bern->add_option("--eigenspec", b_eigenspec, "eigenfunction JSON file");
  bern->add_option("--expansion", b_expansion, "harmonic expansion JSON (polynomial L^p route)");
  bern->add_option("--p", b_p, "L^p exponent for the polynomial route: 1, 2 or inf");
  bern->add_option("--center", b_center, "ball center");
  bern->add_option("--r", b_r, "ball radius");
  bern->add_option("--delta", b_delta, "log exponent offset in b_main");
  bern->add_option("--out", b_out, "write the report row as CSV");
  b_policy.attach(bern);

  // ---- sweep ----
  auto* sw = app.add_subcommand(
      "sweep",
      "grid of Bernstein reports + regression summary; rows that fail are skipped in the CSV "
      "and listed in the summary JSON, the sweep continues");
  std::string s_manifold = "torus2", s_lambdas, s_rgrid, s_centers = "", s_out, s_style = "random";
  double s_delta = 1.0;
  int s_ncenters = 1;
  std::uint64_t s_seed = 1;
  PolicyFlags s_policy;
  sw->add_option("--manifold", s_manifold, "torus2 | sphere2");
  sw->add_option("--lambda", s_lambdas, "eigenvalue list (comma separated)")->required();
  sw->add_option("--r-grid", s_rgrid, "radius grid lo:hi:n[:lin]")->required();
  sw->add_option("--centers", s_centers, "fixed centers c1/c2/... (each comma separated)");
  sw->add_option("--n-centers", s_ncenters, "random centers when --centers absent");
  sw->add_option("--delta", s_delta);
  sw->add_option("--style", s_style, "random | canonical");
  sw->add_option("--seed", s_seed);
  sw->add_option("--out", s_out, "CSV output path")->required();
  s_policy.attach(sw);

  // ---- approx ----
  auto* ap = app.add_subcommand("approx", "truncation approximation of a lifted torus eigenfunction");
  std::string a_modes = "", a_eigenspec = "", a_out = "";
  int a_n = 12, a_fit_order = 0;
  double a_r = 0.3;
  PolicyFlags a_policy;
  ap->add_option("--modes", a_modes, "torus modes (lifted)");
  ap->add_option("--eigenspec", a_eigenspec);
  ap->add_option("--n", a_n, "declared frequency scale N (truncation degree 5N)");
  ap->add_option("--r", a_r, "ball radius");
  ap->add_option("--fit-order", a_fit_order, "projection quadrature order (0 = auto)");
  ap->add_option("--out", a_out, "write the head expansion JSON here");
  a_policy.attach(ap);

  // ---- dong ----
  auto* dg = app.add_subcommand("dong", "Dong q profile F(r) = log max q and log-q Laplacian check");
  std::string d_manifold = "torus2", d_modes = "", d_eigenspec = "", d_center = "", d_rgrid, d_out;
  int d_degree = 0, d_points = 100;
  double d_hfd = 1e-3;
  std::uint64_t d_seed = 1;
  PolicyFlags d_policy;
  dg->add_option("--manifold", d_manifold);
  dg->add_option("--modes", d_modes);
  dg->add_option("--degree", d_degree);
  dg->add_option("--eigenspec", d_eigenspec);
  dg->add_option("--center", d_center);
  dg->add_option("--r-grid", d_rgrid)->required();
  dg->add_option("--points", d_points, "sample points for the log-q Laplacian check");
  dg->add_option("--h-fd", d_hfd, "finite-difference step");
  dg->add_option("--seed", d_seed);
  dg->add_option("--out", d_out, "profile CSV path");
  d_policy.attach(dg);

  // ---- baselines ----
  auto* bl = app.add_subcommand("baselines", "classical trig/Markov extremal ratios");
  int bl_n = 5;
  bl->add_option("--n", bl_n, "degree N")->required();

  // ---- verify ----
  auto* vf = app.add_subcommand("verify", "run the module invariant suite");
  bool vf_quick = false;
  vf->add_flag("--quick", vf_quick, "reduced corpus sizes");

  // ---- ingest-check ----
  auto* ic = app.add_subcommand("ingest-check", "validate a sampled-field file");
  std::string ic_in, ic_format = "csv";
  ic->add_option("--in", ic_in, "input path")->required();
  ic->add_option("--format", ic_format, "csv | json");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*freq) {
      auto e = std::make_shared<sphharm::HarmonicExpansion>(
          io::expansion_from_json(io::read_text_file(freq_expansion)));
      Vec center = freq_center.empty() ? Vec::zero(e->dim()) : parse_vec(freq_center);
      ScalarField f = expansion_field(e, center);
      CoefficientField A = CoefficientField::identity(e->dim());
      QuadratureOrders ord{freq_order, freq_order};
      if (!freq_rgrid.empty()) {
        FrequencyProfile p = frequency_profile(f, A, center, parse_grid(freq_rgrid), ord);
        if (freq_out.empty()) {
          std::cout << p.to_csv();
        } else {
          json cfg = {{"cmd", "freq"}, {"expansion", freq_expansion}, {"r_grid", freq_rgrid}};
          write_with_manifest(freq_out, p.to_csv(), cfg, 0);
        }
        if (freq_mono_tol >= 0 && p.max_downward_step() > freq_mono_tol) {
          std::fprintf(stderr, "invariant failure: profile steps down by %.3g (tolerance %.3g)\n",
                       p.max_downward_step(), freq_mono_tol);
          return 1;
        }
      } else {
        double n = frequency_numeric(f, A, center, freq_r, ord);
        std::printf("%.6f\n", n);
      }
      return 0;
    }
    if (*doubling) {
      auto e = std::make_shared<sphharm::HarmonicExpansion>(
          io::expansion_from_json(io::read_text_file(dbl_expansion)));
      Vec center = dbl_center.empty() ? Vec::zero(e->dim()) : parse_vec(dbl_center);
      double v = doubling_index(expansion_field(e, center), center, dbl_r);
      std::printf("%.6f\n", v);
      return 0;
    }
    if (*bern) {
      if (!b_expansion.empty()) {
        auto e = io::expansion_from_json(io::read_text_file(b_expansion));
        double p = b_p == "inf" || b_p == "infinity"
                       ? std::numeric_limits<double>::infinity()
                       : (b_p.empty() ? std::numeric_limits<double>::infinity() : std::stod(b_p));
        auto rep = bernstein::polynomial_bernstein_lp(e, b_r, p, b_policy.policy());
        std::printf("lhs %.12g rhs %.12g constant %.12g\n", rep.lhs, rep.rhs, rep.constant);
        return 0;
      }
      auto phi = load_eigenfunction(b_eigenspec, b_manifold, b_modes, b_degree);
      Domain dom = phi->domain();
      Vec center;
      if (!b_center.empty()) {
        center = parse_vec(b_center);
        if (dom.kind == Manifold::sphere) center = center.normalized();
      } else {
        center = dom.kind == Manifold::sphere ? Vec::axis(3, 2) : Vec::zero(dom.coord_dim());
      }
      GeodesicBall ball(dom, center, b_r);
      auto rep = bernstein::bernstein_ratio(phi, ball, b_policy.policy(), b_delta);
      std::ostringstream os;
      os << "lambda,r,grad_sup,val_sup,ratio,b_global,b_df,b_dong,b_main,b_2d,b_conj\n";
      char buf[400];
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                    rep.lambda, rep.r, rep.grad_sup, rep.val_sup, rep.ratio, rep.bounds.b_global,
                    rep.bounds.b_df, rep.bounds.b_dong, rep.bounds.b_main, rep.bounds.b_2d,
                    rep.bounds.b_conj);
      os << buf;
      if (b_out.empty()) std::cout << os.str();
      else {
        json cfg = {{"cmd", "bernstein"}, {"manifold", b_manifold}, {"r", b_r}};
        write_with_manifest(b_out, os.str(), cfg, 0);
      }
      return 0;
    }
    if (*sw) {
      sweep::SweepConfig cfg;
      cfg.manifold = s_manifold;
      for (double l : parse_grid(s_lambdas)) cfg.lambdas.push_back(l);
      cfg.r_grid = parse_grid(s_rgrid);
      if (!s_centers.empty()) {
        std::istringstream in(s_centers);
        std::string group;
        while (std::getline(in, group, '/')) cfg.centers.push_back(parse_vec(group));
        if (cfg.manifold == "sphere2")
          for (Vec& c : cfg.centers) c = c.normalized();
      }
      cfg.n_random_centers = s_ncenters;
      cfg.delta = s_delta;
      cfg.style = s_style == "canonical" ? sweep::FieldStyle::canonical : sweep::FieldStyle::random;
      cfg.seed = s_seed;
      cfg.threads = threads;
      cfg.policy = s_policy.policy();
      sweep::SweepResult res = sweep::run_sweep(cfg);
      json jcfg = {{"cmd", "sweep"},       {"manifold", s_manifold}, {"lambda", s_lambdas},
                   {"r_grid", s_rgrid},    {"centers", s_centers},   {"delta", s_delta},
                   {"style", s_style},     {"seed", s_seed},         {"threads", threads},
                   {"n_centers", s_ncenters}};
      io::RunManifest man;
      man.start();
      io::write_text_file(s_out, res.csv);
      io::write_text_file(s_out + ".summary.json", res.summary_json);
      man.config_snapshot = jcfg.dump();
      man.seed = s_seed;
      man.add_artifact(s_out);
      man.add_artifact(s_out + ".summary.json");
      man.finish();
      io::write_text_file(s_out + ".manifest.json", man.to_json());
      int failures = 0;
      for (const auto& row : res.rows) failures += row.ok ? 0 : 1;
      std::printf("sweep: %zu rows, %d failed, subwavelength slope %.4f, max c_main %.4g\n",
                  res.rows.size(), failures, res.subwavelength_slope, res.max_c_main);
      return 0;
    }
    if (*ap) {
      auto phi = load_eigenfunction(a_eigenspec, "torus2", a_modes, 0);
      auto lf = eigenfields::lift(phi);
      Vec center = Vec::zero(lf.field.domain().coord_dim());
      auto res = bernstein::approximate_by_truncation(lf.field, center, a_r, a_n, a_fit_order,
                                                      a_policy.policy());
      std::printf("head_degree %d terms %zu tail_sup %.6e relative_tail %.6e\n",
                  res.head.max_degree(), res.head.terms().size(), res.tail_sup, res.relative_tail);
      if (!a_out.empty()) {
        json cfg = {{"cmd", "approx"}, {"n", a_n}, {"r", a_r}, {"fit_order", res.fit_order}};
        write_with_manifest(a_out, io::expansion_to_json(res.head), cfg, 0);
      }
      return 0;
    }
    if (*dg) {
      auto phi = load_eigenfunction(d_eigenspec, d_manifold, d_modes, d_degree);
      auto state = eigenfields::make_dong_state(phi);
      Domain dom = phi->domain();
      Vec center;
      if (!d_center.empty()) {
        center = parse_vec(d_center);
        if (dom.kind == Manifold::sphere) center = center.normalized();
      } else {
        center = dom.kind == Manifold::sphere ? Vec::axis(3, 2) : Vec::zero(2);
      }
      auto profile = eigenfields::dong_F_profile(state, center, parse_grid(d_rgrid), d_policy.policy());
      Rng rng(d_seed);
      std::vector<Vec> pts;
      for (int i = 0; i < d_points; ++i) {
        if (dom.kind == Manifold::sphere) {
          Vec v{rng.normal(), rng.normal(), rng.normal()};
          pts.push_back(v.normalized());
        } else {
          pts.push_back(Vec{rng.uniform(0, kTwoPi), rng.uniform(0, kTwoPi)});
        }
      }
      auto logq = eigenfields::dong_log_q_laplacian_check(phi, pts, d_hfd);
      std::printf("dong: lambda %.6g bound %.6g min_margin %.6g used %d skipped %d\n", logq.lambda,
                  logq.bound, logq.min_margin, logq.used, logq.skipped);
      if (!d_out.empty()) {
        json cfg = {{"cmd", "dong"}, {"manifold", d_manifold}, {"r_grid", d_rgrid}, {"seed", d_seed}};
        write_with_manifest(d_out, profile.to_csv(), cfg, d_seed);
      } else {
        std::cout << profile.to_csv();
      }
      return 0;
    }
    if (*bl) {
      auto [trig, markov] = bernstein::classical_baselines(bl_n);
      std::printf("%.10g %.10g\n", trig, markov);
      return 0;
    }
    if (*vf) {
      auto results = verify::run_all(vf_quick);
      int failed = 0;
      for (const auto& r : results) {
        std::printf("%-45s %s%s%s\n", r.name.c_str(), r.pass ? "PASS" : "FAIL",
                    r.detail.empty() ? "" : "  ", r.detail.c_str());
        failed += r.pass ? 0 : 1;
      }
      std::printf("verify: %zu checks, %d failed\n", results.size(), failed);
      return failed == 0 ? 0 : 1;
    }
    if (*ic) {
      io::SampledField s = io::ingest(ic_in, ic_format);
      std::printf("ok: %zu points on %s, gradients %s, band %s\n", s.points.size(),
                  s.domain.tag().c_str(), s.has_gradients() ? "yes" : "no",
                  s.band_limit ? std::to_string(*s.band_limit).c_str() : "undeclared");
      return 0;
    }
  } catch (const io::IoError& ex) {
    std::fprintf(stderr, "i/o error: %s\n", ex.what());
    return 3;
  } catch (const nlohmann::json::exception& ex) {
    std::fprintf(stderr, "i/o error: %s\n", ex.what());
    return 3;
  } catch (const std::invalid_argument& ex) {
    std::fprintf(stderr, "config error: %s\n", ex.what());
    return 2;
  } catch (const std::domain_error& ex) {
    std::fprintf(stderr, "config error: %s\n", ex.what());
    return 2;
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 2;
  }
  return 0;
}
