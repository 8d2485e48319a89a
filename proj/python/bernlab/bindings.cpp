// python bindings for the bernlab core: expansions, frequency/doubling,
// eigenfunctions, Bernstein reports, baselines and sweeps.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bernlab/bernstein.hpp"
#include "bernlab/eigenfields.hpp"
#include "bernlab/frequency.hpp"
#include "bernlab/io.hpp"
#include "bernlab/sweep.hpp"
#include "bernlab/verify.hpp"

namespace py = pybind11;
using namespace bernlab;
using sphharm::HarmonicExpansion;

namespace {

Vec to_vec(const std::vector<double>& x) { return Vec::from(x); }

std::vector<double> from_vec(const Vec& v) {
  return std::vector<double>(v.c.begin(), v.c.begin() + v.size());
}

std::shared_ptr<eigenfields::TorusEigenfunction> torus_from_tuples(
    int d, const std::vector<std::tuple<std::vector<int>, double, double>>& modes) {
  std::vector<eigenfields::TorusMode> ms;
  for (const auto& [m, c, s] : modes) ms.push_back({m, c, s});
  return eigenfields::make_torus_eigenfunction(d, ms);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "bernlab core: spherical harmonics, frequency functions and Bernstein ratios";

  py::class_<HarmonicExpansion>(m, "HarmonicExpansion")
      .def(py::init<int, double>(), py::arg("d"), py::arg("r_ref") = 1.0)
      .def("set_coeff", &HarmonicExpansion::set_coeff, py::arg("k"), py::arg("m"), py::arg("a"))
      .def("coeff", &HarmonicExpansion::coeff)
      .def("dim", &HarmonicExpansion::dim)
      .def("r_ref", &HarmonicExpansion::r_ref)
      .def("max_degree", &HarmonicExpansion::max_degree)
      .def("sphere_mean_square", &HarmonicExpansion::sphere_mean_square, py::arg("rho"))
      .def("ball_mean_square", &HarmonicExpansion::ball_mean_square, py::arg("r"))
      .def("exact_frequency", &HarmonicExpansion::exact_frequency, py::arg("r"))
      .def("truncate", &HarmonicExpansion::truncate, py::arg("K"))
      .def("eval",
           [](const HarmonicExpansion& e, const std::vector<double>& x) {
             Vec g;
             double v = e.eval(to_vec(x), &g);
             return py::make_tuple(v, from_vec(g));
           })
      .def("to_json", [](const HarmonicExpansion& e) { return io::expansion_to_json(e); })
      .def_static("from_json",
                  [](const std::string& text) { return io::expansion_from_json(text); });

  m.def("dim_harmonics", &sphharm::dim_harmonics, py::arg("d"), py::arg("k"));
  m.def("zonal_kernel", &sphharm::zonal_kernel, py::arg("d"), py::arg("k"), py::arg("cosine"));
  m.def("coordinate_expansion", &sphharm::coordinate_expansion, py::arg("d"), py::arg("axis"),
        py::arg("r_ref") = 1.0);

  m.def(
      "frequency_numeric",
      [](const HarmonicExpansion& e, const std::vector<double>& center, double r, int order) {
        auto ep = std::make_shared<HarmonicExpansion>(e);
        Vec c = center.empty() ? Vec::zero(e.dim()) : to_vec(center);
        return frequency_numeric(expansion_field(ep, c), CoefficientField::identity(e.dim()), c, r,
                                 {order, order});
      },
      py::arg("expansion"), py::arg("center") = std::vector<double>{}, py::arg("r") = 1.0,
      py::arg("order") = 0);
  m.def(
      "doubling_index",
      [](const HarmonicExpansion& e, double r) {
        auto ep = std::make_shared<HarmonicExpansion>(e);
        return doubling_index(expansion_field(ep), Vec::zero(e.dim()), r);
      },
      py::arg("expansion"), py::arg("r"));
  m.def(
      "frequency_profile",
      [](const HarmonicExpansion& e, const std::vector<double>& radii) {
        auto ep = std::make_shared<HarmonicExpansion>(e);
        FrequencyProfile p = frequency_profile(expansion_field(ep),
                                               CoefficientField::identity(e.dim()),
                                               Vec::zero(e.dim()), radii);
        return py::make_tuple(p.radii, p.values);
      },
      py::arg("expansion"), py::arg("radii"));

  py::class_<eigenfields::TorusEigenfunction, std::shared_ptr<eigenfields::TorusEigenfunction>>(
      m, "TorusEigenfunction")
      .def(py::init([](int d, const std::vector<std::tuple<std::vector<int>, double, double>>& modes) {
             return torus_from_tuples(d, modes);
           }),
           py::arg("d"), py::arg("modes"))
      .def_property_readonly("lam", &eigenfields::TorusEigenfunction::lambda)
      .def("value", [](const eigenfields::TorusEigenfunction& f, const std::vector<double>& x) {
        return f.value(to_vec(x));
      })
      .def("gradient_norm", [](const eigenfields::TorusEigenfunction& f, const std::vector<double>& x) {
        return f.riemannian_gradient(to_vec(x)).norm();
      });

  m.def("zonal_sphere_eigenfunction_value",
        [](int n, int k, const std::vector<double>& x) {
          auto phi = eigenfields::make_zonal_sphere_eigenfunction(n, k);
          return phi->value(to_vec(x));
        },
        py::arg("n"), py::arg("k"), py::arg("x"));

  m.def(
      "lift_frequency",
      [](int d, const std::vector<std::tuple<std::vector<int>, double, double>>& modes, double r) {
        auto phi = torus_from_tuples(d, modes);
        auto lf = eigenfields::lift(phi);
        int cd = lf.field.domain().coord_dim();
        return frequency_numeric(lf.field, CoefficientField::identity(cd), Vec::zero(cd), r);
      },
      py::arg("d"), py::arg("modes"), py::arg("r"));

  m.def(
      "bernstein_ratio_torus",
      [](int d, const std::vector<std::tuple<std::vector<int>, double, double>>& modes,
         const std::vector<double>& center, double r, double delta) {
        auto phi = torus_from_tuples(d, modes);
        GeodesicBall ball(Domain::torus(d), to_vec(center), r);
        auto rep = bernstein::bernstein_ratio(phi, ball, {}, delta);
        py::dict out;
        out["lambda"] = rep.lambda;
        out["r"] = rep.r;
        out["grad_sup"] = rep.grad_sup;
        out["val_sup"] = rep.val_sup;
        out["ratio"] = rep.ratio;
        out["b_global"] = rep.bounds.b_global;
        out["b_main"] = rep.bounds.b_main;
        out["b_2d"] = rep.bounds.b_2d;
        out["b_conj"] = rep.bounds.b_conj;
        out["c_global"] = rep.c_global;
        return out;
      },
      py::arg("d"), py::arg("modes"), py::arg("center"), py::arg("r"), py::arg("delta") = 1.0);

  m.def("classical_baselines", [](int N) {
    auto [t, mk] = bernstein::classical_baselines(N);
    return py::make_tuple(t, mk);
  });

  m.def(
      "run_sweep",
      [](const std::string& manifold, const std::vector<double>& lambdas,
         const std::vector<double>& r_grid, const std::string& style, std::uint64_t seed,
         int threads) {
        sweep::SweepConfig cfg;
        cfg.manifold = manifold;
        cfg.lambdas = lambdas;
        cfg.r_grid = r_grid;
        cfg.style = style == "canonical" ? sweep::FieldStyle::canonical : sweep::FieldStyle::random;
        cfg.seed = seed;
        cfg.threads = threads;
        if (manifold == "torus2") cfg.centers = {Vec{0.0, 0.0}};
        else cfg.centers = {Vec{0.0, 0.0, 1.0}};
        auto res = sweep::run_sweep(cfg);
        return py::make_tuple(res.csv, res.summary_json, res.subwavelength_slope);
      },
      py::arg("manifold"), py::arg("lambdas"), py::arg("r_grid"), py::arg("style") = "canonical",
      py::arg("seed") = 1, py::arg("threads") = 1);

  m.def("verify_quick", [] {
    auto results = verify::run_all(true);
    return verify::exit_code(results) == 0;
  });

  m.attr("__version__") = io::kVersion;
}
