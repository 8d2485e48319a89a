#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "bernlab/geometry.hpp"
#include "bernlab/sphharm.hpp"

namespace bernlab {

struct FieldEval {
  double value = 0;
  bool has_grad = false;
  Vec grad;
};

enum class ExpansionView { none, value, grad_norm };

/// A pointwise evaluator (value + optional gradient) on a domain — the
/// universal currency between modules. Evaluation is pure and thread-safe.
class ScalarField {
 public:
  using EvalFn = std::function<FieldEval(const Vec&)>;

  ScalarField() = default;
  ScalarField(Domain dom, EvalFn fn, std::optional<double> band_limit = {}, std::string name = {})
      : domain_(dom), fn_(std::move(fn)), band_(band_limit), name_(std::move(name)) {}

  const Domain& domain() const { return domain_; }
  std::optional<double> band_limit() const { return band_; }
  const std::string& name() const { return name_; }
  bool has_gradient() const { return has_gradient_; }

  FieldEval operator()(const Vec& x) const { return fn_(x); }
  double value(const Vec& x) const { return fn_(x).value; }
  Vec gradient(const Vec& x) const {
    FieldEval e = fn_(x);
    if (!e.has_grad) throw std::domain_error("ScalarField: field does not provide gradients");
    return e.grad;
  }

  // Fast-path hooks used by sup-norm and quadrature loops.
  std::shared_ptr<const sphharm::HarmonicExpansion> expansion;
  ExpansionView view = ExpansionView::none;
  Vec expansion_center;        // expansion origin, in domain coordinates
  bool abs_subharmonic = false;  // |f| attains its ball sup on the boundary
  bool has_gradient_ = true;

 private:
  Domain domain_;
  EvalFn fn_;
  std::optional<double> band_;
  std::string name_;
};

/// Euclidean field h(x) backed by a harmonic expansion centered at `center`.
ScalarField expansion_field(std::shared_ptr<const sphharm::HarmonicExpansion> e, Vec center = {},
                            std::optional<double> band_limit = {});

/// Euclidean field |grad h|(x) for a harmonic expansion.
ScalarField expansion_grad_norm_field(std::shared_ptr<const sphharm::HarmonicExpansion> e,
                                      Vec center = {}, std::optional<double> band_limit = {});

/// Central finite-difference Laplace-Beltrami at p via geodesic steps along an
/// orthonormal tangent frame (exact frame on flat domains, exp map on spheres).
double fd_laplacian(const Domain& dom, const std::function<double(const Vec&)>& f, const Vec& p,
                    double h);

/// Central finite-difference Riemannian gradient at p, returned as an ambient
/// vector (tangential for spheres).
Vec fd_gradient(const Domain& dom, const std::function<double(const Vec&)>& f, const Vec& p,
                double h);

}  // namespace bernlab
