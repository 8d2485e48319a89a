#pragma once

#include "bernlab/scalar_field.hpp"

namespace bernlab {

struct ResolutionPolicy {
  double grid_factor = 0.125;  // grid spacing <= grid_factor * min(r, 1/B)
  double refine_tol = 1e-4;    // refinement stops below refine_tol * r ...
  double refine_rel = 1e-9;    // ... once the sup gain per halving is below this
  bool force = false;          // proceed without a declared band limit
  size_t max_grid_points = 40'000'000;
};

/// Resolution certificate attached to a sup estimate.
struct SupResult {
  double sup = 0;
  Vec argmax;
  double grid_spacing = 0;
  int refine_depth = 0;
  double error_factor = 1.0;  // 1 + (B h)^2 when a band limit is declared
  size_t evaluations = 0;
};

/// Deterministic coarse-grid scan of |field| over the region followed by
/// local compass refinement around the best cell. Expansion-backed fields on
/// Euclidean balls are reduced to their boundary sphere (|h| and |grad h| are
/// subharmonic) and scanned with dense separable grids.
SupResult sup_norm(const ScalarField& field, const Region& region, const ResolutionPolicy& policy = {});

inline SupResult sup_norm(const ScalarField& field, const GeodesicBall& ball,
                          const ResolutionPolicy& policy = {}) {
  return sup_norm(field, Region::over(ball), policy);
}

/// A-posteriori band-limit sanity ratio: sup|grad f| / (B sup|f|) over the
/// region. Values far above O(1) flag an understated band limit.
double band_limit_ratio(const ScalarField& field, const Region& region,
                        const ResolutionPolicy& policy = {});

}  // namespace bernlab
