#pragma once

#include "bernlab/rng.hpp"
#include "bernlab/sphharm.hpp"

namespace testutil {

inline bernlab::sphharm::HarmonicExpansion random_expansion(bernlab::Rng& rng, int d, int kmax,
                                                            int max_terms, double r_ref = 1.0) {
  bernlab::sphharm::HarmonicExpansion e(d, r_ref);
  e.set_coeff(kmax, rng.uniform_int(0, bernlab::sphharm::dim_harmonics(d, kmax) - 1), rng.normal());
  for (int t = 0; t < max_terms - 1; ++t) {
    int k = rng.uniform_int(0, kmax);
    int m = rng.uniform_int(0, bernlab::sphharm::dim_harmonics(d, k) - 1);
    e.set_coeff(k, m, rng.normal());
  }
  return e;
}

}  // namespace testutil
