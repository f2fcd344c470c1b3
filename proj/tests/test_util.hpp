#pragma once

#include "vbma/end_form.hpp"
#include "vbma/rng.hpp"

#include <vector>

namespace testutil {

inline std::vector<vbma::IndexMask> masks_of_degree(int n, int d) {
  std::vector<vbma::IndexMask> out;
  for (vbma::IndexMask m = 0; m < (1u << n); ++m) {
    if (vbma::mask_degree(m) == d) out.push_back(m);
  }
  return out;
}

// Dense random form: every admissible key gets a complex Gaussian coefficient.
inline vbma::EndForm random_end_form(vbma::Rng& rng, int n, int r, int p,
                                     int q) {
  vbma::EndForm out(n, r, p, q);
  for (vbma::IndexMask hol : masks_of_degree(n, p)) {
    for (vbma::IndexMask anti : masks_of_degree(n, q)) {
      out.set(vbma::FormKey{hol, anti}, rng.cgauss_matrix(r, r));
    }
  }
  return out;
}

}  // namespace testutil
