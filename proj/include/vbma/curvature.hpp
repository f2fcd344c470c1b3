#pragma once

#include "vbma/end_form.hpp"

#include <vector>

namespace vbma {

// Hermitian endomorphism-valued (1,1)-form i*Theta. Stored as an EndForm with
// raw coefficient i*H_{mu,nu} at key ({mu},{nu}); Hermitian symmetry means
// H_{mu,nu} = H_{nu,mu}^dag.
class Curvature {
 public:
  // Zero curvature.
  Curvature(int n, int r);

  // Builds i*Theta from the matrices H_{mu,nu}; blocks[mu-1][nu-1] is H_{mu,nu}.
  // Validates Hermitian symmetry to 1e-12 relative.
  static Curvature from_blocks(int n, const std::vector<std::vector<Mat>>& blocks);

  int n() const { return form_.n(); }
  int r() const { return form_.r(); }

  // The stored (1,1)-form (raw coefficients i*H_{mu,nu}).
  const EndForm& form() const { return form_; }

  // H_{mu,nu} with the stored factor of i removed; mu, nu are 1-based.
  Mat block(int mu, int nu) const;

  void set_block(int mu, int nu, const Mat& h);

 private:
  explicit Curvature(EndForm f) : form_(std::move(f)) {}
  EndForm form_;
};

// Coefficient eta0 of the reference volume form.
struct VolumeDensity {
  double scalar = 1.0;
};

// k-fold wedge power of i*Theta; k = 0 gives the identity (0,0)-form and
// k > n gives the zero (k,k)-form.
EndForm curvature_power(const Curvature& theta, int k);

// Max-norm of (i*Theta)^n / vol - eta0 * Id.
double vbma_residual(const Curvature& theta, const VolumeDensity& eta);

// The (n,n)-form sum_{k=0}^{n-1} (i*Theta)^k wedge [i*Theta, g] wedge (i*Theta)^{n-1-k},
// where [i*Theta, g] has coefficients [H_{mu,nu}, g].
EndForm commutator_sum(const Curvature& theta, const Mat& g);

// Max-norm of commutator_sum(theta, g) - [(i*Theta)^n, g]; an algebraic
// identity, so the result is rounding noise for every input.
double commutator_identity_check(const Curvature& theta, const Mat& g);

}  // namespace vbma
