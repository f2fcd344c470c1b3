#pragma once

#include "vbma/curvature.hpp"
#include "vbma/end_form.hpp"
#include "vbma/ma_gram.hpp"

#include <Eigen/Dense>

// Vortex bundles over surfaces: rank n+1 bundles whose curvature has the
// block shape
//
//   i Theta_{1 1bar} = diag(A, A'),   i Theta_{2 2bar} = diag(b_1..b_n, B'),
//   i Theta_{1 2bar} = C in rows 1..n of the last column,
//
// with b_1 = 2r + t^2, b_i = 2r (i >= 2), B' = 2r + 2 - t^2.  The vbMA
// equation with density k determines A = {B, .}^{-1}(k Id + C C^*) and
// A' = (k + |C|^2) / (2 B').
//
// The quadratic form Q decouples into four independent pieces B1..B4 over the
// coefficient groups
//
//   B1: alpha dz^1 (sub-block), gamma dz^2 (bottom row), delta dz^1 (corner),
//   B2: alpha dz^2, beta dz^1 (last column), delta dz^2,
//   B3: beta dz^2,
//   B4: gamma dz^1.
//
// B1 is the piece that can degenerate or turn indefinite.  Eliminating first
// the alpha and then the delta coordinates by Schur complements yields the
// chain M -> P -> R;  with coordinate 1 the exceptional one (b_1) and
// v = (c_2, ..., c_n), the end matrix has the closed form
//
//   R = [ p'        conj(q') v^* ]
//       [ q' v      r' Id + s' v v^* ].
//
// Degenerate-but-semipositive R splits into two cases: either the exceptional
// row vanishes (p' = 0, q' = 0) and the remaining block stays semipositive,
// or p' > 0 and the Schur complement r' Id + (s' - |q'|^2/p') v v^* is
// semipositive with kernel.

namespace vbma {

struct VortexSurfaceInstance {
  int n = 0;              // sub-bundle dimension; total rank is n + 1
  int r = 0;              // vortex integer parameter, b_i = 2r away from b_1
  double k = 0.0;         // vbMA density
  double t_norm_sq = 0.0; // |t|^2 shifting b_1 and B'
  Eigen::VectorXcd c;     // section vector C
  Eigen::VectorXd b;      // diagonal of B
  double b_prime = 0.0;
  Mat a;                  // A, n x n Hermitian
  double a_prime = 0.0;
};

// Solves the vortex vbMA equations for A and A' given the remaining data.
// Requires n >= 1, r >= 1, k > 0, 0 <= t_norm_sq < 2r + 2 and c of size n.
VortexSurfaceInstance solve_curvature(int n, int r, double k, double t_norm_sq,
                                      const Eigen::VectorXcd& c);

// The instance with k = 4, r = 1, t = 0 and C = (0, ..., 0, 2 sqrt(3)),
// whose B1 form degenerates with an (n-1)-dimensional kernel.  Requires
// n >= 2.
VortexSurfaceInstance counterexample_instance(int n);

// Max-norm residual of the two coordinate vbMA equations,
// {A, B} - C C^* - k Id and 2 A' B' - |C|^2 - k.
double vortex_residual(const VortexSurfaceInstance& inst);

// The rank n+1 curvature on the surface with the vortex block pattern.
Curvature assemble_curvature(const VortexSurfaceInstance& inst);

// The four decoupled pieces of Q as Gram matrices, each carrying the basis of
// End-valued (1,0)-forms its coordinates refer to.  Coordinate orders:
//   b1: alpha row-major, then gamma_1..gamma_n, then delta;
//   b2: alpha row-major, then beta_1..beta_n, then delta;
//   b3: beta_1..beta_n;   b4: gamma_1..gamma_n.
struct BForms {
  MaGram b1;
  MaGram b2;
  MaGram b3;
  MaGram b4;
};

BForms b_forms(const VortexSurfaceInstance& inst);

struct SchurChain {
  Eigen::MatrixXcd mcal;  // B1 Gram in conjugated coordinates (value = u^T M conj(u))
  Eigen::MatrixXcd pcal;  // after eliminating alpha
  Eigen::MatrixXcd rcal;  // after also eliminating delta
  double pprime = 0.0;
  Complex qprime;
  double rprime = 0.0;
  double sprime = 0.0;
  Eigen::VectorXcd v;             // (c_2, ..., c_n)
  double structure_residual = 0.0;  // |rcal - closed form| in max norm
};

SchurChain schur_chain(const VortexSurfaceInstance& inst);

enum class SemidefCase { Positive, Case1, Case2, Indefinite };

const char* to_string(SemidefCase value);

// Classifies R.  Negative tol requests classify()'s default tolerance.
// Throws std::logic_error if R is semipositive with kernel but fits neither
// degenerate case.
SemidefCase classify_semidef_case(const SchurChain& chain, double tol = -1.0);
SemidefCase classify_semidef_case(const VortexSurfaceInstance& inst,
                                  double tol = -1.0);

// Whether the instance satisfies t^2 = 0 and |C|^2 = k (2r + 1), the exact
// parameter locus of Case1.
bool case1_characteristic(const VortexSurfaceInstance& inst, double tol = 1e-9);

// Product with a flat factor: the curvature on C^{2+m} that keeps the vortex
// blocks in the first two directions and adds Id_{n+1} on each du^j dbar{u}^j.
struct LiftedInstance {
  VortexSurfaceInstance base;
  int m = 0;
  Curvature phi;
};

LiftedInstance lift(const VortexSurfaceInstance& inst, int m);

// Max-norm deviation of top((i Phi)^{m+2}) / vol from k (m+2)!/2 * Id.
double lift_power_residual(const LiftedInstance& lifted);

// Tr(i Theta D ^ i Theta D^*) / vol for a surface curvature and a constant
// endomorphism D.
double theta_d_wedge_trace(const Curvature& theta, const Mat& d);

// Tr( top((i Theta)^2) (D D^* + D^* D) ) / vol + theta_d_wedge_trace, the
// quantity whose nonnegativity for every D makes the lifted curvature
// MA-semipositive.
double sufficient_positivity_value(const Curvature& theta, const Mat& d);

}  // namespace vbma
