#pragma once

#include "vbma/curvature.hpp"
#include "vbma/end_form.hpp"
#include "vbma/ma_gram.hpp"

#include <Eigen/Dense>

#include <cstdint>

// Rank-2 vortex bundles over threefolds.
//
// The curvature ansatz lives on C^3 with a 2x2 bundle:
//
//   i Theta_{mu nubar} = diag( (delta_{mu nu} - G_{mu nu}) / (3a),
//                              (lambda_mu delta_{mu nu} - G_{mu nu}) / (3b) ),
//   i Theta_{3 3bar}   = diag(a, b),
//   i Theta_{mu 3bar}  = ell_mu E_12,            mu, nu in {1, 2},
//
// where G = -ell ell^* is rank one and negative semidefinite.  The vbMA
// equation reduces to the scalar constraint c1 = c2 for
//
//   c1 = 2b - a lambda_1 L_2 - a lambda_2 L_1,   c2 = 2a lambda_1 lambda_2 - b |ell|^2,
//
// with L_i = |ell_i|^2; the common value is stored as c.
//
// MA-positivity restricted to the five-dimensional coefficient subspace
//
//   W = span{ 3ab E_21 dz^3, E_11 dz^1, E_11 dz^2, E_22 dz^1, E_22 dz^2 }
//
// has Gram matrix [[Delta, -w^*], [-w, M]]; eliminating the first coordinate
// gives X = Delta M - w w^*, and det X factorizes through the closed-form
// coefficients f, g1, g2 below.  The factorization holds unconditionally in
// (a, b, lambda, L), not only on solutions.

namespace vbma {

// Dual-route check for powers of the two-block vortex curvature shape on
// C^{n+1}: diag(Theta_1, Theta_2) over the first n directions, diag(a, b) on
// the last, and ell_mu E_12 mixing them.  The four bundle blocks of
// (i Theta)^k admit closed forms in the scalar forms x = i Theta_1,
// y = i Theta_2, g = i G and omega = i dz^{n+1} dzbar^{n+1}:
//
//   tl = x^k + (k a x^{k-1} + g ^ sum_{j=0}^{k-2} (j+1) x^j y^{k-2-j}) ^ omega,
//   br = same with a <-> b and x <-> y,
//   tr = (sum_{j=0}^{k-1} x^j y^{k-1-j}) ^ (i ell_mu dz^mu dzbar^{n+1}),
//   bl = adjoint of tr.
struct ThetaPowerBlocks {
  EndForm tl;
  EndForm tr;
  EndForm bl;
  EndForm br;
  double residual = 0.0;  // max coefficient deviation from the brute power
  double scale = 0.0;     // max coefficient of the brute power blocks
};

// theta1, theta2 are Hermitian n x n coefficient matrices, g is Hermitian
// negative semidefinite of rank at most one.  Requires 1 <= k <= n+1 and
// n + 1 <= kMaxDim.
ThetaPowerBlocks theta_powers(const Mat& theta1, const Mat& theta2, double a,
                              double b, const Mat& g, int k);

struct ThreefoldInstance {
  double a = 0.0;
  double b = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  Complex ell1;
  Complex ell2;
  double c = 0.0;  // common value of c1 = c2
};

// Solves the vbMA constraint for |ell|^2 with the split L_1 = t s,
// L_2 = (1-t) s, t in [0, 1].  When the constraint degenerates to 0 = 0 the
// scale s is drawn from the seed.  Throws std::invalid_argument when no
// admissible solution exists (s < 0, or c <= 0).
ThreefoldInstance make_instance(double a, double b, double lambda1,
                                double lambda2, double t, std::uint64_t seed);

// Instance from explicit ell; validates the vbMA constraint c1 = c2 and
// c1 > 0.
ThreefoldInstance make_instance_from_ell(double a, double b, double lambda1,
                                         double lambda2, Complex ell1,
                                         Complex ell2);

// The rank-2 curvature on C^3 described above.
Curvature assemble_threefold(const ThreefoldInstance& inst);

// Deviation of top((i Theta)^3) / vol from a multiple of the identity.
double threefold_residual(const ThreefoldInstance& inst);

// The five-element coefficient subspace W, first element scaled by 3ab.
Subspace threefold_subspace(const ThreefoldInstance& inst);

struct RestrictedData {
  double delta = 0.0;       // Gram entry of the first W element, via forms
  Eigen::MatrixXcd m;       // 4x4 block over the remaining W elements
  Eigen::VectorXcd w;       // coupling vector
  Eigen::MatrixXcd x;       // Delta M - w w^*
};

// Throws std::logic_error if the form-route Delta fails to be positive.
RestrictedData build_x(const ThreefoldInstance& inst);

struct DetCoefficients {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;  // 2 c2 / a + c1 |ell|^2 / a
  double f = 0.0;
  double g1 = 0.0;
  double g2 = 0.0;
};

// Closed forms in (a, b, lambda_1, lambda_2, L_1, L_2).
DetCoefficients det_coefficients(double a, double b, double lambda1,
                                 double lambda2, double l1, double l2);

struct DetDecomposition {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double f = 0.0;
  double g1 = 0.0;
  double g2 = 0.0;
  double det_x = 0.0;           // det X evaluated directly
  double det_identity = 0.0;    // 2 Delta^3 (c2 g2 + c1 g1) / (a lambda1 lambda2)
  double det_a_block = 0.0;     // det of the top-left 2x2 block of X
  double det_a_identity = 0.0;  // 2 Delta (2 Delta - |w_1|^2)
};

DetDecomposition det_decomposition(const ThreefoldInstance& inst);

// Intersection of the lines c1 = 0 and c2 = 0 in the (L_1, L_2) plane.
// Requires lambda1 != lambda2.
Eigen::Vector2d corner_point(double a, double b, double lambda1, double lambda2);

struct RegionSweepReport {
  int requested = 0;
  int accepted = 0;  // samples falling in region P
  double min_g1 = 0.0;
  double min_g2 = 0.0;
  int nonpositive_g1 = 0;
  int nonpositive_g2 = 0;
  double max_det_rel_residual = 0.0;
};

// Samples (L_1, L_2) uniformly over the bounding box of region
// P = {L_1 >= 0, L_2 >= 0, c1 > 0, c2 > 0}, keeps the points inside P, and
// evaluates g1, g2 and the det X factorization on each.
RegionSweepReport region_p_sweep(double a, double b, double lambda1,
                                 double lambda2, int trials, std::uint64_t seed);

struct TwoFormSquare {
  double value_direct = 0.0;
  double value_identity = 0.0;
  double discrepancy = 0.0;
};

// For scalar forms on C^2: omega = eta + a_coef (i p pbar) + b_coef (i q qbar)
//   + cc (i p qbar) + conj(cc) (i q pbar),
// with eta a real (1,1)-form (i absorbed) and p, q (1,0)-forms.  Evaluates
// omega^2 / (2 vol) directly and through
//   omega^2 = eta^2 + 2 eta (omega - eta)
//             + 2 (a_coef b_coef - |cc|^2) (i p pbar)(i q qbar).
TwoFormSquare two_form_square(const EndForm& eta, const EndForm& p,
                              const EndForm& q, double a_coef, double b_coef,
                              Complex cc);

}  // namespace vbma
