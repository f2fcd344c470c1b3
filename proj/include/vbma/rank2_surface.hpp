#pragma once

#include "vbma/curvature.hpp"
#include "vbma/end_form.hpp"
#include "vbma/ma_gram.hpp"
#include "vbma/rng.hpp"

#include <Eigen/Dense>

// Positivity on complex surfaces for rank-2 bundles.
//
// The curvature is described by 2x2 blocks
//
//   a = i Theta_{1 1bar},  b = i Theta_{1 2bar},  c = i Theta_{2 2bar},
//
// so that (iTheta)^2 / vol = {a, c} - b b^dag - b^dag b, and the vbMA equation
// with density eta0 reads {a, c} - b b^dag - b^dag b = eta0 Id.
//
// MA-positivity of such a solution reduces, after diagonalizing c, to a
// family of scalar inequalities in the eigenvalue ratio lambda.  The central
// one is a Schur-type inequality for the pairing
//
//   <P, Q>_T = sum_{ij} conj(P_ij) Q_ij / (lambda_i + lambda_j),
//
// with lambda_1 = 1, lambda_2 = lambda, applied to anticommutators:
//
//   <{B, B^dag}, {X, X^dag}>_T >= <{B, X^dag}, {B, X^dag}>_T.
//
// Expanding over the weights 1/(lambda_i + lambda_j) turns the difference
// into (a11 lambda^2 + m lambda + a22) / (2 lambda (1 + lambda)) with
// m = a11 + a22 + 2 (a12 + a21), and the coefficients have closed forms in
// five bilinear combinations of the entries of B and X (alpha through
// epsilon below).

namespace vbma {

struct SurfaceBlocks {
  Mat a;  // i Theta_{1 1bar}
  Mat b;  // i Theta_{1 2bar}
  Mat c;  // i Theta_{2 2bar}
};

// Solves {c, x} = y for Hermitian positive-definite c: in the eigenbasis of
// c the solution is x_ij = y_ij / (lambda_i + lambda_j).
Mat anticommutator_solve(const Mat& c, const Mat& y);

struct GreekCoefficients {
  Complex alpha;    // B11 X12 - B12 X11
  Complex beta;     // B11 X21 - B21 X11
  Complex gamma;    // B12 X21 - B21 X12
  Complex delta;    // B22 X12 - B12 X22
  Complex epsilon;  // B22 X21 - B21 X22
  double a11 = 0.0;           // 2|alpha|^2 + 2|beta|^2 + |gamma|^2
  double a22 = 0.0;           // 2|delta|^2 + 2|epsilon|^2 + |gamma|^2
  double a12_plus_a21 = 0.0;  // -(|alpha+delta|^2 + |beta+epsilon|^2)
};

GreekCoefficients greek_coefficients(const Mat& b, const Mat& x);

struct SchurInequality {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

// Evaluates both sides of the Schur-type inequality for 2x2 matrices b, x and
// weight ratio lambda > 0.  holds is lhs >= rhs within rel_tol * scale where
// scale = max(1, |lhs|, |rhs|).
SchurInequality schur_inequality_check(const Mat& b, const Mat& x, double lambda,
                                       double rel_tol = 1e-9);

struct QuadraticLambdaCheck {
  double middle = 0.0;  // a11 + a22 + 2 (a12 + a21)
  double bound = 0.0;   // 2 sqrt(a11 a22)
  bool holds = false;   // middle >= 0, or |middle| <= bound
};

// Nonnegativity of a11 lambda^2 + middle lambda + a22 over lambda > 0.
QuadraticLambdaCheck quadratic_lambda_check(const GreekCoefficients& g,
                                            double rel_tol = 1e-12);

// Curvature on a surface with the given 2x2 blocks.
Curvature assemble_surface(const SurfaceBlocks& blocks);

// Checks strict MA-positivity of a rank-2 surface solution of vbMA with
// density eta0 > 0.  Preconditions (std::invalid_argument when violated):
// eta0 > 0, blocks solve the equation, {a, c} is positive definite, and the
// solution is MA-semipositive.  Under these the classification must come out
// Positive; anything else raises std::logic_error.
Verdict surface_preservation_check(const SurfaceBlocks& blocks, double eta0);

// Random solution of the surface vbMA equation: draws c positive definite
// and b arbitrary, then solves {c, a} = eta0 Id + b b^dag + b^dag b for a.
SurfaceBlocks random_surface_blocks(Rng& rng, double eta0);

}  // namespace vbma
