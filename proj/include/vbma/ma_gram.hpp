#pragma once

#include "vbma/curvature.hpp"
#include "vbma/end_form.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

// MA-positivity via Gram matrices.
//
// For an End(E)-valued (1,0)-form a and a curvature iTheta on an n-fold,
//
//   Q(a) = sum_{k=0}^{n-1} Tr( i a ^ (iTheta)^k ^ a* ^ (iTheta)^{n-1-k} ) / vol.
//
// Q is a real quadratic form in the coefficients of a.  Expanding a over a
// basis e_1, ..., e_d of (1,0)-forms, the Hermitian Gram matrix H recovered by
// polarization satisfies v^dag H v = Q(sum_p v_p e_p), conjugate-linear in the
// first slot.  The curvature is MA-positive when H is positive semidefinite
// over the full coefficient space, and MA-positive along a subspace W when the
// restricted Gram is.

namespace vbma {

enum class VerdictKind { Positive, StrictlySemiPositive, Indefinite, Zero };

const char* to_string(VerdictKind kind);

struct Verdict {
  VerdictKind kind = VerdictKind::Zero;
  double min_eigenvalue = 0.0;
  int kernel_dimension = 0;
  Eigen::VectorXcd witness;  // eigenvector attaining min_eigenvalue
  double tol = 0.0;          // tolerance the classification used
};

// A subspace of End(E)-valued (1,0)-forms, given by a spanning basis.
struct Subspace {
  std::vector<EndForm> basis;
};

struct MaGram {
  Eigen::MatrixXcd matrix;
  std::vector<EndForm> basis;
  int dim() const { return static_cast<int>(basis.size()); }
};

// The basis element E_{ij} dz^mu (all indices 1-based).
EndForm basis_form(int n, int r, int mu, int i, int j);

// Full coefficient basis, ordered so that
// basis[(mu-1)*r*r + (i-1)*r + (j-1)] = E_{ij} dz^mu.
std::vector<EndForm> full_basis(int n, int r);

// Q(a) for a single End-valued (1,0)-form.  Throws std::logic_error if the
// accumulated value fails to be real to working precision.
double ma_quadratic_form(const Curvature& theta, const EndForm& a);

// Gram matrix of Q over the full basis, respectively over the basis of W.
// The subspace basis must be linearly independent (checked through the
// Frobenius Gram matrix of the basis forms).
MaGram gram_matrix(const Curvature& theta);
MaGram gram_matrix(const Curvature& theta, const Subspace& w);

// Spectral classification of a Hermitian matrix.  Negative tol requests the
// default max(1e-12, 1e-8 * spectral norm).
Verdict classify(const Eigen::MatrixXcd& h, double tol = -1.0);
Verdict classify(const MaGram& gram, double tol = -1.0);

// Independent sampling check: minimum of Q over random unit coefficient
// vectors in the span of the basis.  Evaluates Q directly, bypassing the Gram
// matrix construction.
double monte_carlo_min(const Curvature& theta, const std::vector<EndForm>& basis,
                       int trials, std::uint64_t seed);
double monte_carlo_min(const Curvature& theta, int trials, std::uint64_t seed);
double monte_carlo_min(const Curvature& theta, const Subspace& w, int trials,
                       std::uint64_t seed);

// Decoupling of the full Gram matrix for a vortex-shaped curvature on a
// surface (n = 2, r = sub_rank + 1).  The coefficient basis splits into four
// groups that the Gram matrix cannot mix:
//
//   group 1: alpha dz^1, gamma dz^2, delta dz^1
//   group 2: alpha dz^2, beta dz^1, delta dz^2
//   group 3: beta dz^2
//   group 4: gamma dz^1
//
// where, writing s = sub_rank, alpha covers entries (i,j) with i,j <= s, beta
// the column (i <= s, j = s+1), gamma the row (i = s+1, j <= s) and delta the
// corner (s+1, s+1).  Throws std::invalid_argument if the curvature does not
// have the vortex sparsity pattern, std::logic_error if the Gram matrix
// nevertheless mixes the groups beyond tolerance.
struct DecoupledBlocks {
  std::vector<MaGram> blocks;
  double off_block_max = 0.0;
};

DecoupledBlocks decoupling_blocks(const Curvature& theta, int sub_rank);

}  // namespace vbma
