#include "vbma/rank2_surface.hpp"

#include <cmath>
#include <stdexcept>

namespace vbma {

namespace {

void check_square_pair(const Mat& c, const Mat& y, const char* where) {
  if (c.rows() != c.cols() || y.rows() != y.cols() || c.rows() != y.rows()) {
    throw std::invalid_argument(std::string(where) +
                                ": matrices must be square and of equal size");
  }
}

void check_hermitian(const Mat& m, const char* where) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw std::invalid_argument(std::string(where) + ": matrix is not Hermitian");
  }
}

void check_two_by_two(const Mat& m, const char* where) {
  if (m.rows() != 2 || m.cols() != 2) {
    throw std::invalid_argument(std::string(where) + ": expected a 2x2 matrix");
  }
}

Mat anticomm(const Mat& p, const Mat& q) { return p * q + q * p; }

// <P, Q>_T with weights 1/(lambda_i + lambda_j), lambda = (1, lambda).
Complex pairing_t(const Mat& p, const Mat& q, double lambda) {
  const double w[2] = {1.0, lambda};
  Complex acc(0.0, 0.0);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      acc += std::conj(p(i, j)) * q(i, j) / (w[i] + w[j]);
    }
  }
  return acc;
}

}  // namespace

Mat anticommutator_solve(const Mat& c, const Mat& y) {
  check_square_pair(c, y, "vbma::anticommutator_solve");
  check_hermitian(c, "vbma::anticommutator_solve");
  Eigen::SelfAdjointEigenSolver<Mat> es(c);
  const Eigen::VectorXd lam = es.eigenvalues();
  const int d = static_cast<int>(c.rows());
  if (!(lam(0) > 1e-12 * std::max(1.0, lam(d - 1)))) {
    throw std::invalid_argument(
        "vbma::anticommutator_solve: matrix is not positive definite");
  }
  const Mat u = es.eigenvectors();
  Mat ydiag = u.adjoint() * y * u;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) ydiag(i, j) /= lam(i) + lam(j);
  }
  return u * ydiag * u.adjoint();
}

GreekCoefficients greek_coefficients(const Mat& b, const Mat& x) {
  check_two_by_two(b, "vbma::greek_coefficients");
  check_two_by_two(x, "vbma::greek_coefficients");
  GreekCoefficients g;
  g.alpha = b(0, 0) * x(0, 1) - b(0, 1) * x(0, 0);
  g.beta = b(0, 0) * x(1, 0) - b(1, 0) * x(0, 0);
  g.gamma = b(0, 1) * x(1, 0) - b(1, 0) * x(0, 1);
  g.delta = b(1, 1) * x(0, 1) - b(0, 1) * x(1, 1);
  g.epsilon = b(1, 1) * x(1, 0) - b(1, 0) * x(1, 1);
  g.a11 = 2.0 * std::norm(g.alpha) + 2.0 * std::norm(g.beta) + std::norm(g.gamma);
  g.a22 = 2.0 * std::norm(g.delta) + 2.0 * std::norm(g.epsilon) + std::norm(g.gamma);
  g.a12_plus_a21 =
      -(std::norm(g.alpha + g.delta) + std::norm(g.beta + g.epsilon));
  return g;
}

SchurInequality schur_inequality_check(const Mat& b, const Mat& x, double lambda,
                                       double rel_tol) {
  check_two_by_two(b, "vbma::schur_inequality_check");
  check_two_by_two(x, "vbma::schur_inequality_check");
  if (!(lambda > 0.0)) {
    throw std::invalid_argument(
        "vbma::schur_inequality_check: lambda must be positive");
  }
  const Mat bb = anticomm(b, b.adjoint());
  const Mat xx = anticomm(x, x.adjoint());
  const Mat bx = anticomm(b, x.adjoint());
  SchurInequality out;
  out.lhs = pairing_t(bb, xx, lambda).real();
  out.rhs = pairing_t(bx, bx, lambda).real();
  const double scale = std::max({1.0, std::abs(out.lhs), std::abs(out.rhs)});
  out.holds = out.lhs >= out.rhs - rel_tol * scale;
  return out;
}

QuadraticLambdaCheck quadratic_lambda_check(const GreekCoefficients& g,
                                            double rel_tol) {
  QuadraticLambdaCheck out;
  out.middle = g.a11 + g.a22 + 2.0 * g.a12_plus_a21;
  out.bound = 2.0 * std::sqrt(std::max(0.0, g.a11 * g.a22));
  const double scale = std::max({1.0, g.a11, g.a22, std::abs(out.middle)});
  out.holds = out.middle >= -rel_tol * scale ||
              std::abs(out.middle) <= out.bound + rel_tol * scale;
  return out;
}

Curvature assemble_surface(const SurfaceBlocks& blocks) {
  check_two_by_two(blocks.a, "vbma::assemble_surface");
  check_two_by_two(blocks.b, "vbma::assemble_surface");
  check_two_by_two(blocks.c, "vbma::assemble_surface");
  return Curvature::from_blocks(
      2, {{blocks.a, blocks.b}, {Mat(blocks.b.adjoint()), blocks.c}});
}

Verdict surface_preservation_check(const SurfaceBlocks& blocks, double eta0) {
  if (!(eta0 > 0.0)) {
    throw std::invalid_argument(
        "vbma::surface_preservation_check: eta0 must be positive");
  }
  const Curvature theta = assemble_surface(blocks);
  const VolumeDensity eta{eta0};
  const double residual = vbma_residual(theta, eta);
  double scale = std::max(1.0, eta0);
  scale = std::max(scale, blocks.a.cwiseAbs().maxCoeff());
  scale = std::max(scale, blocks.b.cwiseAbs().maxCoeff());
  scale = std::max(scale, blocks.c.cwiseAbs().maxCoeff());
  if (residual > 1e-9 * scale * scale) {
    throw std::invalid_argument(
        "vbma::surface_preservation_check: blocks do not solve the vbMA "
        "equation for the given eta0");
  }
  const Mat ac = blocks.a * blocks.c + blocks.c * blocks.a;
  if (classify(ac).kind != VerdictKind::Positive) {
    throw std::invalid_argument(
        "vbma::surface_preservation_check: {a, c} is not positive definite");
  }
  Verdict verdict = classify(gram_matrix(theta));
  if (verdict.kind == VerdictKind::Indefinite) {
    throw std::invalid_argument(
        "vbma::surface_preservation_check: solution is not MA-semipositive");
  }
  if (verdict.kind != VerdictKind::Positive) {
    throw std::logic_error(
        "vbma::surface_preservation_check: semipositive surface solution "
        "failed to be strictly MA-positive");
  }
  return verdict;
}

SurfaceBlocks random_surface_blocks(Rng& rng, double eta0) {
  if (!(eta0 > 0.0)) {
    throw std::invalid_argument(
        "vbma::random_surface_blocks: eta0 must be positive");
  }
  SurfaceBlocks out;
  out.c = rng.hermitian_pd(2);
  out.b = rng.cgauss_matrix(2, 2);
  const Mat y = eta0 * Mat::Identity(2, 2) + out.b * out.b.adjoint() +
                out.b.adjoint() * out.b;
  out.a = anticommutator_solve(out.c, y);
  return out;
}

}  // namespace vbma
