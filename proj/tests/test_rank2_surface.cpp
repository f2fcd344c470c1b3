#include "doctest.h"

#include "vbma/curvature.hpp"
#include "vbma/ma_gram.hpp"
#include "vbma/rank2_surface.hpp"
#include "vbma/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

using namespace vbma;

namespace {

// Weighted pairing <P, Q> = sum_ij conj(P_ij) Q_ij / (w_i + w_j) with
// w = (1, lambda); the two sides of the Schur inequality are this pairing
// evaluated on anticommutators.
Complex weighted_pairing(const Mat& p, const Mat& q, double lambda) {
  const double w[2] = {1.0, lambda};
  Complex acc(0.0, 0.0);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      acc += std::conj(p(i, j)) * q(i, j) / (w[i] + w[j]);
    }
  }
  return acc;
}

Mat anticomm(const Mat& a, const Mat& b) { return a * b + b * a; }

}  // namespace

TEST_CASE("anticommutator solve divides by eigenvalue sums") {
  {
    Mat c = Mat::Zero(2, 2);
    c(0, 0) = 1.0;
    c(1, 1) = 2.0;
    Mat y(2, 2);
    y << 2.0, 3.0, 3.0, 4.0;
    const Mat x = anticommutator_solve(c, y);
    Mat expected(2, 2);
    expected << 1.0, 1.0, 1.0, 1.0;
    CHECK((x - expected).cwiseAbs().maxCoeff() <= 1e-13);
  }
  {
    // Weights (1, 3): entries divide by 2, 4, 4, 6.
    Mat c = Mat::Zero(2, 2);
    c(0, 0) = 1.0;
    c(1, 1) = 3.0;
    const Mat x = anticommutator_solve(c, Mat::Ones(2, 2));
    Mat expected(2, 2);
    expected << 0.5, 0.25, 0.25, 1.0 / 6.0;
    CHECK((x - expected).cwiseAbs().maxCoeff() <= 1e-13);
  }

  Rng rng(307);
  for (int r : {2, 3, 4}) {
    const Mat c = rng.hermitian_pd(r);
    const Mat y = rng.hermitian(r);
    const Mat x = anticommutator_solve(c, y);
    const double scale = std::max(1.0, y.cwiseAbs().maxCoeff());
    CHECK((anticomm(c, x) - y).cwiseAbs().maxCoeff() <= 1e-10 * scale);
    CHECK((x - x.adjoint()).cwiseAbs().maxCoeff() <= 1e-10 * scale);
  }

  CHECK_THROWS_AS(anticommutator_solve(Mat::Zero(2, 2), Mat::Ones(2, 2)),
                  std::invalid_argument);
}

TEST_CASE("anticommutation operator has eigenvalue sums as spectrum") {
  Rng rng(311);
  const Mat c = rng.hermitian_pd(2);
  Eigen::SelfAdjointEigenSolver<Mat> es(c);
  const Eigen::VectorXd lam = es.eigenvalues();

  // The map X -> {C, X} written over the E_ij basis, columns by (i,j).
  Eigen::MatrixXcd op(4, 4);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      Mat e = Mat::Zero(2, 2);
      e(i, j) = 1.0;
      const Mat image = anticomm(c, e);
      for (int k = 0; k < 2; ++k) {
        for (int l = 0; l < 2; ++l) op(k * 2 + l, i * 2 + j) = image(k, l);
      }
    }
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(op);
  std::vector<double> got;
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(ces.eigenvalues()(i).imag()) <= 1e-10);
    got.push_back(ces.eigenvalues()(i).real());
  }
  std::vector<double> expected{lam(0) + lam(0), lam(0) + lam(1),
                               lam(1) + lam(0), lam(1) + lam(1)};
  std::sort(got.begin(), got.end());
  std::sort(expected.begin(), expected.end());
  for (int i = 0; i < 4; ++i) {
    CHECK(got[i] == doctest::Approx(expected[i]).epsilon(1e-10));
  }
}

TEST_CASE("greek coefficients on pinned matrices") {
  {
    Mat b = Mat::Zero(2, 2);
    b(0, 0) = 1.0;
    Mat x = Mat::Zero(2, 2);
    x(0, 1) = 1.0;
    const GreekCoefficients g = greek_coefficients(b, x);
    CHECK(std::abs(g.alpha - Complex(1.0, 0.0)) <= 1e-15);
    CHECK(std::abs(g.beta) <= 1e-15);
    CHECK(std::abs(g.gamma) <= 1e-15);
    CHECK(std::abs(g.delta) <= 1e-15);
    CHECK(std::abs(g.epsilon) <= 1e-15);
    CHECK(g.a11 == doctest::Approx(2.0));
    CHECK(g.a22 == doctest::Approx(0.0));
    CHECK(g.a12_plus_a21 == doctest::Approx(-1.0));
  }
  {
    Rng rng(313);
    const Mat b = rng.cgauss_matrix(2, 2);
    const GreekCoefficients g = greek_coefficients(b, b);
    CHECK(std::abs(g.alpha) <= 1e-14);
    CHECK(std::abs(g.gamma) <= 1e-14);
    CHECK(std::abs(g.epsilon) <= 1e-14);
    CHECK(g.a11 <= 1e-14);
    CHECK(g.a22 <= 1e-14);
  }
  CHECK_THROWS_AS(greek_coefficients(Mat::Zero(3, 3), Mat::Zero(3, 3)),
                  std::invalid_argument);
}

TEST_CASE("diagonal quadratic coefficients match the pairing oracle") {
  Rng rng(317);
  for (int trial = 0; trial < 50; ++trial) {
    const Mat b = rng.cgauss_matrix(2, 2);
    const Mat x = rng.cgauss_matrix(2, 2);
    const GreekCoefficients g = greek_coefficients(b, x);

    const Mat m = anticomm(b, b.adjoint());
    const Mat n = anticomm(x, x.adjoint());
    const Mat k = b * x.adjoint() + x.adjoint() * b;

    // a_ii = conj(M_ii) N_ii - |K_ii|^2 from expanding both pairings.
    const double a11_oracle =
        (std::conj(m(0, 0)) * n(0, 0)).real() - std::norm(k(0, 0));
    const double a22_oracle =
        (std::conj(m(1, 1)) * n(1, 1)).real() - std::norm(k(1, 1));
    const double scale =
        std::max({1.0, std::abs(a11_oracle), std::abs(a22_oracle)});
    CHECK(std::abs(g.a11 - a11_oracle) <= 1e-10 * scale);
    CHECK(std::abs(g.a22 - a22_oracle) <= 1e-10 * scale);
  }
}

TEST_CASE("schur inequality sides match the weighted pairing oracle") {
  Rng rng(331);
  for (int trial = 0; trial < 100; ++trial) {
    const Mat b = rng.cgauss_matrix(2, 2);
    const Mat x = rng.cgauss_matrix(2, 2);
    const double lambda = rng.log_uniform(1e-2, 1e2);

    const SchurInequality si = schur_inequality_check(b, x, lambda);

    const Complex lhs =
        weighted_pairing(anticomm(b, b.adjoint()), anticomm(x, x.adjoint()),
                         lambda);
    const Mat k = b * x.adjoint() + x.adjoint() * b;
    const Complex rhs = weighted_pairing(k, k, lambda);
    CHECK(std::abs(lhs.imag()) <= 1e-10 * std::max(1.0, std::abs(lhs)));
    CHECK(std::abs(rhs.imag()) <= 1e-10 * std::max(1.0, std::abs(rhs)));

    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    CHECK(std::abs(si.lhs - lhs.real()) <= 1e-9 * scale);
    CHECK(std::abs(si.rhs - rhs.real()) <= 1e-9 * scale);

    // Difference of the sides as a rational function of lambda.
    const GreekCoefficients g = greek_coefficients(b, x);
    const double m_coef = g.a11 + g.a22 + 2.0 * g.a12_plus_a21;
    const double rational =
        (g.a11 * lambda * lambda + m_coef * lambda + g.a22) /
        (2.0 * lambda * (1.0 + lambda));
    CHECK(std::abs((si.lhs - si.rhs) - rational) <= 1e-9 * scale);
  }
}

TEST_CASE("schur inequality holds across the lambda range") {
  Rng rng(337);
  for (int trial = 0; trial < 2000; ++trial) {
    const Mat b = rng.cgauss_matrix(2, 2);
    const Mat x = rng.cgauss_matrix(2, 2);
    const double lambda = rng.log_uniform(1e-3, 1e3);
    const SchurInequality si = schur_inequality_check(b, x, lambda);
    CHECK(si.holds);
    const QuadraticLambdaCheck qc =
        quadratic_lambda_check(greek_coefficients(b, x));
    CHECK(qc.holds);
  }
  // Equality at x = b.
  const Mat b = rng.cgauss_matrix(2, 2);
  const SchurInequality si = schur_inequality_check(b, b, 2.0);
  CHECK(std::abs(si.lhs - si.rhs) <=
        1e-10 * std::max(1.0, std::abs(si.lhs)));
}

TEST_CASE("cauchy schwarz chain bounds the middle coefficient") {
  Rng rng(347);
  for (int trial = 0; trial < 200; ++trial) {
    const GreekCoefficients g =
        greek_coefficients(rng.cgauss_matrix(2, 2), rng.cgauss_matrix(2, 2));
    const double left = -2.0 * g.a12_plus_a21 - g.a11 - g.a22;
    const double mid = 4.0 * (std::abs(g.alpha * g.delta) +
                              std::abs(g.beta * g.epsilon));
    const double right = 2.0 * std::sqrt(g.a11 * g.a22);
    const double tol = 1e-9 * std::max({1.0, std::abs(left), mid, right});
    CHECK(left <= mid + tol);
    CHECK(mid <= right + tol);
  }
}

TEST_CASE("quadratic lambda check distinguishes its three cases") {
  GreekCoefficients g{};
  g.a11 = 1.0;
  g.a22 = 1.0;

  g.a12_plus_a21 = 0.5;  // middle = 3 >= 0
  CHECK(quadratic_lambda_check(g).holds);
  CHECK(quadratic_lambda_check(g).middle == doctest::Approx(3.0));

  g.a12_plus_a21 = -1.9;  // middle = -1.8, bound = 2
  {
    const QuadraticLambdaCheck qc = quadratic_lambda_check(g);
    CHECK(qc.holds);
    CHECK(qc.middle == doctest::Approx(-1.8));
    CHECK(qc.bound == doctest::Approx(2.0));
  }

  g.a12_plus_a21 = -2.5;  // middle = -3 dips below the bound
  CHECK_FALSE(quadratic_lambda_check(g).holds);
}

TEST_CASE("random surface solutions stay strictly MA-positive") {
  Rng rng(353);
  for (int trial = 0; trial < 25; ++trial) {
    const double eta0 = rng.log_uniform(0.5, 2.0);
    const SurfaceBlocks blocks = random_surface_blocks(rng, eta0);

    const Mat top = anticomm(blocks.a, blocks.c) -
                    blocks.b * blocks.b.adjoint() -
                    blocks.b.adjoint() * blocks.b;
    const double scale = std::max(1.0, top.cwiseAbs().maxCoeff());
    CHECK((top - eta0 * Mat::Identity(2, 2)).cwiseAbs().maxCoeff() <=
          1e-10 * scale);
    CHECK(vbma_residual(assemble_surface(blocks), VolumeDensity{eta0}) <=
          1e-10 * scale);

    const Verdict v = surface_preservation_check(blocks, eta0);
    CHECK(v.kind == VerdictKind::Positive);
    CHECK(v.min_eigenvalue > 0.0);
  }
}

TEST_CASE("surface preservation check validates its hypotheses") {
  Rng rng(359);
  const SurfaceBlocks blocks = random_surface_blocks(rng, 1.0);
  CHECK_THROWS_AS(surface_preservation_check(blocks, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(surface_preservation_check(blocks, -1.0),
                  std::invalid_argument);

  SurfaceBlocks broken = blocks;
  broken.a(0, 0) += 0.5;  // no longer solves the equation
  CHECK_THROWS_AS(surface_preservation_check(broken, 1.0),
                  std::invalid_argument);
}
