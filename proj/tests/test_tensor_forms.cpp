#include "doctest.h"

#include "vbma/curvature.hpp"
#include "vbma/end_form.hpp"
#include "vbma/rng.hpp"

#include "oracle.hpp"
#include "test_util.hpp"

#include <stdexcept>

using namespace vbma;
using testutil::random_end_form;

namespace {

Curvature kaehler_curvature(int n, int r) {
  std::vector<std::vector<Mat>> blocks(n, std::vector<Mat>(n, Mat::Zero(r, r)));
  for (int mu = 0; mu < n; ++mu) blocks[mu][mu] = Mat::Identity(r, r);
  return Curvature::from_blocks(n, blocks);
}

Curvature random_curvature(Rng& rng, int n, int r) {
  std::vector<std::vector<Mat>> blocks(n, std::vector<Mat>(n));
  for (int mu = 0; mu < n; ++mu) {
    blocks[mu][mu] = rng.hermitian(r);
    for (int nu = mu + 1; nu < n; ++nu) {
      blocks[mu][nu] = rng.cgauss_matrix(r, r);
      blocks[nu][mu] = blocks[mu][nu].adjoint();
    }
  }
  return Curvature::from_blocks(n, blocks);
}

}  // namespace

TEST_CASE("mask helpers follow the increasing-tuple conventions") {
  CHECK(mask_degree(0u) == 0);
  CHECK(mask_degree(0b1011u) == 3);
  CHECK(mask_indices(0b101u) == std::vector<int>{1, 3});
  CHECK(mask_indices(0u).empty());

  CHECK(merge_sign(0b01u, 0b10u) == 1);   // (1)(2) already increasing
  CHECK(merge_sign(0b10u, 0b01u) == -1);  // (2)(1) needs one swap
  CHECK(merge_sign(0b011u, 0b100u) == 1);
  CHECK(merge_sign(0b100u, 0b011u) == 1);  // (3)(1,2): two swaps
  CHECK(merge_sign(0b010u, 0b101u) == -1);  // (2)(1,3): one swap
}

TEST_CASE("form storage validates dimensions, keys and coefficient shapes") {
  CHECK_THROWS_AS(EndForm(kMaxDim + 1, 1, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(EndForm(2, kMaxRank + 1, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(EndForm(2, 1, -1, 0), std::invalid_argument);

  EndForm f(2, 2, 1, 1);
  f.set(FormKey{0b01u, 0b10u}, Mat::Identity(2, 2));
  CHECK(f.at(FormKey{0b01u, 0b10u}).isApprox(Mat::Identity(2, 2)));
  CHECK(f.at(FormKey{0b10u, 0b01u}).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(f.set(FormKey{0b11u, 0b01u}, Mat::Identity(2, 2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(f.set(FormKey{0b01u, 0b10u}, Mat::Identity(3, 3)),
                  std::invalid_argument);
  CHECK_THROWS_AS(f.set(FormKey{0b100u, 0b10u}, Mat::Identity(2, 2)),
                  std::invalid_argument);

  EndForm g(2, 2, 0, 1);
  CHECK_THROWS_AS(f += g, std::invalid_argument);
}

TEST_CASE("wedge agrees with the interleaved-letter oracle") {
  Rng rng(101);
  for (int n = 1; n <= 3; ++n) {
    for (int r : {1, 2, 3}) {
      for (int p1 = 0; p1 <= n; ++p1) {
        for (int q1 = 0; q1 <= n; ++q1) {
          const EndForm f = random_end_form(rng, n, r, p1, q1);
          const EndForm g =
              random_end_form(rng, n, r, rng.next_u64() % (n + 1),
                              rng.next_u64() % (n + 1));
          CHECK(oracle::wedge_discrepancy(f, g) <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("wedge is bilinear and associative") {
  Rng rng(7);
  const int n = 3;
  const int r = 2;
  const EndForm f = random_end_form(rng, n, r, 1, 0);
  const EndForm g = random_end_form(rng, n, r, 0, 1);
  const EndForm g2 = random_end_form(rng, n, r, 0, 1);
  const EndForm h = random_end_form(rng, n, r, 1, 1);

  const Complex s(0.3, -1.7);
  CHECK((wedge(f, g + g2) - (wedge(f, g) + wedge(f, g2))).max_norm() <= 1e-12);
  CHECK((wedge(f, s * g) - s * wedge(f, g)).max_norm() <= 1e-12);
  CHECK((wedge(s * f, g) - s * wedge(f, g)).max_norm() <= 1e-12);
  CHECK((wedge(wedge(f, g), h) - wedge(f, wedge(g, h))).max_norm() <= 1e-11);
}

TEST_CASE("scalar forms commute up to the graded sign") {
  Rng rng(11);
  const int n = 3;
  for (int df = 1; df <= 2; ++df) {
    for (int dg = 1; dg <= 2; ++dg) {
      const EndForm f = random_end_form(rng, n, 1, df, 0);
      const EndForm g = random_end_form(rng, n, 1, 0, dg);
      const double sign = ((df * dg) % 2 == 0) ? 1.0 : -1.0;
      CHECK((wedge(f, g) - sign * wedge(g, f)).max_norm() <= 1e-12);
    }
  }
}

TEST_CASE("adjoint is an involution and fixes curvature forms") {
  Rng rng(13);
  for (int p = 0; p <= 2; ++p) {
    for (int q = 0; q <= 2; ++q) {
      const EndForm f = random_end_form(rng, 2, 2, p, q);
      CHECK((f.adjoint().adjoint() - f).max_norm() <= 1e-14);
    }
  }
  const Curvature theta = random_curvature(rng, 3, 2);
  CHECK((theta.form().adjoint() - theta.form()).max_norm() <= 1e-14);
}

TEST_CASE("volume unit takes its four closed values") {
  const Complex i(0.0, 1.0);
  CHECK(std::abs(vol_unit(1) - i) <= 1e-15);
  CHECK(std::abs(vol_unit(2) - Complex(1.0, 0.0)) <= 1e-15);
  CHECK(std::abs(vol_unit(3) - i) <= 1e-15);
  CHECK(std::abs(vol_unit(4) - Complex(1.0, 0.0)) <= 1e-15);
}

TEST_CASE("Kaehler curvature powers produce factorials times the identity") {
  double factorial = 1.0;
  for (int n = 1; n <= 4; ++n) {
    factorial *= n;
    const Curvature theta = kaehler_curvature(n, 1);
    const Mat top = top_over_vol(curvature_power(theta, n));
    CHECK(std::abs(top(0, 0) - factorial) <= 1e-12 * factorial);
  }
  const Curvature theta = kaehler_curvature(2, 3);
  const Mat top = top_over_vol(curvature_power(theta, 2));
  CHECK((top - 2.0 * Mat::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("surface top coefficient of a scalar product has the closed form") {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    Mat fc = rng.cgauss_matrix(2, 2);
    Mat gc = rng.cgauss_matrix(2, 2);
    EndForm f(2, 1, 1, 1);
    EndForm g(2, 1, 1, 1);
    for (int mu = 0; mu < 2; ++mu) {
      for (int nu = 0; nu < 2; ++nu) {
        Mat one(1, 1);
        one(0, 0) = fc(mu, nu);
        f.set(FormKey{1u << mu, 1u << nu}, one);
        one(0, 0) = gc(mu, nu);
        g.set(FormKey{1u << mu, 1u << nu}, one);
      }
    }
    const Complex top = top_over_vol(wedge(f, g))(0, 0);
    const Complex expected = -(fc(0, 0) * gc(1, 1) + fc(1, 1) * gc(0, 0)) +
                             fc(0, 1) * gc(1, 0) + fc(1, 0) * gc(0, 1);
    CHECK(std::abs(top - expected) <= 1e-12);
  }
  EndForm f(2, 1, 1, 0);
  CHECK_THROWS_AS(top_over_vol(f), std::invalid_argument);
}

TEST_CASE("curvature blocks round-trip and Hermitian pairing is enforced") {
  Rng rng(19);
  const int n = 2;
  const int r = 2;
  std::vector<std::vector<Mat>> blocks(n, std::vector<Mat>(n));
  blocks[0][0] = rng.hermitian(r);
  blocks[1][1] = rng.hermitian(r);
  blocks[0][1] = rng.cgauss_matrix(r, r);
  blocks[1][0] = blocks[0][1].adjoint();
  const Curvature theta = Curvature::from_blocks(n, blocks);
  for (int mu = 1; mu <= n; ++mu) {
    for (int nu = 1; nu <= n; ++nu) {
      CHECK((theta.block(mu, nu) - blocks[mu - 1][nu - 1]).cwiseAbs().maxCoeff() <=
            1e-14);
    }
  }

  blocks[1][0] = rng.cgauss_matrix(r, r);
  CHECK_THROWS_AS(Curvature::from_blocks(n, blocks), std::invalid_argument);
}

TEST_CASE("curvature powers are self-adjoint and multiply additively") {
  Rng rng(23);
  for (int n : {2, 3}) {
    const Curvature theta = random_curvature(rng, n, 2);
    for (int k = 1; k <= n; ++k) {
      const EndForm power = curvature_power(theta, k);
      CHECK((power.adjoint() - power).max_norm() <= 1e-11);
    }
    const EndForm one = curvature_power(theta, 1);
    const EndForm two = curvature_power(theta, 2);
    CHECK((wedge(one, one) - two).max_norm() <= 1e-11);
    if (n == 3) {
      CHECK((wedge(two, one) - curvature_power(theta, 3)).max_norm() <= 1e-10);
    }
  }
}

TEST_CASE("curvature power boundary exponents") {
  Rng rng(29);
  const Curvature theta = random_curvature(rng, 2, 2);
  const EndForm unit = curvature_power(theta, 0);
  CHECK(unit.p() == 0);
  CHECK((unit.at(FormKey{0u, 0u}) - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK(curvature_power(theta, 3).max_norm() == 0.0);
  CHECK_THROWS_AS(curvature_power(theta, -1), std::invalid_argument);
}

TEST_CASE("commutator sum telescopes to the bracket with the top power") {
  Rng rng(31);
  for (int n : {1, 2, 3}) {
    for (int r : {2, 3}) {
      const Curvature theta = random_curvature(rng, n, r);
      const Mat g = rng.cgauss_matrix(r, r);
      CHECK(commutator_identity_check(theta, g) <= 1e-10);
    }
  }
}

TEST_CASE("vbma residual measures the deviation from the density") {
  const Curvature theta = kaehler_curvature(2, 1);
  CHECK(vbma_residual(theta, VolumeDensity{2.0}) <= 1e-14);
  CHECK(vbma_residual(theta, VolumeDensity{1.0}) ==
        doctest::Approx(1.0).epsilon(1e-12));
}
