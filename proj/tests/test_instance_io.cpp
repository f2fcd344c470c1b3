#include "doctest.h"

#include "vbma/instance_io.hpp"
#include "vbma/rank2_surface.hpp"
#include "vbma/rng.hpp"
#include "vbma/vortex_surface.hpp"
#include "vbma/vortex_threefold.hpp"

#include <string>
#include <variant>

using namespace vbma;

namespace {

bool location_is(const SchemaError& e, const std::string& expected) {
  return e.location() == expected;
}

// Parses text expecting a SchemaError anchored at the given location.
void expect_schema_error(const std::string& text, const std::string& location) {
  try {
    parse_instance(text);
    FAIL("expected a schema violation at ", location);
  } catch (const SchemaError& e) {
    CHECK(location_is(e, location));
  }
}

}  // namespace

TEST_CASE("generic curvature round trip") {
  Rng rng(601);
  std::vector<std::vector<Mat>> blocks(2, std::vector<Mat>(2, Mat::Zero(2, 2)));
  blocks[0][0] = rng.hermitian(2);
  blocks[1][1] = rng.hermitian(2);
  blocks[0][1] = rng.cgauss_matrix(2, 2);
  blocks[1][0] = blocks[0][1].adjoint();
  const Curvature theta = Curvature::from_blocks(2, blocks);

  const InstanceFile file{kInstanceFileVersion, InstancePayload{theta}};
  const std::string text = serialize_instance(file);
  const InstanceFile back = parse_instance(text);
  CHECK(back.kind() == InstanceKind::GenericCurvature);

  const Curvature& theta2 = std::get<Curvature>(back.payload);
  for (int mu = 1; mu <= 2; ++mu) {
    for (int nu = 1; nu <= 2; ++nu) {
      CHECK((theta2.block(mu, nu) - theta.block(mu, nu))
                .cwiseAbs()
                .maxCoeff() <= 1e-15);
    }
  }
  // Serialization is deterministic.
  CHECK(serialize_instance(back) == text);
}

TEST_CASE("rank2 surface round trip") {
  Rng rng(607);
  const SurfaceBlocks blocks = random_surface_blocks(rng, 1.25);
  const InstanceFile file{kInstanceFileVersion,
                          InstancePayload{Rank2SurfaceData{blocks, 1.25}}};
  const InstanceFile back = parse_instance(serialize_instance(file));
  CHECK(back.kind() == InstanceKind::Rank2Surface);
  const Rank2SurfaceData& data = std::get<Rank2SurfaceData>(back.payload);
  CHECK(data.eta0 == doctest::Approx(1.25));
  CHECK((data.blocks.a - blocks.a).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((data.blocks.b - blocks.b).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((data.blocks.c - blocks.c).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("vortex surface round trip") {
  const VortexSurfaceInstance inst = counterexample_instance(3);
  const InstanceFile file{kInstanceFileVersion, InstancePayload{inst}};
  const InstanceFile back = parse_instance(serialize_instance(file));
  CHECK(back.kind() == InstanceKind::VortexSurface);
  const VortexSurfaceInstance& inst2 =
      std::get<VortexSurfaceInstance>(back.payload);
  CHECK(inst2.n == 3);
  CHECK(inst2.r == 1);
  CHECK(inst2.k == doctest::Approx(4.0));
  CHECK(inst2.t_norm_sq == doctest::Approx(0.0));
  CHECK((inst2.c - inst.c).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((inst2.b - inst.b).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK(inst2.b_prime == doctest::Approx(4.0));
  CHECK((inst2.a - inst.a).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK(inst2.a_prime == doctest::Approx(2.0));
  CHECK(vortex_residual(inst2) <= 1e-12);
}

TEST_CASE("threefold round trip") {
  const ThreefoldInstance inst =
      make_instance_from_ell(1.0, 1.0, 1.0, 1.0, 0.5, 0.5);
  const InstanceFile file{kInstanceFileVersion, InstancePayload{inst}};
  const InstanceFile back = parse_instance(serialize_instance(file));
  CHECK(back.kind() == InstanceKind::Threefold);
  const ThreefoldInstance& inst2 = std::get<ThreefoldInstance>(back.payload);
  CHECK(inst2.a == doctest::Approx(1.0));
  CHECK(inst2.lambda2 == doctest::Approx(1.0));
  CHECK(std::abs(inst2.ell1 - Complex(0.5, 0.0)) <= 1e-15);
  CHECK(inst2.c == doctest::Approx(1.5));
}

TEST_CASE("schema violations carry their location") {
  // Not JSON at all.
  expect_schema_error("{", "$");
  expect_schema_error("", "$");

  // Wrong version or kind.
  expect_schema_error(R"({"version": 2, "kind": "threefold"})", "$.version");
  expect_schema_error(R"({"version": 1, "kind": "heptagon"})", "$.kind");
  expect_schema_error(R"({"version": 1})", "$.kind");

  // Missing and malformed threefold fields.
  const std::string threefold_ok =
      R"({"version": 1, "kind": "threefold", "a": 1.0, "b": 1.0,
          "lambda1": 1.0, "lambda2": 1.0, "ell1": [0.5, 0.0],
          "ell2": [0.5, 0.0], "c": 1.5})";
  CHECK(parse_instance(threefold_ok).kind() == InstanceKind::Threefold);

  expect_schema_error(
      R"({"version": 1, "kind": "threefold", "a": 1.0, "b": 1.0,
          "lambda1": 1.0, "lambda2": 1.0, "ell1": [0.5, 0.0],
          "ell2": [0.5, 0.0]})",
      "$.c");
  expect_schema_error(
      R"({"version": 1, "kind": "threefold", "a": -1.0, "b": 1.0,
          "lambda1": 1.0, "lambda2": 1.0, "ell1": [0.5, 0.0],
          "ell2": [0.5, 0.0], "c": 1.5})",
      "$.a");
  expect_schema_error(
      R"({"version": 1, "kind": "threefold", "a": 1.0, "b": 1.0,
          "lambda1": 1.0, "lambda2": 1.0, "ell1": [0.5, 0.0, 1.0],
          "ell2": [0.5, 0.0], "c": 1.5})",
      "$.ell1");
  expect_schema_error(
      R"({"version": 1, "kind": "threefold", "a": 1.0, "b": "one",
          "lambda1": 1.0, "lambda2": 1.0, "ell1": [0.5, 0.0],
          "ell2": [0.5, 0.0], "c": 1.5})",
      "$.b");
}

TEST_CASE("vortex surface schema constraints") {
  const InstanceFile file{
      kInstanceFileVersion, InstancePayload{counterexample_instance(2)}};
  const std::string good = serialize_instance(file);
  CHECK(parse_instance(good).kind() == InstanceKind::VortexSurface);

  // Flip the density negative.
  std::string bad = good;
  const auto pos = bad.find("\"k\": 4");
  REQUIRE(pos != std::string::npos);
  bad.replace(pos, 6, "\"k\": -4");
  expect_schema_error(bad, "$.k");

  // Truncations fail at the document level.
  expect_schema_error(good.substr(0, good.size() / 2), "$");
}

TEST_CASE("generic curvature schema constraints") {
  // Ragged block rows.
  expect_schema_error(
      R"({"version": 1, "kind": "generic_curvature", "n": 2, "r": 1,
          "blocks": [[[[ [1.0, 0.0] ]], [[ [0.0, 0.0] ]]],
                     [[[ [0.0, 0.0] ]]]]})",
      "$.blocks[1]");

  // Non-Hermitian pairing between block (1,2) and block (2,1).
  expect_schema_error(
      R"({"version": 1, "kind": "generic_curvature", "n": 2, "r": 1,
          "blocks": [[[[ [1.0, 0.0] ]], [[ [2.0, 0.0] ]]],
                     [[[ [5.0, 0.0] ]], [[ [1.0, 0.0] ]]]]})",
      "$.blocks");

  const std::string good =
      R"({"version": 1, "kind": "generic_curvature", "n": 2, "r": 1,
          "blocks": [[[[ [1.0, 0.0] ]], [[ [2.0, 0.5] ]]],
                     [[[ [2.0, -0.5] ]], [[ [1.0, 0.0] ]]]]})";
  const InstanceFile file = parse_instance(good);
  CHECK(file.kind() == InstanceKind::GenericCurvature);
  const Curvature& theta = std::get<Curvature>(file.payload);
  CHECK(theta.n() == 2);
  CHECK(theta.r() == 1);
  CHECK(std::abs(theta.block(1, 2)(0, 0) - Complex(2.0, 0.5)) <= 1e-15);
}

TEST_CASE("rank2 surface schema constraints") {
  expect_schema_error(
      R"({"version": 1, "kind": "rank2_surface", "eta0": 0.0,
          "a": [[[1.0, 0.0]]], "b": [[[0.0, 0.0]]], "c": [[[1.0, 0.0]]]})",
      "$.eta0");
  // Non-Hermitian a block.
  expect_schema_error(
      R"({"version": 1, "kind": "rank2_surface", "eta0": 1.0,
          "a": [[[1.0, 0.5]]], "b": [[[0.0, 0.0]]], "c": [[[1.0, 0.0]]]})",
      "$.a");
  // Mismatched sizes between the blocks.
  expect_schema_error(
      R"({"version": 1, "kind": "rank2_surface", "eta0": 1.0,
          "a": [[[1.0, 0.0]]], "b": [[[0.0, 0.0], [0.0, 0.0]],
          [[0.0, 0.0], [0.0, 0.0]]], "c": [[[1.0, 0.0]]]})",
      "$.b");
}

TEST_CASE("file loading reports unreadable paths") {
  CHECK_THROWS_AS(load_instance("/nonexistent/deep/path/file.json"),
                  SchemaError);
}
