#include <doctest.h>

#include "hyloc/geometry.hpp"
#include "hyloc/types.hpp"
#include "support/oracles.hpp"

using namespace hyloc;

TEST_CASE("generate_network places anchors on the sphere") {
  const NetworkGeometry g = generate_network(5, 50.0, 1);
  REQUIRE(g.n() == 5);
  for (const Vec3& m : g.anchors) CHECK(m.norm() == doctest::Approx(50.0).epsilon(1e-12));
  CHECK(g.source.norm() == doctest::Approx(50.0).epsilon(1e-12));
}

TEST_CASE("generate_network minimum size and validity") {
  const NetworkGeometry g = generate_network(2, 1.0, 7);
  REQUIRE(g.n() == 2);
  CHECK(g.anchors[0].norm() == doctest::Approx(1.0));
  CHECK(g.anchors[1].norm() == doctest::Approx(1.0));
  CHECK((g.anchors[0] - g.anchors[1]).norm() > kCoincidenceTol);
  CHECK_NOTHROW(g.validate());
}

TEST_CASE("generate_network is deterministic per seed") {
  const NetworkGeometry a = generate_network(8, 50.0, 3);
  const NetworkGeometry b = generate_network(8, 50.0, 3);
  REQUIRE(a.n() == b.n());
  for (int i = 0; i < a.n(); ++i) CHECK(a.anchors[i] == b.anchors[i]);
  CHECK(a.source == b.source);
  const NetworkGeometry c = generate_network(8, 50.0, 4);
  CHECK(a.source != c.source);
}

TEST_CASE("generate_network rejects bad arguments") {
  CHECK_THROWS_AS(generate_network(1, 50.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(generate_network(5, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(generate_network(5, -2.0, 1), std::invalid_argument);
}

TEST_CASE("generate_network supports dim 2") {
  const NetworkGeometry g = generate_network(6, 25.0, 5, 2);
  CHECK(g.dim == 2);
  for (const Vec3& m : g.anchors) {
    CHECK(m.z() == 0.0);
    CHECK(m.norm() == doctest::Approx(25.0));
  }
  CHECK(g.source.z() == 0.0);
}

TEST_CASE("pairwise_distances 3-4-5 triangle") {
  NetworkGeometry g;
  g.anchors = {Vec3{3.0, 4.0, 0.0}, Vec3{0.0, 0.0, 1.0}};
  g.source = Vec3::Zero();
  g.validate();
  const auto d = pairwise_distances(g);
  CHECK(d[0] == doctest::Approx(5.0));
  CHECK(d[1] == doctest::Approx(1.0));
}

TEST_CASE("geometry invariant rejects near-coincident source") {
  NetworkGeometry g;
  g.anchors = {Vec3{1.0, 0.0, 0.0}, Vec3{0.0, 1.0, 0.0}};
  g.source = Vec3{1.0 + 1e-12, 0.0, 0.0};
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
}

TEST_CASE("pairwise_distances matches naive recomputation") {
  const NetworkGeometry g = generate_network(10, 50.0, 42);
  const auto d = pairwise_distances(g);
  for (int i = 0; i < g.n(); ++i) {
    const oracle::V3 s{g.source.x(), g.source.y(), g.source.z()};
    const oracle::V3 m{g.anchors[i].x(), g.anchors[i].y(), g.anchors[i].z()};
    CHECK(d[i] == doctest::Approx(oracle::dist(s, m)).epsilon(1e-14));
    CHECK(d[i] > 0.0);
  }
}

TEST_CASE("mask parsing and canonical names") {
  CHECK(parse_mask("TDRA") == TypeMask{true, true, true, true});
  CHECK(parse_mask("ta").name() == "TA");
  CHECK(parse_mask("AT").name() == "TA");  // normalized order
  CHECK(parse_mask("D").name() == "D");
  CHECK_THROWS_AS(parse_mask(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_mask("TX"), std::invalid_argument);
  CHECK(all_masks().size() == 15);
  CHECK(all_masks().front().name() == "TDRA");
}
