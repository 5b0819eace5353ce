#include <doctest.h>

#include <cmath>

#include "hyloc/objective.hpp"
#include "hyloc/rng.hpp"
#include "hyloc/simulate.hpp"
#include "support/oracles.hpp"

using namespace hyloc;

TEST_CASE("lambda_of reference, decade, and symmetry") {
  const RssParams p(20.0, 2.5);
  CHECK(lambda_of(20.0, p) == doctest::Approx(1.0));
  CHECK(lambda_of(45.0, p) == doctest::Approx(0.1).epsilon(1e-14));
  // log-domain symmetry: lambda(L) * lambda(2 L0 - L) = 1
  for (double l : {3.0, 17.5, 60.0})
    CHECK(lambda_of(l, p) * lambda_of(2 * p.l0 - l, p) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rss residual vanishes at the consistent lambda and scales with eta") {
  const RssParams p(20.0, 2.5);
  const std::vector<Vec3> anchors = {Vec3{3.0, 4.0, 0.0}};
  const Vec3 s = Vec3::Zero();  // d = 5

  CHECK(residual_rss(s, anchors, {1.0 / 5.0}, p)[0] == doctest::Approx(0.0));

  // lambda = 2/d makes the residual eta^2; frozen from eta = 25/ln 10.
  const double eta_sq = 117.88231063225871;
  CHECK(residual_rss(s, anchors, {2.0 / 5.0}, p)[0] == doctest::Approx(eta_sq).epsilon(1e-12));

  // doubling gamma doubles eta, quadrupling the residual at fixed lambda*d.
  const RssParams p2(20.0, 5.0);
  CHECK(residual_rss(s, anchors, {2.0 / 5.0}, p2)[0] ==
        doctest::Approx(4.0 * eta_sq).epsilon(1e-12));
}

TEST_CASE("toa and tdoa residual arithmetic") {
  const std::vector<Vec3> anchors = {Vec3{3.0, 4.0, 0.0}, Vec3{0.0, 5.0, 0.0}};
  const Vec3 s = Vec3::Zero();
  CHECK(residual_toa(s, anchors, {5.0, 5.0})[0] == doctest::Approx(0.0));
  CHECK(residual_toa(s, anchors, {6.0, 5.0})[0] == doctest::Approx(1.0));
  CHECK(residual_tdoa(s, anchors, {0.0})[0] == doctest::Approx(0.0));
  CHECK(residual_tdoa(s, anchors, {2.0})[0] == doctest::Approx(4.0));
}

TEST_CASE("aoa residual geometry cases") {
  const std::vector<Vec3> anchors = {Vec3{-1.0, -1.0, 0.0}};
  const Vec3 s = Vec3::Zero();  // s - m = (1, 1, 0)

  SUBCASE("true angles give zero") {
    const std::vector<AoaSample> a = {{M_PI / 4, M_PI / 2, false}};
    CHECK(residual_aoa(s, anchors, a)[0] <= 1e-18);
  }
  SUBCASE("azimuth off by pi/2 leaves the horizontal norm squared") {
    const std::vector<AoaSample> a = {{M_PI / 4 + M_PI / 2, M_PI / 2, false}};
    CHECK(residual_aoa(s, anchors, a)[0] == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("in-plane offset zeroes the elevation term") {
    const std::vector<AoaSample> a = {{0.0, M_PI / 2, false}};
    const double expected = oracle::f_aoa({0, 0, 0}, {-1, -1, 0}, 0.0, M_PI / 2);
    CHECK(residual_aoa(s, anchors, a)[0] == doctest::Approx(expected).epsilon(1e-12));
  }
  SUBCASE("coincident point is rejected") {
    const std::vector<AoaSample> a = {{0.0, M_PI / 2, false}};
    CHECK_THROWS_AS(residual_aoa(anchors[0], anchors, a), std::invalid_argument);
  }
}

TEST_CASE("weights reproduce the normalized inverse-variance form") {
  const int n = 5;
  const Sigmas sigma = Sigmas::equal(n, 1.0);
  const std::vector<double> equal_d(n, 7.0);

  SUBCASE("equal sigma TOA") {
    const WeightSet w = compute_weights(equal_d, sigma, parse_mask("T"), n);
    for (double v : w.toa) CHECK(v == doctest::Approx(0.8).epsilon(1e-14));
    for (double v : w.rss) CHECK(v == 0.0);  // masked-out types stay zero
    for (double v : w.tdoa) CHECK(v == 0.0);
    for (double v : w.aoa) CHECK(v == 0.0);
  }
  SUBCASE("equal sigma and equal distances RSS") {
    const WeightSet w = compute_weights(equal_d, sigma, parse_mask("R"), n);
    for (double v : w.rss) CHECK(v == doctest::Approx(0.8).epsilon(1e-14));
  }
  SUBCASE("TDOA normalizes over N-1 terms") {
    const WeightSet w = compute_weights(equal_d, sigma, parse_mask("D"), n);
    for (double v : w.tdoa) CHECK(v == doctest::Approx(1.0 - 1.0 / 4.0).epsilon(1e-14));
  }
  SUBCASE("unequal distances match the naive transcription") {
    const std::vector<double> d{3.0, 8.0, 15.0, 22.0, 40.0};
    const WeightSet w = compute_weights(d, sigma, parse_mask("RA"), n);
    std::vector<double> e(n);
    for (int i = 0; i < n; ++i) e[i] = sigma.rss[i] * d[i];
    const auto expect = oracle::weights(sigma.rss, e);
    for (int i = 0; i < n; ++i) {
      CHECK(w.rss[i] == doctest::Approx(expect[i]).epsilon(1e-14));
      CHECK(w.rss[i] > 0.0);
      CHECK(w.aoa[i] == doctest::Approx(expect[i]).epsilon(1e-14));
    }
  }
  SUBCASE("zero sigma for an active type is rejected") {
    CHECK_THROWS_AS(compute_weights(equal_d, Sigmas::equal(n, 0.0), parse_mask("T"), n),
                    std::invalid_argument);
  }
  SUBCASE("single TDOA pair falls back to 1/sigma^2") {
    const Sigmas s2 = Sigmas::equal(2, 2.0);
    const WeightSet w = compute_weights({1.0, 1.0}, s2, parse_mask("D"), 2);
    CHECK(w.tdoa[0] == doctest::Approx(0.25));
  }
}

TEST_CASE("weight range policy prefers TOA, then inverted RSS, then uniform") {
  const NetworkGeometry g = generate_network(5, 50.0, 2);
  const RssParams p(20.0, 2.5);
  const Sigmas sig = Sigmas::equal(5, 0.5);

  const MeasurementSet with_toa =
      simulate_measurements(g, p, sig, parse_mask("TR"), 4);
  auto basis = weight_range_basis(with_toa, p, 5);
  for (int i = 0; i < 5; ++i) CHECK(basis[i] == doctest::Approx((*with_toa.toa)[i]));

  const MeasurementSet rss_only = simulate_measurements(g, p, sig, parse_mask("R"), 4);
  basis = weight_range_basis(rss_only, p, 5);
  for (int i = 0; i < 5; ++i)
    CHECK(basis[i] == doctest::Approx(1.0 / lambda_of((*rss_only.rss)[i], p)));

  const MeasurementSet aoa_only = simulate_measurements(g, p, sig, parse_mask("A"), 4);
  basis = weight_range_basis(aoa_only, p, 5);
  for (double b : basis) CHECK(b == 1.0);
}

TEST_CASE("objective is additive over types and matches the naive loop") {
  const NetworkGeometry g = generate_network(7, 50.0, 55);
  const RssParams p(20.0, 2.5);
  const Sigmas sig = Sigmas::equal(7, 1.0);
  const TypeMask full{true, true, true, true};
  const MeasurementSet ms = simulate_measurements(g, p, sig, full, 91);
  const WeightSet w = compute_weights(g, ms, p, WeightRanges::TrueDistances);
  const Problem prob = make_problem(g.anchors, ms, w, p);

  Rng rng(17);
  for (int rep = 0; rep < 25; ++rep) {
    const Vec3 s{rng.uniform(-60, 60), rng.uniform(-60, 60), rng.uniform(-60, 60)};

    // Naive scalar recomputation straight from the residual definitions.
    double expect = 0.0;
    const oracle::V3 sv{s.x(), s.y(), s.z()};
    const oracle::V3 m1{g.anchors[0].x(), g.anchors[0].y(), g.anchors[0].z()};
    for (int i = 0; i < 7; ++i) {
      const oracle::V3 mi{g.anchors[i].x(), g.anchors[i].y(), g.anchors[i].z()};
      expect += w.rss[i] * oracle::f_rss(sv, mi, lambda_of((*ms.rss)[i], p), p.eta());
      expect += w.toa[i] * oracle::f_toa(sv, mi, (*ms.toa)[i]);
      expect += w.aoa[i] * oracle::f_aoa(sv, mi, (*ms.aoa)[i].azimuth, (*ms.aoa)[i].elevation);
      if (i >= 1) expect += w.tdoa[i - 1] * oracle::f_tdoa(sv, m1, mi, (*ms.tdoa)[i - 1]);
    }
    CHECK(objective_value(prob, s) == doctest::Approx(expect).epsilon(1e-12));

    // Additivity: the full objective equals the sum of single-type ones.
    double parts = 0.0;
    for (MeasType t : kAllMeasTypes) {
      TypeMask single;
      switch (t) {
        case MeasType::Toa: single.toa = true; break;
        case MeasType::Tdoa: single.tdoa = true; break;
        case MeasType::Rss: single.rss = true; break;
        case MeasType::Aoa: single.aoa = true; break;
      }
      MeasurementSet sub;
      sub.mask = single;
      sub.sigma = sig;
      sub.toa = ms.toa;
      sub.tdoa = ms.tdoa;
      sub.rss = ms.rss;
      sub.aoa = ms.aoa;
      parts += objective_value(make_problem(g.anchors, sub, w, p), s);
    }
    CHECK(objective_value(prob, s) == doctest::Approx(parts).epsilon(1e-12));
  }
}

TEST_CASE("zero-noise objective vanishes at the true source") {
  const NetworkGeometry g = generate_network(5, 50.0, 66);
  const RssParams p(20.0, 2.5);
  const MeasurementSet ms = simulate_measurements(g, p, Sigmas::equal(5, 0.0),
                                                  TypeMask{true, true, true, true}, 3);
  const Problem prob = make_problem(g.anchors, ms, unit_weights(ms.mask, 5), p);
  CHECK(objective_value(prob, g.source) <= 1e-18);
}
