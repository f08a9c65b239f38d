#include <doctest.h>

#include <cmath>
#include <random>

#include "lvlab/reeb.hpp"
#include "oracles.hpp"

using namespace lvlab;

TEST_CASE("Reeb field is normalized on every surface") {
  for (const char* spec : {"sphere", "ellipsoid:0.7,1", "lp:4,1,1.3"}) {
    CAPTURE(spec);
    const auto S = StarshapedSurface::parse(spec);
    const auto c = check_reeb_normalization(S, 200, 3);
    CAPTURE(c.value);
    CHECK(c.pass);
    CHECK(S.homogeneity_defect(100, 4) < 1e-12);
  }
}

TEST_CASE("numerical flow matches the closed form on ellipsoids") {
  const auto S = StarshapedSurface::ellipsoid(0.7, 1.0);
  std::mt19937_64 rng(9);
  for (int n = 0; n < 20; ++n) {
    const Vec4 z = S.random_point(rng);
    CHECK(std::abs(oracle::ellipsoid_H(0.7, 1.0, z) - 1.0) < 1e-12);
    for (double t : {0.3, -0.45, 1.7}) {
      const Vec4 a = reeb_flow(S, z, t), b = oracle::ellipsoid_flow(0.7, 1.0, z, t);
      CHECK(norm(a - b) < 1e-9);
    }
  }
}

TEST_CASE("round sphere flow is 1-periodic and rotates the arcs") {
  CHECK(check_hopf_period(50, 1).pass);
  for (int k = 2; k <= 4; ++k) {
    const auto c = check_cyclic_action(k, 64);
    CAPTURE(k);
    CHECK(c.pass);
    for (double s : {0.1, 0.5, 0.9}) {
      const Vec4 img = reeb_flow(StarshapedSurface::sphere(), oracle::quarter_arc_sphere(k, 0, 0, s), 1.0 / k);
      CHECK(norm(img - oracle::quarter_arc_sphere(k, 1, 1, s)) < 1e-8);
    }
  }
}

TEST_CASE("flow off the surface is a domain error") {
  try {
    reeb_field(StarshapedSurface::sphere(), {1.0, 0.0, 0.0, 0.0});
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Domain);
  }
}

TEST_CASE("library knots are Legendrian and on the sphere") {
  const auto S = StarshapedSurface::sphere();
  for (const auto& k : test_knot_library()) {
    CAPTURE(k.name());
    CHECK(k.closed());
    CHECK(legendrian_defect(k) < 1e-7);
    CHECK(surface_defect(S, k) < 1e-8);
  }
  // radial projection keeps the Legendrian condition
  const auto E = StarshapedSurface::ellipsoid(0.7, 1.0);
  const auto u = small_unknot().on_surface(E);
  CHECK(legendrian_defect(u) < 1e-7);
  CHECK(surface_defect(E, u) < 1e-8);
  CHECK_THROWS_AS(fiber_knot(2), Error);
}

TEST_CASE("cone over Gamma x Gamma lands on the arcs") {
  CHECK(check_cone(StarshapedSurface::sphere(), 3, 3, 100, 2).pass);
  CHECK(legendrian_graph(3).size() == 9);
}

TEST_CASE("chords of the small unknot") {
  const auto S = StarshapedSurface::sphere();
  const auto k = small_unknot();
  const auto fwd = chord_search(S, k, {k}, 1.0, 1);
  REQUIRE_FALSE(fwd.empty());
  for (const auto& c : fwd) {
    const Vec4 end = oracle::ellipsoid_flow(1.0, 1.0, k.point(c.s), c.T);
    CHECK(norm(end - k.point(c.u)) < 1e-5);
    CHECK(c.T >= 1e-4);
    CHECK(c.T <= 1.0);
  }
  for (std::size_t i = 1; i < fwd.size(); ++i) CHECK(fwd[i - 1].T <= fwd[i].T);
  CHECK_THROWS_AS(chord_search(S, k, {k}, 1.0, 0), Error);
}

TEST_CASE("Hopf sweep components and lunes") {
  for (int k = 2; k <= 4; ++k) {
    const auto h = hopf_sweep(k, 1.0 / k);
    CAPTURE(k);
    CHECK(h.components == k);
    REQUIRE(h.lune_areas.size() == static_cast<std::size_t>(k));
    for (double a : h.lune_areas) CHECK(std::abs(a - oracle::lune_area(lvlab::kTwoPi / k)) < 1e-3);
  }
}

TEST_CASE("spherical polygon area") {
  // octant of the area-1 sphere
  const double r = 0.5 / std::sqrt(kPi);
  const double A = spherical_polygon_area({{r, 0, 0}, {0, r, 0}, {0, 0, r}});
  CHECK(A == doctest::Approx(0.125).epsilon(1e-9));
  const auto n = hopf_project({1.0 / std::sqrt(kPi), 0, 0, 0});
  CHECK(n[2] == doctest::Approx(r));
}

TEST_CASE("Mohnke torus actions") {
  const auto S = StarshapedSurface::sphere();
  const auto t = mohnke_torus(S, torus_knot(), 0.3, 0.1, {}, 24, 24);
  CHECK(std::abs(t.action_lambda) < 1e-6);
  CHECK(std::abs(t.action_gamma - 0.3) < 1e-6);
  CHECK(t.omega_defect < 1e-6);
  // a chord shorter than T + eps blocks the construction
  CHECK_THROWS_AS(mohnke_torus(S, torus_knot(), 0.5, 0.1, {}, 12, 12), Error);
}

TEST_CASE("knot json round trip") {
  const auto k = small_unknot();
  const auto j = LegendrianCurve::from_json(k.to_json(512));
  CHECK(j.closed());
  for (double s : {0.0, 0.31, 0.77}) CHECK(norm(j.point(s) - k.point(s)) < 1e-6);
}
