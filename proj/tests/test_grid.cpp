#include <doctest.h>

#include <cmath>
#include <random>

#include "lvlab/grid.hpp"
#include "oracles.hpp"

using namespace lvlab;

TEST_CASE("radial grids partition the disc into equal regular sectors") {
  for (int k = 2; k <= 6; ++k) {
    const Grid g = make_radial_grid(k, 1.0);
    CAPTURE(k);
    REQUIRE(g.face_count() == static_cast<std::size_t>(k));
    CHECK(g.regular());
    double sum = 0.0;
    for (double a : g.face_areas()) {
      CHECK(a == doctest::Approx(1.0 / k).epsilon(1e-9));
      sum += a;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    // face polygons agree with the stored areas
    for (int f = 0; f < k; ++f)
      CHECK(oracle::polygon_area(g.cached_polygon(f)) == doctest::Approx(g.face_areas()[f]).epsilon(1e-4));
  }
}

TEST_CASE("uneven sectors are a valid but irregular grid") {
  const Grid g = make_sector_grid({0.2, 0.3, 0.5}, 2.0);
  CHECK(g.face_count() == 3);
  CHECK_FALSE(g.regular());
  CHECK_FALSE(g.regularity().failure.empty());
  CHECK(g.face_areas()[2] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("tripod and periodic grids") {
  const Grid t = make_tripod_grid(1.0, {0.1, 0.05}, 0.3);
  CHECK(t.face_count() == 3);
  CHECK(t.regular());
  double sum = 0.0;
  for (double a : t.face_areas()) sum += a;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));

  const Grid p = make_periodic_grid(2);
  CHECK(p.periodic());
  CHECK(p.face_count() == 4);
  CHECK(p.regular());
  const Vec2 w = p.wrap({1.25 * p.period(), -0.25 * p.period()});
  CHECK(w.x == doctest::Approx(0.25 * p.period()));
  CHECK(w.y == doctest::Approx(0.75 * p.period()));
}

TEST_CASE("locate_face agrees with the winding number oracle") {
  const Grid g = make_tripod_grid(1.0, {0.1, 0.05}, 0.3);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-0.6, 0.6);
  int tested = 0;
  while (tested < 300) {
    Vec2 p{U(rng), U(rng)};
    if (norm(p) > 0.98 * g.radius() || g.distance_to_gamma(p) < 1e-6) continue;
    Vec2 q = p;
    const int f = g.locate_face(q);
    REQUIRE(f >= 0);
    CHECK(oracle::inside_polygon(g.cached_polygon(f), p));
    ++tested;
  }
}

TEST_CASE("grid json round trip keeps the geometry") {
  const Grid g = make_radial_grid(3, 1.5);
  const Grid h = grid_from_json(grid_to_json(g));
  REQUIRE(h.face_count() == g.face_count());
  for (std::size_t i = 0; i < g.face_count(); ++i) CHECK(h.face_areas()[i] == doctest::Approx(g.face_areas()[i]));
  CHECK(h.ambient_area() == 1.5);
  CHECK(h.regular() == g.regular());
}

TEST_CASE("grid inputs are validated") {
  auto kind_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return static_cast<int>(e.kind());
    }
    return -1;
  };
  CHECK(kind_of([] { make_radial_grid(1, 1.0); }) == static_cast<int>(ErrorKind::Precondition));
  CHECK(kind_of([] { make_sector_grid({0.5, 0.6}, 1.0); }) == static_cast<int>(ErrorKind::Precondition));
  CHECK(kind_of([] { grid_from_spec("radial:x", 1.0); }) == static_cast<int>(ErrorKind::Parse));
  CHECK(kind_of([] { grid_from_spec("hexagon:3", 1.0); }) != -1);
  CHECK(kind_of([] { grid_from_json("{\"ambient_area\": 1,"); }) == static_cast<int>(ErrorKind::Parse));
  CHECK(kind_of([] { load_grid("/nonexistent/grid.json"); }) == static_cast<int>(ErrorKind::Io));
}

TEST_CASE("tolerance table is complete and rejects nonsense") {
  Tolerances tol;
  CHECK(set_tolerance(tol, "chord", 2e-5));
  CHECK(tol.chord == 2e-5);
  CHECK_FALSE(set_tolerance(tol, "chord", -1.0));
  CHECK_FALSE(set_tolerance(tol, "no_such_tolerance", 1.0));
  CHECK(list_tolerances(tol).size() >= 20);
}
