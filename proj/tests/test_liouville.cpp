#include <doctest.h>

#include <cmath>
#include <random>

#include "lvlab/liouville.hpp"
#include "oracles.hpp"

using namespace lvlab;

namespace {

const LiouvilleForm2D& radial4() {
  static const LiouvilleForm2D f = LiouvilleForm2D::build(make_radial_grid(4, 1.0));
  return f;
}

}  // namespace

TEST_CASE("omega(X, .) = lambda") {
  const auto& f = radial4();
  std::mt19937_64 rng(3);
  for (int n = 0; n < 200; ++n) {
    const Vec2 x = random_point(f.grid(), rng);
    const Vec2 l = f.lambda(x), X = f.X(x);
    // omega = dx ^ dy, so omega(X, .) = (-X.y, X.x)
    CHECK(std::abs(-X.y - l.x) < 1e-12);
    CHECK(std::abs(X.x - l.y) < 1e-12);
  }
}

TEST_CASE("lambda is closed away from the skeleton") {
  const auto& f = radial4();
  std::mt19937_64 rng(11);
  int used = 0;
  double worst = 0.0;
  for (int n = 0; n < 4000 && used < 300; ++n) {
    Vec2 x = random_point(f.grid(), rng);
    Vec2 q = x;
    const int face = f.grid().locate_face(q);
    if (face < 0 || !fd_safe(f, face, q) || f.grid().distance_to_gamma(x) < 1e-2) continue;
    const double c = oracle::fd_curl([&](Vec2 y) { return f.lambda_in_face(face, y); }, q, 1e-4);
    worst = std::max(worst, std::abs(c - 1.0));
    ++used;
  }
  CHECK(used == 300);
  CHECK(worst < 1e-4);
}

TEST_CASE("residue at each pole is minus the face area") {
  const auto& f = radial4();
  for (int i = 0; i < 4; ++i) {
    const double I = f.residue_loop_integral(i, 1e-2);
    CHECK(std::abs(I + f.grid().face_areas()[static_cast<std::size_t>(i)]) < 1e-2 + 1e-4);
  }
}

TEST_CASE("flow reaches the marked point of the starting face") {
  const auto& f = radial4();
  std::mt19937_64 rng(5);
  for (int n = 0; n < 40; ++n) {
    Vec2 x = random_point(f.grid(), rng);
    if (f.grid().distance_to_gamma(x) < 1e-3) continue;
    Vec2 q = x;
    const int face = f.grid().locate_face(q);
    const Trajectory tr = f.flow(x, 20.0);
    CHECK(tr.classification == FlowClass::ConvergedTo);
    CHECK(tr.face == face);
  }
}

TEST_CASE("skeleton points stay on the skeleton") {
  const auto& f = radial4();
  const Trajectory tr = f.flow({0.2, 0.0}, 20.0);
  CHECK(tr.classification == FlowClass::OnSkeleton);
  for (const auto& p : tr.points) CHECK(std::abs(p.x.y) < 1e-3);
}

TEST_CASE("named checks pass on regular grids") {
  CheckOptions opt;
  opt.closedness_points = 300;
  opt.basin_points = 300;
  opt.gamma_points = 16;
  for (const char* spec : {"radial:3", "tripod:0.1,0.05,0.3"}) {
    CAPTURE(spec);
    const auto f = LiouvilleForm2D::build(grid_from_spec(spec, 1.0));
    for (const auto& r : check_form(f, opt)) {
      CAPTURE(r.name);
      CAPTURE(r.value);
      CHECK(r.pass);
    }
  }
}

TEST_CASE("weight split keeps the total residue") {
  const auto f = split_weights(radial4(), 0, 0.1, 0.15);
  REQUIRE(f.poles(0).size() == 2);
  const double I = f.residue_loop_integral(0, 1e-5, 0) + f.residue_loop_integral(0, 1e-5, 1);
  CHECK(std::abs(I + 0.25) < 1e-4);
}

TEST_CASE("form json round trip") {
  const auto& f = radial4();
  const auto g = form_from_json(form_to_json(f));
  for (Vec2 x : {Vec2{0.1, 0.2}, Vec2{-0.3, 0.05}, Vec2{0.01, -0.4}}) {
    CHECK(g.lambda(x).x == doctest::Approx(f.lambda(x).x).epsilon(1e-12));
    CHECK(g.lambda(x).y == doctest::Approx(f.lambda(x).y).epsilon(1e-12));
  }
}

TEST_CASE("irregular grids are refused") {
  CHECK_THROWS_AS(LiouvilleForm2D::build(make_sector_grid({0.2, 0.3, 0.5}, 1.0)), Error);
}
