#include <doctest.h>

#include <cmath>
#include <random>

#include "lvlab/polar4.hpp"

using namespace lvlab;

namespace {

const ProductPolarization& product() {
  static const ProductPolarization p(LiouvilleForm2D::build(make_radial_grid(2, 1.0)),
                                     LiouvilleForm2D::build(make_radial_grid(3, 1.0)));
  return p;
}

}  // namespace

TEST_CASE("product form has one component per face of each factor") {
  const auto& p = product();
  CHECK(p.components().size() == 5);
  double w0 = 0.0, w1 = 0.0;
  for (const auto& c : p.components()) (c.factor == 0 ? w0 : w1) += c.weight;
  CHECK(w0 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(w1 == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("product lambda splits into the factor forms") {
  const auto& p = product();
  const Point4 x{{0.1, 0.2}, {-0.15, 0.05}};
  const Vec4 l = p.lambda(x);
  const Vec2 la = p.factor(0).lambda(x.a), lb = p.factor(1).lambda(x.b);
  CHECK(l[0] == la.x);
  CHECK(l[1] == la.y);
  CHECK(l[2] == lb.x);
  CHECK(l[3] == lb.y);
}

TEST_CASE("generic points flow into a basin, Gamma x Gamma stays put") {
  const auto& p = product();
  const auto c = classify4(p, {{0.1, 0.2}, {0.2, 0.1}}, 20.0);
  CHECK(c.kind == Class4::Basin);
  // y = 0 is the diameter of the 2-sector disc; the 3-sector grid has a ray at angle 0
  const auto s = classify4(p, {{0.2, 0.0}, {0.25, 0.0}}, 20.0);
  CHECK(s.kind == Class4::Skeleton);
}

TEST_CASE("product checks pass") {
  const auto& p = product();
  for (const auto& c : {check_product_closedness(p, 200, 1), check_skeleton_dichotomy(p, 200, 20.0, 2),
                        check_boundary_tangency(p, 200, 3)}) {
    CAPTURE(c.name);
    CAPTURE(c.value);
    CHECK(c.pass);
  }
}

TEST_CASE("model disc bundle") {
  const ModelDiscBundle m{2, 1.5};
  const auto c = check_sdb_consistency(m, 200, 4);
  CAPTURE(c.value);
  CHECK(c.pass);
  // omega0(e_R, e_theta) = 1
  const auto v = eval_sdb(m, {0.1, -0.2, 0.3, 0.4});
  CHECK(v.omega[2][3] == doctest::Approx(1.0));
  CHECK(v.omega[3][2] == doctest::Approx(-1.0));
  // the fiber integral of lambda0 is R - area / c1
  CHECK(sdb_fiber_integral(m, 0.1, -0.2, 0.3) == doctest::Approx(0.3 - 0.75).epsilon(1e-9));
}
