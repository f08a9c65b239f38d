#include <doctest.h>

#include <cmath>

#include "lvlab/ode.hpp"
#include "lvlab/spline.hpp"

using namespace lvlab;

TEST_CASE("periodic spline reproduces a trigonometric polynomial") {
  std::vector<double> t, y;
  const int n = 64;
  for (int k = 0; k <= n; ++k) {
    t.push_back(static_cast<double>(k) / n);
    y.push_back(std::sin(kTwoPi * t.back()) + 0.5 * std::cos(2 * kTwoPi * t.back()));
  }
  y.back() = y.front();
  const CubicSpline s(t, y, CubicSpline::End::Periodic);
  double worst = 0.0, worst_d = 0.0;
  for (int k = 0; k < 500; ++k) {
    const double u = (k + 0.37) / 500.0;
    worst = std::max(worst, std::abs(s.value(u) - std::sin(kTwoPi * u) - 0.5 * std::cos(2 * kTwoPi * u)));
    worst_d = std::max(worst_d, std::abs(s.derivative(u) - kTwoPi * std::cos(kTwoPi * u) + kTwoPi * std::sin(2 * kTwoPi * u)));
  }
  CHECK(worst < 1e-5);
  CHECK(worst_d < 1e-2);
  // wraps outside [0, 1]
  CHECK(s.value(1.25) == doctest::Approx(s.value(0.25)).epsilon(1e-12));
}

TEST_CASE("not-a-knot spline is exact on cubics") {
  std::vector<double> t{0.0, 0.3, 0.5, 1.1, 1.4, 2.0}, y;
  for (double v : t) y.push_back(v * v * v - 2 * v + 1);
  const CubicSpline s(t, y, CubicSpline::End::NotAKnot);
  for (double u : {0.1, 0.77, 1.3, 1.9}) {
    CHECK(s.value(u) == doctest::Approx(u * u * u - 2 * u + 1).epsilon(1e-12));
    CHECK(s.second_derivative(u) == doctest::Approx(6 * u).epsilon(1e-10));
  }
  CHECK(s.locate(0.4) == 1);
}

TEST_CASE("spline rejects bad knots") {
  CHECK_THROWS_AS(CubicSpline({0.0, 0.0, 1.0}, {1.0, 2.0, 3.0}, CubicSpline::End::NotAKnot), Error);
  CHECK_THROWS_AS(CubicSpline({0.0, 1.0, 2.0}, {1.0, 2.0, 3.0}, CubicSpline::End::Periodic), Error);
}

TEST_CASE("dopri integrates a rotation to tolerance") {
  OdeOptions opt;
  opt.abs_tol = opt.rel_tol = 1e-12;
  auto f = [](double, const State<2>& y) { return State<2>{-y[1], y[0]}; };
  const auto r = integrate<2>(f, State<2>{1.0, 0.0}, 0.0, kTwoPi, opt);
  REQUIRE(r.status == OdeStatus::Reached);
  CHECK(std::abs(r.y[0] - 1.0) < 1e-10);
  CHECK(std::abs(r.y[1]) < 1e-10);
  const auto back = integrate<2>(f, r.y, kTwoPi, 0.0, opt);
  CHECK(std::abs(back.y[0] - 1.0) < 1e-10);
}
