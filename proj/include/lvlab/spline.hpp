#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "lvlab/common.hpp"

namespace lvlab {

// Cubic interpolating spline through (t_k, y_k). Open splines use the
// not-a-knot end condition; periodic splines require y.front() == y.back().
class CubicSpline {
public:
  enum class End { NotAKnot, Periodic };

  CubicSpline() = default;
  CubicSpline(std::vector<double> t, const std::vector<double>& y, End end);

  double value(double s) const;
  double derivative(double s) const;
  double second_derivative(double s) const;

  std::size_t pieces() const { return coef_.size(); }
  const std::vector<double>& knots() const { return t_; }
  // Piece k in the local variable u = s - t_k: c0 + c1 u + c2 u^2 + c3 u^3.
  const std::array<double, 4>& coeffs(std::size_t k) const { return coef_[k]; }
  // Index of the piece containing s (periodic splines wrap s first).
  std::size_t locate(double s) const;
  double wrap(double s) const;
  bool periodic() const { return end_ == End::Periodic; }

private:
  std::vector<double> t_;
  std::vector<std::array<double, 4>> coef_;
  End end_ = End::NotAKnot;
};

inline double poly3(const std::array<double, 4>& c, double u) {
  return c[0] + u * (c[1] + u * (c[2] + u * c[3]));
}
inline double dpoly3(const std::array<double, 4>& c, double u) {
  return c[1] + u * (2.0 * c[2] + 3.0 * u * c[3]);
}

// Planar curve through sample points with chord-length parameter.
class SplineCurve2 {
public:
  SplineCurve2() = default;
  explicit SplineCurve2(const std::vector<Vec2>& pts);

  Vec2 point(double s) const { return {x_.value(s), y_.value(s)}; }
  Vec2 tangent(double s) const { return {x_.derivative(s), y_.derivative(s)}; }
  double length_parameter() const { return x_.knots().back(); }
  const std::vector<double>& knots() const { return x_.knots(); }
  const CubicSpline& x() const { return x_; }
  const CubicSpline& y() const { return y_; }

private:
  CubicSpline x_, y_;
};

// Curve in R^4 with a given parameter grid; periodic when closed.
class SplineCurve4 {
public:
  SplineCurve4() = default;
  SplineCurve4(const std::vector<double>& t, const std::vector<Vec4>& pts, bool closed);

  Vec4 point(double s) const;
  Vec4 tangent(double s) const;
  bool closed() const { return closed_; }

private:
  std::array<CubicSpline, 4> c_;
  bool closed_ = false;
};

}  // namespace lvlab
