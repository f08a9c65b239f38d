#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lvlab {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class ErrorKind { Precondition, Domain, Geometry, Construction, Parse, Io };

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& module, const std::string& msg)
      : std::runtime_error(module + ": " + msg), kind_(kind), module_(module) {}
  ErrorKind kind() const { return kind_; }
  const std::string& module() const { return module_; }

private:
  ErrorKind kind_;
  std::string module_;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }

// Point of C^2 = R^4 stored as (x1, y1, x2, y2).
using Vec4 = std::array<double, 4>;

inline Vec4 operator+(const Vec4& a, const Vec4& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}
inline Vec4 operator-(const Vec4& a, const Vec4& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]};
}
inline Vec4 operator*(double s, const Vec4& a) {
  return {s * a[0], s * a[1], s * a[2], s * a[3]};
}
inline double dot(const Vec4& a, const Vec4& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}
inline double norm(const Vec4& a) { return std::sqrt(dot(a, a)); }

// omega_st = dx1^dy1 + dx2^dy2
inline double omega_st(const Vec4& u, const Vec4& v) {
  return u[0] * v[1] - u[1] * v[0] + u[2] * v[3] - u[3] * v[2];
}

// alpha_st = 1/2 sum (x dy - y dx), evaluated at z on v
inline double alpha_st(const Vec4& z, const Vec4& v) {
  return 0.5 * (z[0] * v[1] - z[1] * v[0] + z[2] * v[3] - z[3] * v[2]);
}

// Disc D(A) has Euclidean radius sqrt(A/pi).
inline double disc_radius(double area) { return std::sqrt(area / kPi); }

}  // namespace lvlab
