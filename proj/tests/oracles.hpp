#pragma once

// Test-side reference computations. Nothing here calls into the code under test
// except for plain data accessors.

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "lvlab/common.hpp"

namespace oracle {

using lvlab::Vec2;
using lvlab::Vec4;

// ---------------------------------------------------------------- ribbon graphs

// Surface of genus g with b boundary circles.
struct Piece {
  int genus = 0;
  int boundary = 0;
};

struct RibbonResult {
  long euler = 0;     // Euler characteristic of the glued surface
  long boundary = 0;  // boundary circles
  long pieces = 0;    // connected components
  long genus = -1;    // only when pieces == 1
};

// Builds each piece as a one-vertex fat graph (interlaced loop pairs for genus,
// trivial loops for holes), punches one hole per node end, glues an annulus per
// node, and reads chi, b and connectivity off the traced boundary cycles.
// Insertion positions of the trivial loops are drawn from `rng`.
RibbonResult ribbon_smoothing(const std::vector<Piece>& pieces, const std::vector<std::pair<int, int>>& nodes,
                              std::mt19937_64& rng);

// ---------------------------------------------------------------- calculus

// dlambda(d/dx, d/dy) by a fourth-order central stencil.
double fd_curl(const std::function<Vec2(Vec2)>& lambda, Vec2 x, double h);

// Integral of lambda around a closed polygon, 4-point Gauss on every edge.
double polygon_integral(const std::function<Vec2(Vec2)>& lambda, const std::vector<Vec2>& poly);

double polygon_area(const std::vector<Vec2>& poly);  // signed
bool inside_polygon(const std::vector<Vec2>& poly, Vec2 p);  // winding number
double distance_to_polyline(const std::vector<Vec2>& line, Vec2 p);

// ---------------------------------------------------------------- contact

// Closed-form Reeb flow of H = pi (|z1|^2 / a + |z2|^2 / b): z_l -> exp(2 pi i t / a_l) z_l.
Vec4 ellipsoid_flow(double a, double b, const Vec4& z, double t);
double ellipsoid_H(double a, double b, const Vec4& z);
// Q_{i,j}(s) on the round sphere, s in [0, 1].
Vec4 quarter_arc_sphere(int k, int i, int j, double s);
// Area of the lune between two meridians of the area-1 sphere.
double lune_area(double dihedral_angle);

// ---------------------------------------------------------------- arithmetic

std::int64_t binom2(std::int64_t n);  // n (n - 1) / 2
std::int64_t gcd(std::int64_t a, std::int64_t b);

}  // namespace oracle
