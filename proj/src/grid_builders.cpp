#include <algorithm>
#include <cmath>
#include <sstream>

#include "lvlab/grid.hpp"

namespace lvlab {

namespace {

const char* kModule = "grid2d";

std::vector<Vec2> segment_samples(Vec2 a, Vec2 b, int n) {
  std::vector<Vec2> pts(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    pts[i] = a + t * (b - a);
  }
  pts.front() = a;
  pts.back() = b;
  return pts;
}

// CCW circle arc of radius r from angle t0 to t1 (t1 > t0).
std::vector<Vec2> circle_samples(double r, double t0, double t1, Vec2 a, Vec2 b, int n) {
  std::vector<Vec2> pts(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = t0 + (t1 - t0) * static_cast<double>(i) / (n - 1);
    pts[i] = {r * std::cos(t), r * std::sin(t)};
  }
  pts.front() = a;
  pts.back() = b;
  return pts;
}

Vec2 polar(double r, double t) { return {r * std::cos(t), r * std::sin(t)}; }

Vec2 centroid(const std::vector<Vec2>& poly) {
  double a = 0.0, cx = 0.0, cy = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 p = poly[i], q = poly[(i + 1) % n];
    const double c = cross(p, q);
    a += c;
    cx += (p.x + q.x) * c;
    cy += (p.y + q.y) * c;
  }
  return {cx / (3.0 * a), cy / (3.0 * a)};
}

// Face centroid, or the candidate farthest from the boundary when the centroid exits the face.
Vec2 default_marked_point(const std::vector<Vec2>& poly) {
  const Vec2 c = centroid(poly);
  if (point_in_polygon(poly, c)) return c;
  double x0 = poly[0].x, x1 = x0, y0 = poly[0].y, y1 = y0;
  for (const auto& p : poly) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  Vec2 best = c;
  double bd = -1.0;
  const int n = 64;
  for (int i = 1; i < n; ++i)
    for (int j = 1; j < n; ++j) {
      const Vec2 q{x0 + (x1 - x0) * i / n, y0 + (y1 - y0) * j / n};
      if (!point_in_polygon(poly, q)) continue;
      const double d = distance_to_polyline(poly, q, true);
      if (d > bd) {
        bd = d;
        best = q;
      }
    }
  return best;
}

std::vector<Vec2> cycle_polygon(const std::vector<std::vector<Vec2>>& arcs, const std::vector<std::pair<int, bool>>& cyc) {
  std::vector<Vec2> poly;
  for (const auto& [a, rev] : cyc) {
    const auto& p = arcs[a];
    for (std::size_t i = 0; i + 1 < p.size(); ++i) poly.push_back(rev ? p[p.size() - 1 - i] : p[i]);
  }
  return poly;
}

}  // namespace

Grid make_sector_grid(const std::vector<double>& fractions, double area, const Tolerances& tol) {
  const int k = static_cast<int>(fractions.size());
  if (k < 2) throw Error(ErrorKind::Precondition, kModule, "need at least two sectors (a single ray leaves a 1-valent vertex)");
  if (!(area > 0.0)) throw Error(ErrorKind::Precondition, kModule, "area must be positive");
  double sum = 0.0;
  for (double f : fractions) {
    if (!(f > 0.0)) throw Error(ErrorKind::Precondition, kModule, "sector fractions must be positive");
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw Error(ErrorKind::Precondition, kModule, "sector fractions must sum to 1");
  const double R = disc_radius(area);
  const int n = tol.arc_samples;
  std::vector<double> ang(k + 1, 0.0);
  for (int j = 0; j < k; ++j) ang[j + 1] = ang[j] + kTwoPi * fractions[j];
  ang[k] = kTwoPi;

  std::vector<Vec2> verts{{0.0, 0.0}};
  for (int j = 0; j < k; ++j) verts.push_back(polar(R, ang[j]));
  std::vector<Arc> arcs;
  for (int j = 0; j < k; ++j) arcs.push_back({0, j + 1, segment_samples(verts[0], verts[j + 1], n)});
  for (int j = 0; j < k; ++j) {
    const int a = j + 1, b = (j + 1) % k + 1;
    arcs.push_back({a, b, circle_samples(R, ang[j], ang[j + 1], verts[a], verts[b], n)});
  }
  std::vector<std::vector<int>> faces;
  std::vector<Vec2> marked;
  for (int j = 0; j < k; ++j) {
    faces.push_back({j, k + j, (j + 1) % k});
    marked.push_back(polar(0.5 * R, 0.5 * (ang[j] + ang[j + 1])));
  }
  return Grid::build(area, verts, arcs, faces, marked, false, tol);
}

Grid make_radial_grid(int k, double area, const Tolerances& tol) {
  if (k < 2) throw Error(ErrorKind::Precondition, kModule, "k must be at least 2 (a single ray leaves a 1-valent vertex)");
  return make_sector_grid(std::vector<double>(static_cast<std::size_t>(k), 1.0 / k), area, tol);
}

Grid make_periodic_grid(int n, const Tolerances& tol) {
  if (n < 1) throw Error(ErrorKind::Precondition, kModule, "N must be at least 1");
  const int s = std::max(2, tol.arc_samples / 4);
  std::vector<Vec2> verts;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) verts.push_back({static_cast<double>(i), static_cast<double>(j)});
  std::vector<Arc> arcs;
  auto vid = [&](int i, int j) { return (i % n) + n * (j % n); };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const Vec2 p{static_cast<double>(i), static_cast<double>(j)};
      arcs.push_back({vid(i, j), vid(i + 1, j), segment_samples(p, p + Vec2{1.0, 0.0}, s)});
      arcs.push_back({vid(i, j), vid(i, j + 1), segment_samples(p, p + Vec2{0.0, 1.0}, s)});
    }
  auto h = [&](int i, int j) { return 2 * vid(i, j); };
  auto v = [&](int i, int j) { return 2 * vid(i, j) + 1; };
  std::vector<std::vector<int>> faces;
  std::vector<Vec2> marked;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      faces.push_back({h(i, j), v(i + 1, j), h(i, j + 1), v(i, j)});
      marked.push_back({i + 0.5, j + 0.5});
    }
  return Grid::build(static_cast<double>(n) * n, verts, arcs, faces, marked, true, tol);
}

Grid make_bump_grid(double area, double lower_area, const Tolerances& tol) {
  if (!(area > 0.0) || !(lower_area > 0.0) || !(lower_area < area))
    throw Error(ErrorKind::Precondition, kModule, "lower area must lie strictly between 0 and the disc area");
  const double R = disc_radius(area);
  // y = h (1 - x^2/R^2)^2 encloses h R 16/15 above the diameter.
  const double h = (lower_area - 0.5 * area) * 15.0 / (16.0 * R);
  if (std::abs(h) >= 0.8 * R) throw Error(ErrorKind::Precondition, kModule, "bump too large for the disc");
  const int n = tol.arc_samples;
  std::vector<Vec2> verts{{R, 0.0}, {-R, 0.0}};
  std::vector<Vec2> bump(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    // cosine spacing keeps samples dense near the boundary vertices
    const double x = -R * std::cos(kPi * i / (n - 1));
    const double u = 1.0 - x * x / (R * R);
    bump[i] = {x, h * u * u};
  }
  bump.front() = verts[1];
  bump.back() = verts[0];
  std::vector<std::vector<Vec2>> pts{bump, circle_samples(R, 0.0, kPi, verts[0], verts[1], n),
                                     circle_samples(R, kPi, kTwoPi, verts[1], verts[0], n)};
  std::vector<Arc> arcs{{1, 0, pts[0]}, {0, 1, pts[1]}, {1, 0, pts[2]}};
  std::vector<std::vector<int>> faces{{1, 0}, {2, 0}};
  std::vector<Vec2> marked{default_marked_point(cycle_polygon(pts, {{1, false}, {0, false}})),
                           default_marked_point(cycle_polygon(pts, {{2, false}, {0, true}}))};
  return Grid::build(area, verts, arcs, faces, marked, false, tol);
}

Grid make_tripod_grid(double area, Vec2 center, double straight, const Tolerances& tol) {
  const double R = disc_radius(area);
  if (!(area > 0.0) || norm(center) >= 0.5 * R || !(straight > 0.0) || straight >= 0.5)
    throw Error(ErrorKind::Precondition, kModule, "tripod needs |center| < R/2 and straight fraction in (0, 0.5)");
  const int n = tol.arc_samples;
  std::vector<Vec2> verts{center};
  std::vector<double> psi(3);
  for (int j = 0; j < 3; ++j) {
    psi[j] = 0.5 * kPi + kTwoPi * j / 3.0;
    verts.push_back(polar(R, psi[j]));
  }
  std::vector<std::vector<Vec2>> pts;
  for (int j = 0; j < 3; ++j) {
    const Vec2 d = polar(1.0, psi[j]);
    const Vec2 p1 = center + straight * R * d;
    const Vec2 b = verts[j + 1];
    const double L = norm(b - p1) / 3.0;
    const Vec2 c1 = p1 + L * d, c2 = b - L * d;
    const double len_s = straight * R, len_b = 3.0 * L;
    const int ns = std::max(8, static_cast<int>(n * len_s / (len_s + len_b)));
    const int nb = std::max(8, n - ns + 1);
    std::vector<Vec2> arm = segment_samples(center, p1, ns);
    // Bezier samples spaced uniformly in parameter, which is close to arc length here.
    for (int i = 1; i < nb; ++i) {
      const double t = static_cast<double>(i) / (nb - 1), s = 1.0 - t;
      arm.push_back(s * s * s * p1 + 3.0 * s * s * t * c1 + 3.0 * s * t * t * c2 + t * t * t * b);
    }
    arm.back() = b;
    pts.push_back(arm);
  }
  for (int j = 0; j < 3; ++j) {
    const int a = j + 1, b = (j + 1) % 3 + 1;
    const double t0 = psi[j], t1 = j == 2 ? psi[0] + kTwoPi : psi[j + 1];
    pts.push_back(circle_samples(R, t0, t1, verts[a], verts[b], n));
  }
  std::vector<Arc> arcs;
  for (int j = 0; j < 3; ++j) arcs.push_back({0, j + 1, pts[j]});
  for (int j = 0; j < 3; ++j) arcs.push_back({j + 1, (j + 1) % 3 + 1, pts[3 + j]});
  std::vector<std::vector<int>> faces;
  std::vector<Vec2> marked;
  for (int j = 0; j < 3; ++j) {
    faces.push_back({j, 3 + j, (j + 1) % 3});
    marked.push_back(default_marked_point(cycle_polygon(pts, {{j, false}, {3 + j, false}, {(j + 1) % 3, true}})));
  }
  return Grid::build(area, verts, arcs, faces, marked, false, tol);
}

Grid grid_from_spec(const std::string& spec, double area, const Tolerances& tol) {
  auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  auto numbers = [&]() {
    std::vector<double> v;
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        v.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw Error(ErrorKind::Parse, kModule, "bad number '" + item + "' in grid spec '" + spec + "'");
      }
    }
    return v;
  };
  if (colon != std::string::npos) {
    const auto v = numbers();
    if (kind == "radial" && v.size() == 1) return make_radial_grid(static_cast<int>(v[0]), area, tol);
    if (kind == "sectors" && v.size() >= 2) return make_sector_grid(v, area, tol);
    if (kind == "periodic" && v.size() == 1) return make_periodic_grid(static_cast<int>(v[0]), tol);
    if (kind == "bump" && v.size() == 1) return make_bump_grid(area, v[0] * area, tol);
    if (kind == "tripod" && v.size() == 3) return make_tripod_grid(area, {v[0], v[1]}, v[2], tol);
    if (kind == "radial" || kind == "sectors" || kind == "periodic" || kind == "bump" || kind == "tripod")
      throw Error(ErrorKind::Parse, kModule, "malformed grid spec '" + spec + "'");
  }
  return load_grid(spec, tol);
}

}  // namespace lvlab
