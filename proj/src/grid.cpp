#include "lvlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

namespace lvlab {

namespace {

const char* kModule = "grid2d";

[[noreturn]] void geometry_error(const std::string& msg) {
  throw Error(ErrorKind::Geometry, kModule, msg);
}

// 3-point Gauss-Legendre on [0, 1].
constexpr double kGlX[3] = {0.5 - 0.3872983346207417, 0.5, 0.5 + 0.3872983346207417};
constexpr double kGlW[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

double orient(Vec2 a, Vec2 b, Vec2 c) { return cross(b - a, c - a); }

bool segments_cross(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2) {
  const double d1 = orient(q1, q2, p1), d2 = orient(q1, q2, p2);
  const double d3 = orient(p1, p2, q1), d4 = orient(p1, p2, q2);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

double segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double L2 = dot(ab, ab);
  double t = L2 > 0 ? dot(p - a, ab) / L2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return norm(p - (a + t * ab));
}

std::array<double, 4> bbox(const std::vector<Vec2>& pts) {
  std::array<double, 4> b{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
                          -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& p : pts) {
    b[0] = std::min(b[0], p.x);
    b[1] = std::min(b[1], p.y);
    b[2] = std::max(b[2], p.x);
    b[3] = std::max(b[3], p.y);
  }
  return b;
}

bool polyline_self_intersects(const std::vector<Vec2>& pts, bool closed) {
  const std::size_t n = pts.size();
  const std::size_t segs = closed ? n : n - 1;
  // Bucket segments on a coarse grid to avoid the quadratic scan.
  const auto b = bbox(pts);
  const double w = std::max(b[2] - b[0], b[3] - b[1]);
  const int cells = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(segs))));
  const double cs = w > 0 ? w / cells * (1.0 + 1e-12) : 1.0;
  std::vector<std::vector<std::size_t>> bucket(static_cast<std::size_t>(cells + 1) * (cells + 1));
  auto cell_of = [&](double v, double lo) {
    return std::clamp(static_cast<int>((v - lo) / cs), 0, cells);
  };
  for (std::size_t i = 0; i < segs; ++i) {
    const Vec2 a = pts[i], c = pts[(i + 1) % n];
    const int x0 = cell_of(std::min(a.x, c.x), b[0]), x1 = cell_of(std::max(a.x, c.x), b[0]);
    const int y0 = cell_of(std::min(a.y, c.y), b[1]), y1 = cell_of(std::max(a.y, c.y), b[1]);
    for (int x = x0; x <= x1; ++x)
      for (int y = y0; y <= y1; ++y) bucket[static_cast<std::size_t>(x) * (cells + 1) + y].push_back(i);
  }
  for (const auto& bk : bucket) {
    for (std::size_t u = 0; u < bk.size(); ++u) {
      for (std::size_t v = u + 1; v < bk.size(); ++v) {
        const std::size_t i = bk[u], j = bk[v];
        const std::size_t gap = j > i ? j - i : i - j;
        if (gap <= 1 || (closed && gap == segs - 1)) continue;
        if (segments_cross(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n])) return true;
      }
    }
  }
  return false;
}

std::string fmt_vertex(int v, Vec2 p) {
  std::ostringstream os;
  os << "vertex " << v << " at (" << p.x << ", " << p.y << ")";
  return os.str();
}

}  // namespace

double shoelace_area(const std::vector<Vec2>& poly) {
  double s = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) s += cross(poly[i], poly[(i + 1) % n]);
  return 0.5 * s;
}

bool point_in_polygon(const std::vector<Vec2>& poly, Vec2 p) {
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = poly[i], b = poly[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

double distance_to_polyline(const std::vector<Vec2>& poly, Vec2 p, bool closed) {
  double d = std::numeric_limits<double>::infinity();
  const std::size_t n = poly.size();
  if (n == 1) return norm(p - poly[0]);
  const std::size_t segs = closed ? n : n - 1;
  for (std::size_t i = 0; i < segs; ++i) d = std::min(d, segment_distance(p, poly[i], poly[(i + 1) % n]));
  return d;
}

Vec2 Grid::piece_point(const BoundaryPiece& p, double u) const {
  const auto& c = curves_[p.arc];
  const double s = p.reversed ? p.h - u : u;
  const auto& cx = c.x().coeffs(p.piece);
  const auto& cy = c.y().coeffs(p.piece);
  return Vec2{poly3(cx, s), poly3(cy, s)} + p.shift;
}

Vec2 Grid::piece_tangent(const BoundaryPiece& p, double u) const {
  const auto& c = curves_[p.arc];
  const double s = p.reversed ? p.h - u : u;
  const Vec2 d{dpoly3(c.x().coeffs(p.piece), s), dpoly3(c.y().coeffs(p.piece), s)};
  return p.reversed ? -1.0 * d : d;
}

std::vector<Vec2> Grid::face_polygon(int f) const {
  std::vector<Vec2> poly;
  for (const auto& oa : cycles_[f]) {
    const auto& pts = arcs_[oa.arc].points;
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const Vec2 p = oa.reversed ? pts[n - 1 - i] : pts[i];
      poly.push_back(p + oa.shift);
    }
  }
  return poly;
}

Vec2 Grid::wrap(Vec2 p) const {
  if (!periodic_) return p;
  auto w = [&](double v) {
    double r = std::fmod(v, period_);
    if (r < 0) r += period_;
    return r;
  };
  return {w(p.x), w(p.y)};
}

int Grid::locate_face(Vec2& p) const {
  if (!periodic_) {
    for (std::size_t f = 0; f < faces_.size(); ++f) {
      const auto& b = face_boxes_[f];
      if (p.x < b[0] || p.x > b[2] || p.y < b[1] || p.y > b[3]) continue;
      if (point_in_polygon(polys_[f], p)) return static_cast<int>(f);
    }
    return -1;
  }
  const Vec2 w = wrap(p);
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    const auto& b = face_boxes_[f];
    for (int sx = -1; sx <= 1; ++sx) {
      for (int sy = -1; sy <= 1; ++sy) {
        const Vec2 q{w.x + sx * period_, w.y + sy * period_};
        if (q.x < b[0] || q.x > b[2] || q.y < b[1] || q.y > b[3]) continue;
        if (point_in_polygon(polys_[f], q)) {
          p = q;
          return static_cast<int>(f);
        }
      }
    }
  }
  return -1;
}

double Grid::distance_to_gamma(Vec2 p) const {
  double d = std::numeric_limits<double>::infinity();
  std::vector<Vec2> probes{p};
  if (periodic_) {
    const Vec2 w = wrap(p);
    probes.clear();
    for (int sx = -1; sx <= 1; ++sx)
      for (int sy = -1; sy <= 1; ++sy) probes.push_back({w.x + sx * period_, w.y + sy * period_});
  }
  for (const auto& arc : arcs_) {
    const auto b = bbox(arc.points);
    for (const auto& q : probes) {
      const double dx = std::max({b[0] - q.x, 0.0, q.x - b[2]});
      const double dy = std::max({b[1] - q.y, 0.0, q.y - b[3]});
      if (std::hypot(dx, dy) >= d) continue;
      d = std::min(d, distance_to_polyline(arc.points, q, false));
    }
  }
  return d;
}

Grid Grid::build(double ambient_area, std::vector<Vec2> vertex_positions, std::vector<Arc> arcs,
                 std::vector<std::vector<int>> faces, std::vector<Vec2> marked_points, bool periodic,
                 const Tolerances& tol) {
  Grid g;
  g.tol_ = tol;
  g.periodic_ = periodic;
  if (!(ambient_area > 0.0) || !std::isfinite(ambient_area)) geometry_error("ambient area must be positive");
  g.area_ = ambient_area;
  if (periodic) {
    g.period_ = std::sqrt(ambient_area);
    const double n = std::round(g.period_);
    if (n < 1 || std::abs(n * n - ambient_area) > 1e-12 * ambient_area)
      geometry_error("periodic grids need ambient area N^2 for a positive integer N");
    g.period_ = n;
  }
  const double R = periodic ? g.period_ : disc_radius(ambient_area);
  const double pos_tol = tol.boundary_position * R;

  if (vertex_positions.empty()) geometry_error("grid has no vertices");
  if (arcs.empty()) geometry_error("grid has no arcs");
  if (faces.empty()) geometry_error("grid has no faces");

  g.vertices_.resize(vertex_positions.size());
  for (std::size_t v = 0; v < vertex_positions.size(); ++v) {
    const Vec2 p = vertex_positions[v];
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) geometry_error("non-finite vertex position");
    g.vertices_[v].position = p;
    if (!periodic) {
      const double r = norm(p);
      if (r > R + pos_tol) geometry_error(fmt_vertex(static_cast<int>(v), p) + " lies outside the disc");
      g.vertices_[v].boundary = std::abs(r - R) <= pos_tol;
    } else if (p.x < -pos_tol || p.y < -pos_tol || p.x >= R - pos_tol || p.y >= R - pos_tol) {
      geometry_error(fmt_vertex(static_cast<int>(v), p) + " lies outside the fundamental square [0,N)^2");
    }
  }

  auto lattice_equal = [&](Vec2 a, Vec2 b) {
    Vec2 d = a - b;
    if (periodic) {
      d.x -= g.period_ * std::round(d.x / g.period_);
      d.y -= g.period_ * std::round(d.y / g.period_);
    }
    return norm(d) <= std::max(pos_tol, 1e-12);
  };

  // Arc checks.
  const int nv = static_cast<int>(g.vertices_.size());
  g.boundary_arc_.assign(arcs.size(), false);
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    auto& arc = arcs[a];
    const std::string tag = "arc " + std::to_string(a);
    if (arc.v0 < 0 || arc.v0 >= nv || arc.v1 < 0 || arc.v1 >= nv) geometry_error(tag + " references a missing vertex");
    if (arc.points.size() < 2) geometry_error(tag + " has fewer than two samples");
    for (std::size_t i = 0; i < arc.points.size(); ++i) {
      if (!std::isfinite(arc.points[i].x) || !std::isfinite(arc.points[i].y)) geometry_error(tag + " has a non-finite sample");
      if (i > 0 && norm(arc.points[i] - arc.points[i - 1]) <= 1e-14 * R)
        geometry_error(tag + " has repeated consecutive samples");
    }
    if (!lattice_equal(arc.points.front(), g.vertices_[arc.v0].position) ||
        !lattice_equal(arc.points.back(), g.vertices_[arc.v1].position))
      geometry_error(tag + " does not start and end at its vertices");
    const bool loop = arc.v0 == arc.v1 && norm(arc.points.front() - arc.points.back()) <= pos_tol;
    if (loop) geometry_error(tag + " is a closed loop; split it with a vertex");
    if (polyline_self_intersects(arc.points, false)) geometry_error(tag + " intersects itself");
    // kinks: turning angle exceeding both neighbours by more than the tolerance
    const std::size_t n = arc.points.size();
    if (n >= 3) {
      std::vector<double> turn(n, 0.0);
      for (std::size_t i = 1; i + 1 < n; ++i) {
        const Vec2 d0 = arc.points[i] - arc.points[i - 1], d1 = arc.points[i + 1] - arc.points[i];
        turn[i] = std::abs(std::atan2(cross(d0, d1), dot(d0, d1)));
      }
      for (std::size_t i = 1; i + 1 < n; ++i) {
        const double nb = std::max(i > 1 ? turn[i - 1] : 0.0, i + 2 < n ? turn[i + 1] : 0.0);
        if (turn[i] - nb > tol.kink_angle) geometry_error(tag + " has a corner at sample " + std::to_string(i));
      }
    }
    if (!periodic) {
      bool on_circle = true;
      for (const auto& p : arc.points) on_circle = on_circle && std::abs(norm(p) - R) <= pos_tol;
      g.boundary_arc_[a] = on_circle;
    }
    g.vertices_[arc.v0].valence += 1;
    g.vertices_[arc.v1].valence += 1;
  }
  for (int v = 0; v < nv; ++v)
    if (g.vertices_[v].valence < 2)
      geometry_error(fmt_vertex(v, g.vertices_[v].position) + " has valence " +
                     std::to_string(g.vertices_[v].valence) + " (1-valent vertices are not allowed)");

  // Arcs must not cross each other.
  {
    std::vector<std::array<double, 4>> boxes;
    for (const auto& arc : arcs) boxes.push_back(bbox(arc.points));
    for (std::size_t a = 0; a < arcs.size(); ++a) {
      for (std::size_t b = a + 1; b < arcs.size(); ++b) {
        const auto& A = boxes[a];
        const auto& B = boxes[b];
        if (A[2] < B[0] || B[2] < A[0] || A[3] < B[1] || B[3] < A[1]) continue;
        const auto& pa = arcs[a].points;
        const auto& pb = arcs[b].points;
        for (std::size_t i = 0; i + 1 < pa.size(); ++i)
          for (std::size_t j = 0; j + 1 < pb.size(); ++j)
            if (segments_cross(pa[i], pa[i + 1], pb[j], pb[j + 1]))
              geometry_error("arcs " + std::to_string(a) + " and " + std::to_string(b) + " cross");
      }
    }
  }

  if (!periodic) {
    // Boundary coverage: boundary arcs sweep the full circle.
    double sweep = 0.0;
    for (std::size_t a = 0; a < arcs.size(); ++a) {
      if (!g.boundary_arc_[a]) continue;
      double s = 0.0;
      const auto& pts = arcs[a].points;
      for (std::size_t i = 0; i + 1 < pts.size(); ++i) s += std::atan2(cross(pts[i], pts[i + 1]), dot(pts[i], pts[i + 1]));
      sweep += std::abs(s);
    }
    if (std::abs(sweep - kTwoPi) > 1e-6) geometry_error("arcs do not cover the boundary circle exactly once");
    for (int v = 0; v < nv; ++v) {
      if (!g.vertices_[v].boundary) continue;
      int nb = 0;
      for (std::size_t a = 0; a < arcs.size(); ++a)
        if (g.boundary_arc_[a]) nb += (arcs[a].v0 == v) + (arcs[a].v1 == v);
      if (nb != 2) geometry_error(fmt_vertex(v, g.vertices_[v].position) + " on the circle is not between two boundary arcs");
    }
  }

  // Connectivity of Gamma (boundary included).
  {
    std::vector<int> parent(nv);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (const auto& arc : arcs) parent[find(arc.v0)] = find(arc.v1);
    for (int v = 1; v < nv; ++v)
      if (find(v) != find(0)) geometry_error("grid is not connected (" + fmt_vertex(v, g.vertices_[v].position) + ")");
  }

  g.arcs_ = arcs;  // face_polygon reads arcs_ during assembly
  g.curves_.reserve(arcs.size());
  for (const auto& arc : arcs) g.curves_.emplace_back(arc.points);

  // Face assembly: orient each arc so consecutive arcs meet, then make the cycle CCW.
  std::vector<int> uses(arcs.size(), 0);
  g.cycles_.resize(faces.size());
  for (std::size_t f = 0; f < faces.size(); ++f) {
    const auto& ids = faces[f];
    const std::string tag = "face " + std::to_string(f);
    if (ids.empty()) geometry_error(tag + " is empty");
    for (int id : ids) {
      if (id < 0 || id >= static_cast<int>(arcs.size())) geometry_error(tag + " references a missing arc");
      uses[id] += 1;
    }
    std::vector<OrientedArc> cur;
    std::vector<OrientedArc> found;
    auto start_of = [&](const OrientedArc& o) {
      const auto& p = arcs[o.arc].points;
      return (o.reversed ? p.back() : p.front()) + o.shift;
    };
    auto end_of = [&](const OrientedArc& o) {
      const auto& p = arcs[o.arc].points;
      return (o.reversed ? p.front() : p.back()) + o.shift;
    };
    std::function<bool(std::size_t)> dfs = [&](std::size_t i) -> bool {
      if (i == ids.size()) {
        if (norm(end_of(cur.back()) - start_of(cur.front())) <= std::max(pos_tol, 1e-12)) {
          found = cur;
          return true;
        }
        return false;
      }
      for (int r = 0; r < 2; ++r) {
        OrientedArc o{ids[i], r == 1, {0.0, 0.0}};
        if (i > 0) {
          const Vec2 e = end_of(cur.back());
          const Vec2 s = start_of(o);
          Vec2 d = e - s;
          if (periodic) {
            d = {g.period_ * std::round(d.x / g.period_), g.period_ * std::round(d.y / g.period_)};
          } else {
            d = {0.0, 0.0};
          }
          o.shift = d;
          if (norm(start_of(o) - e) > std::max(pos_tol, 1e-12)) continue;
        }
        cur.push_back(o);
        if (dfs(i + 1)) return true;
        cur.pop_back();
        if (i == 0 && ids.size() == 1) break;
      }
      return false;
    };
    if (!dfs(0)) geometry_error(tag + " is not a closed cycle of arcs");
    g.cycles_[f] = found;
    std::vector<Vec2> poly = g.face_polygon(static_cast<int>(f));
    if (shoelace_area(poly) < 0) {
      std::reverse(found.begin(), found.end());
      for (auto& o : found) o.reversed = !o.reversed;
      g.cycles_[f] = found;
      poly = g.face_polygon(static_cast<int>(f));
    }
    if (!periodic) {
      std::vector<int> seen;
      for (const auto& o : found) seen.push_back(o.reversed ? arcs[o.arc].v1 : arcs[o.arc].v0);
      std::sort(seen.begin(), seen.end());
      if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) geometry_error(tag + " is not a simple cycle");
    }
    if (polyline_self_intersects(poly, true)) geometry_error(tag + " boundary is not simple");
    // Center periodic faces so the cycle starts inside the fundamental square.
    if (periodic) {
      const auto b = bbox(poly);
      const Vec2 c{0.5 * (b[0] + b[2]), 0.5 * (b[1] + b[3])};
      const Vec2 w = g.wrap(c);
      const Vec2 shift = w - c;
      for (auto& o : g.cycles_[f]) o.shift = o.shift + Vec2{std::round(shift.x / g.period_) * g.period_, std::round(shift.y / g.period_) * g.period_};
    }
  }
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    const int need = (!periodic && g.boundary_arc_[a]) ? 1 : 2;
    if (uses[a] != need)
      geometry_error("arc " + std::to_string(a) + " bounds " + std::to_string(uses[a]) + " face sides, expected " + std::to_string(need));
  }

  g.faces_ = std::move(faces);

  // Cubic pieces and spline-exact face areas.
  g.pieces_.resize(g.faces_.size());
  g.face_areas_.resize(g.faces_.size());
  g.face_boxes_.resize(g.faces_.size());
  double total = 0.0;
  for (std::size_t f = 0; f < g.faces_.size(); ++f) {
    for (const auto& o : g.cycles_[f]) {
      const auto& kn = g.curves_[o.arc].knots();
      const std::size_t np = kn.size() - 1;
      for (std::size_t i = 0; i < np; ++i) {
        const std::size_t k = o.reversed ? np - 1 - i : i;
        g.pieces_[f].push_back({o.arc, k, o.reversed, o.shift, kn[k + 1] - kn[k]});
      }
    }
    double area = 0.0;
    for (const auto& p : g.pieces_[f]) {
      for (int q = 0; q < 3; ++q) {
        const double u = kGlX[q] * p.h;
        area += kGlW[q] * p.h * 0.5 * cross(g.piece_point(p, u), g.piece_tangent(p, u));
      }
    }
    if (!(area > 0.0)) geometry_error("face " + std::to_string(f) + " has nonpositive area");
    g.face_areas_[f] = area;
    total += area;
    g.polys_.push_back(g.face_polygon(static_cast<int>(f)));
    auto b = bbox(g.polys_.back());
    const double pad = 1e-9 * R;
    g.face_boxes_[f] = {b[0] - pad, b[1] - pad, b[2] + pad, b[3] + pad};
  }
  if (std::abs(total - ambient_area) > tol.area_partition * ambient_area) {
    std::ostringstream os;
    os.precision(12);
    os << "face areas sum to " << total << " but the ambient area is " << ambient_area;
    geometry_error(os.str());
  }

  if (marked_points.size() != g.faces_.size())
    geometry_error("expected one marked point per face (" + std::to_string(g.faces_.size()) + ")");
  for (std::size_t f = 0; f < g.faces_.size(); ++f) {
    Vec2 p = marked_points[f];
    if (periodic) {
      const auto& b = g.face_boxes_[f];
      for (int sx = -1; sx <= 1; ++sx)
        for (int sy = -1; sy <= 1; ++sy) {
          const Vec2 q{p.x + sx * g.period_, p.y + sy * g.period_};
          if (q.x >= b[0] && q.x <= b[2] && q.y >= b[1] && q.y <= b[3] &&
              point_in_polygon(g.face_polygon(static_cast<int>(f)), q))
            p = q;
        }
    }
    const auto poly = g.face_polygon(static_cast<int>(f));
    if (!point_in_polygon(poly, p) || distance_to_polyline(poly, p, true) <= 1e-9 * R)
      geometry_error("marked point " + std::to_string(f) + " is not strictly inside face " + std::to_string(f));
    g.marked_.push_back(p);  // representative in the face frame
  }

  g.regularity_ = validate_regular(g);
  return g;
}

std::vector<double> face_areas(const Grid& g) { return g.face_areas(); }

double max_face_area(const Grid& g) {
  const auto& a = g.face_areas();
  return *std::max_element(a.begin(), a.end());
}

RegularityReport validate_regular(const Grid& g) {
  RegularityReport rep;
  const auto& arcs = g.arcs();
  const double tol = g.tolerances().regular_angle;
  for (int v = 0; v < static_cast<int>(g.vertices().size()); ++v) {
    const auto& vx = g.vertices()[v];
    std::vector<std::pair<Vec2, bool>> dirs;  // direction, is boundary arc
    for (int a = 0; a < static_cast<int>(arcs.size()); ++a) {
      const auto& c = g.arc_curve(a);
      if (arcs[a].v0 == v) {
        const Vec2 t = c.tangent(0.0);
        dirs.push_back({(1.0 / norm(t)) * t, g.boundary_arc(a)});
      }
      if (arcs[a].v1 == v) {
        const Vec2 t = c.tangent(c.length_parameter());
        dirs.push_back({(-1.0 / norm(t)) * t, g.boundary_arc(a)});
      }
    }
    SectorChart ch;
    ch.vertex = v;
    ch.center = vx.position;
    ch.boundary = vx.boundary;
    std::vector<double> ang;
    if (!vx.boundary) {
      for (const auto& [d, b] : dirs) {
        double t = std::atan2(d.y, d.x);
        if (t < 0) t += kTwoPi;
        ang.push_back(t);
      }
      std::sort(ang.begin(), ang.end());
      const std::size_t m = ang.size();
      for (std::size_t i = 0; i < m; ++i) {
        const double next = i + 1 < m ? ang[i + 1] : ang[0] + kTwoPi;
        ch.sector_angles.push_back(next - ang[i]);
      }
      ch.rotation = ang.front();
      const double ideal = kTwoPi / static_cast<double>(m);
      for (double s : ch.sector_angles) ch.deviations.push_back(std::abs(s - ideal));
    } else {
      const Vec2 e = (1.0 / norm(vx.position)) * vx.position;
      const Vec2 tau{-e.y, e.x};
      for (const auto& [d, b] : dirs) {
        double t = std::atan2(-dot(d, e), dot(d, tau));
        if (t < -0.5 * kPi) t += kTwoPi;
        ang.push_back(t);
      }
      std::sort(ang.begin(), ang.end());
      for (std::size_t i = 0; i + 1 < ang.size(); ++i) ch.sector_angles.push_back(ang[i + 1] - ang[i]);
      ch.rotation = std::atan2(tau.y, tau.x);
      const double ideal = kPi / static_cast<double>(ang.size() - 1);
      for (double s : ch.sector_angles) ch.deviations.push_back(std::abs(s - ideal));
      ch.deviations.push_back(std::abs(ang.front()));
      ch.deviations.push_back(std::abs(ang.back() - kPi));
    }
    double worst = 0.0;
    for (double d : ch.deviations) worst = std::max(worst, d);
    ch.regular = worst <= tol;
    if (!ch.regular && rep.regular) {
      rep.regular = false;
      std::ostringstream os;
      os.precision(6);
      os << "vertex " << v << " at (" << vx.position.x << ", " << vx.position.y << ") has sector angles [";
      for (std::size_t i = 0; i < ch.sector_angles.size(); ++i)
        os << (i ? ", " : "") << ch.sector_angles[i] / kTwoPi << "*2pi";
      os << "]";
      rep.failure = os.str();
    }
    rep.charts.push_back(std::move(ch));
  }
  return rep;
}

}  // namespace lvlab
