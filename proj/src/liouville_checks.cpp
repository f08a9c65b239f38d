#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lvlab/liouville.hpp"

namespace lvlab {

namespace {

double scale(const Grid& g) { return g.periodic() ? g.period() : g.radius(); }

Vec2 min_image(const Grid& g, Vec2 d) {
  if (!g.periodic()) return d;
  const double P = g.period();
  return {d.x - P * std::round(d.x / P), d.y - P * std::round(d.y / P)};
}

double segment_dist(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double t = std::clamp(dot(p - a, ab) / dot(ab, ab), 0.0, 1.0);
  return norm(p - (a + t * ab));
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

// Loci: Gamma, separatrices from p to the vertices, the chi and zeta switching
// circles of a vertex chart, and the neighbourhood of a pole.
bool near_singular_locus(const LiouvilleForm2D& f, int face, Vec2 x) {
  const Grid& g = f.grid();
  const double L = scale(g);
  const double margin = f.tolerances().singular_margin * L;
  if (g.distance_to_gamma(x) < margin) return true;
  for (const Vec2& p : f.poles(face))
    if (norm(x - p) < std::sqrt(f.tolerances().singular_margin) * L) return true;
  const auto& ff = f.foliation().face(face);
  // separatrices: segments from p to the vertex positions in the face frame
  std::size_t k = 0;
  for (const auto& oa : g.face_cycle(face)) {
    const Vec2 q = g.piece_point(ff.pieces[k], 0.0);
    if (segment_dist(x, ff.p, q) < margin) return true;
    k += g.arc_curve(oa.arc).knots().size() - 1;
  }
  for (const auto& v : f.smoothing()) {
    const double r = norm(min_image(g, x - v.q));
    for (double R : {0.5 * v.eps, v.eps})
      if (std::abs(r - std::sqrt(R / kPi)) < margin) return true;
    if (r < margin) return true;
  }
  return false;
}

}  // namespace

bool fd_safe(const LiouvilleForm2D& f, int face, Vec2 x) { return !near_singular_locus(f, face, x); }

Vec2 random_point(const Grid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  if (g.periodic()) return {g.period() * U(rng), g.period() * U(rng)};
  const double r = g.radius() * std::sqrt(U(rng));
  const double t = kTwoPi * U(rng);
  return {r * std::cos(t), r * std::sin(t)};
}

CheckResult check_closedness(const LiouvilleForm2D& f, int points, unsigned seed) {
  CheckResult res{"closedness", false, 0.0, f.tolerances().fd_rel, ""};
  const Grid& g = f.grid();
  const double h = f.tolerances().fd_step;
  std::mt19937_64 rng(seed);
  int used = 0, attempts = 0;
  while (used < points && attempts < 100 * points) {
    ++attempts;
    Vec2 x = random_point(g, rng);
    const int face = g.locate_face(x);
    if (face < 0 || near_singular_locus(f, face, x)) continue;
    auto lam = [&](Vec2 y) { return f.lambda_in_face(face, y); };
    const double dly_dx = (lam({x.x + h, x.y}).y - lam({x.x - h, x.y}).y) / (2 * h);
    const double dlx_dy = (lam({x.x, x.y + h}).x - lam({x.x, x.y - h}).x) / (2 * h);
    const double err = std::abs(dly_dx - dlx_dy - 1.0);
    res.value = std::max(res.value, err);
    ++used;
  }
  res.pass = used == points && res.value < res.bound;
  res.detail = std::to_string(used) + " points, worst |d lambda - omega| = " + fmt(res.value);
  return res;
}

CheckResult check_leaf_vanishing(const LiouvilleForm2D& f) {
  CheckResult res{"leaf-vanishing", false, 0.0, 1e-6, ""};
  const auto& fol = f.foliation();
  int used = 0;
  for (int i = 0; i < static_cast<int>(fol.face_count()); ++i) {
    const auto& ff = fol.face(i);
    for (int k = 0; k < 16; ++k) {
      const double theta = (k + 0.5) / 16.0;
      const double phi = fol.leaf_angle(i, theta);
      const Vec2 e{std::cos(phi), std::sin(phi)};
      for (double t : {0.3, 0.6, 0.9}) {
        const Vec2 x = fol.leaf(i, theta, t);
        bool skip = false;
        for (const auto& v : f.smoothing())
          if (norm(min_image(f.grid(), x - v.q)) < v.r_out) skip = true;
        for (const auto& s : f.splits())
          if (s.face == i && norm(x - ff.p) < s.r2) skip = true;
        if (skip) continue;
        const Vec2 l = f.lambda_in_face(i, x);
        const double along = std::abs(dot(l, e));
        const double across = std::abs(cross(e, l));
        res.value = std::max(res.value, along / across);
        ++used;
      }
    }
  }
  res.pass = used > 0 && res.value < res.bound;
  res.detail = std::to_string(used) + " leaf points, worst along/transverse = " + fmt(res.value);
  return res;
}

CheckResult check_swept_area(const LiouvilleForm2D& f) {
  CheckResult res{"swept-area", false, 0.0, 1e-4, ""};
  const auto& fol = f.foliation();
  for (int i = 0; i < static_cast<int>(fol.face_count()); ++i) {
    const double a = fol.face(i).area;
    for (int k = 1; k <= 9; ++k) {
      const double th = 0.1 * k;
      res.value = std::max(res.value, std::abs(fol.swept_area(i, th) - th * a) / a);
    }
  }
  res.pass = res.value <= res.bound;
  res.detail = "worst |Area(0, theta) - theta a| / a = " + fmt(res.value);
  return res;
}

CheckResult check_basin_partition(const LiouvilleForm2D& f, int points, double t_max, unsigned seed) {
  CheckResult res{"basin-partition", false, 0.0, 0.99, ""};
  const Grid& g = f.grid();
  std::mt19937_64 rng(seed);
  int agree = 0, outside_band = 0;
  for (int n = 0; n < points; ++n) {
    Vec2 x = random_point(g, rng);
    Vec2 y = x;
    const int face = g.locate_face(y);
    bool ok = false;
    try {
      const Trajectory tr = f.flow(x, t_max, 1);
      ok = face >= 0 && tr.classification == FlowClass::ConvergedTo && tr.face == face;
    } catch (const Error&) {
      ok = false;
    }
    if (ok) {
      ++agree;
    } else if (g.distance_to_gamma(x) >= f.tolerances().gamma_band) {
      ++outside_band;
    }
  }
  res.value = static_cast<double>(agree) / points;
  res.pass = res.value >= res.bound && outside_band == 0;
  res.detail = std::to_string(agree) + "/" + std::to_string(points) + " agree with face membership, " +
               std::to_string(outside_band) + " disagreements outside the Gamma band";
  return res;
}

CheckResult check_gamma_invariance(const LiouvilleForm2D& f, int points, double t_max) {
  CheckResult res{"gamma-invariance", false, 0.0, f.tolerances().gamma_band, ""};
  const Grid& g = f.grid();
  std::vector<Vec2> seeds;
  const int per_arc = std::max(2, points / static_cast<int>(g.arcs().size()));
  for (const auto& arc : g.arcs()) {
    const std::size_t n = arc.points.size();
    for (int k = 1; k <= per_arc; ++k) seeds.push_back(arc.points[(n - 1) * k / (per_arc + 1)]);
  }
  // Points on Gamma inside the smoothed vertex charts.
  for (const auto& v : f.smoothing()) {
    for (int j = 0; j < v.m; ++j) {
      const double ang = v.rotation + kTwoPi * j / v.m;
      for (double s : {0.2, 0.5, 0.8})
        seeds.push_back(v.q + (s * v.r_out) * Vec2{std::cos(ang), std::sin(ang)});
    }
  }
  const double band = disc_radius(f.tolerances().on_grid_band);
  int used = 0;
  for (const Vec2& x : seeds) {
    bool near_vertex = false;
    for (int w = 0; w < static_cast<int>(g.vertices().size()); ++w) {
      bool smoothed = false;
      for (const auto& v : f.smoothing()) smoothed |= v.vertex == w;
      if (!smoothed && norm(min_image(g, x - g.vertices()[w].position)) < 10 * band) near_vertex = true;
    }
    if (near_vertex) continue;
    for (int dir : {1, -1}) {
      const Trajectory tr = f.flow(x, t_max, dir);
      for (const auto& pt : tr.points) res.value = std::max(res.value, g.distance_to_gamma(pt.x));
    }
    ++used;
  }
  res.pass = used > 0 && res.value < res.bound;
  res.detail = std::to_string(used) + " Gamma points, worst distance to Gamma = " + fmt(res.value);
  return res;
}

CheckResult check_backward(const LiouvilleForm2D& f, int points, double t_max, unsigned seed) {
  CheckResult res{"backward-completeness", false, 0.0, 1e-9, ""};
  const Grid& g = f.grid();
  const auto& fol = f.foliation();
  std::mt19937_64 rng(seed);
  int bad = 0;
  for (int n = 0; n < points; ++n) {
    Vec2 x = random_point(g, rng);
    const int face = g.locate_face(x);
    if (face < 0) continue;
    const Trajectory tr = f.flow(x, t_max, -1);
    bool ok = tr.classification != FlowClass::Undecided || tr.diagnostic == "t_max reached";
    // Escape from the closed face, measured in its chart (R_i <= a_i inside).
    const double a = fol.face(face).area;
    for (const auto& pt : tr.points) {
      if (!std::isfinite(pt.x.x) || !std::isfinite(pt.x.y)) {
        ok = false;
        break;
      }
      res.value = std::max(res.value, fol.chart(face, pt.x).x / a - 1.0);
    }
    if (!ok) ++bad;
  }
  res.pass = bad == 0 && res.value <= res.bound;
  res.detail = std::to_string(bad) + " blown-up trajectories, worst relative overshoot of R_i past a_i = " + fmt(res.value);
  return res;
}

std::vector<CheckResult> check_form(const LiouvilleForm2D& f, const CheckOptions& opt) {
  return {check_closedness(f, opt.closedness_points, opt.seed),
          check_leaf_vanishing(f),
          check_swept_area(f),
          check_basin_partition(f, opt.basin_points, opt.t_max, opt.seed + 1),
          check_gamma_invariance(f, opt.gamma_points, opt.t_max),
          check_backward(f, std::max(1, opt.basin_points / 50), opt.t_max, opt.seed + 2)};
}

}  // namespace lvlab
