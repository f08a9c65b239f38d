#include "lvlab/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include <nlohmann/json.hpp>

#include "lvlab/ode.hpp"
#include "lvlab/quadrature.hpp"

namespace lvlab {

namespace {

constexpr double kGl3X[3] = {0.5 - 0.3872983346207417, 0.5, 0.5 + 0.3872983346207417};
constexpr double kGl3W[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

[[noreturn]] void construction_error(const std::string& msg) {
  throw Error(ErrorKind::Construction, "liouville2d", msg);
}
[[noreturn]] void domain_error(const std::string& msg) { throw Error(ErrorKind::Domain, "liouville2d", msg); }

Vec2 unit(double phi) { return {std::cos(phi), std::sin(phi)}; }

double angle_between(Vec2 a, Vec2 b) { return std::atan2(cross(a, b), dot(a, b)); }

// C^3 step from 0 at t <= 0 to 1 at t >= 1.
double smoothstep7(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * t * (35.0 + t * (-84.0 + t * (70.0 - 20.0 * t)));
}
double smoothstep7_d(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double s = t * (1.0 - t);
  return 140.0 * s * s * s;
}
double smoothstep7_dd(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double s = t * (1.0 - t);
  return 420.0 * s * s * (1.0 - 2.0 * t);
}

double grid_scale(const Grid& g) { return g.periodic() ? g.period() : g.radius(); }

Vec2 min_image(const Grid& g, Vec2 d) {
  if (!g.periodic()) return d;
  const double P = g.period();
  return {d.x - P * std::round(d.x / P), d.y - P * std::round(d.y / P)};
}

// Half of the integrand of the fan area: 1/2 cross(x - p, x').
double fan_density(const Grid& g, const BoundaryPiece& pc, Vec2 p, double u) {
  return 0.5 * cross(g.piece_point(pc, u) - p, g.piece_tangent(pc, u));
}

double fan_partial(const Grid& g, const BoundaryPiece& pc, Vec2 p, double u) {
  double s = 0.0;
  for (int q = 0; q < 3; ++q) s += kGl3W[q] * fan_density(g, pc, p, kGl3X[q] * u);
  return s * u;
}

struct RayHit {
  std::size_t piece = 0;
  double u = 0.0;
  double rho = 0.0;
};

double unwrap_from(double phi, double phi0) {
  double d = std::fmod(phi - phi0, kTwoPi);
  if (d < 0) d += kTwoPi;
  return phi0 + d;
}

RayHit ray_hit(const Grid& g, const FaceFoliation& ff, double phi) {
  phi = unwrap_from(phi, ff.phi0);
  const auto& pp = ff.piece_phi;
  auto it = std::upper_bound(pp.begin(), pp.end(), phi);
  std::size_t k = it == pp.begin() ? 0 : static_cast<std::size_t>(it - pp.begin()) - 1;
  k = std::min(k, ff.pieces.size() - 1);
  const auto& pc = ff.pieces[k];
  const Vec2 e = unit(phi);
  auto f = [&](double u) { return cross(e, g.piece_point(pc, u) - ff.p); };
  double lo = 0.0, hi = pc.h;
  double flo = f(lo), fhi = f(hi);
  double u;
  if (flo >= 0.0) {
    u = lo;
  } else if (fhi <= 0.0) {
    u = hi;
  } else {
    u = lo - flo * (hi - lo) / (fhi - flo);
    for (int it2 = 0; it2 < 60; ++it2) {
      const double fu = f(u);
      if (fu == 0.0) break;
      if (fu < 0.0) lo = u; else hi = u;
      const double df = cross(e, g.piece_tangent(pc, u));
      double un = df > 0.0 ? u - fu / df : 0.5 * (lo + hi);
      if (!(un > lo && un < hi)) un = 0.5 * (lo + hi);
      if (std::abs(un - u) <= 1e-15 * pc.h) {
        u = un;
        break;
      }
      u = un;
    }
  }
  return {k, u, dot(e, g.piece_point(pc, u) - ff.p)};
}

}  // namespace

// ---------------------------------------------------------------- foliation

Foliation Foliation::build(const Grid& g) {
  if (!g.regular()) construction_error("grid is not regular: " + g.regularity().failure);
  Foliation fol;
  fol.grid_ = &g;
  for (int f = 0; f < static_cast<int>(g.face_count()); ++f) {
    FaceFoliation ff;
    ff.face = f;
    ff.p = g.marked_points()[f];
    ff.pieces = g.face_pieces(f);
    const std::string tag = "face " + std::to_string(f);
    // Star-shapedness about p: the boundary turns strictly counter-clockwise as seen from p.
    for (const auto& pc : ff.pieces) {
      for (int j = 0; j <= 8; ++j) {
        const double u = pc.h * j / 8.0;
        if (!(fan_density(g, pc, ff.p, u) > 0.0))
          construction_error(tag + " is not star-shaped about its marked point");
      }
    }
    const Vec2 start = g.piece_point(ff.pieces.front(), 0.0) - ff.p;
    ff.phi0 = std::atan2(start.y, start.x);
    ff.piece_phi.push_back(ff.phi0);
    ff.piece_F.push_back(0.0);
    for (const auto& pc : ff.pieces) {
      const Vec2 a = g.piece_point(pc, 0.0) - ff.p, b = g.piece_point(pc, pc.h) - ff.p;
      const double dphi = angle_between(a, b);
      if (!(dphi > 0.0)) construction_error(tag + " is not star-shaped about its marked point");
      ff.piece_phi.push_back(ff.piece_phi.back() + dphi);
      ff.piece_area.push_back(fan_partial(g, pc, ff.p, pc.h));
      ff.piece_F.push_back(ff.piece_F.back() + ff.piece_area.back());
    }
    if (std::abs(ff.piece_phi.back() - ff.phi0 - kTwoPi) > 1e-9)
      construction_error(tag + " boundary does not wind once around its marked point");
    ff.piece_phi.back() = ff.phi0 + kTwoPi;
    ff.area = ff.piece_F.back();

    // Vertices sit at the starts of the oriented arcs.
    std::size_t k = 0;
    for (const auto& oa : g.face_cycle(f)) {
      const auto& arc = g.arcs()[oa.arc];
      ff.vertices.push_back(oa.reversed ? arc.v1 : arc.v0);
      ff.vertex_theta.push_back(ff.piece_F[k] / ff.area);
      ff.vertex_piece.push_back(k);
      k += g.arc_curve(oa.arc).knots().size() - 1;
    }
    for (std::size_t j = 0; j < ff.vertex_theta.size(); ++j) {
      const double next = j + 1 < ff.vertex_theta.size() ? ff.vertex_theta[j + 1] : 1.0;
      ff.beta.push_back(next - ff.vertex_theta[j]);
    }
    ff.min_rho = distance_to_polyline(g.cached_polygon(f), ff.p, true);
    fol.faces_.push_back(std::move(ff));
  }
  return fol;
}

Foliation build_foliation(const Grid& g) { return Foliation::build(g); }

double Foliation::rho(int i, double phi) const { return ray_hit(*grid_, faces_[i], phi).rho; }

double Foliation::fan_area(int i, double phi) const {
  const auto& ff = faces_[i];
  const RayHit h = ray_hit(*grid_, ff, phi);
  return ff.piece_F[h.piece] + fan_partial(*grid_, ff.pieces[h.piece], ff.p, h.u);
}

double Foliation::leaf_angle(int i, double theta) const {
  const auto& ff = faces_[i];
  theta -= std::floor(theta);
  const double target = theta * ff.area;
  auto it = std::upper_bound(ff.piece_F.begin(), ff.piece_F.end(), target);
  std::size_t k = it == ff.piece_F.begin() ? 0 : static_cast<std::size_t>(it - ff.piece_F.begin()) - 1;
  k = std::min(k, ff.pieces.size() - 1);
  const auto& pc = ff.pieces[k];
  const double rem = target - ff.piece_F[k];
  double lo = 0.0, hi = pc.h;
  double u = pc.h * rem / (ff.piece_F[k + 1] - ff.piece_F[k]);
  for (int it2 = 0; it2 < 60; ++it2) {
    const double G = fan_partial(*grid_, pc, ff.p, u) - rem;
    if (G == 0.0) break;
    if (G < 0.0) lo = u; else hi = u;
    const double dG = fan_density(*grid_, pc, ff.p, u);
    double un = u - G / dG;
    if (!(un > lo && un < hi)) un = 0.5 * (lo + hi);
    if (std::abs(un - u) <= 1e-15 * pc.h) {
      u = un;
      break;
    }
    u = un;
  }
  const Vec2 a = grid_->piece_point(pc, 0.0) - ff.p, b = grid_->piece_point(pc, u) - ff.p;
  return ff.piece_phi[k] + angle_between(a, b);
}

double Foliation::fan_area_from_vertex(int i, Vec2 qf, Vec2 x) const {
  const auto& ff = faces_[i];
  std::size_t kq = ff.vertex_piece.front();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k : ff.vertex_piece) {
    const double d = norm(grid_->piece_point(ff.pieces[k], 0.0) - qf);
    if (d < best) {
      best = d;
      kq = k;
    }
  }
  const Vec2 d = x - ff.p;
  const RayHit h = ray_hit(*grid_, ff, std::atan2(d.y, d.x));
  const std::size_t n = ff.pieces.size();
  const std::size_t fwd = (h.piece + n - kq) % n;
  double s = fan_partial(*grid_, ff.pieces[h.piece], ff.p, h.u);
  if (fwd <= n / 2) {
    for (std::size_t j = 0; j < fwd; ++j) s += ff.piece_area[(kq + j) % n];
  } else {
    for (std::size_t j = 0; j < n - fwd; ++j) s -= ff.piece_area[(h.piece + j) % n];
  }
  return s;
}

Vec2 Foliation::leaf(int i, double theta, double t) const {
  const double phi = leaf_angle(i, theta);
  return faces_[i].p + (t * rho(i, phi)) * unit(phi);
}

Vec2 Foliation::chart(int i, Vec2 x) const {
  const auto& ff = faces_[i];
  const Vec2 d = x - ff.p;
  const double phi = std::atan2(d.y, d.x);
  const RayHit h = ray_hit(*grid_, ff, phi);
  const double F = ff.piece_F[h.piece] + fan_partial(*grid_, ff.pieces[h.piece], ff.p, h.u);
  return {ff.area * dot(d, d) / (h.rho * h.rho), F / ff.area};
}

double Foliation::swept_area(int i, double theta) const {
  const auto& ff = faces_[i];
  const auto& poly = grid_->cached_polygon(i);
  const double phi_end = leaf_angle(i, theta);
  std::vector<Vec2> fan{ff.p};
  double phi = ff.phi0;
  Vec2 prev = poly.front() - ff.p;
  fan.push_back(poly.front());
  for (std::size_t k = 1; k < poly.size(); ++k) {
    const Vec2 d = poly[k] - ff.p;
    phi += angle_between(prev, d);
    prev = d;
    if (phi >= phi_end) break;
    fan.push_back(poly[k]);
  }
  fan.push_back(leaf(i, theta, 1.0));
  return shoelace_area(fan);
}

// ---------------------------------------------------------------- form

double LiouvilleForm2D::chi(const VertexSmoothing& v, double R) {
  const double e = v.eps, h = 0.5 * e;
  if (R >= e) return R;
  if (R <= h) return v.kappa * h * std::pow(R / h, 0.5 * v.m);
  const double t = (R - h) / h;
  const double y0 = v.kappa * h, m0 = v.kappa * 0.5 * v.m, y1 = e, m1 = 1.0;
  const double h00 = 2 * t * t * t - 3 * t * t + 1, h10 = t * t * t - 2 * t * t + t;
  const double h01 = -2 * t * t * t + 3 * t * t, h11 = t * t * t - t * t;
  return y0 * h00 + h * m0 * h10 + y1 * h01 + h * m1 * h11;
}

double LiouvilleForm2D::chi_prime(const VertexSmoothing& v, double R) {
  const double e = v.eps, h = 0.5 * e;
  if (R >= e) return 1.0;
  if (R <= h) return v.kappa * 0.5 * v.m * std::pow(R / h, 0.5 * v.m - 1.0);
  const double t = (R - h) / h;
  const double y0 = v.kappa * h, m0 = v.kappa * 0.5 * v.m, y1 = e, m1 = 1.0;
  const double d00 = 6 * t * t - 6 * t, d10 = 3 * t * t - 4 * t + 1;
  const double d01 = -6 * t * t + 6 * t, d11 = 3 * t * t - 2 * t;
  return (y0 * d00 + h * m0 * d10 + y1 * d01 + h * m1 * d11) / h;
}

LiouvilleForm2D LiouvilleForm2D::build(const Grid& grid, bool smoothing) {
  LiouvilleForm2D f;
  f.grid_ = std::make_shared<const Grid>(grid);
  f.fol_ = std::make_shared<const Foliation>(Foliation::build(*f.grid_));
  f.smoothing_ = smoothing;
  if (!smoothing) return f;

  const Grid& g = *f.grid_;
  const auto& tol = g.tolerances();
  const double L = grid_scale(g);
  for (int v = 0; v < static_cast<int>(g.vertices().size()); ++v) {
    const auto& vx = g.vertices()[v];
    if (vx.boundary) continue;
    VertexSmoothing vs;
    vs.vertex = v;
    vs.q = vx.position;
    vs.m = vx.valence;
    vs.rotation = g.regularity().charts[v].rotation;
    // Straight reach of each incident arc, measured on the spline (not only the samples).
    double reach = std::numeric_limits<double>::infinity();
    for (int a = 0; a < static_cast<int>(g.arcs().size()); ++a) {
      const auto& arc = g.arcs()[a];
      for (int end = 0; end < 2; ++end) {
        if ((end == 0 ? arc.v0 : arc.v1) != v) continue;
        const auto& c = g.arc_curve(a);
        const auto& kn = c.knots();
        const double s_end = end == 0 ? kn.front() : kn.back();
        const Vec2 q0 = c.point(s_end);
        Vec2 dir = end == 0 ? c.tangent(s_end) : -1.0 * c.tangent(s_end);
        dir = (1.0 / norm(dir)) * dir;
        double good = 0.0;
        const std::size_t n = kn.size();
        for (std::size_t i = 1; i < n; ++i) {
          bool ok = true;
          for (double frac : {0.5, 1.0}) {
            const std::size_t i0 = end == 0 ? i - 1 : n - i, i1 = end == 0 ? i : n - 1 - i;
            const double s = kn[i0] + frac * (kn[i1] - kn[i0]);
            const Vec2 d = c.point(s) - q0;
            if (std::abs(cross(dir, d)) > tol.straight_chart * L || dot(dir, d) <= 0.0) ok = false;
          }
          if (!ok) break;
          const std::size_t i1 = end == 0 ? i : n - 1 - i;
          good = norm(c.point(kn[i1]) - q0);
        }
        reach = std::min(reach, good);
      }
    }
    if (!(reach > 0.0))
      construction_error("vertex " + std::to_string(v) + " has no straight chart (incident arcs curve at the vertex)");
    double r = 0.25 * reach;
    for (std::size_t i = 0; i < g.face_count(); ++i)
      r = std::min(r, 0.25 * norm(min_image(g, g.marked_points()[i] - vs.q)));
    for (int w = 0; w < static_cast<int>(g.vertices().size()); ++w) {
      if (w == v) continue;
      r = std::min(r, 0.25 * norm(min_image(g, g.vertices()[w].position - vs.q)));
    }
    if (!g.periodic()) r = std::min(r, 0.25 * (g.radius() - norm(vs.q)));
    vs.r_out = r;
    vs.eps = 0.5 * kPi * r * r;
    vs.kappa = 2.0 / (3.0 + 0.5 * vs.m);
    f.vertex_.push_back(vs);
  }
  return f;
}

const WeightSplit* LiouvilleForm2D::split_of(int face) const {
  for (const auto& s : splits_)
    if (s.face == face) return &s;
  return nullptr;
}

const VertexSmoothing* LiouvilleForm2D::vertex_disc(Vec2 x, Vec2* d) const {
  for (const auto& v : vertex_) {
    const Vec2 dd = min_image(*grid_, x - v.q);
    if (dot(dd, dd) < v.r_out * v.r_out) {
      if (d) *d = dd;
      return &v;
    }
  }
  return nullptr;
}

Vec2 LiouvilleForm2D::lambda_unsplit(int face, Vec2 x) const {
  const auto& ff = fol_->faces_[face];
  const Vec2 d = x - ff.p;
  const double r2 = dot(d, d);
  if (r2 == 0.0) domain_error("evaluation at the marked point of face " + std::to_string(face));
  const double rho = ray_hit(*grid_, ff, std::atan2(d.y, d.x)).rho;
  const double c = 0.5 - 0.5 * rho * rho / r2;
  return {-c * d.y, c * d.x};
}

namespace {

struct SplitMap {
  Vec2 y;
  double J[2][2];
};

// Time-one map of the cut-off translation Hamiltonian H = cross(w, x - p) psi(|x - p|)
// and its Jacobian (variational equation).
SplitMap split_flow(Vec2 x, Vec2 p, Vec2 w, double r1, double r2) {
  const double s0 = norm(x - p);
  if (s0 + norm(w) <= r1) return {x - w, {{1, 0}, {0, 1}}};
  if (s0 >= r2 + norm(w)) return {x, {{1, 0}, {0, 1}}};
  auto rhs = [&](double, const State<6>& st) {
    const Vec2 d{st[0] - p.x, st[1] - p.y};
    const double s = norm(d);
    const double tt = (s - r1) / (r2 - r1);
    const double psi = 1.0 - smoothstep7(tt);
    const double dpsi = -smoothstep7_d(tt) / (r2 - r1);
    const double ddpsi = -smoothstep7_dd(tt) / ((r2 - r1) * (r2 - r1));
    const double L = w.x * d.y - w.y * d.x;
    const double Lx = -w.y, Ly = w.x;
    double Hx = psi * Lx, Hy = psi * Ly, Hxx = 0, Hxy = 0, Hyy = 0;
    if (dpsi != 0.0 || ddpsi != 0.0) {
      const double sx = d.x / s, sy = d.y / s;
      const double s3 = s * s * s;
      const double sxx = d.y * d.y / s3, syy = d.x * d.x / s3, sxy = -d.x * d.y / s3;
      Hx += L * dpsi * sx;
      Hy += L * dpsi * sy;
      Hxx = 2 * dpsi * sx * Lx + L * (ddpsi * sx * sx + dpsi * sxx);
      Hxy = dpsi * (sy * Lx + sx * Ly) + L * (ddpsi * sx * sy + dpsi * sxy);
      Hyy = 2 * dpsi * sy * Ly + L * (ddpsi * sy * sy + dpsi * syy);
    }
    // X = (-H_y, H_x); DX = [[-Hxy, -Hyy], [Hxx, Hxy]].
    const double A00 = -Hxy, A01 = -Hyy, A10 = Hxx, A11 = Hxy;
    State<6> out;
    out[0] = -Hy;
    out[1] = Hx;
    out[2] = A00 * st[2] + A01 * st[4];
    out[3] = A00 * st[3] + A01 * st[5];
    out[4] = A10 * st[2] + A11 * st[4];
    out[5] = A10 * st[3] + A11 * st[5];
    return out;
  };
  OdeOptions opt;
  opt.abs_tol = 1e-13;
  opt.rel_tol = 1e-13;
  opt.h_init = 0.05;
  const auto res = integrate<6>(rhs, State<6>{x.x, x.y, 1, 0, 0, 1}, 0.0, 1.0, opt);
  if (res.status != OdeStatus::Reached) domain_error("split map integration failed: " + res.diagnostic);
  return {{res.y[0], res.y[1]}, {{res.y[2], res.y[3]}, {res.y[4], res.y[5]}}};
}

}  // namespace

Vec2 LiouvilleForm2D::lambda_face(int face, Vec2 x) const {
  const WeightSplit* sp = split_of(face);
  if (sp) {
    const Vec2 p = fol_->faces_[face].p;
    if (norm(x - p) < sp->r2) {
      const double a = fol_->faces_[face].area;
      Vec2 out{0, 0};
      const Vec2 w[2] = {sp->p1 - p, sp->p2 - p};
      const double wt[2] = {sp->a1 / a, sp->a2 / a};
      for (int j = 0; j < 2; ++j) {
        const SplitMap m = split_flow(x, p, w[j], sp->r1, sp->r2);
        const Vec2 l = lambda_unsplit(face, m.y);
        // (phi^* lambda)_x = Dphi^T lambda(phi(x))
        out.x += wt[j] * (m.J[0][0] * l.x + m.J[1][0] * l.y);
        out.y += wt[j] * (m.J[0][1] * l.x + m.J[1][1] * l.y);
      }
      return out;
    }
  }
  return lambda_unsplit(face, x);
}

Vec2 LiouvilleForm2D::lambda_vertex(const VertexSmoothing& v, int face, Vec2 x, Vec2 d) const {
  const double r2 = dot(d, d);
  const double R = kPi * r2;
  if (R >= v.eps) return lambda_face(face, x);
  if (r2 == 0.0) return {0.0, 0.0};
  const double th = (std::atan2(d.y, d.x) - v.rotation) / kTwoPi;
  const double m = v.m;
  const double sn = std::sin(kTwoPi * m * th), cs = std::cos(kTwoPi * m * th);
  const Vec2 dR{kTwoPi * d.x, kTwoPi * d.y};
  const Vec2 dth{-d.y / (kTwoPi * r2), d.x / (kTwoPi * r2)};
  // lambda_q^chi = (R - chi cos) dtheta - chi' sin / (2 pi m) dR
  auto model = [&](double c, double cp) {
    return (R - c * cs) * dth - (cp * sn / (kTwoPi * m)) * dR;
  };
  const Vec2 lam_chi = model(chi(v, R), chi_prime(v, R));
  if (R <= 0.5 * v.eps) return lam_chi;
  // Blend: lambda' = lambda_q^chi + zeta' g dR + zeta (lambda_face - lambda_q).
  const double t = (R - 0.5 * v.eps) / (0.5 * v.eps);
  const double zeta = smoothstep7(t), dzeta = smoothstep7_d(t) / (0.5 * v.eps);
  const Vec2 lam_q = model(R, 1.0);
  const Vec2 lam_f = lambda_face(face, x);
  const auto& ff = fol_->faces_[face];
  const Vec2 qf = x - d;
  const double gval =
      0.5 * cross(qf - ff.p, x - qf) - fol_->fan_area_from_vertex(face, qf, x) + R * sn / (kTwoPi * m);
  return lam_chi + (dzeta * gval) * dR + zeta * (lam_f - lam_q);
}

Vec2 LiouvilleForm2D::lambda_in_face(int face, Vec2 x) const {
  Vec2 d;
  if (const VertexSmoothing* v = vertex_disc(x, &d)) return lambda_vertex(*v, face, x, d);
  return lambda_face(face, x);
}

namespace {

int nearest_face(const Grid& g, Vec2& x) {
  int best = -1;
  double bd = std::numeric_limits<double>::infinity();
  Vec2 bx = x;
  std::vector<Vec2> probes{x};
  if (g.periodic()) {
    const Vec2 w = g.wrap(x);
    probes.clear();
    for (int sx = -1; sx <= 1; ++sx)
      for (int sy = -1; sy <= 1; ++sy) probes.push_back({w.x + sx * g.period(), w.y + sy * g.period()});
  }
  for (int f = 0; f < static_cast<int>(g.face_count()); ++f)
    for (const Vec2& q : probes) {
      const double d = distance_to_polyline(g.cached_polygon(f), q, true);
      if (d < bd) {
        bd = d;
        best = f;
        bx = q;
      }
    }
  x = bx;
  return best;
}

// Face of x (x moved into the face frame); points on Gamma go to the nearest face.
int face_of(const Grid& g, Vec2& x) {
  if (!g.periodic() && norm(x) > g.radius() * (1.0 + 1e-9)) domain_error("point lies outside the disc");
  const int f = g.locate_face(x);
  if (f >= 0) return f;
  // Slivers between a boundary chord and the spline belong to the adjacent face.
  return nearest_face(g, x);
}

}  // namespace

Vec2 LiouvilleForm2D::lambda(Vec2 x) const {
  const Grid& g = *grid_;
  const double band = disc_radius(g.tolerances().on_grid_band);
  for (const auto& v : g.vertices()) {
    if (norm(min_image(g, x - v.position)) >= band) continue;
    bool smoothed = false;
    for (const auto& s : vertex_)
      if (norm(s.q - v.position) == 0.0) smoothed = true;
    if (!smoothed) domain_error("evaluation at a singular vertex of Gamma (smoothing not enabled there)");
  }
  const int f = face_of(g, x);
  for (const Vec2& p : poles(f))
    if (norm(x - p) == 0.0) domain_error("evaluation at a pole of face " + std::to_string(f));
  return lambda_in_face(f, x);
}

Vec2 LiouvilleForm2D::X(Vec2 x) const {
  const Vec2 l = lambda(x);
  return {l.y, -l.x};
}

std::vector<Vec2> LiouvilleForm2D::poles(int face) const {
  if (const WeightSplit* s = split_of(face)) return {s->p1, s->p2};
  return {fol_->faces_[face].p};
}

double LiouvilleForm2D::residue_loop_integral(int face, double rho, int pole) const {
  if (face < 0 || face >= static_cast<int>(grid_->face_count()))
    throw Error(ErrorKind::Precondition, "liouville2d", "face index out of range");
  if (!(rho > 0.0)) throw Error(ErrorKind::Precondition, "liouville2d", "loop radius must be positive");
  const auto& ff = fol_->faces_[face];
  const WeightSplit* sp = split_of(face);
  if (!sp) {
    if (pole != 0) throw Error(ErrorKind::Precondition, "liouville2d", "face has a single pole");
    if (rho >= grid_->tolerances().chart_fraction * ff.area) domain_error("loop leaves the chart at the marked point");
    // {R = rho} is the boundary scaled by sqrt(rho / a) towards p.
    const double s = std::sqrt(rho / ff.area);
    double sum = 0.0;
    for (const auto& pc : ff.pieces) {
      for (int q = 0; q < 8; ++q) {
        const double u = kGl8X[q] * pc.h;
        const Vec2 y = ff.p + s * (grid_->piece_point(pc, u) - ff.p);
        const Vec2 dy = s * grid_->piece_tangent(pc, u);
        sum += kGl8W[q] * pc.h * dot(lambda_in_face(face, y), dy);
      }
    }
    return sum;
  }
  if (pole < 0 || pole > 1) throw Error(ErrorKind::Precondition, "liouville2d", "pole index out of range");
  const double r = disc_radius(rho);
  const double delta = 0.5 * norm(sp->p2 - sp->p1);
  if (r >= delta) domain_error("loop leaves the chart at the split pole");
  const Vec2 c = pole == 0 ? sp->p1 : sp->p2;
  // lambda is only continuous across the rays from p through the face vertices; break
  // the quadrature where either translated copy of the loop crosses one of them.
  std::vector<double> cuts{0.0, kTwoPi};
  for (const Vec2 w : {sp->p1 - ff.p, sp->p2 - ff.p}) {
    const Vec2 cc = c - w - ff.p;  // loop centre relative to p after the translation
    for (std::size_t k : ff.vertex_piece) {
      const Vec2 u = grid_->piece_point(ff.pieces[k], 0.0) - ff.p;
      const Vec2 e = (1.0 / norm(u)) * u;
      const double b = dot(e, cc), disc = b * b - dot(cc, cc) + r * r;
      if (disc < 0.0) continue;
      for (double sgn : {-1.0, 1.0}) {
        const double sr = b + sgn * std::sqrt(disc);
        if (sr < 0.0) continue;
        const Vec2 y = sr * e - cc;
        double t = std::atan2(y.y, y.x);
        if (t < 0.0) t += kTwoPi;
        cuts.push_back(t);
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double len = cuts[k + 1] - cuts[k];
    if (len <= 0.0) continue;
    const int panels = std::max(1, static_cast<int>(std::ceil(len / (kTwoPi / 64))));
    const double hp = len / panels;
    for (int j = 0; j < panels; ++j) {
      for (int q = 0; q < 8; ++q) {
        const double t = cuts[k] + hp * (j + kGl8X[q]);
        const Vec2 y = c + r * unit(t);
        const Vec2 dy{-r * std::sin(t), r * std::cos(t)};
        sum += kGl8W[q] * hp * dot(lambda_in_face(face, y), dy);
      }
    }
  }
  return sum;
}

LiouvilleForm2D split_weights(const LiouvilleForm2D& f, int face, double a1, double a2) {
  if (face < 0 || face >= static_cast<int>(f.grid().face_count()))
    throw Error(ErrorKind::Precondition, "liouville2d", "face index out of range");
  if (!(a1 > 0.0) || !(a2 > 0.0)) throw Error(ErrorKind::Precondition, "liouville2d", "split parts must be positive");
  const auto& ff = f.foliation().face(face);
  if (std::abs(a1 + a2 - ff.area) > f.tolerances().area_partition * ff.area)
    throw Error(ErrorKind::Precondition, "liouville2d", "split parts must add up to the face area");
  if (f.split_of(face)) throw Error(ErrorKind::Precondition, "liouville2d", "face is already split");
  LiouvilleForm2D out = f;
  WeightSplit s;
  s.face = face;
  s.a1 = a1;
  s.a2 = a2;
  s.r2 = 0.4 * ff.min_rho;
  s.r1 = 0.5 * s.r2;
  const double delta = 0.25 * s.r1;
  s.p1 = ff.p - Vec2{delta, 0.0};
  s.p2 = ff.p + Vec2{delta, 0.0};
  out.splits_.push_back(s);
  return out;
}

// ---------------------------------------------------------------- flow

Trajectory LiouvilleForm2D::flow(Vec2 start, double t_max, int direction) const {
  if (!(t_max > 0.0)) throw Error(ErrorKind::Precondition, "liouville2d", "t_max must be positive");
  const Grid& g = *grid_;
  const auto& tol = g.tolerances();
  const double dir = direction >= 0 ? 1.0 : -1.0;
  Trajectory tr;
  Vec2 x = start;
  const int face = face_of(g, x);
  tr.face = face;
  const auto& ff = fol_->faces_[face];
  const WeightSplit* sp = split_of(face);
  for (const Vec2& p : poles(face)) {
    if (norm(x - p) == 0.0) {
      tr.points = {{0.0, x}, {t_max, x}};
      tr.classification = FlowClass::ConvergedTo;
      tr.hit_time = 0.0;
      tr.chart_time = 0.0;
      return tr;
    }
  }
  auto rhs = [&](double, const State<2>& y) {
    const Vec2 l = lambda_in_face(face, {y[0], y[1]});
    return State<2>{dir * l.y, -dir * l.x};
  };
  auto event = [&](double, const State<2>& y) {
    if (dir < 0) return false;
    const Vec2 z{y[0], y[1]};
    if (sp) return norm(z - ff.p) < sp->r2;
    if (vertex_disc(z, nullptr)) return false;
    return fol_->chart(face, z).x < tol.chart_fraction * ff.area;
  };
  auto observe = [&](double t, const State<2>& y) { tr.points.push_back({t, {y[0], y[1]}}); };
  OdeOptions opt;
  opt.abs_tol = tol.flow_abs_tol;
  opt.rel_tol = tol.flow_rel_tol;
  const auto res = integrate<2>(rhs, State<2>{x.x, x.y}, 0.0, t_max, opt, event, observe);
  const Vec2 end{res.y[0], res.y[1]};
  if (res.status == OdeStatus::Event) {
    tr.chart_time = res.t;
    if (sp) {
      tr.classification = FlowClass::ConvergedTo;
      tr.hit_time = res.t;
      return tr;
    }
    // Closed form in the chart: R(t) = a + (R0 - a) e^(t - te) along the same leaf.
    const double a = ff.area;
    const double R0 = fol_->chart(face, end).x;
    const Vec2 d = end - ff.p;
    const double phi = std::atan2(d.y, d.x);
    const double rb = fol_->rho(face, phi);
    const double t_plus = res.t + std::log(a / (a - R0));
    const double t_end = std::min(t_plus, t_max);
    const int n = 16;
    for (int k = 1; k <= n; ++k) {
      const double t = res.t + (t_end - res.t) * k / n;
      const double R = std::max(0.0, a + (R0 - a) * std::exp(t - res.t));
      tr.points.push_back({t, ff.p + (std::sqrt(R / a) * rb) * unit(phi)});
    }
    const double dist = norm(tr.points.back().x - ff.p);
    if (t_plus <= t_max || dist < tol.convergence) {
      tr.classification = FlowClass::ConvergedTo;
      tr.hit_time = t_plus;
    } else {
      tr.classification = FlowClass::Undecided;
      tr.diagnostic = "t_max reached inside the chart at the marked point";
    }
    return tr;
  }
  if (res.status != OdeStatus::Reached) {
    tr.classification = FlowClass::Undecided;
    tr.diagnostic = res.diagnostic;
    return tr;
  }
  if (g.distance_to_gamma(end) < tol.gamma_band) {
    tr.classification = FlowClass::OnSkeleton;
  } else {
    tr.classification = FlowClass::Undecided;
    tr.diagnostic = "t_max reached";
  }
  return tr;
}

// ---------------------------------------------------------------- JSON

std::string form_to_json(const LiouvilleForm2D& f) {
  nlohmann::ordered_json j;
  j["format"] = "lvlab-form";
  j["grid"] = nlohmann::ordered_json::parse(grid_to_json(f.grid()));
  j["smoothing"] = f.smoothed();
  j["splits"] = nlohmann::ordered_json::array();
  for (const auto& s : f.splits()) j["splits"].push_back({{"face", s.face}, {"a1", s.a1}, {"a2", s.a2}});
  return j.dump(1) + "\n";
}

LiouvilleForm2D form_from_json(const std::string& text, const Tolerances& tol) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, "liouville2d", std::string("invalid form file: ") + e.what());
  }
  if (!j.is_object() || j.value("format", "") != "lvlab-form" || !j.contains("grid"))
    throw Error(ErrorKind::Parse, "liouville2d", "not an lvlab-form document");
  const Grid g = grid_from_json(j["grid"].dump(), tol);
  bool smooth = true;
  if (j.contains("smoothing")) {
    if (!j["smoothing"].is_boolean()) throw Error(ErrorKind::Parse, "liouville2d", "smoothing must be a boolean");
    smooth = j["smoothing"].get<bool>();
  }
  LiouvilleForm2D f = LiouvilleForm2D::build(g, smooth);
  if (j.contains("splits")) {
    if (!j["splits"].is_array()) throw Error(ErrorKind::Parse, "liouville2d", "splits must be an array");
    for (const auto& s : j["splits"]) {
      if (!s.is_object() || !s.contains("face") || !s.contains("a1") || !s.contains("a2") ||
          !s["face"].is_number_integer() || !s["a1"].is_number() || !s["a2"].is_number())
        throw Error(ErrorKind::Parse, "liouville2d", "split entries need integer face and numeric a1, a2");
      f = split_weights(f, s["face"].get<int>(), s["a1"].get<double>(), s["a2"].get<double>());
    }
  }
  return f;
}

}  // namespace lvlab
