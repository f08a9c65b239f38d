#include "lvlab/polar4.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lvlab/quadrature.hpp"
#include "lvlab/spline.hpp"

namespace lvlab {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

// A uniformly chosen interior sample of a uniformly chosen arc.
Vec2 random_gamma_point(const Grid& g, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick_arc(0, g.arcs().size() - 1);
  const auto& pts = g.arcs()[pick_arc(rng)].points;
  std::uniform_int_distribution<std::size_t> pick(1, pts.size() - 2);
  return pts[pick(rng)];
}

}  // namespace

ProductPolarization::ProductPolarization(LiouvilleForm2D a, LiouvilleForm2D b)
    : a_(std::move(a)), b_(std::move(b)) {
  for (int k = 0; k < 2; ++k) {
    const auto& fol = factor(k).foliation();
    for (int i = 0; i < static_cast<int>(fol.face_count()); ++i) comps_.push_back({k, i, fol.face(i).area});
  }
}

ProductPolarization product_polarization(const LiouvilleForm2D& a, const LiouvilleForm2D& b) {
  return ProductPolarization(a, b);
}

Vec4 ProductPolarization::lambda(const Point4& p) const {
  const Vec2 la = a_.lambda(p.a), lb = b_.lambda(p.b);
  return {la.x, la.y, lb.x, lb.y};
}

Vec4 ProductPolarization::X(const Point4& p) const {
  const Vec2 xa = a_.X(p.a), xb = b_.X(p.b);
  return {xa.x, xa.y, xb.x, xb.y};
}

Classification4 classify4(const ProductPolarization& p, const Point4& x, double t_max) {
  Classification4 out;
  const Trajectory ta = p.factor(0).flow(x.a, t_max, 1);
  const Trajectory tb = p.factor(1).flow(x.b, t_max, 1);
  const int na = static_cast<int>(p.factor(0).grid().face_count());
  const bool ha = ta.chart_time >= 0.0, hb = tb.chart_time >= 0.0;
  if (ha || hb) {
    out.kind = Class4::Basin;
    if (ha && (!hb || ta.chart_time <= tb.chart_time)) {
      out.component = ta.face;
      out.time = ta.chart_time;
    } else {
      out.component = na + tb.face;
      out.time = tb.chart_time;
    }
    return out;
  }
  if (ta.classification == FlowClass::OnSkeleton && tb.classification == FlowClass::OnSkeleton) {
    out.kind = Class4::Skeleton;
    return out;
  }
  out.kind = Class4::Undecided;
  out.diagnostic = "first factor: " + (ta.diagnostic.empty() ? std::string("on skeleton") : ta.diagnostic) +
                   "; second factor: " + (tb.diagnostic.empty() ? std::string("on skeleton") : tb.diagnostic);
  return out;
}

double action_integral(const ProductPolarization& p, const std::vector<Point4>& loop) {
  const std::size_t n = loop.size();
  if (n < 4) throw Error(ErrorKind::Precondition, "polar4d", "loop needs at least four samples");
  std::vector<double> t(n + 1);
  std::vector<Vec4> pts(n);
  for (std::size_t k = 0; k <= n; ++k) t[k] = static_cast<double>(k) / n;
  for (std::size_t k = 0; k < n; ++k) pts[k] = {loop[k].a.x, loop[k].a.y, loop[k].b.x, loop[k].b.y};
  const SplineCurve4 c(t, pts, true);
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double h = t[k + 1] - t[k];
    for (int q = 0; q < 8; ++q) {
      const double s = t[k] + kGl8X[q] * h;
      const Vec4 z = c.point(s);
      const Vec4 lam = p.lambda({{z[0], z[1]}, {z[2], z[3]}});
      sum += kGl8W[q] * h * dot(lam, c.tangent(s));
    }
  }
  return sum;
}

SdbValues eval_sdb(const ModelDiscBundle& m, const Vec4& point) {
  if (m.c1 < 1 || !(m.area > 0.0)) throw Error(ErrorKind::Precondition, "polar4d", "need c1 >= 1 and area > 0");
  const double u = point[0], v = point[1], R = point[2];
  if (R < 0.0) throw Error(ErrorKind::Precondition, "polar4d", "R must be nonnegative");
  const double c = m.c1 / (2.0 * m.area);
  const double k = 1.0 - m.c1 * R / m.area;
  SdbValues out;
  auto set = [&](int i, int j, double val) {
    out.omega[i][j] += val;
    out.omega[j][i] -= val;
  };
  set(0, 1, k);           // (1 - c1 R / area) du ^ dv
  set(2, 3, 1.0);         // dR ^ dtheta
  set(2, 1, -c * u);      // -c u dR ^ dv
  set(2, 0, c * v);       // +c v dR ^ du
  const double s = R - m.area / m.c1;
  const Vec4 theta{c * v, -c * u, 0.0, 1.0};
  out.lambda = s * theta;
  out.liouville = {0.0, 0.0, s, 0.0};
  const auto& w = out.omega;
  const double pf = w[0][1] * w[2][3] - w[0][2] * w[1][3] + w[0][3] * w[1][2];
  out.det = pf * pf;
  return out;
}

double sdb_fiber_integral(const ModelDiscBundle& m, double u, double v, double R, int samples) {
  double sum = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double th = static_cast<double>(k) / samples;
    sum += eval_sdb(m, {u, v, R, th}).lambda[3] / samples;
  }
  return sum;
}

Check4 check_product_closedness(const ProductPolarization& p, int points, unsigned seed) {
  const auto& A = p.factor(0);
  const auto& B = p.factor(1);
  Check4 res{"product-closedness", false, 0.0, A.tolerances().fd_rel, ""};
  const double h = A.tolerances().fd_step;
  std::mt19937_64 rng(seed);
  int used = 0, attempts = 0;
  while (used < points && attempts < 100 * points) {
    ++attempts;
    Vec2 xa = random_point(A.grid(), rng), xb = random_point(B.grid(), rng);
    const int fa = A.grid().locate_face(xa), fb = B.grid().locate_face(xb);
    if (fa < 0 || fb < 0 || !fd_safe(A, fa, xa) || !fd_safe(B, fb, xb)) continue;
    auto lam = [&](const Vec4& z) {
      const Vec2 la = A.lambda_in_face(fa, {z[0], z[1]}), lb = B.lambda_in_face(fb, {z[2], z[3]});
      return Vec4{la.x, la.y, lb.x, lb.y};
    };
    const Vec4 z{xa.x, xa.y, xb.x, xb.y};
    double J[4][4];  // J[i][j] = d lambda_j / d z_i
    for (int i = 0; i < 4; ++i) {
      Vec4 zp = z, zm = z;
      zp[i] += h;
      zm[i] -= h;
      const Vec4 lp = lam(zp), lm = lam(zm);
      for (int j = 0; j < 4; ++j) J[i][j] = (lp[j] - lm[j]) / (2 * h);
    }
    const double omega[4][4] = {{0, 1, 0, 0}, {-1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, -1, 0}};
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) res.value = std::max(res.value, std::abs(J[i][j] - J[j][i] - omega[i][j]));
    ++used;
  }
  res.pass = used == points && res.value < res.bound;
  res.detail = std::to_string(used) + " points, worst |d lambda - omega_st| = " + fmt(res.value);
  return res;
}

Check4 check_skeleton_dichotomy(const ProductPolarization& p, int points, double t_max, unsigned seed) {
  Check4 res{"skeleton-dichotomy", false, 0.0, 0.99, ""};
  const auto& A = p.factor(0);
  const auto& B = p.factor(1);
  const double band = A.tolerances().gamma_band;
  std::mt19937_64 rng(seed);
  int agree = 0, skel = 0;
  for (int n = 0; n < points; ++n) {
    Point4 x;
    // Mixed sampling: Gamma x Gamma, one factor on Gamma, or uniform.
    switch (n % 4) {
      case 0: x = {random_gamma_point(A.grid(), rng), random_gamma_point(B.grid(), rng)}; break;
      case 1: x = {random_gamma_point(A.grid(), rng), random_point(B.grid(), rng)}; break;
      case 2: x = {random_point(A.grid(), rng), random_gamma_point(B.grid(), rng)}; break;
      default: x = {random_point(A.grid(), rng), random_point(B.grid(), rng)}; break;
    }
    const bool predicted = A.grid().distance_to_gamma(x.a) < band && B.grid().distance_to_gamma(x.b) < band;
    const Classification4 c = classify4(p, x, t_max);
    const bool got = c.kind == Class4::Skeleton;
    skel += got;
    agree += got == predicted;
  }
  res.value = static_cast<double>(agree) / points;
  res.pass = res.value >= res.bound;
  res.detail = std::to_string(agree) + "/" + std::to_string(points) + " agree (" + std::to_string(skel) +
               " classified Skeleton)";
  return res;
}

Check4 check_boundary_tangency(const ProductPolarization& p, int points, unsigned seed) {
  Check4 res{"boundary-tangency", false, 0.0, 1e-6, ""};
  const auto& A = p.factor(0);
  const auto& B = p.factor(1);
  if (A.grid().periodic()) {
    res.pass = true;
    res.detail = "first factor is periodic (no boundary)";
    return res;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double R = A.grid().radius();
  const double band = disc_radius(A.tolerances().on_grid_band);
  int used = 0;
  for (int n = 0; n < points; ++n) {
    const double t = kTwoPi * U(rng);
    const Vec2 nrm{std::cos(t), std::sin(t)};
    const Vec2 xa = R * nrm;
    bool near_vertex = false;
    for (const auto& v : A.grid().vertices()) near_vertex |= norm(v.position - xa) < 10 * band;
    if (near_vertex) continue;
    const Vec4 X = p.X({xa, random_point(B.grid(), rng)});
    res.value = std::max(res.value, std::abs(X[0] * nrm.x + X[1] * nrm.y));
    ++used;
  }
  res.pass = used > 0 && res.value < res.bound;
  res.detail = std::to_string(used) + " boundary points, worst normal component = " + fmt(res.value);
  return res;
}

Check4 check_sdb_consistency(const ModelDiscBundle& m, int points, unsigned seed) {
  Check4 res{"sdb-consistency", false, 0.0, 1e-4, ""};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double h = 1e-5;
  const double Rmax = m.area / m.c1;
  for (int n = 0; n < points; ++n) {
    const Vec4 z{2 * U(rng) - 1, 2 * U(rng) - 1, Rmax * (0.01 + 0.98 * U(rng)), U(rng)};
    double J[4][4];
    for (int i = 0; i < 4; ++i) {
      Vec4 zp = z, zm = z;
      zp[i] += h;
      zm[i] -= h;
      const Vec4 lp = eval_sdb(m, zp).lambda, lm = eval_sdb(m, zm).lambda;
      for (int j = 0; j < 4; ++j) J[i][j] = (lp[j] - lm[j]) / (2 * h);
    }
    const auto w = eval_sdb(m, z).omega;
    double scale = 0.0, err = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        scale = std::max(scale, std::abs(w[i][j]));
        err = std::max(err, std::abs(J[i][j] - J[j][i] - w[i][j]));
      }
    res.value = std::max(res.value, err / scale);
  }
  res.pass = res.value < res.bound;
  res.detail = std::to_string(points) + " points, worst relative |d lambda0 - omega0| = " + fmt(res.value);
  return res;
}

}  // namespace lvlab
