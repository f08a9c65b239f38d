#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "lvlab/ode.hpp"
#include "lvlab/reeb.hpp"

namespace lvlab {

namespace {

constexpr const char* kModule = "reeb3";

Vec4 J(const Vec4& v) { return {-v[1], v[0], -v[3], v[2]}; }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Integrates the Reeb field of S forward or backward from a state.
class Flow {
public:
  Flow(const StarshapedSurface& S, const Tolerances& tol) : S_(S) {
    opt_.abs_tol = tol.reeb_abs_tol;
    opt_.rel_tol = tol.reeb_rel_tol;
    opt_.h_max = 0.05;
    opt_.max_steps = 1000000;
  }
  Vec4 field(const Vec4& z) const { return (1.0 / S_.H(z)) * J(S_.grad(z)); }
  Vec4 operator()(const Vec4& z, double t) const {
    if (t == 0.0) return z;
    auto f = [this](double, const State<4>& y) -> State<4> { return field(y); };
    const auto res = integrate<4>(f, z, 0.0, t, opt_);
    if (res.status != OdeStatus::Reached) throw Error(ErrorKind::Domain, kModule, "Reeb flow failed: " + res.diagnostic);
    return res.y;
  }

private:
  const StarshapedSurface& S_;
  OdeOptions opt_;
};

class Hash4 {
public:
  Hash4(double h) : h_(h) {}
  void insert(const Vec4& z, std::size_t id) { cells_[key(cell(z))].push_back({z, id}); }
  double nearest(const Vec4& z, std::size_t* id) const {
    const auto c = cell(z);
    double best = std::numeric_limits<double>::infinity();
    for (int a = -1; a <= 1; ++a)
      for (int b = -1; b <= 1; ++b)
        for (int d = -1; d <= 1; ++d)
          for (int e = -1; e <= 1; ++e) {
            const auto it = cells_.find(key({c[0] + a, c[1] + b, c[2] + d, c[3] + e}));
            if (it == cells_.end()) continue;
            for (const auto& [p, i] : it->second) {
              const double r = norm(p - z);
              if (r < best) {
                best = r;
                *id = i;
              }
            }
          }
    return best;
  }

private:
  double h_;
  std::unordered_map<std::uint64_t, std::vector<std::pair<Vec4, std::size_t>>> cells_;
  std::array<long, 4> cell(const Vec4& z) const {
    return {static_cast<long>(std::floor(z[0] / h_)), static_cast<long>(std::floor(z[1] / h_)),
            static_cast<long>(std::floor(z[2] / h_)), static_cast<long>(std::floor(z[3] / h_))};
  }
  static std::uint64_t key(const std::array<long, 4>& c) {
    std::uint64_t k = 0;
    for (long v : c) k = k * 65536u + static_cast<std::uint64_t>((v + 32768) & 0xffff);
    return k;
  }
};

// Smallest singular value of the 4x3 matrix with unit columns.
double min_singular(const std::array<Vec4, 3>& cols) {
  std::array<Vec4, 3> c = cols;
  for (auto& v : c) {
    const double n = norm(v);
    if (n > 0.0) v = (1.0 / n) * v;
  }
  double G[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) G[i][j] = dot(c[i], c[j]);
  // smallest eigenvalue of the symmetric 3x3 Gram matrix (trigonometric formula)
  const double p1 = G[0][1] * G[0][1] + G[0][2] * G[0][2] + G[1][2] * G[1][2];
  const double q = (G[0][0] + G[1][1] + G[2][2]) / 3.0;
  const double p2 = (G[0][0] - q) * (G[0][0] - q) + (G[1][1] - q) * (G[1][1] - q) + (G[2][2] - q) * (G[2][2] - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  if (p == 0.0) return std::sqrt(std::max(q, 0.0));
  double B[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) B[i][j] = (G[i][j] - (i == j ? q : 0.0)) / p;
  const double detB = B[0][0] * (B[1][1] * B[2][2] - B[1][2] * B[2][1]) - B[0][1] * (B[1][0] * B[2][2] - B[1][2] * B[2][0]) +
                      B[0][2] * (B[1][0] * B[2][1] - B[1][1] * B[2][0]);
  const double r = std::clamp(detB / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double lmin = q + 2.0 * p * std::cos(phi + 2.0 * kPi / 3.0);
  return std::sqrt(std::max(lmin, 0.0));
}

bool solve3(double A[3][3], double b[3], double x[3]) {
  double M[3][4];
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) M[i][j] = A[i][j];
    M[i][3] = b[i];
  }
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    for (int r = c + 1; r < 3; ++r)
      if (std::abs(M[r][c]) > std::abs(M[piv][c])) piv = r;
    if (std::abs(M[piv][c]) < 1e-300) return false;
    for (int j = 0; j < 4; ++j) std::swap(M[c][j], M[piv][j]);
    for (int r = c + 1; r < 3; ++r) {
      const double f = M[r][c] / M[c][c];
      for (int j = c; j < 4; ++j) M[r][j] -= f * M[c][j];
    }
  }
  for (int c = 2; c >= 0; --c) {
    double s = M[c][3];
    for (int j = c + 1; j < 3; ++j) s -= M[c][j] * x[j];
    x[c] = s / M[c][c];
  }
  return true;
}

struct Refined {
  double s, t, u;
  Vec4 end;
  double dist;
  double sigma;
};

// Levenberg-Marquardt on F(s, t, u) = Phi^{dir t}(c(s)) - gamma(u).
Refined refine(const Flow& flow, const LegendrianCurve& src, const LegendrianCurve& tgt, double s, double t, double u,
               int dir, double t_max, int max_iter) {
  const double hs = 1e-6;
  double mu = 1e-3;
  auto residual = [&](double ss, double tt, double uu, Vec4* end) {
    *end = flow(src.point(ss), dir * tt);
    return *end - tgt.point(uu);
  };
  auto clamp_state = [&](double& ss, double& tt, double& uu) {
    ss = src.param(ss);
    uu = tgt.param(uu);
    tt = std::clamp(tt, 0.0, t_max);
  };
  Vec4 end{};
  Vec4 F = residual(s, t, u, &end);
  double f2 = dot(F, F);
  std::array<Vec4, 3> cols{};
  for (int it = 0; it < max_iter && f2 > 1e-26; ++it) {
    const Vec4 ep = flow(src.point(s + hs), dir * t), em = flow(src.point(s - hs), dir * t);
    cols[0] = (0.5 / hs) * (ep - em);
    cols[1] = static_cast<double>(dir) * flow.field(end);
    cols[2] = -1.0 * tgt.tangent(u);
    double A[3][3], g[3], x[3];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) A[i][j] = dot(cols[i], cols[j]);
      g[i] = -dot(cols[i], F);
    }
    bool improved = false;
    for (int tries = 0; tries < 12 && !improved; ++tries) {
      double Ad[3][3];
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) Ad[i][j] = A[i][j] + (i == j ? mu * (A[i][i] + 1e-12) : 0.0);
      if (!solve3(Ad, g, x)) break;
      double s2 = s + x[0], t2 = t + x[1], u2 = u + x[2];
      clamp_state(s2, t2, u2);
      Vec4 e2{};
      const Vec4 F2 = residual(s2, t2, u2, &e2);
      const double n2 = dot(F2, F2);
      if (n2 < f2) {
        s = s2, t = t2, u = u2, end = e2, F = F2, f2 = n2;
        mu = std::max(mu / 10.0, 1e-12);
        improved = true;
      } else {
        mu *= 10.0;
      }
    }
    if (!improved) break;
  }
  {
    const Vec4 ep = flow(src.point(s + hs), dir * t), em = flow(src.point(s - hs), dir * t);
    cols[0] = (0.5 / hs) * (ep - em);
    cols[1] = flow.field(end);
    cols[2] = tgt.tangent(u);
  }
  return {s, t, u, end, std::sqrt(f2), min_singular(cols)};
}

}  // namespace

std::vector<ReebChord> chord_search(const StarshapedSurface& S, const LegendrianCurve& source,
                                    const std::vector<LegendrianCurve>& targets, double t_max, int direction,
                                    const Tolerances& tol, const ChordSearchOptions& opt) {
  if (direction != 1 && direction != -1) throw Error(ErrorKind::Precondition, kModule, "direction must be +1 or -1");
  if (!(t_max > 0.0)) throw Error(ErrorKind::Precondition, kModule, "T_max must be positive");
  const double defect = surface_defect(S, source, 200);
  if (!(defect < tol.on_surface)) throw Error(ErrorKind::Precondition, kModule, "source curve is off S (|H - 1| = " + fmt(defect) + ")");
  for (const auto& t : targets)
    if (!(surface_defect(S, t, 200) < tol.on_surface)) throw Error(ErrorKind::Precondition, kModule, "target " + t.name() + " is off S");
  const Flow flow(S, tol);
  const double h = opt.spacing;

  // Target samples at half the spacing.
  Hash4 hash(2.0 * h);
  std::vector<std::pair<int, double>> tsamples;
  for (std::size_t k = 0; k < targets.size(); ++k) {
    const int n = std::max(16, static_cast<int>(std::ceil(2.0 * targets[k].length() / h)));
    const bool closed = targets[k].closed();
    const int m = closed ? n : n + 1;
    for (int a = 0; a < m; ++a) {
      const double u = static_cast<double>(a) / n;
      hash.insert(targets[k].point(u), tsamples.size());
      tsamples.push_back({static_cast<int>(k), u});
    }
  }

  // Source grid in (s, t).
  const int ns = std::max(16, static_cast<int>(std::ceil(source.length() / h)));
  const int ns_pts = source.closed() ? ns : ns + 1;
  double speed = 0.0;
  for (int a = 0; a < 64; ++a) speed = std::max(speed, norm(flow.field(source.point((a + 0.5) / 64))));
  const double dt = h / std::max(speed, 1e-9);
  const int nt = static_cast<int>(std::ceil(t_max / dt));
  const double threshold = 2.0 * h;
  std::vector<float> dist(static_cast<std::size_t>(ns_pts) * (nt + 1), std::numeric_limits<float>::infinity());
  std::vector<std::size_t> near(dist.size(), 0);
  for (int a = 0; a < ns_pts; ++a) {
    Vec4 z = source.point(static_cast<double>(a) / ns);
    for (int m = 1; m <= nt; ++m) {
      const double t1 = std::min(m * dt, t_max), t0 = (m - 1) * dt;
      z = flow(z, direction * (t1 - t0));
      std::size_t id = 0;
      const double d = hash.nearest(z, &id);
      if (d < threshold) {
        dist[static_cast<std::size_t>(a) * (nt + 1) + m] = static_cast<float>(d);
        near[static_cast<std::size_t>(a) * (nt + 1) + m] = id;
      }
    }
  }

  std::vector<ReebChord> out;
  auto at = [&](int a, int m) -> float {
    if (m < 1 || m > nt) return std::numeric_limits<float>::infinity();
    if (source.closed()) a = (a % ns_pts + ns_pts) % ns_pts;
    else if (a < 0 || a >= ns_pts) return std::numeric_limits<float>::infinity();
    return dist[static_cast<std::size_t>(a) * (nt + 1) + m];
  };
  for (int a = 0; a < ns_pts; ++a)
    for (int m = 1; m <= nt; ++m) {
      const float d = at(a, m);
      if (!std::isfinite(d)) continue;
      bool local_min = true;
      for (int da = -1; da <= 1 && local_min; ++da)
        for (int dm = -1; dm <= 1; ++dm)
          if ((da || dm) && at(a + da, m + dm) < d) {
            local_min = false;
            break;
          }
      if (!local_min) continue;
      const auto [k, u0] = tsamples[near[static_cast<std::size_t>(a) * (nt + 1) + m]];
      Refined r;
      try {
        r = refine(flow, source, targets[k], static_cast<double>(a) / ns, std::min(m * dt, t_max), u0, direction, t_max,
                   opt.max_iterations);
      } catch (const Error&) {
        continue;
      }
      if (!(r.dist < tol.chord) || r.t < tol.chord_min_time || r.t > t_max) continue;
      auto wrap = [](const LegendrianCurve& c, double v) {
        if (!c.closed()) return v;
        v -= std::floor(v);
        return v >= 1.0 - 1e-12 ? 0.0 : v;
      };
      ReebChord c;
      c.s = wrap(source, r.s);
      c.T = r.t;
      c.direction = direction;
      c.target = k;
      c.u = wrap(targets[k], r.u);
      c.end = r.end;
      c.distance = r.dist;
      c.transverse = r.sigma > opt.transversality;
      bool dup = false;
      for (const auto& o : out) {
        const double ds = source.closed() ? std::abs(std::remainder(o.s - c.s, 1.0)) : std::abs(o.s - c.s);
        if (std::abs(o.T - c.T) < 1e-6 && (ds < 1e-6 || (!o.transverse && !c.transverse && o.target == c.target))) dup = true;
      }
      if (!dup) out.push_back(c);
    }
  std::sort(out.begin(), out.end(), [](const ReebChord& x, const ReebChord& y) { return x.T < y.T; });
  return out;
}

// ----------------------------------------------------------- Mohnke torus

LagrangianTorusSample mohnke_torus(const StarshapedSurface& S, const LegendrianCurve& knot, double T, double eps,
                                   const std::vector<LegendrianCurve>& avoid, int n_s, int n_gamma, const Tolerances& tol) {
  if (!(T > 0.0) || !(eps > 0.0)) throw Error(ErrorKind::Precondition, kModule, "mohnke_torus needs T, eps > 0");
  if (!knot.closed()) throw Error(ErrorKind::Precondition, kModule, "mohnke_torus needs a closed knot");
  if (n_s < 8 || n_gamma < 8) throw Error(ErrorKind::Precondition, kModule, "torus sample too coarse");
  std::vector<LegendrianCurve> targets = avoid;
  targets.push_back(knot);
  const auto chords = chord_search(S, knot, targets, T + eps, 1, tol);
  if (!chords.empty()) {
    const auto& c = chords.front();
    throw Error(ErrorKind::Precondition, kModule,
                "a Reeb chord of length " + fmt(c.T) + " <= T + eps starts at s = " + fmt(c.s) + " and ends on " +
                    targets[c.target].name() + " (u = " + fmt(c.u) + ")");
  }
  // gamma: squircle (x/ra)^4 + (y/rb)^4 = 1 around (1/2, (T + eps)/2) in the (tau, t) strip.
  const int nq = 4096;
  double unit_area = 0.0;
  for (int k = 0; k < nq; ++k) {
    const double th = kTwoPi * k / nq;
    const double c = std::cos(th), s = std::sin(th);
    unit_area += 0.5 / std::sqrt(c * c * c * c + s * s * s * s) * kTwoPi / nq;
  }
  const double tc = 0.5 * (T + eps), rb = 0.45 * (T + eps);
  const double ra = T / (unit_area * rb);
  if (!(ra < 0.5)) throw Error(ErrorKind::Precondition, kModule, "gamma does not fit in (0, 1] x [0, T + eps]; increase eps");
  auto gamma = [&](double sigma, double* dtau, double* dt) {
    const double th = kTwoPi * sigma;
    const double c = std::cos(th), s = std::sin(th);
    const double q = c * c * c * c + s * s * s * s;
    const double r = std::pow(q, -0.25);
    const double dq = 4.0 * kTwoPi * (-c * c * c * s + s * s * s * c);
    const double dr = -0.25 * std::pow(q, -1.25) * dq;
    *dtau = ra * (dr * c - r * kTwoPi * s);
    *dt = rb * (dr * s + r * kTwoPi * c);
    return std::make_pair(0.5 + ra * r * c, tc + rb * r * s);
  };
  const Flow flow(S, tol);
  LagrangianTorusSample out;
  out.n_s = n_s;
  out.n_gamma = n_gamma;
  out.T = T;
  out.disc_area = ra * rb * unit_area;
  out.points.resize(static_cast<std::size_t>(n_s) * n_gamma);
  const double hs = 1e-5;
  for (int a = 0; a < n_s; ++a) {
    const double s = static_cast<double>(a) / n_s;
    const Vec4 p = knot.point(s), pp = knot.point(s + hs), pm = knot.point(s - hs);
    for (int b = 0; b < n_gamma; ++b) {
      double dtau = 0.0, dt = 0.0;
      const auto [tau, t] = gamma(static_cast<double>(b) / n_gamma, &dtau, &dt);
      const Vec4 z = flow(p, t);
      const double st = std::sqrt(tau);
      out.points[static_cast<std::size_t>(a) * n_gamma + b] = st * z;
      // d/ds by central differences of the flowed knot, d/dsigma exactly.
      const Vec4 ds = (st * 0.5 / hs) * (flow(pp, t) - flow(pm, t));
      const Vec4 dsig = (0.5 * dtau / st) * z + (st * dt) * flow.field(z);
      const double den = norm(ds) * norm(dsig);
      if (den > 0.0) out.omega_defect = std::max(out.omega_defect, std::abs(omega_st(ds, dsig)) / den);
    }
  }
  // Generator actions: Lambda x {gamma(0)} and {knot(0)} x gamma.
  {
    double dtau = 0.0, dt = 0.0;
    const auto [tau, t] = gamma(0.0, &dtau, &dt);
    const int m = 2048;
    double sum = 0.0;
    for (int a = 0; a < m; ++a) {
      const double s = static_cast<double>(a) / m;
      const Vec4 z = std::sqrt(tau) * flow(knot.point(s), t);
      const Vec4 dz = (std::sqrt(tau) * 0.5 / hs) * (flow(knot.point(s + hs), t) - flow(knot.point(s - hs), t));
      sum += alpha_st(z, dz) / m;
    }
    out.action_lambda = sum;
  }
  {
    const int m = 2048;
    const Vec4 p = knot.point(0.0);
    double sum = 0.0;
    for (int b = 0; b < m; ++b) {
      double dtau = 0.0, dt = 0.0;
      const auto [tau, t] = gamma(static_cast<double>(b) / m, &dtau, &dt);
      const Vec4 z = flow(p, t);
      const double st = std::sqrt(tau);
      const Vec4 w = st * z;
      const Vec4 dw = (0.5 * dtau / st) * z + (st * dt) * flow.field(z);
      sum += alpha_st(w, dw) / m;
    }
    // gamma runs counterclockwise in (tau, t): the action is the enclosed area.
    out.action_gamma = sum;
  }
  return out;
}

}  // namespace lvlab
