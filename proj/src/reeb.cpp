#include "lvlab/reeb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "lvlab/ode.hpp"
#include "lvlab/spline.hpp"

namespace lvlab {

namespace {

constexpr const char* kModule = "reeb3";

[[noreturn]] void precondition(const std::string& msg) { throw Error(ErrorKind::Precondition, kModule, msg); }

Vec4 J(const Vec4& v) { return {-v[1], v[0], -v[3], v[2]}; }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

std::vector<double> parse_numbers(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorKind::Parse, kModule, "bad number '" + item + "'");
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- surfaces

StarshapedSurface StarshapedSurface::sphere() { return {}; }

StarshapedSurface StarshapedSurface::ellipsoid(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) precondition("ellipsoid needs a, b > 0");
  StarshapedSurface s;
  s.kind_ = Kind::Ellipsoid;
  s.a_ = a;
  s.b_ = b;
  return s;
}

StarshapedSurface StarshapedSurface::lp(double p, double a, double b) {
  if (!(p >= 2.0)) precondition("lp surface needs p >= 2");
  if (!(a > 0.0) || !(b > 0.0)) precondition("lp surface needs a, b > 0");
  StarshapedSurface s;
  s.kind_ = Kind::Lp;
  s.p_ = p;
  s.a_ = a;
  s.b_ = b;
  return s;
}

StarshapedSurface StarshapedSurface::parse(const std::string& spec) {
  if (spec == "sphere") return sphere();
  if (spec.rfind("ellipsoid:", 0) == 0) {
    const auto v = parse_numbers(spec.substr(10));
    if (v.size() != 2) throw Error(ErrorKind::Parse, kModule, "ellipsoid needs a,b");
    return ellipsoid(v[0], v[1]);
  }
  if (spec.rfind("lp:", 0) == 0) {
    const auto v = parse_numbers(spec.substr(3));
    if (v.size() != 3) throw Error(ErrorKind::Parse, kModule, "lp needs p,a,b");
    return lp(v[0], v[1], v[2]);
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(spec);
    const std::string type = j.at("type").get<std::string>();
    if (type == "sphere") return sphere();
    if (type == "ellipsoid") return ellipsoid(j.at("a").get<double>(), j.at("b").get<double>());
    if (type == "lp") return lp(j.at("p").get<double>(), j.value("a", 1.0), j.value("b", 1.0));
    throw Error(ErrorKind::Parse, kModule, "unknown surface type '" + type + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, kModule, std::string("surface: ") + e.what());
  }
}

std::string StarshapedSurface::to_json() const {
  nlohmann::json j;
  switch (kind_) {
    case Kind::Sphere: j = {{"type", "sphere"}}; break;
    case Kind::Ellipsoid: j = {{"type", "ellipsoid"}, {"a", a_}, {"b", b_}}; break;
    case Kind::Lp: j = {{"type", "lp"}, {"p", p_}, {"a", a_}, {"b", b_}}; break;
  }
  return j.dump();
}

std::string StarshapedSurface::name() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Sphere: os << "sphere"; break;
    case Kind::Ellipsoid: os << "ellipsoid:" << a_ << "," << b_; break;
    case Kind::Lp: os << "lp:" << p_ << "," << a_ << "," << b_; break;
  }
  return os.str();
}

double StarshapedSurface::H(const Vec4& z) const {
  const double X = (z[0] * z[0] + z[1] * z[1]) / a_;
  const double Y = (z[2] * z[2] + z[3] * z[3]) / b_;
  if (kind_ != Kind::Lp) return kPi * (X + Y);
  const double G = std::pow(X, 0.5 * p_) + std::pow(Y, 0.5 * p_);
  return G > 0.0 ? kPi * std::pow(G, 2.0 / p_) : 0.0;
}

Vec4 StarshapedSurface::grad(const Vec4& z) const {
  if (kind_ != Kind::Lp) {
    const double c1 = 2.0 * kPi / a_, c2 = 2.0 * kPi / b_;
    return {c1 * z[0], c1 * z[1], c2 * z[2], c2 * z[3]};
  }
  const double X = (z[0] * z[0] + z[1] * z[1]) / a_;
  const double Y = (z[2] * z[2] + z[3] * z[3]) / b_;
  const double G = std::pow(X, 0.5 * p_) + std::pow(Y, 0.5 * p_);
  if (G <= 0.0) return {0, 0, 0, 0};
  const double g = kPi * std::pow(G, 2.0 / p_ - 1.0);
  const double c1 = X > 0.0 ? g * std::pow(X, 0.5 * p_ - 1.0) * 2.0 / a_ : (p_ == 2.0 ? g * 2.0 / a_ : 0.0);
  const double c2 = Y > 0.0 ? g * std::pow(Y, 0.5 * p_ - 1.0) * 2.0 / b_ : (p_ == 2.0 ? g * 2.0 / b_ : 0.0);
  return {c1 * z[0], c1 * z[1], c2 * z[2], c2 * z[3]};
}

Vec4 StarshapedSurface::project(const Vec4& z) const {
  const double h = H(z);
  if (!(h > 0.0)) precondition("cannot project the origin to S");
  return (1.0 / std::sqrt(h)) * z;
}

Vec4 StarshapedSurface::project_derivative(const Vec4& z, const Vec4& v) const {
  const double h = H(z);
  const double s = 1.0 / std::sqrt(h);
  return s * v - (0.5 * dot(grad(z), v) * s / h) * z;
}

Vec4 StarshapedSurface::linear_flow(const Vec4& z, double t) const {
  if (!has_linear_flow()) precondition("no closed-form flow for " + name());
  const double w1 = kTwoPi * t / a_, w2 = kTwoPi * t / b_;
  const double c1 = std::cos(w1), s1 = std::sin(w1), c2 = std::cos(w2), s2 = std::sin(w2);
  return {c1 * z[0] - s1 * z[1], s1 * z[0] + c1 * z[1], c2 * z[2] - s2 * z[3], s2 * z[2] + c2 * z[3]};
}

double StarshapedSurface::homogeneity_defect(int samples, unsigned seed) const {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N(0.0, 1.0);
  std::uniform_real_distribution<double> U(0.1, 3.0);
  double worst = 0.0;
  for (int n = 0; n < samples; ++n) {
    const Vec4 z{N(rng), N(rng), N(rng), N(rng)};
    const double t = U(rng);
    const double h = H(z);
    worst = std::max(worst, std::abs(H(t * z) - t * t * h) / (t * t * h));
  }
  return worst;
}

Vec4 StarshapedSurface::random_point(std::mt19937_64& rng) const {
  std::normal_distribution<double> N(0.0, 1.0);
  Vec4 z{};
  do {
    z = {N(rng), N(rng), N(rng), N(rng)};
  } while (norm(z) < 1e-6);
  return project(z);
}

Vec4 reeb_field(const StarshapedSurface& S, const Vec4& z, const Tolerances& tol) {
  const double h = S.H(z);
  if (!(std::abs(h - 1.0) < tol.on_surface))
    throw Error(ErrorKind::Domain, kModule, "point is off S (H = " + fmt(h) + ")");
  return (1.0 / h) * J(S.grad(z));
}

namespace {

OdeOptions reeb_ode(const Tolerances& tol) {
  OdeOptions o;
  o.abs_tol = tol.reeb_abs_tol;
  o.rel_tol = tol.reeb_rel_tol;
  o.h_max = 0.05;
  o.max_steps = 1000000;
  return o;
}

}  // namespace

Vec4 reeb_flow(const StarshapedSurface& S, const Vec4& z, double t, const Tolerances& tol) {
  if (t == 0.0) return z;
  auto f = [&](double, const State<4>& y) -> State<4> {
    const Vec4 r = (1.0 / S.H(y)) * J(S.grad(y));
    return r;
  };
  const auto res = integrate<4>(f, z, 0.0, t, reeb_ode(tol));
  if (res.status != OdeStatus::Reached) throw Error(ErrorKind::Domain, kModule, "Reeb flow failed: " + res.diagnostic);
  return res.y;
}

// ------------------------------------------------------------------ curves

LegendrianCurve::LegendrianCurve(std::string name, bool closed, Eval eval)
    : name_(std::move(name)), closed_(closed), eval_(std::move(eval)) {}

double LegendrianCurve::param(double s) const {
  if (closed_) return s - std::floor(s);
  return std::clamp(s, 0.0, 1.0);
}

LegendrianCurve LegendrianCurve::from_samples(std::string name, const std::vector<Vec4>& pts, bool closed) {
  const std::size_t n = pts.size();
  if (n < 4) precondition("curve needs at least four samples");
  std::vector<double> t;
  std::vector<Vec4> p = pts;
  if (closed) {
    for (std::size_t k = 0; k <= n; ++k) t.push_back(static_cast<double>(k) / n);
  } else {
    for (std::size_t k = 0; k < n; ++k) t.push_back(static_cast<double>(k) / (n - 1));
  }
  auto curve = std::make_shared<SplineCurve4>(t, p, closed);
  return LegendrianCurve(std::move(name), closed,
                         [curve](double s) { return std::make_pair(curve->point(s), curve->tangent(s)); });
}

LegendrianCurve LegendrianCurve::from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    std::vector<Vec4> pts;
    for (const auto& p : j.at("points")) {
      const auto v = p.get<std::vector<double>>();
      if (v.size() != 4) throw Error(ErrorKind::Parse, kModule, "knot points need four coordinates");
      pts.push_back({v[0], v[1], v[2], v[3]});
    }
    return from_samples(j.value("name", std::string("knot")), pts, j.value("closed", true));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, kModule, std::string("knot file: ") + e.what());
  }
}

std::string LegendrianCurve::to_json(int samples) const {
  nlohmann::json j;
  j["name"] = name_;
  j["closed"] = closed_;
  j["points"] = nlohmann::json::array();
  for (const Vec4& p : sample(samples)) j["points"].push_back({p[0], p[1], p[2], p[3]});
  return j.dump();
}

std::vector<Vec4> LegendrianCurve::sample(int n) const {
  std::vector<Vec4> out;
  out.reserve(n);
  for (int k = 0; k < n; ++k) out.push_back(point(closed_ ? static_cast<double>(k) / n : static_cast<double>(k) / (n - 1)));
  return out;
}

double LegendrianCurve::length(int samples) const {
  double L = 0.0;
  for (int k = 0; k < samples; ++k) L += norm(tangent((k + 0.5) / samples)) / samples;
  return L;
}

LegendrianCurve LegendrianCurve::on_surface(const StarshapedSurface& S) const {
  const Eval e = eval_;
  return LegendrianCurve(name_, closed_, [e, S](double s) {
    const auto [z, dz] = e(s);
    return std::make_pair(S.project(z), S.project_derivative(z, dz));
  });
}

double legendrian_defect(const LegendrianCurve& c, int samples) {
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double s = (k + 0.5) / samples;
    const Vec4 z = c.point(s), v = c.tangent(s);
    const double n = norm(v);
    if (n > 0.0) worst = std::max(worst, std::abs(alpha_st(z, v)) / n);
  }
  return worst;
}

double surface_defect(const StarshapedSurface& S, const LegendrianCurve& c, int samples) {
  double worst = 0.0;
  for (int k = 0; k <= samples; ++k) worst = std::max(worst, std::abs(S.H(c.point(static_cast<double>(k) / samples)) - 1.0));
  return worst;
}

// ------------------------------------------------------------ Hopf sweep

std::array<double, 3> hopf_project(const Vec4& z) {
  const double n2 = dot(z, z);
  if (!(n2 > 0.0)) precondition("cannot project the origin");
  const double rad = 0.5 / std::sqrt(kPi);
  // 2 z1 conj(z2) and |z1|^2 - |z2|^2
  const double re = 2.0 * (z[0] * z[2] + z[1] * z[3]);
  const double im = 2.0 * (z[1] * z[2] - z[0] * z[3]);
  const double h = z[0] * z[0] + z[1] * z[1] - z[2] * z[2] - z[3] * z[3];
  return {rad * re / n2, rad * im / n2, rad * h / n2};
}

double spherical_polygon_area(const std::vector<std::array<double, 3>>& poly) {
  const std::size_t n = poly.size();
  if (n < 3) return 0.0;
  auto unit = [](std::array<double, 3> a) {
    const double r = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
    return std::array<double, 3>{a[0] / r, a[1] / r, a[2] / r};
  };
  auto d3 = [](const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
  };
  std::array<double, 3> ref{0, 0, 0};
  for (const auto& p : poly) {
    const auto u = unit(p);
    for (int i = 0; i < 3; ++i) ref[i] += u[i];
  }
  ref = unit(ref);
  double E = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto b = unit(poly[k]), c = unit(poly[(k + 1) % n]);
    const std::array<double, 3> bxc{b[1] * c[2] - b[2] * c[1], b[2] * c[0] - b[0] * c[2], b[0] * c[1] - b[1] * c[0]};
    E += 2.0 * std::atan2(d3(ref, bxc), 1.0 + d3(ref, b) + d3(b, c) + d3(c, ref));
  }
  return std::abs(E) / (4.0 * kPi);
}

namespace {

// Sparse 4D hash of points, cell size h.
class PointHash {
public:
  PointHash(const std::vector<Vec4>& pts, double h) : pts_(pts), h_(h) {
    for (std::size_t i = 0; i < pts.size(); ++i) cells_[key(cell(pts[i]))].push_back(i);
  }
  // Nearest point within the 3^4 neighbouring cells, or infinity.
  double nearest(const Vec4& z, std::size_t* idx = nullptr) const {
    const auto c = cell(z);
    double best = std::numeric_limits<double>::infinity();
    for (int a = -1; a <= 1; ++a)
      for (int b = -1; b <= 1; ++b)
        for (int d = -1; d <= 1; ++d)
          for (int e = -1; e <= 1; ++e) {
            const auto it = cells_.find(key({c[0] + a, c[1] + b, c[2] + d, c[3] + e}));
            if (it == cells_.end()) continue;
            for (std::size_t i : it->second) {
              const double r = norm(pts_[i] - z);
              if (r < best) {
                best = r;
                if (idx) *idx = i;
              }
            }
          }
    return best;
  }
  template <class F>
  void for_each_near(const Vec4& z, F&& f) const {
    const auto c = cell(z);
    for (int a = -1; a <= 1; ++a)
      for (int b = -1; b <= 1; ++b)
        for (int d = -1; d <= 1; ++d)
          for (int e = -1; e <= 1; ++e) {
            const auto it = cells_.find(key({c[0] + a, c[1] + b, c[2] + d, c[3] + e}));
            if (it == cells_.end()) continue;
            for (std::size_t i : it->second) f(i);
          }
  }

private:
  const std::vector<Vec4>& pts_;
  double h_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> cells_;

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

struct Dsu {
  std::vector<int> p;
  explicit Dsu(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

Vec4 hopf_rotate(const Vec4& z, double t) {
  const double c = std::cos(kTwoPi * t), s = std::sin(kTwoPi * t);
  return {c * z[0] - s * z[1], s * z[0] + c * z[1], c * z[2] - s * z[3], s * z[2] + c * z[3]};
}

struct SweepCount {
  int components = 0;
  std::vector<std::vector<Vec4>> members;
};

SweepCount count_components(const PointHash& L, double L_spacing, int n) {
  const double R = 1.0 / std::sqrt(kPi);
  const int nu = n, na = 2 * n;
  std::vector<Vec4> pts;
  for (int iu = 0; iu < nu; ++iu) {
    const double u = (iu + 0.5) / nu;
    const double r1 = R * std::sqrt(u), r2 = R * std::sqrt(1.0 - u);
    for (int ia = 0; ia < na; ++ia)
      for (int ib = 0; ib < na; ++ib) {
        const double a = kTwoPi * (ia + 0.5) / na, b = kTwoPi * (ib + 0.25) / na;
        pts.push_back({r1 * std::cos(a), r1 * std::sin(a), r2 * std::cos(b), r2 * std::sin(b)});
      }
  }
  const double volume = 2.0 * kPi * kPi * R * R * R;
  const double spacing = std::cbrt(volume / static_cast<double>(pts.size()));
  const double radius = 3.0 * spacing;
  // Points on opposite sides of L are then at least 2 * exclusion > radius apart.
  const double exclusion = 0.55 * radius + L_spacing;
  std::vector<Vec4> kept;
  for (const Vec4& z : pts)
    if (L.nearest(z) > exclusion) kept.push_back(z);
  PointHash hk(kept, radius);
  Dsu dsu(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i)
    hk.for_each_near(kept[i], [&](std::size_t j) {
      if (j > i && norm(kept[i] - kept[j]) <= radius) dsu.unite(static_cast<int>(i), static_cast<int>(j));
    });
  std::unordered_map<int, std::size_t> root_index;
  SweepCount out;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const int r = dsu.find(static_cast<int>(i));
    auto it = root_index.find(r);
    if (it == root_index.end()) {
      it = root_index.emplace(r, out.members.size()).first;
      out.members.emplace_back();
    }
    out.members[it->second].push_back(kept[i]);
  }
  out.components = static_cast<int>(out.members.size());
  return out;
}

}  // namespace

HopfSweep hopf_sweep(int k, double T, int resolution) {
  if (k < 2) precondition("hopf_sweep needs k >= 2");
  if (!(T > 0.0)) precondition("hopf_sweep needs T > 0");
  if (resolution < 8) precondition("hopf_sweep resolution must be at least 8");
  HopfSweep out;
  out.k = k;
  out.T = T;
  const auto arcs = legendrian_graph(k);
  const double R = 1.0 / std::sqrt(kPi);
  const double h = 0.01;  // ambient spacing of the L sample
  const int ns = static_cast<int>(std::ceil(0.5 * kPi * R / h)) + 1;
  const int nt = static_cast<int>(std::ceil(kTwoPi * R * T / h)) + 1;
  for (const auto& q : arcs)
    for (int a = 0; a < ns; ++a) {
      const Vec4 z = q.point(static_cast<double>(a) / (ns - 1));
      for (int b = 0; b < nt; ++b) out.surface.push_back(hopf_rotate(z, -T * b / (nt - 1)));
    }
  PointHash L(out.surface, 0.1);
  SweepCount finest;
  for (int n : {resolution, resolution * 5 / 4}) {
    SweepCount c = count_components(L, h, n);
    out.components_per_resolution.push_back(c.components);
    finest = std::move(c);
  }
  const auto& cr = out.components_per_resolution;
  if (cr[0] != cr[1]) {
    out.components = -1;
    out.diagnostic = "Undecided: " + std::to_string(cr[0]) + " vs " + std::to_string(cr[1]) + " components";
    return out;
  }
  out.components = cr[0];
  // Each component is a union of Hopf fibers; its projection is the lune
  // between two consecutive meridians h_j = pi(Q_{0,j}).
  std::vector<double> lon(k);
  for (int j = 0; j < k; ++j) {
    const auto p = hopf_project(arcs[j].point(0.5));  // Q_{0,j}
    lon[j] = std::atan2(p[1], p[0]);
  }
  const int nb = 200;
  for (const auto& comp : finest.members) {
    std::array<double, 3> m{0, 0, 0};
    for (const Vec4& z : comp) {
      const auto p = hopf_project(z);
      for (int i = 0; i < 3; ++i) m[i] += p[i];
    }
    const double c = std::atan2(m[1], m[0]);
    // meridians on either side of c
    int lo = -1, hi = -1;
    double dlo = 1e9, dhi = 1e9;
    for (int j = 0; j < k; ++j) {
      const double d = std::remainder(c - lon[j], kTwoPi);
      if (d > 0 && d < dlo) dlo = d, lo = j;
      if (d < 0 && -d < dhi) dhi = -d, hi = j;
    }
    if (lo < 0 || hi < 0) {
      out.lune_areas.push_back(-1.0);
      continue;
    }
    std::vector<std::array<double, 3>> poly;
    for (int a = 0; a <= nb; ++a) poly.push_back(hopf_project(arcs[lo].point(static_cast<double>(a) / nb)));
    for (int a = nb; a >= 0; --a) poly.push_back(hopf_project(arcs[hi].point(static_cast<double>(a) / nb)));
    out.lune_areas.push_back(spherical_polygon_area(poly));
  }
  return out;
}

// ------------------------------------------------------------------ checks

ReebCheck check_reeb_normalization(const StarshapedSurface& S, int points, unsigned seed, const Tolerances& tol) {
  ReebCheck res{"reeb-normalization " + S.name(), false, 0.0, 1e-6, ""};
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N(0.0, 1.0);
  double worst_alpha = 0.0, worst_omega = 0.0;
  for (int n = 0; n < points; ++n) {
    const Vec4 z = S.random_point(rng);
    const Vec4 R = reeb_field(S, z, tol);
    worst_alpha = std::max(worst_alpha, std::abs(alpha_st(z, R) - 1.0));
    const Vec4 g = S.grad(z);
    Vec4 v{N(rng), N(rng), N(rng), N(rng)};
    v = v - (dot(v, g) / dot(g, g)) * g;
    v = (1.0 / norm(v)) * v;
    worst_omega = std::max(worst_omega, std::abs(omega_st(R, v)));
  }
  res.value = std::max(worst_alpha, worst_omega);
  res.pass = worst_alpha < 1e-8 && worst_omega < 1e-6;
  res.detail = std::to_string(points) + " points, worst |lambda(R) - 1| = " + fmt(worst_alpha) +
               ", worst |d lambda(R, v)| = " + fmt(worst_omega);
  return res;
}

ReebCheck check_hopf_period(int points, unsigned seed, const Tolerances& tol) {
  ReebCheck res{"hopf-period", false, 0.0, 1e-9, ""};
  const auto S = StarshapedSurface::sphere();
  std::mt19937_64 rng(seed);
  for (int n = 0; n < points; ++n) {
    const Vec4 z = S.random_point(rng);
    res.value = std::max(res.value, norm(reeb_flow(S, z, 1.0, tol) - z));
  }
  res.pass = res.value < res.bound;
  res.detail = std::to_string(points) + " points, worst |Phi^1(z) - z| = " + fmt(res.value);
  return res;
}

ReebCheck check_cyclic_action(int k, int samples, const Tolerances& tol) {
  ReebCheck res{"cyclic-action k=" + std::to_string(k), false, 0.0, 1e-8, ""};
  const auto S = StarshapedSurface::sphere();
  for (int j = 0; j < k; ++j) {
    const auto q0 = quarter_arc(S, k, k, 0, j);
    const auto q1 = quarter_arc(S, k, k, 1, (j + 1) % k);
    for (int a = 0; a <= samples; ++a) {
      const double s = static_cast<double>(a) / samples;
      res.value = std::max(res.value, norm(reeb_flow(S, q0.point(s), 1.0 / k, tol) - q1.point(s)));
    }
  }
  res.pass = res.value < res.bound;
  res.detail = "worst |Phi^{1/k}(Q_{0,j}(s)) - Q_{1,j+1}(s)| = " + fmt(res.value);
  return res;
}

ReebCheck check_cone(const StarshapedSurface& S, int k1, int k2, int points, unsigned seed) {
  ReebCheck res{"cone " + S.name(), false, 0.0, 1e-12, ""};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::uniform_int_distribution<int> I1(0, k1 - 1), I2(0, k2 - 1);
  const double R = 1.0 / std::sqrt(kPi);
  for (int n = 0; n < points; ++n) {
    const double r1 = R * std::sqrt(U(rng)), r2 = R * std::sqrt(U(rng));
    if (r1 + r2 == 0.0) continue;
    const int i = I1(rng), j = I2(rng);
    const double a = kTwoPi * i / k1, b = kTwoPi * j / k2;
    const Vec4 z{r1 * std::cos(a), r1 * std::sin(a), r2 * std::cos(b), r2 * std::sin(b)};
    const double s = std::atan2(r2, r1) / (0.5 * kPi);
    const Vec4 q = quarter_arc(S, k1, k2, i, j).point(s);
    res.value = std::max(res.value, norm(S.project(z) - q) / norm(q));
  }
  res.pass = res.value < res.bound;
  res.detail = std::to_string(points) + " samples of Gamma_1 x Gamma_2, worst relative distance of the radial image to Lambda_delta = " +
               fmt(res.value);
  return res;
}

}  // namespace lvlab
