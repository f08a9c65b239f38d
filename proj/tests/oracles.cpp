#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace oracle {

namespace {

// Darts live in one global array; alpha pairs the two ends of an edge and each
// vertex keeps its darts in cyclic order.
struct FatGraph {
  std::vector<int> alpha;
  std::vector<int> vertex_of;
  std::vector<std::vector<int>> rotation;

  int add_vertex() {
    rotation.emplace_back();
    return static_cast<int>(rotation.size()) - 1;
  }
  int new_dart(int v) {
    alpha.push_back(-1);
    vertex_of.push_back(v);
    return static_cast<int>(alpha.size()) - 1;
  }
  int sigma(int d) const {
    const auto& r = rotation[static_cast<std::size_t>(vertex_of[static_cast<std::size_t>(d)])];
    const auto it = std::find(r.begin(), r.end(), d);
    return r[static_cast<std::size_t>((it - r.begin() + 1) % static_cast<long>(r.size()))];
  }
};

struct Dsu {
  std::vector<int> p;
  explicit Dsu(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) { return p[static_cast<std::size_t>(x)] == x ? x : p[static_cast<std::size_t>(x)] = find(p[static_cast<std::size_t>(x)]); }
  void unite(int a, int b) { p[static_cast<std::size_t>(find(a))] = find(b); }
};

}  // namespace

RibbonResult ribbon_smoothing(const std::vector<Piece>& pieces, const std::vector<std::pair<int, int>>& nodes,
                              std::mt19937_64& rng) {
  FatGraph G;
  std::vector<int> outer_marker(pieces.size(), -1);  // a dart on the outer cycle, -1 for a bare disc
  std::vector<std::vector<int>> node_holes(pieces.size());  // inner dart of each node puncture
  std::vector<int> node_count(pieces.size(), 0);
  for (const auto& [i, j] : nodes) ++node_count[static_cast<std::size_t>(i)], ++node_count[static_cast<std::size_t>(j)];
  long caps = 0;
  for (std::size_t v = 0; v < pieces.size(); ++v) {
    G.add_vertex();
    auto& rot = G.rotation[v];
    for (int h = 0; h < pieces[v].genus; ++h) {
      const int a = G.new_dart(static_cast<int>(v)), b = G.new_dart(static_cast<int>(v));
      const int a2 = G.new_dart(static_cast<int>(v)), b2 = G.new_dart(static_cast<int>(v));
      G.alpha[static_cast<std::size_t>(a)] = a2, G.alpha[static_cast<std::size_t>(a2)] = a;
      G.alpha[static_cast<std::size_t>(b)] = b2, G.alpha[static_cast<std::size_t>(b2)] = b;
      rot.insert(rot.end(), {a, b, a2, b2});
    }
    // holes: boundary circles beyond the first, then one per node end
    const int extra = std::max(pieces[v].boundary, 1) - 1;
    for (int h = 0; h < extra + node_count[v]; ++h) {
      const int t = G.new_dart(static_cast<int>(v)), t2 = G.new_dart(static_cast<int>(v));
      G.alpha[static_cast<std::size_t>(t)] = t2, G.alpha[static_cast<std::size_t>(t2)] = t;
      // keep position 0 fixed so rot[0] stays on the outer cycle
      const std::size_t pos = rot.empty() ? 0 : 1 + std::uniform_int_distribution<std::size_t>(0, rot.size() - 1)(rng);
      rot.insert(rot.begin() + static_cast<long>(pos), {t, t2});
      if (h >= extra) node_holes[v].push_back(t2);
    }
    if (!rot.empty()) outer_marker[v] = rot[0];
    if (pieces[v].boundary == 0) ++caps;  // the outer cycle gets a disc
  }
  // Boundary cycles of the fat graph: orbits of sigma o alpha.
  const std::size_t nd = G.alpha.size();
  std::vector<int> cycle(nd, -1);
  int cycles = 0;
  for (std::size_t d = 0; d < nd; ++d) {
    if (cycle[d] >= 0) continue;
    int e = static_cast<int>(d);
    do {
      cycle[static_cast<std::size_t>(e)] = cycles;
      e = G.sigma(G.alpha[static_cast<std::size_t>(e)]);
    } while (e != static_cast<int>(d));
    ++cycles;
  }
  long bare = 0;
  for (std::size_t v = 0; v < pieces.size(); ++v)
    if (G.rotation[v].empty()) ++bare;  // a vertex without darts is a disc with one boundary circle
  const long V = static_cast<long>(pieces.size());
  const long E = static_cast<long>(nd / 2);
  RibbonResult r;
  r.euler = V - E + caps;  // annuli add nothing
  r.boundary = cycles + bare - caps - 2 * static_cast<long>(nodes.size());
  Dsu dsu(pieces.size());
  for (const auto& [i, j] : nodes) dsu.unite(i, j);
  for (std::size_t v = 0; v < pieces.size(); ++v)
    if (dsu.find(static_cast<int>(v)) == static_cast<int>(v)) ++r.pieces;
  // sanity: every node hole must be its own cycle, distinct from the outer one
  for (std::size_t v = 0; v < pieces.size(); ++v)
    for (int h : node_holes[v])
      if (outer_marker[v] >= 0 && cycle[static_cast<std::size_t>(h)] == cycle[static_cast<std::size_t>(outer_marker[v])]) r.pieces = -1;
  if (r.pieces == 1) r.genus = (2 - r.euler - r.boundary) / 2;
  return r;
}

double fd_curl(const std::function<Vec2(Vec2)>& lambda, Vec2 x, double h) {
  auto ddx = [&](int c) {
    auto at = [&](double s) {
      const Vec2 v = lambda({x.x + s, x.y});
      return c == 0 ? v.x : v.y;
    };
    return (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
  };
  auto ddy = [&](int c) {
    auto at = [&](double s) {
      const Vec2 v = lambda({x.x, x.y + s});
      return c == 0 ? v.x : v.y;
    };
    return (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
  };
  return ddx(1) - ddy(0);
}

double polygon_integral(const std::function<Vec2(Vec2)>& lambda, const std::vector<Vec2>& poly) {
  static const double kX[4] = {0.0694318442029737, 0.3300094782075719, 0.6699905217924281, 0.9305681557970263};
  static const double kW[4] = {0.1739274225687269, 0.3260725774312731, 0.3260725774312731, 0.1739274225687269};
  double sum = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2 a = poly[i], b = poly[(i + 1) % poly.size()];
    const Vec2 d = b - a;
    for (int q = 0; q < 4; ++q) {
      const Vec2 v = lambda(a + kX[q] * d);
      sum += kW[q] * (v.x * d.x + v.y * d.y);
    }
  }
  return sum;
}

double polygon_area(const std::vector<Vec2>& poly) {
  double s = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2 a = poly[i], b = poly[(i + 1) % poly.size()];
    s += a.x * b.y - a.y * b.x;
  }
  return 0.5 * s;
}

bool inside_polygon(const std::vector<Vec2>& poly, Vec2 p) {
  double wind = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2 a = poly[i] - p, b = poly[(i + 1) % poly.size()] - p;
    wind += std::atan2(a.x * b.y - a.y * b.x, a.x * b.x + a.y * b.y);
  }
  return std::abs(wind) > lvlab::kPi;
}

double distance_to_polyline(const std::vector<Vec2>& line, Vec2 p) {
  double best = lvlab::norm(line.front() - p);
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    const Vec2 a = line[i], d = line[i + 1] - a;
    const double L2 = d.x * d.x + d.y * d.y;
    double u = L2 > 0.0 ? ((p.x - a.x) * d.x + (p.y - a.y) * d.y) / L2 : 0.0;
    u = std::clamp(u, 0.0, 1.0);
    best = std::min(best, lvlab::norm(a + u * d - p));
  }
  return best;
}

Vec4 ellipsoid_flow(double a, double b, const Vec4& z, double t) {
  const double w1 = lvlab::kTwoPi * t / a, w2 = lvlab::kTwoPi * t / b;
  const double c1 = std::cos(w1), s1 = std::sin(w1), c2 = std::cos(w2), s2 = std::sin(w2);
  return {c1 * z[0] - s1 * z[1], s1 * z[0] + c1 * z[1], c2 * z[2] - s2 * z[3], s2 * z[2] + c2 * z[3]};
}

double ellipsoid_H(double a, double b, const Vec4& z) {
  return lvlab::kPi * ((z[0] * z[0] + z[1] * z[1]) / a + (z[2] * z[2] + z[3] * z[3]) / b);
}

Vec4 quarter_arc_sphere(int k, int i, int j, double s) {
  const double r = 1.0 / std::sqrt(lvlab::kPi);
  const double c = std::cos(0.5 * lvlab::kPi * s), d = std::sin(0.5 * lvlab::kPi * s);
  const double a1 = lvlab::kTwoPi * i / k, a2 = lvlab::kTwoPi * j / k;
  return {r * c * std::cos(a1), r * c * std::sin(a1), r * d * std::cos(a2), r * d * std::sin(a2)};
}

double lune_area(double dihedral_angle) { return dihedral_angle / lvlab::kTwoPi; }

std::int64_t binom2(std::int64_t n) { return n * (n - 1) / 2; }

std::int64_t gcd(std::int64_t a, std::int64_t b) {
  while (b != 0) {
    const std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a < 0 ? -a : a;
}

}  // namespace oracle
