#include <cmath>
#include <sstream>

#include "lvlab/reeb.hpp"

namespace lvlab {

namespace {

constexpr const char* kModule = "reeb3";

// Base curve in the reduced sphere with the data of its horizontal lift.
struct BasePoint {
  double psi, dpsi;  // psi and d psi / ds
  double u, du;      // u = pi |z1|^2 in (0, 1)
  double phi2;       // arg z2 / 2 pi; d phi2 = -u d psi
};

// z = (sqrt(u/pi) e^{2 pi i (psi + phi2)}, sqrt((1-u)/pi) e^{2 pi i phi2}),
// on which alpha_st = d phi2 + u d psi.
std::pair<Vec4, Vec4> lift(const BasePoint& b) {
  if (!(b.u > 0.0 && b.u < 1.0)) throw Error(ErrorKind::Domain, kModule, "base curve leaves 0 < u < 1");
  const double dphi2 = -b.u * b.dpsi;
  const double phi1 = b.psi + b.phi2, dphi1 = b.dpsi + dphi2;
  const double r1 = std::sqrt(b.u / kPi), r2 = std::sqrt((1.0 - b.u) / kPi);
  const double dr1 = b.du / (2.0 * kPi * r1), dr2 = -b.du / (2.0 * kPi * r2);
  const double c1 = std::cos(kTwoPi * phi1), s1 = std::sin(kTwoPi * phi1);
  const double c2 = std::cos(kTwoPi * b.phi2), s2 = std::sin(kTwoPi * b.phi2);
  const double w1 = kTwoPi * dphi1, w2 = kTwoPi * dphi2;
  const Vec4 z{r1 * c1, r1 * s1, r2 * c2, r2 * s2};
  const Vec4 dz{dr1 * c1 - r1 * w1 * s1, dr1 * s1 + r1 * w1 * c1, dr2 * c2 - r2 * w2 * s2, dr2 * s2 + r2 * w2 * c2};
  return {z, dz};
}

std::vector<double> numbers(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Error(ErrorKind::Parse, kModule, "bad number '" + item + "' in knot spec");
    }
  }
  return out;
}

}  // namespace

LegendrianCurve quarter_arc(const StarshapedSurface& S, int k1, int k2, int i, int j) {
  if (k1 < 1 || k2 < 1) throw Error(ErrorKind::Precondition, kModule, "radial grids need at least one ray");
  const double a = kTwoPi * i / k1, b = kTwoPi * j / k2;
  const double ca = std::cos(a), sa = std::sin(a), cb = std::cos(b), sb = std::sin(b);
  std::ostringstream name;
  name << "Q" << i << "," << j;
  return LegendrianCurve(name.str(), false, [=](double s) {
    const double c = std::cos(0.5 * kPi * s), d = std::sin(0.5 * kPi * s);
    const Vec4 z{c * ca, c * sa, d * cb, d * sb};
    const double h = 0.5 * kPi;
    const Vec4 dz{-h * d * ca, -h * d * sa, h * c * cb, h * c * sb};
    return std::make_pair(S.project(z), S.project_derivative(z, dz));
  });
}

std::vector<LegendrianCurve> legendrian_graph(const StarshapedSurface& S, int k1, int k2) {
  if (k1 < 2 || k2 < 2) throw Error(ErrorKind::Precondition, kModule, "legendrian_graph needs k >= 2");
  std::vector<LegendrianCurve> out;
  for (int i = 0; i < k1; ++i)
    for (int j = 0; j < k2; ++j) out.push_back(quarter_arc(S, k1, k2, i, j));
  return out;
}

// psi = psi0 + w sin(theta), u = u0 + r sin(2 theta), theta = 2 pi s.
// One double point; its two chords have lengths 4 r w / 3 and 1 - 4 r w / 3.
LegendrianCurve small_unknot(double psi0, double u0, double w, double r) {
  if (!(u0 - r > 0.0 && u0 + r < 1.0)) throw Error(ErrorKind::Precondition, kModule, "unknot needs 0 < u0 - r and u0 + r < 1");
  return LegendrianCurve("unknot", true, [=](double s) {
    const double th = kTwoPi * s;
    BasePoint b;
    b.psi = psi0 + w * std::sin(th);
    b.dpsi = kTwoPi * w * std::cos(th);
    b.u = u0 + r * std::sin(2.0 * th);
    b.du = 2.0 * kTwoPi * r * std::cos(2.0 * th);
    const double c = std::cos(th);
    b.phi2 = -u0 * w * std::sin(th) + (2.0 / 3.0) * r * w * (c * c * c - 1.0);
    return lift(b);
  });
}

// psi = w cos(theta) + delta sin(2 pi s), u = 1/2 + r rho(s) sin(theta), theta = 2 pi n s,
// rho = 1 + eps sin(2 pi s). w = 1 / (pi n r) makes the lift close up after phi2 gains 1;
// the drift delta keeps consecutive turns from touching where psi = +-w.
LegendrianCurve fiber_knot(int n, double eps, double r) {
  if (n < 3) throw Error(ErrorKind::Precondition, kModule, "fiber knot needs n >= 3");
  if (!(r > 0.0 && r * (1.0 + std::abs(eps)) < 0.5)) throw Error(ErrorKind::Precondition, kModule, "fiber knot needs r (1 + |eps|) < 1/2");
  const double w = 1.0 / (kPi * n * r);
  const double delta = 0.3 * w;
  const double N = n;
  // antiderivative of sin(theta) / 2 + r rho sin(theta)^2
  auto F = [=](double s) {
    const double a = 1.0 + 2.0 * N, b = 1.0 - 2.0 * N;
    return -std::cos(kTwoPi * N * s) / (4.0 * kPi * N) + r * (0.5 * s - std::sin(2.0 * kTwoPi * N * s) / (8.0 * kPi * N)) +
           0.5 * r * eps *
               (-std::cos(kTwoPi * s) / kTwoPi + std::cos(kTwoPi * a * s) / (2.0 * kTwoPi * a) +
                std::cos(kTwoPi * b * s) / (2.0 * kTwoPi * b));
  };
  // antiderivative of u cos(2 pi s)
  auto G = [=](double s) {
    const double x = kTwoPi * s;
    return 0.5 * std::sin(x) / kTwoPi -
           0.5 * r * (std::cos((N + 1.0) * x) / (kTwoPi * (N + 1.0)) + std::cos((N - 1.0) * x) / (kTwoPi * (N - 1.0))) +
           0.25 * r * eps * (std::sin((N - 2.0) * x) / (kTwoPi * (N - 2.0)) - std::sin((N + 2.0) * x) / (kTwoPi * (N + 2.0)));
  };
  const double F0 = F(0.0), G0 = G(0.0);
  std::ostringstream name;
  name << "fiber" << n;
  return LegendrianCurve(name.str(), true, [=](double s) {
    const double th = kTwoPi * N * s, dth = kTwoPi * N;
    const double rho = 1.0 + eps * std::sin(kTwoPi * s), drho = eps * kTwoPi * std::cos(kTwoPi * s);
    BasePoint b;
    b.psi = w * std::cos(th) + delta * std::sin(kTwoPi * s);
    b.dpsi = -w * dth * std::sin(th) + delta * kTwoPi * std::cos(kTwoPi * s);
    b.u = 0.5 + r * rho * std::sin(th);
    b.du = r * (drho * std::sin(th) + rho * dth * std::cos(th));
    b.phi2 = w * dth * (F(s) - F0) - delta * kTwoPi * (G(s) - G0);
    return lift(b);
  });
}

// psi = p s, u = q/p + eps sin(2 pi s). Double points at s and s + m/p with equal u.
LegendrianCurve torus_knot(int p, int q, double eps) {
  if (p < 1 || q < 1 || q >= p) throw Error(ErrorKind::Precondition, kModule, "torus knot needs 0 < q < p");
  const double u0 = static_cast<double>(q) / p;
  if (!(u0 - std::abs(eps) > 0.0 && u0 + std::abs(eps) < 1.0)) throw Error(ErrorKind::Precondition, kModule, "torus knot wobble too large");
  std::ostringstream name;
  name << "torus" << p << "," << q;
  return LegendrianCurve(name.str(), true, [=](double s) {
    BasePoint b;
    b.psi = p * s;
    b.dpsi = p;
    b.u = u0 + eps * std::sin(kTwoPi * s);
    b.du = eps * kTwoPi * std::cos(kTwoPi * s);
    b.phi2 = -q * s + eps * p / kTwoPi * (std::cos(kTwoPi * s) - 1.0);
    return lift(b);
  });
}

std::vector<LegendrianCurve> test_knot_library() { return {small_unknot(), fiber_knot(), torus_knot()}; }

LegendrianCurve knot_from_spec(const std::string& spec, const StarshapedSurface& S) {
  const auto colon = spec.find(':');
  const std::string family = spec.substr(0, colon);
  const std::vector<double> v = colon == std::string::npos ? std::vector<double>{} : numbers(spec.substr(colon + 1));
  auto arg = [&](std::size_t i, double def) { return i < v.size() ? v[i] : def; };
  if (family == "unknot") return small_unknot(arg(0, 0.2), arg(1, 0.5), arg(2, 0.08), arg(3, 0.15)).on_surface(S);
  if (family == "fiber") return fiber_knot(static_cast<int>(arg(0, 5)), arg(1, 0.15), arg(2, 0.3)).on_surface(S);
  if (family == "torus") return torus_knot(static_cast<int>(arg(0, 2)), static_cast<int>(arg(1, 1)), arg(2, 0.1)).on_surface(S);
  if (family == "arc") {
    if (v.size() != 3) throw Error(ErrorKind::Parse, kModule, "arc needs k,i,j");
    const int k = static_cast<int>(v[0]);
    return quarter_arc(S, k, k, static_cast<int>(v[1]), static_cast<int>(v[2]));
  }
  throw Error(ErrorKind::Parse, kModule, "unknown knot family '" + family + "'");
}

}  // namespace lvlab
