#pragma once

#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "lvlab/common.hpp"
#include "lvlab/tolerances.hpp"

namespace lvlab {

// S = {H = 1} for a 2-homogeneous H > 0. Supported H:
//   sphere        pi |z|^2
//   ellipsoid a,b pi (|z1|^2 / a + |z2|^2 / b)
//   lp p,a,b      pi ((|z1|^2 / a)^(p/2) + (|z2|^2 / b)^(p/2))^(2/p)
class StarshapedSurface {
public:
  enum class Kind { Sphere, Ellipsoid, Lp };

  static StarshapedSurface sphere();
  static StarshapedSurface ellipsoid(double a, double b);
  static StarshapedSurface lp(double p, double a, double b);
  // "sphere", "ellipsoid:a,b", "lp:p,a,b" or a JSON object {"type":..,"a":..,"b":..,"p":..}.
  static StarshapedSurface parse(const std::string& spec);
  std::string to_json() const;

  Kind kind() const { return kind_; }
  std::string name() const;
  double H(const Vec4& z) const;
  Vec4 grad(const Vec4& z) const;
  // Radial projection z / sqrt(H(z)) and its derivative applied to v.
  Vec4 project(const Vec4& z) const;
  Vec4 project_derivative(const Vec4& z, const Vec4& v) const;
  // S lies in D(1) x D(1) iff both axis capacities are at most 1.
  bool in_bidisc() const { return a_ <= 1.0 && b_ <= 1.0; }
  // Closed form of the Reeb flow, available for the sphere and ellipsoids.
  bool has_linear_flow() const { return kind_ != Kind::Lp; }
  Vec4 linear_flow(const Vec4& z, double t) const;
  // Worst |H(t z) - t^2 H(z)| / (t^2 H(z)) over random samples.
  double homogeneity_defect(int samples, unsigned seed) const;
  // Uniform-ish random point of S (radial projection of a Gaussian sample).
  Vec4 random_point(std::mt19937_64& rng) const;

private:
  Kind kind_ = Kind::Sphere;
  double a_ = 1.0, b_ = 1.0, p_ = 2.0;
};

// J grad H / H, so lambda_S(R) = 1 on S. Throws Error(Domain) off S.
Vec4 reeb_field(const StarshapedSurface& S, const Vec4& z, const Tolerances& tol = {});
// Reeb flow by numerical integration (t may be negative).
Vec4 reeb_flow(const StarshapedSurface& S, const Vec4& z, double t, const Tolerances& tol = {});

// Curve c(s), s in [0, 1] (periodic when closed), with its derivative.
class LegendrianCurve {
public:
  using Eval = std::function<std::pair<Vec4, Vec4>(double)>;

  LegendrianCurve() = default;
  LegendrianCurve(std::string name, bool closed, Eval eval);
  // Periodic (closed) or not-a-knot (open) spline through samples at uniform s.
  static LegendrianCurve from_samples(std::string name, const std::vector<Vec4>& pts, bool closed);
  // {"name":..,"closed":bool,"points":[[x1,y1,x2,y2],..]}; closed curves do not repeat the first point.
  static LegendrianCurve from_json(const std::string& text);
  std::string to_json(int samples) const;

  const std::string& name() const { return name_; }
  bool closed() const { return closed_; }
  double param(double s) const;  // wraps closed curves, clamps arcs
  Vec4 point(double s) const { return eval_(param(s)).first; }
  Vec4 tangent(double s) const { return eval_(param(s)).second; }
  std::vector<Vec4> sample(int n) const;
  double length(int samples = 2048) const;
  // Radial projection onto S; Legendrian curves stay Legendrian.
  LegendrianCurve on_surface(const StarshapedSurface& S) const;

private:
  std::string name_;
  bool closed_ = false;
  Eval eval_;
};

// max |alpha_st(c')| / |c'| and max |H(c) - 1| over samples.
double legendrian_defect(const LegendrianCurve& c, int samples = 1000);
double surface_defect(const StarshapedSurface& S, const LegendrianCurve& c, int samples = 1000);

// Quarter circle Q_{i,j} = (xi1^i R>=0 x xi2^j R>=0) cap S, xi_l = exp(2 pi i / k_l).
LegendrianCurve quarter_arc(const StarshapedSurface& S, int k1, int k2, int i, int j);
// All k1 k2 arcs, index i k2 + j.
std::vector<LegendrianCurve> legendrian_graph(const StarshapedSurface& S, int k1, int k2);
inline std::vector<LegendrianCurve> legendrian_graph(int k) {
  return legendrian_graph(StarshapedSurface::sphere(), k, k);
}

// Knots on the round sphere, built as horizontal lifts of closed curves in the
// reduced sphere with coordinates (psi, u): u = pi |z1|^2, psi = (arg z1 - arg z2) / 2 pi.
// Self-chords of the lift correspond to double points of the base curve.
//   figure-eight base curve: small Legendrian unknot
LegendrianCurve small_unknot(double psi0 = 0.2, double u0 = 0.5, double w = 0.08, double r = 0.15);
//   n-turn spiral around u = 1/2 with radius modulation eps: Legendrian push-off of a Hopf fiber
LegendrianCurve fiber_knot(int n = 5, double eps = 0.15, double r = 0.3);
//   p-fold latitude with mean u = q / p wobbling by eps
LegendrianCurve torus_knot(int p = 2, int q = 1, double eps = 0.1);
// The closed test knots of the library (sphere versions).
std::vector<LegendrianCurve> test_knot_library();
// "unknot", "fiber[:n,eps]", "torus[:p,q,eps]", "arc:k,i,j"; the result lies on S.
LegendrianCurve knot_from_spec(const std::string& spec, const StarshapedSurface& S);

struct ReebChord {
  double s = 0.0;         // source parameter
  double T = 0.0;         // flow time (positive)
  int direction = 1;      // +1 forward, -1 backward
  int target = -1;        // index into the target list
  double u = 0.0;         // target parameter
  Vec4 end{};             // terminal point
  double distance = 0.0;  // |end - target(u)|
  bool transverse = true;
};

struct ChordSearchOptions {
  double spacing = 5e-3;       // ambient sample spacing along the source and in time
  double transversality = 1e-6;
  int max_iterations = 40;
};

// Chords from `source` to the union of `targets` with chord_min_time <= T <= t_max.
std::vector<ReebChord> chord_search(const StarshapedSurface& S, const LegendrianCurve& source,
                                    const std::vector<LegendrianCurve>& targets, double t_max, int direction,
                                    const Tolerances& tol = {}, const ChordSearchOptions& opt = {});

// Sweep L = union over t in [0, T] of Phi^{-t}(Lambda_k) on the round sphere and
// the connected components of its complement.
struct HopfSweep {
  int k = 0;
  double T = 0.0;
  std::vector<Vec4> surface;            // samples of L
  int components = -1;                  // -1 when Undecided
  std::vector<int> components_per_resolution;
  std::vector<double> lune_areas;       // area of the Hopf projection of each component
  std::string diagnostic;
};
HopfSweep hopf_sweep(int k, double T, int resolution = 24);

// Hopf map to the sphere of total area 1 (radius 1 / (2 sqrt(pi))); north pole is z2 = 0.
std::array<double, 3> hopf_project(const Vec4& z);
// Area of a spherical polygon on the area-1 sphere (vertices in order, counterclockwise seen from outside).
double spherical_polygon_area(const std::vector<std::array<double, 3>>& poly);

// Mohnke's torus iota(p, tau, t) = sqrt(tau) Phi^t(p) over Lambda x gamma, with
// gamma a squircle of area T in (0, 1] x [0, T + eps].
struct LagrangianTorusSample {
  int n_s = 0, n_gamma = 0;
  std::vector<Vec4> points;           // row-major, index a n_gamma + b
  double omega_defect = 0.0;          // max |omega(d_s, d_sigma)| / (|d_s| |d_sigma|)
  double action_lambda = 0.0;         // integral over Lambda x {gamma(0)}
  double action_gamma = 0.0;          // integral over {p} x gamma
  double disc_area = 0.0;             // area enclosed by gamma
  double T = 0.0;
};
// Throws Error(Precondition) naming the chord when a chord of length <= T + eps exists.
LagrangianTorusSample mohnke_torus(const StarshapedSurface& S, const LegendrianCurve& knot, double T, double eps,
                                   const std::vector<LegendrianCurve>& avoid = {}, int n_s = 48, int n_gamma = 48,
                                   const Tolerances& tol = {});

struct ReebCheck {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double bound = 0.0;
  std::string detail;
};

// lambda_S(R) = 1 and |d lambda_S(R, v)| for random tangent v.
ReebCheck check_reeb_normalization(const StarshapedSurface& S, int points, unsigned seed, const Tolerances& tol = {});
// Phi^1 = id on the round sphere.
ReebCheck check_hopf_period(int points, unsigned seed, const Tolerances& tol = {});
// Phi^{1/k}(Q_{0,j}) = Q_{1,j+1} pointwise.
ReebCheck check_cyclic_action(int k, int samples, const Tolerances& tol = {});
// Radial projection of random points of Gamma_1 x Gamma_2 lands on Lambda_delta.
ReebCheck check_cone(const StarshapedSurface& S, int k1, int k2, int points, unsigned seed);

}  // namespace lvlab
