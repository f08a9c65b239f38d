#pragma once

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "lvlab/grid.hpp"

namespace lvlab {

// Straight-leaf vanishing foliation of one face, seen from its marked point p.
// Leaves are the segments from p to the boundary; the leaf label theta is the
// fan area swept from the reference leaf, divided by the face area. In the
// chart R = a r^2 / rho(phi)^2, theta = F(phi) / a one has omega = dR ^ dtheta.
struct FaceFoliation {
  int face = -1;
  Vec2 p;                      // marked point (face frame)
  double area = 0.0;           // a_i
  double phi0 = 0.0;           // Euclidean angle of leaf theta = 0 (first vertex)
  std::vector<BoundaryPiece> pieces;
  std::vector<double> piece_phi;  // unwrapped angle at piece starts, size n+1
  std::vector<double> piece_F;    // fan area at piece starts, size n+1
  std::vector<double> piece_area; // fan area of each piece
  std::vector<int> vertices;      // boundary vertices in cycle order
  std::vector<double> vertex_theta;
  std::vector<std::size_t> vertex_piece;  // first piece after each vertex
  std::vector<double> beta;       // fan-area fractions between consecutive vertices
  double min_rho = 0.0;           // distance from p to the face boundary
};

class Foliation {
public:
  // Throws Error(Construction) for irregular grids and non-star-shaped faces.
  static Foliation build(const Grid& g);

  const Grid& grid() const { return *grid_; }
  const FaceFoliation& face(int i) const { return faces_[i]; }
  std::size_t face_count() const { return faces_.size(); }

  // Boundary distance along the ray at angle phi (any real) from p_i.
  double rho(int i, double phi) const;
  // Fan area F(phi) for phi in [phi0, phi0 + 2 pi].
  double fan_area(int i, double phi) const;
  // Inverse of theta -> phi (theta taken mod 1).
  double leaf_angle(int i, double theta) const;
  // gamma_i(theta, t) = p_i + t rho e(phi(theta)), t = 0 at p_i, t = 1 on the boundary.
  Vec2 leaf(int i, double theta, double t) const;
  // Face chart coordinates (R, theta) of x in face i (x given in the face frame).
  Vec2 chart(int i, Vec2 x) const;
  // F(phi(x)) - F(phi(q)) for q the boundary vertex of face i nearest to qf,
  // summed locally so that the result keeps its relative accuracy near q.
  double fan_area_from_vertex(int i, Vec2 qf, Vec2 x) const;
  // Area between leaf 0 and leaf theta, by shoelace over the face's boundary samples.
  double swept_area(int i, double theta) const;

private:
  const Grid* grid_ = nullptr;
  std::vector<FaceFoliation> faces_;
  friend class LiouvilleForm2D;
};

// Smoothing data at an interior vertex q with m incident straight arcs.
struct VertexSmoothing {
  int vertex = -1;
  Vec2 q;
  int m = 0;
  double rotation = 0.0;  // Euclidean angle of the first arc
  double eps = 0.0;       // chi = R on [eps, 2 eps]; the chart disc is {R < 2 eps}
  double r_out = 0.0;     // Euclidean radius of the chart disc
  double kappa = 0.0;     // chi(eps/2) = kappa eps / 2
};

// Weight split of one face: residues -a1, -a2 at p -/+ delta e.
struct WeightSplit {
  int face = -1;
  double a1 = 0.0, a2 = 0.0;
  Vec2 p1, p2;
  double r1 = 0.0, r2 = 0.0;  // cutoff is 1 on [0, r1], 0 beyond r2; D_i = disc of radius r2
};

enum class FlowClass { ConvergedTo, OnSkeleton, Undecided };

struct TrajectoryPoint {
  double t = 0.0;
  Vec2 x;
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;
  FlowClass classification = FlowClass::Undecided;
  int face = -1;
  double hit_time = 0.0;    // t+ (ConvergedTo only)
  double chart_time = -1.0; // time the flow entered the pole chart (or D_i), -1 if never
  std::string diagnostic;
};

class LiouvilleForm2D {
public:
  static LiouvilleForm2D build(const Grid& g, bool smoothing = true);

  // Grid and foliation live on the heap so copies stay valid.
  const Grid& grid() const { return *grid_; }
  const Foliation& foliation() const { return *fol_; }
  bool smoothed() const { return smoothing_; }
  const std::vector<VertexSmoothing>& smoothing() const { return vertex_; }
  const std::vector<WeightSplit>& splits() const { return splits_; }
  const Tolerances& tolerances() const { return grid_->tolerances(); }

  // lambda as a covector (dx, dy components) and X with omega(X, .) = lambda.
  Vec2 lambda(Vec2 x) const;
  Vec2 X(Vec2 x) const;
  // Same with the face already known; x must be in that face's frame.
  Vec2 lambda_in_face(int face, Vec2 x) const;

  // chi and its derivative for a vertex chart.
  static double chi(const VertexSmoothing& v, double R);
  static double chi_prime(const VertexSmoothing& v, double R);

  // Loop integral of lambda over {R = rho} around pole `pole` of face i.
  double residue_loop_integral(int face, double rho, int pole = 0) const;
  // Poles of face i (one, or two after a split).
  std::vector<Vec2> poles(int face) const;

  Trajectory flow(Vec2 start, double t_max, int direction = 1) const;

  const std::shared_ptr<const Grid>& grid_ptr() const { return grid_; }

private:
  std::shared_ptr<const Grid> grid_;
  std::shared_ptr<const Foliation> fol_;
  bool smoothing_ = false;
  std::vector<VertexSmoothing> vertex_;
  std::vector<WeightSplit> splits_;

  const WeightSplit* split_of(int face) const;
  // Vertex disc containing x (face frame), with the displacement x - q.
  const VertexSmoothing* vertex_disc(Vec2 x, Vec2* d) const;
  Vec2 lambda_unsplit(int face, Vec2 x) const;
  Vec2 lambda_vertex(const VertexSmoothing& v, int face, Vec2 x, Vec2 d) const;
  Vec2 lambda_face(int face, Vec2 x) const;

  friend LiouvilleForm2D split_weights(const LiouvilleForm2D&, int, double, double);
};

Foliation build_foliation(const Grid& g);

// Replaces the pole of face i by two poles carrying residues -a1 and -a2.
LiouvilleForm2D split_weights(const LiouvilleForm2D& f, int face, double a1, double a2);

inline Vec2 eval_lambda(const LiouvilleForm2D& f, Vec2 x) { return f.lambda(x); }
inline Vec2 eval_X(const LiouvilleForm2D& f, Vec2 x) { return f.X(x); }
inline double residue_loop_integral(const LiouvilleForm2D& f, int face, double rho, int pole = 0) {
  return f.residue_loop_integral(face, rho, pole);
}

// Form file: {"format":"lvlab-form","grid":{...},"smoothing":bool,"splits":[{face,a1,a2}]}.
std::string form_to_json(const LiouvilleForm2D& f);
LiouvilleForm2D form_from_json(const std::string& text, const Tolerances& tol = {});

// Invariant battery; each entry is one named check.
struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;  // worst observed quantity
  double bound = 0.0;
  std::string detail;
};

struct CheckOptions {
  int closedness_points = 1000;
  int basin_points = 10000;
  int gamma_points = 64;
  double t_max = 20.0;
  unsigned seed = 1;
};

std::vector<CheckResult> check_form(const LiouvilleForm2D& f, const CheckOptions& opt = {});

// Individual checks, exposed for tests.
CheckResult check_closedness(const LiouvilleForm2D& f, int points, unsigned seed);
CheckResult check_leaf_vanishing(const LiouvilleForm2D& f);
CheckResult check_swept_area(const LiouvilleForm2D& f);
CheckResult check_basin_partition(const LiouvilleForm2D& f, int points, double t_max, unsigned seed);
CheckResult check_gamma_invariance(const LiouvilleForm2D& f, int points, double t_max);
CheckResult check_backward(const LiouvilleForm2D& f, int points, double t_max, unsigned seed);

// False when central differences of lambda at x (face frame) may straddle a locus
// where lambda is only continuous, or come too close to a pole.
bool fd_safe(const LiouvilleForm2D& f, int face, Vec2 x);

// Uniform random point of the disc (or periodic square) of the grid.
Vec2 random_point(const Grid& g, std::mt19937_64& rng);

}  // namespace lvlab
