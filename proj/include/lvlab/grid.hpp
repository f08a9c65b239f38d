#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lvlab/common.hpp"
#include "lvlab/spline.hpp"
#include "lvlab/tolerances.hpp"

namespace lvlab {

struct Vertex {
  Vec2 position;
  int valence = 0;
  bool boundary = false;
};

struct Arc {
  int v0 = -1;
  int v1 = -1;
  std::vector<Vec2> points;
};

// An arc traversed inside a face boundary. `shift` is the lattice translation
// applied to the arc samples (zero except on the periodic square).
struct OrientedArc {
  int arc = -1;
  bool reversed = false;
  Vec2 shift;
};

// One cubic piece of an arc spline as seen from a face: u runs over [0, h]
// in the face orientation.
struct BoundaryPiece {
  int arc = -1;
  std::size_t piece = 0;
  bool reversed = false;
  Vec2 shift;
  double h = 0.0;
};

struct SectorChart {
  int vertex = -1;
  Vec2 center;
  double rotation = 0.0;              // angle of the first ray
  std::vector<double> sector_angles;  // consecutive sector angles (rad)
  std::vector<double> deviations;     // |sector - ideal|
  bool boundary = false;
  bool regular = false;
};

struct RegularityReport {
  bool regular = true;
  std::vector<SectorChart> charts;
  std::string failure;  // names the first offending vertex
};

class Grid {
public:
  // Validates and assembles a grid. Throws Error(Geometry) on invalid input.
  static Grid build(double ambient_area, std::vector<Vec2> vertex_positions, std::vector<Arc> arcs,
                    std::vector<std::vector<int>> faces, std::vector<Vec2> marked_points,
                    bool periodic, const Tolerances& tol = {});

  double ambient_area() const { return area_; }
  bool periodic() const { return periodic_; }
  double period() const { return period_; }  // side length of the periodic square
  double radius() const { return disc_radius(area_); }
  bool regular() const { return regularity_.regular; }
  const RegularityReport& regularity() const { return regularity_; }
  const Tolerances& tolerances() const { return tol_; }

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  const std::vector<std::vector<int>>& faces() const { return faces_; }
  const std::vector<Vec2>& marked_points() const { return marked_; }
  const std::vector<double>& face_areas() const { return face_areas_; }
  std::size_t face_count() const { return faces_.size(); }

  const SplineCurve2& arc_curve(int a) const { return curves_[a]; }
  bool boundary_arc(int a) const { return boundary_arc_[a]; }
  const std::vector<OrientedArc>& face_cycle(int f) const { return cycles_[f]; }
  const std::vector<BoundaryPiece>& face_pieces(int f) const { return pieces_[f]; }

  // Point and derivative of a boundary piece at local parameter u in [0, h].
  Vec2 piece_point(const BoundaryPiece& p, double u) const;
  Vec2 piece_tangent(const BoundaryPiece& p, double u) const;
  // Dense boundary polygon of face f (arc samples, shifted), CCW, no repeat.
  std::vector<Vec2> face_polygon(int f) const;
  const std::vector<Vec2>& cached_polygon(int f) const { return polys_[f]; }
  // Index of a face whose closed polygon contains p (after wrapping), or -1.
  // On periodic grids `p` is replaced by the representative in that face's frame.
  int locate_face(Vec2& p) const;
  // Euclidean distance from p to Gamma (all arcs, boundary included).
  double distance_to_gamma(Vec2 p) const;
  // Wraps a point into the fundamental square (identity on discs).
  Vec2 wrap(Vec2 p) const;

private:
  double area_ = 0.0;
  double period_ = 0.0;
  bool periodic_ = false;
  Tolerances tol_;
  std::vector<Vertex> vertices_;
  std::vector<Arc> arcs_;
  std::vector<std::vector<int>> faces_;
  std::vector<Vec2> marked_;
  std::vector<double> face_areas_;
  std::vector<SplineCurve2> curves_;
  std::vector<bool> boundary_arc_;
  std::vector<std::vector<OrientedArc>> cycles_;
  std::vector<std::vector<BoundaryPiece>> pieces_;
  std::vector<std::array<double, 4>> face_boxes_;
  std::vector<std::vector<Vec2>> polys_;
  RegularityReport regularity_;

  friend RegularityReport validate_regular(const Grid& g);
};

// Builders.
Grid make_radial_grid(int k, double area, const Tolerances& tol = {});
// Rays at cumulative fractions of the full turn starting at angle 0;
// fractions must be positive and sum to one.
Grid make_sector_grid(const std::vector<double>& fractions, double area, const Tolerances& tol = {});
Grid make_periodic_grid(int n, const Tolerances& tol = {});
// Disc of area A cut by one bent diameter so that the lower face has area `lower_area`.
Grid make_bump_grid(double area, double lower_area, const Tolerances& tol = {});
// Three-armed grid with its interior vertex at `center`; arms leave at 120 degrees,
// stay straight for `straight` (fraction of the radius) and meet the circle radially.
Grid make_tripod_grid(double area, Vec2 center, double straight, const Tolerances& tol = {});

std::vector<double> face_areas(const Grid& g);
double max_face_area(const Grid& g);
RegularityReport validate_regular(const Grid& g);

// Shoelace area of a closed polygon (positive when counter-clockwise).
double shoelace_area(const std::vector<Vec2>& poly);
bool point_in_polygon(const std::vector<Vec2>& poly, Vec2 p);
double distance_to_polyline(const std::vector<Vec2>& poly, Vec2 p, bool closed);

// JSON I/O (format: ambient_area, vertices, arcs, faces, marked_points, periodic).
std::string grid_to_json(const Grid& g);
Grid grid_from_json(const std::string& text, const Tolerances& tol = {});
Grid load_grid(const std::string& path, const Tolerances& tol = {});
void save_grid(const Grid& g, const std::string& path);

// Parses "radial:K", "sectors:f1,f2,...", "periodic:N", "bump:a", "tripod:x,y,s"
// or a JSON file path; `area` applies to disc grids.
Grid grid_from_spec(const std::string& spec, double area, const Tolerances& tol = {});

}  // namespace lvlab
