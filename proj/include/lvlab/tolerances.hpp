#pragma once

#include <string>
#include <vector>

namespace lvlab {

// Every numeric tolerance used by the library. Defaults are the documented
// values; the CLI overrides them by name (`--tol name=value`).
struct Tolerances {
  // grid2d
  int arc_samples = 256;            // samples per constructed arc
  double on_grid_band = 1e-9;       // area units; point-on-Gamma tie break
  double kink_angle = 1e-3;         // rad; tangent jump that counts as a corner
  double area_partition = 1e-6;     // relative; sum of face areas vs A
  double boundary_position = 1e-9;  // relative to the disc radius
  double regular_angle = 1e-4;      // rad; equal-sector test
  double straight_chart = 1e-10;    // relative deviation allowed in a straight vertex chart

  // liouville2d
  double flow_abs_tol = 1e-9;
  double flow_rel_tol = 1e-9;
  double chart_fraction = 0.25;     // p_i chart is {R_i < chart_fraction * a_i}
  double vertex_chart_fraction = 0.25;
  double convergence = 1e-6;        // terminal distance to p_i for ConvergedTo
  double gamma_band = 1e-3;         // Gamma invariance band
  double fd_step = 1e-5;
  double fd_rel = 1e-4;
  double singular_margin = 1e-3;    // distance kept from non-smooth loci in FD checks

  // reeb3
  double on_surface = 1e-8;
  double legendrian_defect = 1e-7;
  double chord = 1e-5;
  double reeb_abs_tol = 1e-12;
  double reeb_rel_tol = 1e-12;
  double chord_min_time = 1e-4;
};

struct ToleranceEntry {
  std::string name;
  double value;
};

// Returns false if `name` is unknown or the value is not positive.
bool set_tolerance(Tolerances& tol, const std::string& name, double value);
std::vector<ToleranceEntry> list_tolerances(const Tolerances& tol);

}  // namespace lvlab
