#include "lvlab/tolerances.hpp"

#include <cmath>
#include <functional>
#include <utility>

namespace lvlab {

namespace {

template <class F>
void for_each_field(Tolerances& t, F&& f) {
  f("on_grid_band", t.on_grid_band);
  f("kink_angle", t.kink_angle);
  f("area_partition", t.area_partition);
  f("boundary_position", t.boundary_position);
  f("regular_angle", t.regular_angle);
  f("straight_chart", t.straight_chart);
  f("flow_abs_tol", t.flow_abs_tol);
  f("flow_rel_tol", t.flow_rel_tol);
  f("chart_fraction", t.chart_fraction);
  f("vertex_chart_fraction", t.vertex_chart_fraction);
  f("convergence", t.convergence);
  f("gamma_band", t.gamma_band);
  f("fd_step", t.fd_step);
  f("fd_rel", t.fd_rel);
  f("singular_margin", t.singular_margin);
  f("on_surface", t.on_surface);
  f("legendrian_defect", t.legendrian_defect);
  f("chord", t.chord);
  f("reeb_abs_tol", t.reeb_abs_tol);
  f("reeb_rel_tol", t.reeb_rel_tol);
  f("chord_min_time", t.chord_min_time);
}

}  // namespace

bool set_tolerance(Tolerances& tol, const std::string& name, double value) {
  if (!(value > 0.0) || !std::isfinite(value)) return false;
  if (name == "arc_samples") {
    if (value < 4 || value > 1e6) return false;
    tol.arc_samples = static_cast<int>(value);
    return true;
  }
  bool found = false;
  for_each_field(tol, [&](const char* n, double& field) {
    if (name == n) {
      field = value;
      found = true;
    }
  });
  return found;
}

std::vector<ToleranceEntry> list_tolerances(const Tolerances& tol) {
  std::vector<ToleranceEntry> out;
  out.push_back({"arc_samples", static_cast<double>(tol.arc_samples)});
  Tolerances copy = tol;
  for_each_field(copy, [&](const char* n, double& field) { out.push_back({n, field}); });
  return out;
}

}  // namespace lvlab
