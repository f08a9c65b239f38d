#pragma once

#include <string>
#include <vector>

#include "lvlab/divisor.hpp"
#include "lvlab/grid.hpp"
#include "lvlab/liouville.hpp"

namespace lvlab {

// All renderers return a complete SVG document. Output depends only on the
// arguments; numbers are printed with fixed precision so files are byte-stable.
struct PlotOptions {
  int size = 480;              // pixels per side
  int leaves_per_face = 16;
  int leaf_samples = 24;
  bool shade_faces = true;
};

std::string svg_grid(const Grid& g, const PlotOptions& opt = {});
// Grid, leaves of every face (thin) and the skeleton Gamma (thick), plus trajectories.
std::string svg_foliation(const LiouvilleForm2D& f, const std::vector<Trajectory>& trajectories = {},
                          const PlotOptions& opt = {});
// Components as nodes on a circle, crossings as labelled edges.
std::string svg_divisor(const WeightedDivisor& d, const PlotOptions& opt = {});
// Vertical and horizontal blocks of the monotone certificate, crossing points coloured by pair.
std::string svg_monotone(const MonotoneK& k, std::int64_t m, std::int64_t n, const PlotOptions& opt = {});
// Orthographic view of the area-1 sphere with the meridians h_j = pi(Q_{0,j}) and the k lunes.
std::string svg_hopf(int k, const PlotOptions& opt = {});

// Throws Error(Io) when the file cannot be written.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace lvlab
