#include "lvlab/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "lvlab/reeb.hpp"

namespace lvlab {

namespace {

constexpr const char* kModule = "cli";

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", std::abs(v) < 5e-4 ? 0.0 : v);
  return buf;
}

// Fixed palette; faces cycle through it.
const char* fill_colour(std::size_t i) {
  static const char* kPalette[] = {"#d8e6f3", "#f6dcc8", "#dcefd6", "#efd9ef", "#f4efc6", "#d4eeee", "#e8ddd0", "#e1e1f5"};
  return kPalette[i % 8];
}

const char* stroke_colour(std::size_t i) {
  static const char* kPalette[] = {"#1f5f99", "#b3541e", "#2e7d32", "#7b3f8c", "#8a7a12", "#1b7f7f", "#6b4f2c", "#4a4ab0"};
  return kPalette[i % 8];
}

class Svg {
public:
  Svg(int size, double x0, double y0, double x1, double y1) : size_(size), x0_(x0), y0_(y0) {
    scale_ = (size - 20.0) / std::max(x1 - x0, y1 - y0);
    out_ = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(size) +
           "\" height=\"" + std::to_string(size) + "\" viewBox=\"0 0 " + std::to_string(size) + " " + std::to_string(size) +
           "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  }
  double X(double x) const { return 10.0 + (x - x0_) * scale_; }
  double Y(double y) const { return size_ - 10.0 - (y - y0_) * scale_; }
  std::string path(const std::vector<Vec2>& pts, bool closed) const {
    std::string d;
    for (std::size_t i = 0; i < pts.size(); ++i) d += (i ? " L" : "M") + num(X(pts[i].x)) + " " + num(Y(pts[i].y));
    if (closed) d += " Z";
    return d;
  }
  void polyline(const std::vector<Vec2>& pts, bool closed, const std::string& fill, const std::string& stroke, double width) {
    if (pts.size() < 2) return;
    out_ += "<path d=\"" + path(pts, closed) + "\" fill=\"" + fill + "\" stroke=\"" + stroke + "\" stroke-width=\"" + num(width) + "\"/>\n";
  }
  void circle(Vec2 c, double r_px, const std::string& fill) {
    out_ += "<circle cx=\"" + num(X(c.x)) + "\" cy=\"" + num(Y(c.y)) + "\" r=\"" + num(r_px) + "\" fill=\"" + fill + "\"/>\n";
  }
  void text(Vec2 at, const std::string& s, int px = 11) {
    out_ += "<text x=\"" + num(X(at.x)) + "\" y=\"" + num(Y(at.y)) + "\" font-family=\"sans-serif\" font-size=\"" + std::to_string(px) +
            "\" text-anchor=\"middle\">" + s + "</text>\n";
  }
  void raw(const std::string& s) { out_ += s; }
  std::string finish() { return out_ + "</svg>\n"; }

private:
  int size_;
  double x0_, y0_, scale_ = 1.0;
  std::string out_;
};

Svg canvas_for(const Grid& g, int size) {
  if (g.periodic()) return Svg(size, 0.0, 0.0, g.period(), g.period());
  const double r = g.radius() * 1.02;
  return Svg(size, -r, -r, r, r);
}

void draw_grid(Svg& svg, const Grid& g, bool shade) {
  if (shade)
    for (std::size_t f = 0; f < g.face_count(); ++f) svg.polyline(g.cached_polygon(static_cast<int>(f)), true, fill_colour(f), "none", 0.0);
  for (std::size_t a = 0; a < g.arcs().size(); ++a) {
    const bool bd = g.boundary_arc(static_cast<int>(a));
    svg.polyline(g.arcs()[a].points, false, "none", bd ? "#777777" : "#111111", bd ? 1.0 : 2.0);
  }
  for (const auto& p : g.marked_points()) svg.circle(p, 2.5, "#c62828");
}

}  // namespace

std::string svg_grid(const Grid& g, const PlotOptions& opt) {
  Svg svg = canvas_for(g, opt.size);
  draw_grid(svg, g, opt.shade_faces);
  return svg.finish();
}

std::string svg_foliation(const LiouvilleForm2D& f, const std::vector<Trajectory>& trajectories, const PlotOptions& opt) {
  const Grid& g = f.grid();
  Svg svg = canvas_for(g, opt.size);
  if (opt.shade_faces)
    for (std::size_t i = 0; i < g.face_count(); ++i) svg.polyline(g.cached_polygon(static_cast<int>(i)), true, fill_colour(i), "none", 0.0);
  const Foliation& fol = f.foliation();
  for (std::size_t i = 0; i < fol.face_count(); ++i)
    for (int l = 0; l < opt.leaves_per_face; ++l) {
      const double theta = (l + 0.5) / opt.leaves_per_face;
      std::vector<Vec2> pts;
      for (int s = 0; s <= opt.leaf_samples; ++s)
        pts.push_back(fol.leaf(static_cast<int>(i), theta, static_cast<double>(s) / opt.leaf_samples));
      svg.polyline(pts, false, "none", stroke_colour(i), 0.6);
    }
  draw_grid(svg, g, false);
  for (std::size_t t = 0; t < trajectories.size(); ++t) {
    std::vector<Vec2> pts;
    for (const auto& p : trajectories[t].points) pts.push_back(p.x);
    svg.polyline(pts, false, "none", "#e65100", 1.2);
    if (!pts.empty()) svg.circle(pts.front(), 2.0, "#e65100");
  }
  return svg.finish();
}

std::string svg_divisor(const WeightedDivisor& d, const PlotOptions& opt) {
  Svg svg(opt.size, -1.3, -1.3, 1.3, 1.3);
  const std::size_t n = d.size();
  std::vector<Vec2> at(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = kPi / 2.0 - kTwoPi * static_cast<double>(i) / static_cast<double>(std::max<std::size_t>(n, 1));
    at[i] = {std::cos(a), std::sin(a)};
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto c = d.crossings(i, j);
      if (c == 0) continue;
      svg.polyline({at[i], at[j]}, false, "none", "#555555", 1.0 + std::min<double>(static_cast<double>(c), 5.0));
      svg.text({0.5 * (at[i].x + at[j].x), 0.5 * (at[i].y + at[j].y) + 0.03}, std::to_string(c));
    }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& c = d.components[i];
    svg.circle(at[i], 16.0, fill_colour(i));
    svg.text({at[i].x, at[i].y - 0.02}, "S" + std::to_string(i));
    svg.text({at[i].x * 1.17, at[i].y * 1.17 - 0.02},
             "g" + std::to_string(c.genus) + " b" + std::to_string(c.boundary) + " A" + num(c.area) + " w" + num(c.weight), 10);
  }
  return svg.finish();
}

std::string svg_monotone(const MonotoneK& k, std::int64_t m, std::int64_t n, const PlotOptions& opt) {
  // K crossing points on a horizontal line; vertical discs as brackets above, horizontal discs below.
  const double K = static_cast<double>(std::max<std::int64_t>(k.K, 1));
  Svg svg(opt.size, -0.5, -0.6 * K, K + 0.5, 0.6 * K);
  svg.polyline({{0.0, 0.0}, {K, 0.0}}, false, "none", "#111111", 1.5);
  for (std::size_t c = 0; c < k.assignment.size(); ++c) {
    const Vec2 p{static_cast<double>(c) + 0.5, 0.0};
    const auto [i, j] = k.assignment[c];
    svg.polyline({{p.x, 0.0}, {p.x, 0.25 * K}}, false, "none", stroke_colour(static_cast<std::size_t>(i)), 1.0);
    svg.polyline({{p.x, 0.0}, {p.x, -0.25 * K}}, false, "none", stroke_colour(static_cast<std::size_t>(j) + 3), 1.0);
    svg.circle(p, 3.0, "#111111");
  }
  for (std::int64_t i = 0; i < m; ++i) svg.text({(i + 0.5) * K / static_cast<double>(m), 0.32 * K}, "V" + std::to_string(i));
  for (std::int64_t j = 0; j < n; ++j) svg.text({(j + 0.5) * K / static_cast<double>(n), -0.36 * K}, "H" + std::to_string(j));
  svg.text({0.5 * K, 0.5 * K}, "K = " + std::to_string(k.K));
  return svg.finish();
}

std::string svg_hopf(int k, const PlotOptions& opt) {
  if (k < 2) throw Error(ErrorKind::Precondition, kModule, "svg_hopf needs k >= 2");
  const double R = 1.0 / (2.0 * std::sqrt(kPi));
  Svg svg(opt.size, -1.1 * R, -1.1 * R, 1.1 * R, 1.1 * R);
  // Oblique orthographic view: rotate about the x axis so the poles are visible.
  const double tilt = 0.35;
  auto view = [&](const std::array<double, 3>& p) {
    return Vec2{p[0], std::cos(tilt) * p[2] - std::sin(tilt) * p[1]};
  };
  auto depth = [&](const std::array<double, 3>& p) { return std::sin(tilt) * p[2] + std::cos(tilt) * p[1]; };
  std::vector<Vec2> rim;
  for (int s = 0; s < 128; ++s) rim.push_back({R * std::cos(kTwoPi * s / 128), R * std::sin(kTwoPi * s / 128)});
  svg.polyline(rim, true, "#f7f7f7", "#999999", 1.0);
  const auto S = StarshapedSurface::sphere();
  for (int j = 0; j < k; ++j) {
    const LegendrianCurve q = quarter_arc(S, k, k, 0, j);
    std::vector<Vec2> front, back;
    auto flush = [&](std::vector<Vec2>& v, bool is_front) {
      svg.polyline(v, false, "none", stroke_colour(static_cast<std::size_t>(j)), is_front ? 2.0 : 0.8);
      v.clear();
    };
    bool was_front = true;
    for (int s = 0; s <= 64; ++s) {
      const auto p = hopf_project(q.point(s / 64.0));
      const bool is_front = depth(p) <= 0.0;
      if (s > 0 && is_front != was_front) {
        auto& cur = was_front ? front : back;
        cur.push_back(view(p));
        flush(cur, was_front);
      }
      (is_front ? front : back).push_back(view(p));
      was_front = is_front;
    }
    flush(front, true);
    flush(back, false);
  }
  svg.text({0.0, -1.05 * R}, std::to_string(k) + " lunes of area 1/" + std::to_string(k));
  return svg.finish();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, kModule, "cannot write " + path);
  out << content;
  if (!out) throw Error(ErrorKind::Io, kModule, "write failed for " + path);
}

}  // namespace lvlab
