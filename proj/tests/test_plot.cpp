#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lvlab/plot.hpp"

using namespace lvlab;

namespace {

int count(const std::string& s, const std::string& needle) {
  int n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("grid plot is a deterministic svg with one shaded region per face") {
  const Grid g = make_radial_grid(4, 1.0);
  const std::string a = svg_grid(g), b = svg_grid(make_radial_grid(4, 1.0));
  CHECK(a == b);
  CHECK(a.find("<svg") != std::string::npos);
  CHECK(a.find("</svg>") != std::string::npos);
  CHECK(count(a, "stroke=\"none\"") == 4);
}

TEST_CASE("other renderers produce documents") {
  const auto f = LiouvilleForm2D::build(make_radial_grid(3, 1.0));
  const std::string fol = svg_foliation(f, {f.flow({0.1, 0.1}, 5.0)});
  CHECK(fol.find("</svg>") != std::string::npos);
  CHECK(fol == svg_foliation(f, {f.flow({0.1, 0.1}, 5.0)}));
  CHECK(svg_hopf(3).find("</svg>") != std::string::npos);
  CHECK(svg_monotone(monotone_K(2, 2, 1.0, 1.0), 2, 2).find("</svg>") != std::string::npos);
  WeightedDivisor d;
  d.components = {{0, 1, 1.0, 1.0}, {1, 0, 2.0, 1.0}};
  d.intersections = {{0, 3}, {3, 0}};
  CHECK(svg_divisor(d).find(">3<") != std::string::npos);
}

TEST_CASE("write_text_file") {
  const auto path = std::filesystem::temp_directory_path() / "lvlab_plot_test.svg";
  write_text_file(path.string(), "<svg/>");
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == "<svg/>");
  std::filesystem::remove(path);
  CHECK_THROWS_AS(write_text_file("/nonexistent/dir/x.svg", "x"), Error);
}
