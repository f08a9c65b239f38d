#include <doctest.h>

#include <cstring>
#include <string>

#include "lvlab/lvlab.h"

namespace {

std::string take(char* s) {
  std::string r = s ? s : "";
  lv_string_free(s);
  return r;
}

}  // namespace

TEST_CASE("version and config") {
  CHECK(std::strlen(lv_version()) > 0);
  lv_config* c = nullptr;
  REQUIRE(lv_config_new(&c) == LV_OK);
  uint64_t seed = 0;
  CHECK(lv_config_seed(c, &seed) == LV_OK);
  CHECK(seed == 20240601u);
  CHECK(lv_config_set_seed(c, 5) == LV_OK);
  CHECK(lv_config_seed(c, &seed) == LV_OK);
  CHECK(seed == 5u);
  CHECK(lv_config_set_tolerance(c, "chord", 1e-6) == LV_OK);
  CHECK(lv_config_set_tolerance(c, "bogus", 1.0) == LV_ERR_ARGUMENT);
  CHECK(std::string(lv_last_error()).find("bogus") != std::string::npos);
  char* js = nullptr;
  REQUIRE(lv_config_tolerances_json(c, &js) == LV_OK);
  CHECK(take(js).find("\"chord\"") != std::string::npos);
  lv_config_free(c);
  lv_config_free(nullptr);
}

TEST_CASE("null arguments are rejected") {
  CHECK(lv_config_new(nullptr) == LV_ERR_ARGUMENT);
  CHECK(lv_grid_from_spec(nullptr, "radial:3", 1.0, nullptr) == LV_ERR_ARGUMENT);
  size_t n = 0;
  CHECK(lv_grid_face_count(nullptr, &n) == LV_ERR_ARGUMENT);
  CHECK(lv_form_build(nullptr, 1, nullptr) == LV_ERR_ARGUMENT);
  int ok = 0;
  CHECK(lv_feasible_baby_json(3, &ok, nullptr) == LV_ERR_ARGUMENT);
}

TEST_CASE("grid and form lifecycle") {
  lv_grid* g = nullptr;
  REQUIRE(lv_grid_from_spec(nullptr, "radial:4", 1.0, &g) == LV_OK);
  size_t n = 0;
  CHECK(lv_grid_face_count(g, &n) == LV_OK);
  CHECK(n == 4);
  char* js = nullptr;
  REQUIRE(lv_grid_to_json(g, &js) == LV_OK);
  lv_grid* h = nullptr;
  CHECK(lv_grid_from_json(nullptr, js, &h) == LV_OK);
  lv_string_free(js);
  lv_grid_free(h);

  lv_form* f = nullptr;
  REQUIRE(lv_form_build(g, 1, &f) == LV_OK);
  double lambda[2], X[2];
  CHECK(lv_form_eval(f, 0.1, 0.2, lambda, X) == LV_OK);
  CHECK(-X[1] == doctest::Approx(lambda[0]));
  double I = 0.0;
  CHECK(lv_form_residue(f, 0, 1e-2, &I) == LV_OK);
  CHECK(I == doctest::Approx(-0.25).epsilon(0.05));
  CHECK(lv_form_residue(f, 9, 1e-2, &I) != LV_OK);
  REQUIRE(lv_form_flow_json(f, 0.1, 0.2, 20.0, 1, &js) == LV_OK);
  CHECK(take(js).find("ConvergedTo") != std::string::npos);
  lv_form_free(f);
  lv_grid_free(g);
}

TEST_CASE("error codes follow the failure kind") {
  lv_grid* g = nullptr;
  CHECK(lv_grid_from_spec(nullptr, "radial:x", 1.0, &g) == LV_ERR_PARSE);
  CHECK(g == nullptr);
  CHECK(lv_grid_from_json(nullptr, "{not json", &g) == LV_ERR_PARSE);
  CHECK(lv_grid_from_spec(nullptr, "radial:1", 1.0, &g) == LV_ERR_PRECONDITION);
  CHECK(lv_grid_from_spec(nullptr, "/nonexistent/grid.json", 1.0, &g) == LV_ERR_IO);
  REQUIRE(lv_grid_from_spec(nullptr, "sectors:0.2,0.3,0.5", 1.0, &g) == LV_OK);
  lv_form* f = nullptr;
  CHECK(lv_form_build(g, 1, &f) == LV_ERR_CONSTRUCTION);
  CHECK(std::strlen(lv_last_error()) > 0);
  lv_grid_free(g);
  char* js = nullptr;
  CHECK(lv_reeb_chords_json(nullptr, "sphere", "unknot", "self", 1.0, 0, &js) != LV_OK);
  CHECK(lv_reeb_knot_json("cube", "unknot", 16, &js) == LV_ERR_PARSE);
}

TEST_CASE("feasibility reports") {
  int ok = -1;
  char* js = nullptr;
  REQUIRE(lv_feasible_baby_json(3, &ok, &js) == LV_OK);
  CHECK(ok == 1);
  const std::string s = take(js);
  CHECK(s.find("\"A\": \"2\"") != std::string::npos);
  REQUIRE(lv_feasible_ellipsoid_json(2, 2, 1, &ok, &js) == LV_OK);
  CHECK(ok == 0);
  lv_string_free(js);
  REQUIRE(lv_feasible_remb_json(2, &ok, &js) == LV_OK);
  CHECK(ok == 1);
  lv_string_free(js);
  const char* div = R"({"components":[{"genus":0,"boundary":1,"area":1,"weight":1},{"genus":0,"boundary":1,"area":1,"weight":1}],"intersections":[[0,1],[1,0]]})";
  REQUIRE(lv_smooth_json(div, "[[0,1,1]]", &js) == LV_OK);
  CHECK(take(js).find("\"genus\"") != std::string::npos);
  CHECK(lv_smooth_json(div, "[[0,1,2]]", &js) == LV_ERR_PRECONDITION);
  CHECK(lv_smooth_json(div, "[[0,1", &js) == LV_ERR_PARSE);
}

TEST_CASE("reeb entry points") {
  int comps = 0;
  char* js = nullptr;
  REQUIRE(lv_reeb_sweep_json(3, 1.0 / 3.0, 24, &comps, &js) == LV_OK);
  lv_string_free(js);
  CHECK(comps == 3);
  REQUIRE(lv_reeb_knot_json("sphere", "torus", 32, &js) == LV_OK);
  lv_string_free(js);
  REQUIRE(lv_reeb_chords_json(nullptr, "sphere", "unknot", "self", 1.0, 1, &js) == LV_OK);
  CHECK(take(js).find("\"T\"") != std::string::npos);
}

TEST_CASE("plots") {
  char* a = nullptr;
  char* b = nullptr;
  REQUIRE(lv_plot_hopf(3, &a) == LV_OK);
  REQUIRE(lv_plot_hopf(3, &b) == LV_OK);
  CHECK(std::strcmp(a, b) == 0);
  lv_string_free(a);
  lv_string_free(b);
  CHECK(lv_write_file("/nonexistent/dir/x.svg", "x") == LV_ERR_IO);
}
