#include "lvlab/lvlab.h"

#include <cstring>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lvlab/divisor.hpp"
#include "lvlab/grid.hpp"
#include "lvlab/liouville.hpp"
#include "lvlab/plot.hpp"
#include "lvlab/polar4.hpp"
#include "lvlab/reeb.hpp"
#include "lvlab/tolerances.hpp"

using nlohmann::json;

struct lv_config {
  lvlab::Tolerances tol;
  std::uint64_t seed = 20240601;
};

struct lv_grid {
  std::shared_ptr<const lvlab::Grid> grid;
};

struct lv_form {
  std::shared_ptr<const lvlab::LiouvilleForm2D> form;
};

namespace {

thread_local std::string g_last_error;

struct ArgumentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

lv_status status_of(lvlab::ErrorKind k) {
  switch (k) {
    case lvlab::ErrorKind::Precondition: return LV_ERR_PRECONDITION;
    case lvlab::ErrorKind::Domain: return LV_ERR_DOMAIN;
    case lvlab::ErrorKind::Geometry: return LV_ERR_GEOMETRY;
    case lvlab::ErrorKind::Construction: return LV_ERR_CONSTRUCTION;
    case lvlab::ErrorKind::Parse: return LV_ERR_PARSE;
    case lvlab::ErrorKind::Io: return LV_ERR_IO;
  }
  return LV_ERR_INTERNAL;
}

template <class F>
lv_status guarded(F&& f) {
  try {
    f();
    return LV_OK;
  } catch (const lvlab::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const ArgumentError& e) {
    g_last_error = e.what();
    return LV_ERR_ARGUMENT;
  } catch (const json::exception& e) {
    g_last_error = std::string("parse error: ") + e.what();
    return LV_ERR_PARSE;
  } catch (const std::exception& e) {
    g_last_error = std::string("internal error: ") + e.what();
    return LV_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "internal error";
    return LV_ERR_INTERNAL;
  }
}

template <class T>
void need(T* p, const char* what) {
  if (p == nullptr) throw ArgumentError(std::string(what) + " is NULL");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void put(char** out, const std::string& s) {
  need(out, "output");
  *out = dup(s);
}

const lvlab::Tolerances& tol_of(const lv_config* c) {
  static const lvlab::Tolerances kDefault;
  return c ? c->tol : kDefault;
}

unsigned seed_of(const lv_config* c) {
  return static_cast<unsigned>(c ? c->seed : lv_config{}.seed);
}

template <class C>
json check_json(const C& c) {
  return {{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"bound", c.bound}, {"detail", c.detail}};
}

const char* class_name(lvlab::FlowClass c) {
  switch (c) {
    case lvlab::FlowClass::ConvergedTo: return "ConvergedTo";
    case lvlab::FlowClass::OnSkeleton: return "OnSkeleton";
    case lvlab::FlowClass::Undecided: break;
  }
  return "Undecided";
}

json trajectory_json(const lvlab::Trajectory& t) {
  json pts = json::array();
  for (const auto& p : t.points) pts.push_back({p.t, p.x.x, p.x.y});
  return {{"classification", class_name(t.classification)},
          {"face", t.face},
          {"hit_time", t.hit_time},
          {"diagnostic", t.diagnostic},
          {"points", pts}};
}

lv_status report_out(const lvlab::FeasibilityReport& r, int* feasible, char** out) {
  if (feasible) *feasible = r.feasible ? 1 : 0;
  put(out, lvlab::report_to_json(r));
  return LV_OK;
}

lvlab::LegendrianCurve knot_of(const std::string& text, const lvlab::StarshapedSurface& S) {
  if (!text.empty() && text.front() == '{') return lvlab::LegendrianCurve::from_json(text).on_surface(S);
  return lvlab::knot_from_spec(text, S);
}

std::vector<lvlab::LegendrianCurve> targets_of(const std::string& text, const lvlab::LegendrianCurve& knot,
                                               const lvlab::StarshapedSurface& S) {
  if (text.empty() || text == "self") return {knot};
  if (text.rfind("barrier:", 0) == 0) {
    std::vector<int> k;
    std::stringstream ss(text.substr(8));
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        k.push_back(std::stoi(item));
      } catch (const std::exception&) {
        throw lvlab::Error(lvlab::ErrorKind::Parse, "reeb3", "bad barrier spec '" + text + "'");
      }
    }
    if (k.size() == 1) k.push_back(k[0]);
    if (k.size() != 2) throw lvlab::Error(lvlab::ErrorKind::Parse, "reeb3", "barrier needs k or k1,k2");
    auto out = lvlab::legendrian_graph(S, k[0], k[1]);
    out.insert(out.begin(), knot);
    return out;
  }
  return {knot_of(text, S)};
}

lvlab::Point4 point4(const double p[4]) { return {{p[0], p[1]}, {p[2], p[3]}}; }

}  // namespace

extern "C" {

const char* lv_version(void) { return "1.0.0"; }
const char* lv_last_error(void) { return g_last_error.c_str(); }
void lv_string_free(char* s) { std::free(s); }

lv_status lv_config_new(lv_config** out) {
  return guarded([&] {
    need(out, "output");
    *out = new lv_config();
  });
}

void lv_config_free(lv_config* c) { delete c; }

lv_status lv_config_set_tolerance(lv_config* c, const char* name, double value) {
  return guarded([&] {
    need(c, "config");
    need(name, "name");
    if (!lvlab::set_tolerance(c->tol, name, value))
      throw ArgumentError(std::string("unknown tolerance or non-positive value: ") + name);
  });
}

lv_status lv_config_set_seed(lv_config* c, uint64_t seed) {
  return guarded([&] {
    need(c, "config");
    c->seed = seed;
  });
}

lv_status lv_config_seed(const lv_config* c, uint64_t* out) {
  return guarded([&] {
    need(c, "config");
    need(out, "output");
    *out = c->seed;
  });
}

lv_status lv_config_tolerances_json(const lv_config* c, char** out) {
  return guarded([&] {
    json j = json::object();
    for (const auto& e : lvlab::list_tolerances(tol_of(c))) j[e.name] = e.value;
    put(out, j.dump(2));
  });
}

// ---------------------------------------------------------------- grid

lv_status lv_grid_from_spec(const lv_config* c, const char* spec, double area, lv_grid** out) {
  return guarded([&] {
    need(spec, "spec");
    need(out, "output");
    auto g = std::make_shared<const lvlab::Grid>(lvlab::grid_from_spec(spec, area, tol_of(c)));
    *out = new lv_grid{std::move(g)};
  });
}

lv_status lv_grid_from_json(const lv_config* c, const char* text, lv_grid** out) {
  return guarded([&] {
    need(text, "json");
    need(out, "output");
    auto g = std::make_shared<const lvlab::Grid>(lvlab::grid_from_json(text, tol_of(c)));
    *out = new lv_grid{std::move(g)};
  });
}

void lv_grid_free(lv_grid* g) { delete g; }

lv_status lv_grid_to_json(const lv_grid* g, char** out) {
  return guarded([&] {
    need(g, "grid");
    put(out, lvlab::grid_to_json(*g->grid));
  });
}

lv_status lv_grid_summary_json(const lv_grid* g, char** out) {
  return guarded([&] {
    need(g, "grid");
    const auto& G = *g->grid;
    json j{{"faces", G.face_count()},
           {"vertices", G.vertices().size()},
           {"arcs", G.arcs().size()},
           {"area", G.ambient_area()},
           {"periodic", G.periodic()},
           {"face_areas", G.face_areas()},
           {"max_face_area", lvlab::max_face_area(G)},
           {"regular", G.regular()},
           {"failure", G.regularity().failure}};
    put(out, j.dump(2));
  });
}

lv_status lv_grid_face_count(const lv_grid* g, size_t* out) {
  return guarded([&] {
    need(g, "grid");
    need(out, "output");
    *out = g->grid->face_count();
  });
}

// ---------------------------------------------------------------- forms

lv_status lv_form_build(const lv_grid* g, int smoothing, lv_form** out) {
  return guarded([&] {
    need(g, "grid");
    need(out, "output");
    auto f = std::make_shared<const lvlab::LiouvilleForm2D>(lvlab::LiouvilleForm2D::build(*g->grid, smoothing != 0));
    *out = new lv_form{std::move(f)};
  });
}

void lv_form_free(lv_form* f) { delete f; }

lv_status lv_form_to_json(const lv_form* f, char** out) {
  return guarded([&] {
    need(f, "form");
    put(out, lvlab::form_to_json(*f->form));
  });
}

lv_status lv_form_eval(const lv_form* f, double x, double y, double lambda[2], double X[2]) {
  return guarded([&] {
    need(f, "form");
    if (lambda) {
      const auto l = f->form->lambda({x, y});
      lambda[0] = l.x, lambda[1] = l.y;
    }
    if (X) {
      const auto v = f->form->X({x, y});
      X[0] = v.x, X[1] = v.y;
    }
  });
}

lv_status lv_form_residue(const lv_form* f, int face, double rho, double* out) {
  return guarded([&] {
    need(f, "form");
    need(out, "output");
    if (face < 0 || static_cast<std::size_t>(face) >= f->form->grid().face_count()) throw ArgumentError("face index out of range");
    *out = f->form->residue_loop_integral(face, rho);
  });
}

lv_status lv_form_flow_json(const lv_form* f, double x, double y, double t_max, int direction, char** out) {
  return guarded([&] {
    need(f, "form");
    if (direction != 1 && direction != -1) throw ArgumentError("direction must be 1 or -1");
    put(out, trajectory_json(f->form->flow({x, y}, t_max, direction)).dump());
  });
}

lv_status lv_form_check_json(const lv_form* f, const lv_config* c, int* all_pass, char** out) {
  return guarded([&] {
    need(f, "form");
    lvlab::CheckOptions opt;
    opt.seed = seed_of(c);
    const auto checks = lvlab::check_form(*f->form, opt);
    json arr = json::array();
    bool ok = true;
    for (const auto& r : checks) {
      arr.push_back(check_json(r));
      ok = ok && r.pass;
    }
    // residues at rho = 1e-2
    const auto& F = *f->form;
    double worst = 0.0;
    for (std::size_t i = 0; i < F.grid().face_count(); ++i) {
      const int face = static_cast<int>(i);
      std::vector<double> weights{F.foliation().face(face).area};
      for (const auto& sp : F.splits())
        if (sp.face == face) weights = {sp.a1, sp.a2};
      for (std::size_t p = 0; p < weights.size(); ++p) {
        const double I = F.residue_loop_integral(face, 1e-2, static_cast<int>(p));
        worst = std::max(worst, std::abs(I + weights[p]));
      }
    }
    lvlab::CheckResult res{"residues", worst < 1e-2 + 1e-4, worst, 1e-2 + 1e-4, "max |loop integral + a_i| on R = 0.01"};
    arr.push_back(check_json(res));
    ok = ok && res.pass;
    if (all_pass) *all_pass = ok ? 1 : 0;
    put(out, json{{"checks", arr}, {"pass", ok}}.dump(2));
  });
}

// ---------------------------------------------------------------- polar4

lv_status lv_polar4_classify_json(const lv_form* a, const lv_form* b, const double point[4], double t_max, char** out) {
  return guarded([&] {
    need(a, "form a");
    need(b, "form b");
    need(point, "point");
    const auto P = lvlab::product_polarization(*a->form, *b->form);
    const auto c = lvlab::classify4(P, point4(point), t_max);
    const char* kind = c.kind == lvlab::Class4::Basin ? "Basin" : c.kind == lvlab::Class4::Skeleton ? "Skeleton" : "Undecided";
    json j{{"classification", kind}, {"component", c.component}, {"time", c.time}, {"diagnostic", c.diagnostic}};
    if (c.kind == lvlab::Class4::Basin) {
      const auto& comp = P.components()[static_cast<std::size_t>(c.component)];
      j["factor"] = comp.factor;
      j["face"] = comp.face;
      j["weight"] = comp.weight;
    }
    put(out, j.dump(2));
  });
}

lv_status lv_polar4_check_json(const lv_form* a, const lv_form* b, const lv_config* c, int* all_pass, char** out) {
  return guarded([&] {
    need(a, "form a");
    need(b, "form b");
    const auto P = lvlab::product_polarization(*a->form, *b->form);
    const unsigned seed = seed_of(c);
    const std::vector<lvlab::Check4> checks{lvlab::check_product_closedness(P, 500, seed),
                                            lvlab::check_skeleton_dichotomy(P, 2000, 20.0, seed + 1),
                                            lvlab::check_boundary_tangency(P, 500, seed + 2),
                                            lvlab::check_sdb_consistency({1, 1.0}, 500, seed + 3)};
    json arr = json::array();
    bool ok = true;
    for (const auto& r : checks) {
      arr.push_back(check_json(r));
      ok = ok && r.pass;
    }
    if (all_pass) *all_pass = ok ? 1 : 0;
    put(out, json{{"checks", arr}, {"pass", ok}}.dump(2));
  });
}

lv_status lv_sdb_eval_json(int c1, double area, const double point[4], char** out) {
  return guarded([&] {
    need(point, "point");
    const lvlab::Vec4 p{point[0], point[1], point[2], point[3]};
    const auto v = lvlab::eval_sdb({c1, area}, p);
    json om = json::array();
    for (const auto& row : v.omega) om.push_back(row);
    put(out, json{{"omega", om}, {"lambda", v.lambda}, {"liouville", v.liouville}, {"det", v.det}}.dump(2));
  });
}

// ---------------------------------------------------------------- divisor

lv_status lv_feasible_baby_json(int64_t k, int* feasible, char** out) {
  return guarded([&] { report_out(lvlab::feasibility_baby(k), feasible, out); });
}

lv_status lv_feasible_ellipsoid_json(int64_t m, int64_t d, int64_t N, int* feasible, char** out) {
  return guarded([&] { report_out(lvlab::feasibility_ellipsoid(m, d, N), feasible, out); });
}

lv_status lv_feasible_remb_json(int64_t N, int* feasible, char** out) {
  return guarded([&] { report_out(lvlab::feasibility_Remb(N), feasible, out); });
}

lv_status lv_feasible_morphism_json(const char* source_json, const char* target_json, int* feasible, char** out) {
  return guarded([&] {
    need(source_json, "source");
    need(target_json, "target");
    report_out(lvlab::check_morphism(lvlab::divisor_from_json(source_json), lvlab::divisor_from_json(target_json)), feasible,
               out);
  });
}

lv_status lv_smooth_json(const char* divisor_json, const char* nodes_json, char** out) {
  return guarded([&] {
    need(divisor_json, "divisor");
    need(nodes_json, "nodes");
    const auto d = lvlab::divisor_from_json(divisor_json);
    std::vector<lvlab::NodeSelection> sel;
    json j;
    try {
      j = json::parse(nodes_json);
    } catch (const json::exception& e) {
      throw lvlab::Error(lvlab::ErrorKind::Parse, "divisor_arith", std::string("node list: ") + e.what());
    }
    if (!j.is_array()) throw lvlab::Error(lvlab::ErrorKind::Parse, "divisor_arith", "node list must be an array");
    for (const auto& n : j) {
      if (!n.is_array() || n.size() < 2 || n.size() > 3)
        throw lvlab::Error(lvlab::ErrorKind::Parse, "divisor_arith", "node entries are [i, j] or [i, j, count]");
      lvlab::NodeSelection s;
      s.i = n[0].get<std::size_t>();
      s.j = n[1].get<std::size_t>();
      s.count = n.size() == 3 ? n[2].get<std::int64_t>() : 1;
      sel.push_back(s);
    }
    const auto r = lvlab::smooth_divisor_invariants(d, sel);
    put(out, json{{"area", r.area}, {"genus", r.genus}, {"boundary", r.boundary_count}, {"nodes", r.nodes}, {"components", r.components}}
                 .dump(2));
  });
}

lv_status lv_monotone_k_json(int64_t m, int64_t n, double a, double b, char** out) {
  return guarded([&] {
    const auto k = lvlab::monotone_K(m, n, a, b);
    json as = json::array();
    for (const auto& [i, j] : k.assignment) as.push_back({i, j});
    put(out, json{{"K", k.K},
                  {"spare", k.spare},
                  {"vertical_block_area", k.vertical_block_area},
                  {"horizontal_block_area", k.horizontal_block_area},
                  {"assignment", as},
                  {"certificate_error", lvlab::verify_monotone_certificate(k, m, n, a, b)}}
                 .dump(2));
  });
}

lv_status lv_flux_json(double period, double t, char** out) {
  return guarded([&] {
    lvlab::FluxModel m;
    m.period = period;
    const auto r = lvlab::verify_flux_identity(m, t);
    put(out, json{{"period", period}, {"t", t}, {"before", r.before}, {"after", r.after}, {"expected", r.expected}, {"residual", r.residual}}
                 .dump(2));
  });
}

// ---------------------------------------------------------------- reeb

lv_status lv_reeb_knot_json(const char* surface, const char* knot, int samples, char** out) {
  return guarded([&] {
    need(surface, "surface");
    need(knot, "knot");
    if (samples < 4) throw ArgumentError("need at least 4 samples");
    const auto S = lvlab::StarshapedSurface::parse(surface);
    put(out, knot_of(knot, S).to_json(samples));
  });
}

lv_status lv_reeb_chords_json(const lv_config* c, const char* surface, const char* knot, const char* targets, double t_max,
                              int direction, char** out) {
  return guarded([&] {
    need(surface, "surface");
    need(knot, "knot");
    if (direction != 1 && direction != -1) throw ArgumentError("direction must be 1 or -1");
    const auto S = lvlab::StarshapedSurface::parse(surface);
    const auto K = knot_of(knot, S);
    const auto T = targets_of(targets ? targets : "self", K, S);
    const auto chords = lvlab::chord_search(S, K, T, t_max, direction, tol_of(c));
    json arr = json::array();
    for (const auto& ch : chords)
      arr.push_back({{"s", ch.s},
                     {"T", ch.T},
                     {"direction", ch.direction},
                     {"target", T[static_cast<std::size_t>(ch.target)].name()},
                     {"u", ch.u},
                     {"end", ch.end},
                     {"distance", ch.distance},
                     {"transverse", ch.transverse}});
    put(out, json{{"surface", S.name()}, {"source", K.name()}, {"t_max", t_max}, {"direction", direction}, {"chords", arr}}.dump(2));
  });
}

lv_status lv_reeb_sweep_json(int k, double T, int resolution, int* components, char** out) {
  return guarded([&] {
    const auto h = lvlab::hopf_sweep(k, T, resolution);
    if (components) *components = h.components;
    put(out, json{{"k", h.k},
                  {"T", h.T},
                  {"components", h.components},
                  {"components_per_resolution", h.components_per_resolution},
                  {"lune_areas", h.lune_areas},
                  {"surface_samples", h.surface.size()},
                  {"diagnostic", h.diagnostic}}
                 .dump(2));
  });
}

lv_status lv_reeb_torus_json(const lv_config* c, const char* surface, const char* knot, double T, double eps, char** out) {
  return guarded([&] {
    need(surface, "surface");
    need(knot, "knot");
    const auto S = lvlab::StarshapedSurface::parse(surface);
    const auto r = lvlab::mohnke_torus(S, knot_of(knot, S), T, eps, {}, 48, 48, tol_of(c));
    put(out, json{{"T", r.T},
                  {"disc_area", r.disc_area},
                  {"action_lambda", r.action_lambda},
                  {"action_gamma", r.action_gamma},
                  {"omega_defect", r.omega_defect},
                  {"samples", r.points.size()}}
                 .dump(2));
  });
}

lv_status lv_reeb_check_json(const lv_config* c, const char* surface, int* all_pass, char** out) {
  return guarded([&] {
    need(surface, "surface");
    const auto S = lvlab::StarshapedSurface::parse(surface);
    const auto& tol = tol_of(c);
    const unsigned seed = seed_of(c);
    std::vector<lvlab::ReebCheck> checks{lvlab::check_reeb_normalization(S, 1000, seed, tol)};
    if (S.kind() == lvlab::StarshapedSurface::Kind::Sphere) {
      checks.push_back(lvlab::check_hopf_period(50, seed + 1, tol));
      for (int k = 2; k <= 4; ++k) checks.push_back(lvlab::check_cyclic_action(k, 64, tol));
    }
    checks.push_back(lvlab::check_cone(S, 3, 3, 1000, seed + 2));
    double leg = 0.0, surf = 0.0;
    for (const auto& K : lvlab::test_knot_library()) {
      const auto L = K.on_surface(S);
      leg = std::max(leg, lvlab::legendrian_defect(L));
      surf = std::max(surf, lvlab::surface_defect(S, L));
    }
    checks.push_back({"knot_legendrian_defect", leg < tol.legendrian_defect, leg, tol.legendrian_defect, "test knot library"});
    checks.push_back({"knot_surface_defect", surf < tol.on_surface, surf, tol.on_surface, "test knot library"});
    json arr = json::array();
    bool ok = true;
    for (const auto& r : checks) {
      arr.push_back(check_json(r));
      ok = ok && r.pass;
    }
    if (all_pass) *all_pass = ok ? 1 : 0;
    put(out, json{{"surface", S.name()}, {"checks", arr}, {"pass", ok}}.dump(2));
  });
}

// ---------------------------------------------------------------- plots

lv_status lv_plot_grid(const lv_grid* g, char** out) {
  return guarded([&] {
    need(g, "grid");
    put(out, lvlab::svg_grid(*g->grid));
  });
}

lv_status lv_plot_foliation(const lv_form* f, const double* starts, size_t n, double t_max, char** out) {
  return guarded([&] {
    need(f, "form");
    if (n > 0) need(starts, "starts");
    std::vector<lvlab::Trajectory> tr;
    for (size_t i = 0; i < n; ++i) tr.push_back(f->form->flow({starts[2 * i], starts[2 * i + 1]}, t_max, 1));
    put(out, lvlab::svg_foliation(*f->form, tr));
  });
}

lv_status lv_plot_divisor(const char* divisor_json, char** out) {
  return guarded([&] {
    need(divisor_json, "divisor");
    put(out, lvlab::svg_divisor(lvlab::divisor_from_json(divisor_json)));
  });
}

lv_status lv_plot_monotone(int64_t m, int64_t n, double a, double b, char** out) {
  return guarded([&] { put(out, lvlab::svg_monotone(lvlab::monotone_K(m, n, a, b), m, n)); });
}

lv_status lv_plot_hopf(int k, char** out) {
  return guarded([&] { put(out, lvlab::svg_hopf(k)); });
}

lv_status lv_write_file(const char* path, const char* content) {
  return guarded([&] {
    need(path, "path");
    need(content, "content");
    lvlab::write_text_file(path, content);
  });
}

}  // extern "C"
