// lvlab command line front end. Everything goes through the C API.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lvlab/lvlab.h"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvariant = 1;
constexpr int kExitParse = 2;
constexpr int kExitRuntime = 3;

struct Failure {
  lv_status status;
  std::string message;
};

void ok(lv_status s) {
  if (s != LV_OK) throw Failure{s, lv_last_error()};
}

// Owns a string returned by the library.
std::string take(char* s) {
  std::string out = s ? s : "";
  lv_string_free(s);
  return out;
}

struct ConfigDeleter {
  void operator()(lv_config* c) const { lv_config_free(c); }
};
struct GridDeleter {
  void operator()(lv_grid* g) const { lv_grid_free(g); }
};
struct FormDeleter {
  void operator()(lv_form* f) const { lv_form_free(f); }
};
using ConfigPtr = std::unique_ptr<lv_config, ConfigDeleter>;
using GridPtr = std::unique_ptr<lv_grid, GridDeleter>;
using FormPtr = std::unique_ptr<lv_form, FormDeleter>;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{LV_ERR_IO, "cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// A knot or surface argument is either a spec or a path to a JSON file.
std::string spec_or_file(const std::string& s) {
  if (s.size() > 5 && s.substr(s.size() - 5) == ".json") return read_file(s);
  return s;
}

void write_out(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    if (!content.empty() && content.back() != '\n') std::cout << '\n';
    return;
  }
  ok(lv_write_file(path.c_str(), content.c_str()));
}

struct Globals {
  std::vector<std::string> tols;
  long long seed = -1;
  bool json_out = false;
};

ConfigPtr make_config(const Globals& g) {
  lv_config* c = nullptr;
  ok(lv_config_new(&c));
  ConfigPtr cfg(c);
  if (const char* env = std::getenv("LIOUVILLE_LAB_SEED")) {
    try {
      ok(lv_config_set_seed(c, std::stoull(env)));
    } catch (const std::logic_error&) {
      throw Failure{LV_ERR_PARSE, std::string("LIOUVILLE_LAB_SEED is not an integer: ") + env};
    }
  }
  if (g.seed >= 0) ok(lv_config_set_seed(c, static_cast<std::uint64_t>(g.seed)));
  for (const auto& t : g.tols) {
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw Failure{LV_ERR_PARSE, "--tol expects name=value, got '" + t + "'"};
    double v = 0.0;
    try {
      v = std::stod(t.substr(eq + 1));
    } catch (const std::logic_error&) {
      throw Failure{LV_ERR_PARSE, "bad tolerance value in '" + t + "'"};
    }
    const lv_status s = lv_config_set_tolerance(c, t.substr(0, eq).c_str(), v);
    if (s != LV_OK) throw Failure{LV_ERR_PARSE, lv_last_error()};
  }
  return cfg;
}

GridPtr make_grid(const lv_config* c, const std::string& spec, double area) {
  lv_grid* g = nullptr;
  ok(lv_grid_from_spec(c, spec.c_str(), area, &g));
  return GridPtr(g);
}

FormPtr make_form(const lv_grid* g, bool smoothing) {
  lv_form* f = nullptr;
  ok(lv_form_build(g, smoothing ? 1 : 0, &f));
  return FormPtr(f);
}

std::vector<double> parse_list(const std::string& s, std::size_t n, const char* what) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      v.push_back(std::stod(item));
    } catch (const std::logic_error&) {
      throw Failure{LV_ERR_PARSE, std::string("bad number in ") + what + ": '" + item + "'"};
    }
  }
  if (v.size() != n) throw Failure{LV_ERR_PARSE, std::string(what) + " needs " + std::to_string(n) + " comma separated numbers"};
  return v;
}

// Prints a check report ({"checks":[..],"pass":bool}) as one line per check.
bool print_checks(const std::string& section, const std::string& text, bool json_out) {
  const json j = json::parse(text);
  if (json_out) {
    std::cout << json{{"section", section}, {"report", j}}.dump(2) << '\n';
  } else {
    for (const auto& c : j.at("checks")) {
      char line[512];
      const double value = c.at("value").get<double>(), bound = c.at("bound").get<double>();
      const bool pass = c.at("pass").get<bool>();
      std::snprintf(line, sizeof line, "%s %-10s %-28s value=%.3e bound=%.3e margin=%.3e", pass ? "PASS" : "FAIL",
                    section.c_str(), c.at("name").get<std::string>().c_str(), value, bound,
                    pass ? std::abs(bound - value) : -std::abs(bound - value));
      std::cout << line;
      const auto detail = c.at("detail").get<std::string>();
      if (!detail.empty()) std::cout << "  (" << detail << ")";
      std::cout << '\n';
    }
  }
  return j.at("pass").get<bool>();
}

void print_report(const std::string& text, bool json_out) {
  if (json_out) {
    std::cout << text << '\n';
    return;
  }
  const json j = json::parse(text);
  std::cout << "verdict: " << j.at("verdict").get<std::string>() << '\n';
  for (const auto& [k, v] : j.at("numbers").items()) std::cout << "  " << k << " = " << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
  if (j.contains("violated") && !j.at("violated").get<std::string>().empty())
    std::cout << "  violated: " << j.at("violated").get<std::string>() << '\n';
  if (j.contains("certificate"))
    for (const auto& c : j.at("certificate")) std::cout << "  certificate: " << c.get<std::string>() << '\n';
}

std::string csv_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lvlab: Liouville forms on surface grids, divisor arithmetic and Reeb chords"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--tol", g.tols, "override a tolerance, name=value (repeatable)");
  app.add_option("--seed", g.seed, "random seed (default: LIOUVILLE_LAB_SEED or built-in)");
  app.add_flag("--json", g.json_out, "print JSON instead of text");

  int exit_code = kExitOk;
  std::function<void()> action;

  // ---- grid
  std::string grid_spec = "radial:4", grid_out;
  double area = 1.0;
  auto* grid = app.add_subcommand("grid", "build a grid and report faces, areas and regularity");
  grid->add_option("--grid", grid_spec, "radial:k | sectors:f,.. | periodic:n | bump:f | tripod:x,y,s | file.json");
  grid->add_option("--area", area, "ambient area");
  grid->add_option("--out", grid_out, "write the grid JSON here");
  grid->callback([&] {
    action = [&] {
      auto cfg = make_config(g);
      auto G = make_grid(cfg.get(), grid_spec, area);
      char* s = nullptr;
      ok(lv_grid_summary_json(G.get(), &s));
      const std::string summary = take(s);
      if (!grid_out.empty()) {
        ok(lv_grid_to_json(G.get(), &s));
        write_out(grid_out, take(s));
      }
      const json j = json::parse(summary);
      if (g.json_out) {
        std::cout << summary << '\n';
      } else {
        std::cout << "faces " << j["faces"] << " vertices " << j["vertices"] << " arcs " << j["arcs"] << " area " << j["area"] << '\n';
        std::cout << "face areas " << j["face_areas"].dump() << '\n';
        std::cout << "regular " << (j["regular"].get<bool>() ? "yes" : "no");
        if (!j["failure"].get<std::string>().empty()) std::cout << " (" << j["failure"].get<std::string>() << ")";
        std::cout << '\n';
      }
      if (!j["regular"].get<bool>()) exit_code = kExitInvariant;
    };
  });

  // ---- liouville
  auto* lv = app.add_subcommand("liouville", "Liouville form of a grid");
  lv->require_subcommand(1);
  bool no_smoothing = false;
  std::string form_out, flow_csv;
  double x = 0.0, y = 0.0, t_max = 20.0;
  int direction = 1;
  auto add_grid_opts = [&](CLI::App* c) {
    c->add_option("--grid", grid_spec, "grid spec or file");
    c->add_option("--area", area, "ambient area");
    c->add_flag("--no-smoothing", no_smoothing, "skip the vertex smoothing");
  };
  auto* lv_build = lv->add_subcommand("build", "build the form and write it as JSON");
  add_grid_opts(lv_build);
  lv_build->add_option("--out", form_out, "output file (default stdout)");
  lv_build->callback([&] {
    action = [&] {
      auto cfg = make_config(g);
      auto G = make_grid(cfg.get(), grid_spec, area);
      auto F = make_form(G.get(), !no_smoothing);
      char* s = nullptr;
      ok(lv_form_to_json(F.get(), &s));
      write_out(form_out, take(s));
    };
  });
  auto* lv_flow = lv->add_subcommand("flow", "integrate the Liouville field from a point");
  add_grid_opts(lv_flow);
  lv_flow->add_option("--x", x)->required();
  lv_flow->add_option("--y", y)->required();
  lv_flow->add_option("--tmax", t_max);
  lv_flow->add_option("--direction", direction)->check(CLI::IsMember({-1, 1}));
  lv_flow->add_option("--csv", flow_csv, "write t,x,y samples here");
  lv_flow->callback([&] {
    action = [&] {
      auto cfg = make_config(g);
      auto G = make_grid(cfg.get(), grid_spec, area);
      auto F = make_form(G.get(), !no_smoothing);
      char* s = nullptr;
      ok(lv_form_flow_json(F.get(), x, y, t_max, direction, &s));
      const json j = json::parse(take(s));
      if (!flow_csv.empty()) {
        std::string csv = "t,x,y\n";
        for (const auto& p : j["points"]) csv += csv_num(p[0]) + "," + csv_num(p[1]) + "," + csv_num(p[2]) + "\n";
        write_out(flow_csv, csv);
      }
      if (g.json_out) {
        std::cout << j.dump(2) << '\n';
      } else {
        std::cout << j["classification"].get<std::string>();
        if (j["classification"] == "ConvergedTo") std::cout << " face " << j["face"] << " at t = " << j["hit_time"];
        std::cout << '\n';
        if (!j["diagnostic"].get<std::string>().empty()) std::cout << j["diagnostic"].get<std::string>() << '\n';
      }
    };
  });
  auto* lv_check = lv->add_subcommand("check", "run the invariant battery");
  add_grid_opts(lv_check);
  lv_check->callback([&] {
    action = [&] {
      auto cfg = make_config(g);
      auto G = make_grid(cfg.get(), grid_spec, area);
      auto F = make_form(G.get(), !no_smoothing);
      char* s = nullptr;
      int pass = 0;
      ok(lv_form_check_json(F.get(), cfg.get(), &pass, &s));
      if (!print_checks("liouville", take(s), g.json_out)) exit_code = kExitInvariant;
    };
  });

  // ---- polar4
  auto* p4 = app.add_subcommand("polar4", "product polarizations and the model disc bundle");
  p4->require_subcommand(1);
  std::string grid2_spec = "radial:3", point_text = "0.1,0.2,0.3,-0.1";
  double area2 = 1.0;
  int c1 = 1;
  auto add_pair_opts = [&](CLI::App* c) {
    c->add_option("--grid1", grid_spec, "first factor");
    c->add_option("--area1", area, "first factor area");
    c->add_option("--grid2", grid2_spec, "second factor");
    c->add_option("--area2", area2, "second factor area");
  };
  auto* p4_class = p4->add_subcommand("classify", "classify a point of the product");
  add_pair_opts(p4_class);
  p4_class->add_option("--point", point_text, "x1,y1,x2,y2");
  p4_class->add_option("--tmax", t_max);
  p4_class->callback([&] {
    action = [&] {
      auto cfg = make_config(g);
      const auto pt = parse_list(point_text, 4, "--point");
      auto A = make_grid(cfg.get(), grid_spec, area);
      auto B = make_grid(cfg.get(), grid2_spec, area2);
      auto FA = make_form(A.get(), true), FB = make_form(B.get(), true);
      char* s = nullptr;
      ok(lv_polar4_classify_json(FA.get(), FB.get(), pt.data(), t_max, &s));
      std::cout << take(s) << '\n';
    };
  });
  auto* p4_check = p4->add_subcommand("check", "product battery");
  add_pair_opts(p4_check);
  p4_check->callback([&] {
    action = [&] {
      auto cfg = make_config(g);
      auto A = make_grid(cfg.get(), grid_spec, area);
      auto B = make_grid(cfg.get(), grid2_spec, area2);
      auto FA = make_form(A.get(), true), FB = make_form(B.get(), true);
      char* s = nullptr;
      int pass = 0;
      ok(lv_polar4_check_json(FA.get(), FB.get(), cfg.get(), &pass, &s));
      if (!print_checks("polar4", take(s), g.json_out)) exit_code = kExitInvariant;
    };
  });
  auto* p4_sdb = p4->add_subcommand("sdb", "evaluate the model disc bundle at a point");
  p4_sdb->add_option("--c1", c1, "Chern number");
  p4_sdb->add_option("--area", area, "base area");
  p4_sdb->add_option("--point", point_text, "u,v,x,y");
  p4_sdb->callback([&] {
    action = [&] {
      const auto pt = parse_list(point_text, 4, "--point");
      char* s = nullptr;
      ok(lv_sdb_eval_json(c1, area, pt.data(), &s));
      std::cout << take(s) << '\n';
    };
  });

  // ---- feasible
  auto* fe = app.add_subcommand("feasible", "divisor feasibility reports");
  fe->require_subcommand(1);
  long long k = 3, m = 2, n = 2, d = 1, N = 1;
  double a = 1.0, b = 1.0, period = 0.3, t_flux = 1.0;
  std::string src_file, tgt_file, divisor_file, nodes = "[]";
  auto* fe_baby = fe->add_subcommand("baby", "disc grid of degree k in the ball");
  fe_baby->add_option("--k", k)->required();
  fe_baby->callback([&] {
    action = [&] {
      char* s = nullptr;
      ok(lv_feasible_baby_json(k, nullptr, &s));
      print_report(take(s), g.json_out);
    };
  });
  auto* fe_ell = fe->add_subcommand("ellipsoid", "ellipsoid family (m, d, N)");
  fe_ell->add_option("--m", m)->required();
  fe_ell->add_option("--d", d)->required();
  fe_ell->add_option("--N", N)->required();
  fe_ell->callback([&] {
    action = [&] {
      char* s = nullptr;
      ok(lv_feasible_ellipsoid_json(m, d, N, nullptr, &s));
      print_report(take(s), g.json_out);
    };
  });
  auto* fe_remb = fe->add_subcommand("remb", "two-sphere family for N");
  fe_remb->add_option("--N", N)->required();
  fe_remb->callback([&] {
    action = [&] {
      char* s = nullptr;
      ok(lv_feasible_remb_json(N, nullptr, &s));
      print_report(take(s), g.json_out);
    };
  });
  auto* fe_morph = fe->add_subcommand("morphism", "search for a divisor morphism between two files");
  fe_morph->add_option("--source", src_file)->required()->check(CLI::ExistingFile);
  fe_morph->add_option("--target", tgt_file)->required()->check(CLI::ExistingFile);
  fe_morph->callback([&] {
    action = [&] {
      char* s = nullptr;
      ok(lv_feasible_morphism_json(read_file(src_file).c_str(), read_file(tgt_file).c_str(), nullptr, &s));
      print_report(take(s), g.json_out);
    };
  });
  auto* fe_smooth = fe->add_subcommand("smooth", "invariants after resolving nodes");
  fe_smooth->add_option("--divisor", divisor_file)->required()->check(CLI::ExistingFile);
  fe_smooth->add_option("--nodes", nodes, "JSON list [[i,j,count],..]");
  fe_smooth->callback([&] {
    action = [&] {
      char* s = nullptr;
      ok(lv_smooth_json(read_file(divisor_file).c_str(), nodes.c_str(), &s));
      std::cout << take(s) << '\n';
    };
  });
  auto* fe_k = fe->add_subcommand("monotone", "K for m x n discs of areas a, b");
  fe_k->add_option("--m", m)->required();
  fe_k->add_option("--n", n)->required();
  fe_k->add_option("--a", a)->required();
  fe_k->add_option("--b", b)->required();
  fe_k->callback([&] {
    action = [&] {
      char* s = nullptr;
      ok(lv_monotone_k_json(m, n, a, b, &s));
      const json j = json::parse(take(s));
      if (g.json_out) {
        std::cout << j.dump(2) << '\n';
      } else {
        std::cout << "K = " << j["K"] << " (" << j["spare"] << " per pair)\n";
        std::cout << "vertical block area " << j["vertical_block_area"] << ", horizontal block area " << j["horizontal_block_area"] << '\n';
        const auto err = j["certificate_error"].get<std::string>();
        std::cout << "certificate " << (err.empty() ? "valid" : "INVALID: " + err) << '\n';
      }
      if (!j["certificate_error"].get<std::string>().empty()) exit_code = kExitInvariant;
    };
  });
  auto* fe_flux = fe->add_subcommand("flux", "flux identity on the model annulus");
  fe_flux->add_option("--period", period);
  fe_flux->add_option("--t", t_flux);
  fe_flux->callback([&] {
    action = [&] {
      char* s = nullptr;
      ok(lv_flux_json(period, t_flux, &s));
      const json j = json::parse(take(s));
      std::cout << j.dump(2) << '\n';
      if (!(std::abs(j["residual"].get<double>()) < 1e-4)) exit_code = kExitInvariant;
    };
  });

  // ---- reeb
  auto* rb = app.add_subcommand("reeb", "Reeb dynamics on star-shaped hypersurfaces");
  rb->require_subcommand(1);
  std::string surface = "sphere", source = "unknot", target = "self", chords_csv, dir_text = "both", knot_out;
  int sweep_k = 3, resolution = 24, samples = 256;
  double sweep_T = -1.0, T = 0.3, eps = 0.1;
  bool want_components = false;
  auto* rb_ch = rb->add_subcommand("chords", "Reeb chords from a knot to a target set");
  rb_ch->add_option("--surface", surface, "sphere | ellipsoid:a,b | lp:p,a,b | file.json");
  rb_ch->add_option("--source", source, "knot spec or knot.json");
  rb_ch->add_option("--target", target, "self | barrier:k | barrier:k1,k2 | knot spec | knot.json");
  rb_ch->add_option("--tmax", t_max)->required();
  rb_ch->add_option("--direction", dir_text)->check(CLI::IsMember({"forward", "backward", "both"}));
  rb_ch->add_option("--csv", chords_csv, "write the chords here");
  rb_ch->callback([&] {
    action = [&] {
      auto cfg = make_config(g);
      std::vector<int> dirs;
      if (dir_text != "backward") dirs.push_back(1);
      if (dir_text != "forward") dirs.push_back(-1);
      std::string csv = "direction,s,T,target,u,distance,transverse\n";
      json all = json::array();
      const std::string surf = spec_or_file(surface), src = spec_or_file(source), tgt = spec_or_file(target);
      for (int dir : dirs) {
        char* s = nullptr;
        ok(lv_reeb_chords_json(cfg.get(), surf.c_str(), src.c_str(), tgt.c_str(), t_max, dir, &s));
        const json j = json::parse(take(s));
        for (const auto& c : j["chords"]) {
          csv += std::to_string(dir) + "," + csv_num(c["s"]) + "," + csv_num(c["T"]) + "," + c["target"].get<std::string>() + "," +
                 csv_num(c["u"]) + "," + csv_num(c["distance"]) + "," + (c["transverse"].get<bool>() ? "1" : "0") + "\n";
          all.push_back(c);
        }
      }
      if (!chords_csv.empty()) write_out(chords_csv, csv);
      if (g.json_out) {
        std::cout << all.dump(2) << '\n';
      } else {
        std::cout << all.size() << " chord(s)\n";
        for (const auto& c : all)
          std::cout << (c["direction"] == 1 ? "  forward " : "  backward") << " T=" << csv_num(c["T"]) << " s=" << csv_num(c["s"])
                    << " -> " << c["target"].get<std::string>() << " u=" << csv_num(c["u"])
                    << (c["transverse"].get<bool>() ? "" : " (degenerate)") << '\n';
      }
    };
  });
  auto* rb_sw = rb->add_subcommand("sweep", "components of the sphere minus the swept barrier");
  rb_sw->add_option("--k", sweep_k);
  rb_sw->add_option("--T", sweep_T, "sweep time (default 1/k)");
  rb_sw->add_option("--resolution", resolution);
  rb_sw->add_flag("--components", want_components, "exit 1 unless exactly k components are found");
  rb_sw->callback([&] {
    action = [&] {
      char* s = nullptr;
      int comps = -1;
      const double TT = sweep_T > 0.0 ? sweep_T : 1.0 / sweep_k;
      ok(lv_reeb_sweep_json(sweep_k, TT, resolution, &comps, &s));
      const json j = json::parse(take(s));
      if (g.json_out) {
        std::cout << j.dump(2) << '\n';
      } else {
        std::cout << "components " << (comps < 0 ? std::string("Undecided") : std::to_string(comps)) << '\n';
        std::cout << "lune areas " << j["lune_areas"].dump() << '\n';
        if (!j["diagnostic"].get<std::string>().empty()) std::cout << j["diagnostic"].get<std::string>() << '\n';
      }
      if (want_components && comps != sweep_k) exit_code = kExitInvariant;
    };
  });
  auto* rb_t = rb->add_subcommand("torus", "Lagrangian torus over a chord-free knot");
  rb_t->add_option("--surface", surface);
  rb_t->add_option("--knot", source, "knot spec or knot.json");
  rb_t->add_option("--T", T);
  rb_t->add_option("--eps", eps);
  rb_t->callback([&] {
    action = [&] {
      auto cfg = make_config(g);
      char* s = nullptr;
      ok(lv_reeb_torus_json(cfg.get(), spec_or_file(surface).c_str(), spec_or_file(source).c_str(), T, eps, &s));
      const json j = json::parse(take(s));
      std::cout << j.dump(2) << '\n';
      const double tol = 1e-6;
      if (!(std::abs(j["action_lambda"].get<double>()) < tol && std::abs(j["action_gamma"].get<double>() - T) < tol &&
            j["omega_defect"].get<double>() < tol))
        exit_code = kExitInvariant;
    };
  });
  auto* rb_k = rb->add_subcommand("knot", "export a test knot as JSON");
  rb_k->add_option("--surface", surface);
  rb_k->add_option("--spec", source, "unknot | fiber:n,eps,r | torus:p,q,eps | arc:k,i,j");
  rb_k->add_option("--samples", samples);
  rb_k->add_option("--out", knot_out);
  rb_k->callback([&] {
    action = [&] {
      char* s = nullptr;
      ok(lv_reeb_knot_json(spec_or_file(surface).c_str(), source.c_str(), samples, &s));
      write_out(knot_out, take(s));
    };
  });
  auto* rb_c = rb->add_subcommand("check", "Reeb battery on a surface");
  rb_c->add_option("--surface", surface);
  rb_c->callback([&] {
    action = [&] {
      auto cfg = make_config(g);
      char* s = nullptr;
      int pass = 0;
      ok(lv_reeb_check_json(cfg.get(), spec_or_file(surface).c_str(), &pass, &s));
      if (!print_checks("reeb", take(s), g.json_out)) exit_code = kExitInvariant;
    };
  });

  // ---- check-all
  auto* all = app.add_subcommand("check-all", "every invariant battery on one grid");
  all->add_option("--grid", grid_spec, "grid spec or file");
  all->add_option("--area", area, "ambient area");
  all->callback([&] {
    action = [&] {
      auto cfg = make_config(g);
      bool pass = true;
      auto G = make_grid(cfg.get(), grid_spec, area);
      char* s = nullptr;
      ok(lv_grid_summary_json(G.get(), &s));
      const json summary = json::parse(take(s));
      double worst_area = 0.0, total = 0.0;
      for (const auto& fa : summary["face_areas"]) total += fa.get<double>();
      worst_area = std::abs(total - summary["area"].get<double>()) / summary["area"].get<double>();
      json grid_checks{{"pass", summary["regular"].get<bool>() && worst_area < 1e-6},
                       {"checks",
                        {{{"name", "regular"}, {"pass", summary["regular"].get<bool>()}, {"value", 0.0}, {"bound", 0.0},
                          {"detail", summary["failure"]}},
                         {{"name", "area_partition"}, {"pass", worst_area < 1e-6}, {"value", worst_area}, {"bound", 1e-6}, {"detail", ""}}}}};
      pass = print_checks("grid", grid_checks.dump(), g.json_out) && pass;
      auto F = make_form(G.get(), true);
      int p = 0;
      ok(lv_form_check_json(F.get(), cfg.get(), &p, &s));
      pass = print_checks("liouville", take(s), g.json_out) && pass;
      ok(lv_polar4_check_json(F.get(), F.get(), cfg.get(), &p, &s));
      pass = print_checks("polar4", take(s), g.json_out) && pass;
      json div = json::array();
      bool dpass = true;
      {
        int feas = 0;
        ok(lv_feasible_baby_json(3, &feas, &s));
        const json r = json::parse(take(s));
        const bool good = feas == 1 && r["numbers"]["A"] == "2";
        div.push_back({{"name", "baby_k3"}, {"pass", good}, {"value", std::stod(r["numbers"]["A"].get<std::string>())}, {"bound", 2}, {"detail", "least A"}});
        dpass = dpass && good;
        ok(lv_feasible_ellipsoid_json(2, 2, 1, &feas, &s));
        take(s);
        div.push_back({{"name", "ellipsoid_221_excluded"}, {"pass", feas == 0}, {"value", feas}, {"bound", 0}, {"detail", ""}});
        dpass = dpass && feas == 0;
        ok(lv_monotone_k_json(2, 2, 1.0, 1.0, &s));
        const json kk = json::parse(take(s));
        const bool kgood = kk["certificate_error"].get<std::string>().empty();
        div.push_back({{"name", "monotone_certificate"}, {"pass", kgood}, {"value", kk["K"]}, {"bound", kk["K"]}, {"detail", kk["certificate_error"]}});
        dpass = dpass && kgood;
        double worst = 0.0;
        for (double per : {0.1, 0.3, 0.7})
          for (double t : {1.0, 2.0}) {
            ok(lv_flux_json(per, t, &s));
            worst = std::max(worst, std::abs(json::parse(take(s))["residual"].get<double>()));
          }
        div.push_back({{"name", "flux_identity"}, {"pass", worst < 1e-4}, {"value", worst}, {"bound", 1e-4}, {"detail", ""}});
        dpass = dpass && worst < 1e-4;
      }
      pass = print_checks("divisor", json{{"checks", div}, {"pass", dpass}}.dump(), g.json_out) && pass;
      ok(lv_reeb_check_json(cfg.get(), "sphere", &p, &s));
      pass = print_checks("reeb", take(s), g.json_out) && pass;
      if (!g.json_out) std::cout << (pass ? "ALL PASS" : "SOME CHECKS FAILED") << '\n';
      if (!pass) exit_code = kExitInvariant;
    };
  });

  // ---- plot
  auto* pl = app.add_subcommand("plot", "write an SVG");
  pl->require_subcommand(1);
  std::string svg_out;
  std::vector<std::string> starts;
  auto* pl_grid = pl->add_subcommand("grid", "grid with shaded faces");
  pl_grid->add_option("--grid", grid_spec);
  pl_grid->add_option("--area", area);
  pl_grid->add_option("--out", svg_out)->required();
  pl_grid->callback([&] {
    action = [&] {
      auto cfg = make_config(g);
      auto G = make_grid(cfg.get(), grid_spec, area);
      char* s = nullptr;
      ok(lv_plot_grid(G.get(), &s));
      write_out(svg_out, take(s));
    };
  });
  auto* pl_fol = pl->add_subcommand("foliation", "leaves, skeleton and trajectories");
  pl_fol->add_option("--grid", grid_spec);
  pl_fol->add_option("--area", area);
  pl_fol->add_option("--start", starts, "x,y start of a trajectory (repeatable)");
  pl_fol->add_option("--tmax", t_max);
  pl_fol->add_option("--out", svg_out)->required();
  pl_fol->callback([&] {
    action = [&] {
      auto cfg = make_config(g);
      auto G = make_grid(cfg.get(), grid_spec, area);
      auto F = make_form(G.get(), true);
      std::vector<double> pts;
      for (const auto& st : starts)
        for (double v : parse_list(st, 2, "--start")) pts.push_back(v);
      char* s = nullptr;
      ok(lv_plot_foliation(F.get(), pts.data(), pts.size() / 2, t_max, &s));
      write_out(svg_out, take(s));
    };
  });
  auto* pl_div = pl->add_subcommand("divisor", "incidence diagram of a divisor file");
  pl_div->add_option("--divisor", divisor_file)->required()->check(CLI::ExistingFile);
  pl_div->add_option("--out", svg_out)->required();
  pl_div->callback([&] {
    action = [&] {
      char* s = nullptr;
      ok(lv_plot_divisor(read_file(divisor_file).c_str(), &s));
      write_out(svg_out, take(s));
    };
  });
  auto* pl_k = pl->add_subcommand("monotone", "band diagram of the K certificate");
  pl_k->add_option("--m", m);
  pl_k->add_option("--n", n);
  pl_k->add_option("--a", a);
  pl_k->add_option("--b", b);
  pl_k->add_option("--out", svg_out)->required();
  pl_k->callback([&] {
    action = [&] {
      char* s = nullptr;
      ok(lv_plot_monotone(m, n, a, b, &s));
      write_out(svg_out, take(s));
    };
  });
  auto* pl_h = pl->add_subcommand("hopf", "Hopf projection of the barrier");
  pl_h->add_option("--k", sweep_k);
  pl_h->add_option("--out", svg_out)->required();
  pl_h->callback([&] {
    action = [&] {
      char* s = nullptr;
      ok(lv_plot_hopf(sweep_k, &s));
      write_out(svg_out, take(s));
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParse;
  }
  try {
    if (action) action();
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << '\n';
    return f.status == LV_ERR_PARSE ? kExitParse : kExitRuntime;
  } catch (const json::exception& e) {
    std::cerr << "error: malformed library output: " << e.what() << '\n';
    return kExitRuntime;
  }
  return exit_code;
}
