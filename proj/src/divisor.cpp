#include "lvlab/divisor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lvlab/common.hpp"
#include "lvlab/ode.hpp"
#include "lvlab/quadrature.hpp"
#include "lvlab/spline.hpp"

namespace lvlab {

namespace {

constexpr const char* kModule = "divisor_arith";

[[noreturn]] void precondition(const std::string& msg) { throw Error(ErrorKind::Precondition, kModule, msg); }

std::int64_t mul(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) precondition("integer overflow");
  return r;
}
std::int64_t add(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_add_overflow(a, b, &r)) precondition("integer overflow");
  return r;
}

bool same_weight(double u, double v) { return std::abs(u - v) <= 1e-12 * std::max(std::abs(u), std::abs(v)); }

std::string num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

std::int64_t WeightedDivisor::crossings(std::size_t i, std::size_t j) const {
  if (intersections.empty()) return 0;
  return intersections.at(i).at(j);
}

void WeightedDivisor::validate() const {
  const std::size_t n = components.size();
  if (n == 0) precondition("divisor has no components");
  for (std::size_t i = 0; i < n; ++i) {
    const auto& c = components[i];
    if (c.genus < 0 || c.boundary < 0) precondition("component " + std::to_string(i) + " has negative genus or boundary count");
    if (!(c.area > 0.0) || !(c.weight > 0.0)) precondition("component " + std::to_string(i) + " needs positive area and weight");
  }
  if (intersections.empty()) return;
  if (intersections.size() != n) precondition("intersection matrix has the wrong size");
  for (std::size_t i = 0; i < n; ++i) {
    if (intersections[i].size() != n) precondition("intersection matrix has the wrong size");
    if (intersections[i][i] != 0) precondition("intersection matrix needs a zero diagonal");
    for (std::size_t j = 0; j < n; ++j) {
      if (intersections[i][j] < 0) precondition("negative intersection count");
      if (intersections[i][j] != intersections[j][i]) precondition("intersection matrix is not symmetric");
    }
  }
}

WeightedDivisor divisor_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, kModule, std::string("divisor file: ") + e.what());
  }
  WeightedDivisor d;
  try {
    for (const auto& c : j.at("components"))
      d.components.push_back({c.value("genus", std::int64_t{0}), c.value("boundary", std::int64_t{0}),
                              c.at("area").get<double>(), c.at("weight").get<double>()});
    if (j.contains("intersections")) d.intersections = j.at("intersections").get<std::vector<std::vector<std::int64_t>>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, kModule, std::string("divisor file: ") + e.what());
  }
  d.validate();
  return d;
}

std::string divisor_to_json(const WeightedDivisor& d) {
  nlohmann::json j;
  j["components"] = nlohmann::json::array();
  for (const auto& c : d.components)
    j["components"].push_back({{"genus", c.genus}, {"boundary", c.boundary}, {"area", c.area}, {"weight", c.weight}});
  if (!d.intersections.empty()) j["intersections"] = d.intersections;
  return j.dump(2);
}

SmoothingResult smooth_divisor_invariants(const WeightedDivisor& d, const std::vector<NodeSelection>& resolve) {
  d.validate();
  const std::size_t n = d.size();
  std::vector<std::vector<std::int64_t>> used(n, std::vector<std::int64_t>(n, 0));
  UnionFind uf(n);
  SmoothingResult r;
  for (const auto& s : resolve) {
    if (s.i >= n || s.j >= n || s.i == s.j) precondition("node selection refers to an invalid component pair");
    if (s.count < 1) precondition("node selection needs a positive count");
    used[s.i][s.j] += s.count;
    used[s.j][s.i] += s.count;
    if (used[s.i][s.j] > d.crossings(s.i, s.j))
      precondition("more nodes resolved between components " + std::to_string(s.i) + " and " + std::to_string(s.j) +
                   " than they have");
    if (!same_weight(d.components[s.i].weight, d.components[s.j].weight))
      precondition("weight mismatch at a resolved node between components " + std::to_string(s.i) + " and " +
                   std::to_string(s.j));
    uf.unite(s.i, s.j);
    r.nodes = add(r.nodes, s.count);
  }
  for (std::size_t i = 1; i < n; ++i)
    if (uf.find(i) != uf.find(0)) precondition("resolved curve is disconnected (component " + std::to_string(i) + ")");
  std::int64_t g = 0;
  for (const auto& c : d.components) {
    r.area += c.area;
    g = add(g, c.genus);
    r.boundary_count = add(r.boundary_count, c.boundary);
  }
  r.components = static_cast<std::int64_t>(n);
  r.genus = add(add(g, r.nodes), 1 - r.components);
  return r;
}

void FeasibilityReport::add(const std::string& name, std::int64_t v) { numbers.push_back({name, std::to_string(v)}); }
void FeasibilityReport::add(const std::string& name, double v) { numbers.push_back({name, num(v)}); }
void FeasibilityReport::add(const std::string& name, const std::string& v) { numbers.push_back({name, v}); }

const std::string* FeasibilityReport::find(const std::string& name) const {
  for (const auto& e : numbers)
    if (e.name == name) return &e.value;
  return nullptr;
}

std::string report_to_json(const FeasibilityReport& r) {
  nlohmann::json j;
  j["verdict"] = r.feasible ? "feasible" : "infeasible";
  nlohmann::json nums = nlohmann::json::object();
  for (const auto& e : r.numbers) nums[e.name] = e.value;
  j["numbers"] = nums;
  j["certificate"] = r.certificate;
  if (!r.violated.empty()) j["violated"] = r.violated;
  return j.dump(2);
}

std::string report_to_text(const FeasibilityReport& r) {
  std::size_t w = 0;
  for (const auto& e : r.numbers) w = std::max(w, e.name.size());
  std::ostringstream os;
  os << "verdict: " << (r.feasible ? "feasible" : "infeasible") << "\n";
  for (const auto& e : r.numbers) os << "  " << e.name << std::string(w - e.name.size() + 2, ' ') << e.value << "\n";
  if (!r.violated.empty()) os << "violated: " << r.violated << "\n";
  for (const auto& c : r.certificate) os << "  " << c << "\n";
  return os.str();
}

// ---------------------------------------------------------------- morphisms

namespace {

struct MorphismSearch {
  const WeightedDivisor& src;
  const WeightedDivisor& tgt;
  std::vector<std::size_t> order;
  std::vector<std::vector<std::size_t>> candidates;
  std::vector<long> image;
  std::vector<double> area_used;
  std::vector<std::int64_t> genus_used;
  std::vector<std::vector<std::int64_t>> cross_used;
  std::string reason;
  std::size_t reason_depth = 0;
  std::size_t budget = 2000000;

  void fail(std::size_t depth, const std::string& why) {
    if (reason.empty() || depth > reason_depth) {
      reason = why;
      reason_depth = depth;
    }
  }

  bool run(std::size_t depth) {
    if (depth == order.size()) return true;
    if (budget == 0) return false;
    --budget;
    const std::size_t i = order[depth];
    const auto& c = src.components[i];
    const std::int64_t need = c.genus + c.boundary - 1;
    for (std::size_t j : candidates[i]) {
      const auto& t = tgt.components[j];
      if (!(area_used[j] + c.area < t.area)) {
        fail(depth, "area: source area " + num(area_used[j] + c.area) + " is not below target component " +
                        std::to_string(j) + " area " + num(t.area));
        continue;
      }
      if (genus_used[j] + need > t.genus) {
        fail(depth, "genus: g + b - 1 = " + std::to_string(genus_used[j] + need) + " exceeds target genus " +
                        std::to_string(t.genus) + " of component " + std::to_string(j));
        continue;
      }
      bool ok = true;
      std::vector<std::pair<std::size_t, std::int64_t>> added;
      for (std::size_t d = 0; d < depth && ok; ++d) {
        const std::size_t k = order[d];
        const std::int64_t x = src.crossings(i, k);
        if (x == 0) continue;
        const std::size_t jk = static_cast<std::size_t>(image[k]);
        if (jk == j) {
          fail(depth, "crossings: crossing source components " + std::to_string(i) + " and " + std::to_string(k) +
                          " would share target component " + std::to_string(j));
          ok = false;
          break;
        }
        cross_used[j][jk] += x;
        cross_used[jk][j] += x;
        added.push_back({jk, x});
        if (cross_used[j][jk] > tgt.crossings(j, jk)) {
          fail(depth, "crossings: source needs " + std::to_string(cross_used[j][jk]) + " crossings between target components " +
                          std::to_string(j) + " and " + std::to_string(jk) + ", target has " +
                          std::to_string(tgt.crossings(j, jk)));
          ok = false;
        }
      }
      if (ok) {
        image[i] = static_cast<long>(j);
        area_used[j] += c.area;
        genus_used[j] += need;
        if (run(depth + 1)) return true;
        image[i] = -1;
        area_used[j] -= c.area;
        genus_used[j] -= need;
      }
      for (const auto& [jk, x] : added) {
        cross_used[j][jk] -= x;
        cross_used[jk][j] -= x;
      }
    }
    return false;
  }
};

}  // namespace

FeasibilityReport check_morphism(const WeightedDivisor& source, const WeightedDivisor& target) {
  source.validate();
  target.validate();
  FeasibilityReport rep;
  double sa = 0.0, ta = 0.0;
  for (const auto& c : source.components) sa += c.area;
  for (const auto& c : target.components) ta += c.area;
  rep.add("source_components", static_cast<std::int64_t>(source.size()));
  rep.add("target_components", static_cast<std::int64_t>(target.size()));
  rep.add("source_area", sa);
  rep.add("target_area", ta);

  MorphismSearch s{source, target, {}, {}, {}, {}, {}, {}, {}, 0};
  const std::size_t n = source.size(), m = target.size();
  s.order.resize(n);
  std::iota(s.order.begin(), s.order.end(), std::size_t{0});
  // By weight class, then descending area; index keeps the order total.
  std::stable_sort(s.order.begin(), s.order.end(), [&](std::size_t a, std::size_t b) {
    const auto &ca = source.components[a], &cb = source.components[b];
    if (!same_weight(ca.weight, cb.weight)) return ca.weight < cb.weight;
    return ca.area > cb.area;
  });
  s.candidates.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j)
      if (same_weight(source.components[i].weight, target.components[j].weight)) s.candidates[i].push_back(j);
    std::stable_sort(s.candidates[i].begin(), s.candidates[i].end(),
                     [&](std::size_t a, std::size_t b) { return target.components[a].area > target.components[b].area; });
    if (s.candidates[i].empty()) {
      rep.violated = "weight: no target component of weight " + num(source.components[i].weight) + " for source component " +
                     std::to_string(i);
      return rep;
    }
  }
  s.image.assign(n, -1);
  s.area_used.assign(m, 0.0);
  s.genus_used.assign(m, 0);
  s.cross_used.assign(m, std::vector<std::int64_t>(m, 0));
  rep.feasible = s.run(0);
  if (rep.feasible) {
    for (std::size_t i = 0; i < n; ++i)
      rep.certificate.push_back("source " + std::to_string(i) + " -> target " + std::to_string(s.image[i]));
  } else {
    rep.violated = s.budget == 0 ? "search budget exhausted" : s.reason;
  }
  return rep;
}

// ------------------------------------------------------------ feasibility

BabyNumbers baby_numbers(std::int64_t k, std::int64_t A) {
  if (k < 2) precondition("k must be at least 2");
  if (A < 1) precondition("A must be positive");
  BabyNumbers b{};
  b.source_area = k;
  b.source_genus = mul(k - 1, k - 2) / 2;
  b.source_boundary = k;
  b.target_area = mul(4, A);
  b.target_genus = mul(k, A) - 1;
  return b;
}

FeasibilityReport feasibility_baby(std::int64_t k) {
  if (k < 2) precondition("k must be at least 2");
  FeasibilityReport rep;
  // Both conditions are monotone in A; the first A that passes is the least.
  for (std::int64_t A = 1;; ++A) {
    const BabyNumbers b = baby_numbers(k, A);
    const std::int64_t need = b.source_genus + b.source_boundary - 1;
    if (b.target_area > b.source_area && b.target_genus >= need) {
      rep.feasible = true;
      rep.add("k", k);
      rep.add("A", A);
      rep.add("source_area", b.source_area);
      rep.add("source_genus", b.source_genus);
      rep.add("source_boundary", b.source_boundary);
      rep.add("target_area", b.target_area);
      rep.add("target_genus", b.target_genus);
      rep.add("required_genus", need);
      rep.add("cylinder", "Z4(2/" + std::to_string(k) + ")");
      rep.add("capacity_lower_bound", "1/" + std::to_string(k));
      rep.add("capacity_upper_bound", "2/" + std::to_string(k));
      rep.certificate.push_back("4A = " + std::to_string(b.target_area) + " > " + std::to_string(k));
      rep.certificate.push_back("kA - 1 = " + std::to_string(b.target_genus) + " >= " + std::to_string(need));
      return rep;
    }
  }
}

EllipsoidNumbers ellipsoid_numbers(std::int64_t m, std::int64_t d, std::int64_t N) {
  if (m < 1 || d < 1 || N < 1) precondition("m, d, N must be positive");
  if (std::gcd(d, N) != 1) precondition("N and d are coprime is required (gcd(d, N) = " + std::to_string(std::gcd(d, N)) + ")");
  EllipsoidNumbers e{};
  e.k = mul(mul(m, N), d);
  e.source_area = e.k;
  e.source_genus = mul(e.k - 1, e.k - 2) / 2;
  e.source_boundary = e.k;
  e.target_area = mul(m, add(mul(N, d), 1));
  const std::int64_t t = add(mul(mul(m, N) - 1, add(mul(mul(m, N), mul(d, d)), mul(m, d)) - 1), 1 - m);
  e.target_genus = t / 2;
  return e;
}

FeasibilityReport feasibility_ellipsoid(std::int64_t m, std::int64_t d, std::int64_t N) {
  const EllipsoidNumbers e = ellipsoid_numbers(m, d, N);
  FeasibilityReport rep;
  const std::int64_t need = e.source_genus + e.source_boundary - 1;
  rep.add("m", m);
  rep.add("d", d);
  rep.add("N", N);
  rep.add("k", e.k);
  rep.add("source_area", e.source_area);
  rep.add("source_genus", e.source_genus);
  rep.add("source_boundary", e.source_boundary);
  rep.add("target_area", e.target_area);
  rep.add("target_genus", e.target_genus);
  rep.add("required_genus", need);
  rep.add("ellipsoid", "E(1/" + std::to_string(d) + ", " + std::to_string(d) + "+1/" + std::to_string(N) + ")");
  if (m < d) {
    rep.violated = "m >= d fails: " + std::to_string(m) + " < " + std::to_string(d);
  } else if (!(e.target_area > e.source_area)) {
    rep.violated = "area: " + std::to_string(e.target_area) + " is not above " + std::to_string(e.source_area);
  } else if (e.target_genus < need) {
    rep.violated = "genus: target genus " + std::to_string(e.target_genus) + " < required " + std::to_string(need);
  } else {
    rep.feasible = true;
    rep.certificate.push_back("area " + std::to_string(e.target_area) + " > " + std::to_string(e.source_area));
    rep.certificate.push_back("genus " + std::to_string(e.target_genus) + " >= " + std::to_string(need));
  }
  return rep;
}

// Sigma'_1 is a disc of area K b cut into K cells, cell c carrying crossing c.
// Sigma'_2 is K discs of area a + b (disc c through crossing c) joined along a
// disc of area K b. Vertical disc i takes the consecutive cells
// [i n s, (i + 1) n s); horizontal disc j takes the discs c = j mod n together
// with a 1/n share of the joining disc. Pair (i, j) then occurs s times.
MonotoneK monotone_K(std::int64_t m, std::int64_t n, double a, double b) {
  if (m < 1 || n < 1 || !(a > 0.0) || !(b > 0.0)) precondition("m, n, a, b must be positive");
  const double A = static_cast<double>(m) * a;
  const double B = static_cast<double>(n) * b;
  // s n b > B and s m (a + 2 b) > A, with one spare block.
  const double need = std::max(B / (static_cast<double>(n) * b), A / (static_cast<double>(m) * (a + 2.0 * b)));
  MonotoneK r;
  r.spare = static_cast<std::int64_t>(std::ceil(need)) + 1;
  r.K = mul(mul(m, n), r.spare);
  r.vertical_block_area = static_cast<double>(n * r.spare) * b;
  r.horizontal_block_area = static_cast<double>(m * r.spare) * (a + b) + static_cast<double>(r.K) * b / static_cast<double>(n);
  r.assignment.resize(static_cast<std::size_t>(r.K));
  for (std::int64_t c = 0; c < r.K; ++c) r.assignment[static_cast<std::size_t>(c)] = {c / (n * r.spare), c % n};
  return r;
}

std::string verify_monotone_certificate(const MonotoneK& k, std::int64_t m, std::int64_t n, double a, double b) {
  if (k.K <= 0 || k.K % (m * n) != 0) return "K is not a positive multiple of m n";
  if (static_cast<std::int64_t>(k.assignment.size()) != k.K) return "assignment size differs from K";
  std::vector<std::int64_t> cells_i(m, 0), discs_j(n, 0), first(m, -1), last(m, -1);
  std::vector<std::vector<int>> seen(m, std::vector<int>(n, 0));
  for (std::int64_t c = 0; c < k.K; ++c) {
    const auto [i, j] = k.assignment[static_cast<std::size_t>(c)];
    if (i < 0 || i >= m || j < 0 || j >= n) return "assignment out of range";
    ++cells_i[i];
    ++discs_j[j];
    seen[i][j] = 1;
    if (first[i] < 0) first[i] = c;
    last[i] = c;
  }
  const double A = static_cast<double>(m) * a, B = static_cast<double>(n) * b;
  for (std::int64_t i = 0; i < m; ++i) {
    if (last[i] - first[i] + 1 != cells_i[i]) return "vertical block " + std::to_string(i) + " is not connected";
    if (!(static_cast<double>(cells_i[i]) * b > B)) return "vertical block " + std::to_string(i) + " area too small";
  }
  for (std::int64_t j = 0; j < n; ++j) {
    // its horizontal discs plus an equal share of the joining disc
    const double area = static_cast<double>(discs_j[j]) * (a + b) + static_cast<double>(k.K) * b / static_cast<double>(n);
    if (!(area > A)) return "horizontal block " + std::to_string(j) + " area too small";
  }
  for (std::int64_t i = 0; i < m; ++i)
    for (std::int64_t j = 0; j < n; ++j)
      if (!seen[i][j]) return "pair (" + std::to_string(i) + ", " + std::to_string(j) + ") never realized";
  return {};
}

RembNumbers remb_numbers(std::int64_t N) {
  if (N < 1) precondition("N must be at least 1");
  RembNumbers r{};
  r.M = add(mul(2, mul(N, N)), 1);
  r.area1 = mul(mul(2, r.M), mul(2, r.M));
  r.area2 = add(r.area1, mul(2, mul(r.M, r.M)));
  r.crossings = r.area1;
  r.required = mul(16, mul(mul(N, N), mul(N, N)));
  return r;
}

FeasibilityReport feasibility_Remb(std::int64_t N) {
  const RembNumbers r = remb_numbers(N);
  FeasibilityReport rep;
  rep.add("N", N);
  rep.add("M", r.M);
  rep.add("area_sigma1", r.area1);
  rep.add("area_sigma2", r.area2);
  rep.add("crossings", r.crossings);
  rep.add("required", r.required);
  rep.add("margin_area1", r.area1 - r.required);
  rep.add("margin_area2", r.area2 - r.required);
  rep.add("margin_crossings", r.crossings - r.required);
  if (!(r.area1 > r.required)) {
    rep.violated = "Sigma'_1 area";
  } else if (!(r.area2 > r.required)) {
    rep.violated = "Sigma'_2 area";
  } else if (!(r.crossings > r.required)) {
    rep.violated = "crossing count";
  } else {
    rep.feasible = true;
    rep.certificate.push_back(std::to_string(r.area1) + " > " + std::to_string(r.required));
    rep.certificate.push_back(std::to_string(r.area2) + " > " + std::to_string(r.required));
    rep.certificate.push_back(std::to_string(r.crossings) + " > " + std::to_string(r.required));
  }
  return rep;
}

double rigidity_threshold(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) precondition("a and b must be positive");
  return a + b;
}

bool chekanov_excluded(double A_min, double a, double b) { return A_min >= rigidity_threshold(a, b); }

// ------------------------------------------------------------------- flux

FluxResult verify_flux_identity(const FluxModel& mdl, double t) {
  if (!(mdl.p1 > mdl.p0)) precondition("annulus needs p1 > p0");
  if (mdl.samples < 8) precondition("flux loop needs at least 8 samples");
  const double width = mdl.p1 - mdl.p0;
  // Y_p = period + h_theta, Y_theta = -h_p
  auto field = [&](double, const State<2>& y) -> State<2> {
    const double p = y[0], th = y[1];
    const double k = kPi / width;
    const double h_th = mdl.amp * kTwoPi * std::cos(kTwoPi * th) * std::cos(k * (p - mdl.p0));
    const double h_p = -mdl.amp * k * std::sin(kTwoPi * th) * std::sin(k * (p - mdl.p0));
    return {mdl.period + h_th, -h_p};
  };
  OdeOptions opt;
  opt.abs_tol = 1e-12;
  opt.rel_tol = 1e-12;
  opt.h_max = 0.05;
  const int n = mdl.samples;
  std::vector<double> s(n + 1), p0(n + 1), q0(n + 1), p1(n + 1), q1(n + 1);
  for (int k = 0; k <= n; ++k) {
    s[k] = static_cast<double>(k) / n;
    p0[k] = mdl.p_mid + mdl.wiggle * std::sin(kTwoPi * s[k]);
    q0[k] = 0.0;  // theta - s
  }
  auto inside = [&](double p) { return p > mdl.p0 && p < mdl.p1; };
  for (int k = 0; k < n; ++k) {
    if (!inside(p0[k])) throw Error(ErrorKind::Domain, kModule, "test loop is not inside the annulus");
    bool left = false;
    auto ev = [&](double, const State<2>& y) { return !inside(y[0]); };
    auto res = integrate<2>(field, State<2>{p0[k], s[k]}, 0.0, t, opt, ev, [](double, const State<2>&) {});
    left = res.status == OdeStatus::Event;
    if (left) throw Error(ErrorKind::Domain, kModule, "loop exits the annulus under the correction flow");
    if (res.status != OdeStatus::Reached) throw Error(ErrorKind::Domain, kModule, "flux integration failed: " + res.diagnostic);
    p1[k] = res.y[0];
    q1[k] = res.y[1] - s[k];
  }
  p1[n] = p1[0];
  q1[n] = q1[0];
  // Loop action of p dtheta with theta = s + q(s), q periodic.
  auto action = [&](const std::vector<double>& p, const std::vector<double>& q) {
    const CubicSpline P(s, p, CubicSpline::End::Periodic);
    const CubicSpline Q(s, q, CubicSpline::End::Periodic);
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
      const double h = s[k + 1] - s[k];
      for (int j = 0; j < 8; ++j) {
        const double x = s[k] + kGl8X[j] * h;
        sum += kGl8W[j] * h * P.value(x) * (1.0 + Q.derivative(x));
      }
    }
    return sum;
  };
  p0[n] = p0[0];
  FluxResult r;
  r.before = action(p0, q0);
  r.after = action(p1, q1);
  r.expected = t * mdl.period;
  r.residual = r.after - r.before - r.expected;
  return r;
}

}  // namespace lvlab
