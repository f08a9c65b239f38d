#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace lvlab {

struct DivisorComponent {
  std::int64_t genus = 0;
  std::int64_t boundary = 0;
  double area = 0.0;
  double weight = 0.0;
};

// Components plus the symmetric matrix of normal-crossing counts (zero diagonal).
struct WeightedDivisor {
  std::vector<DivisorComponent> components;
  std::vector<std::vector<std::int64_t>> intersections;

  std::size_t size() const { return components.size(); }
  std::int64_t crossings(std::size_t i, std::size_t j) const;
  // Throws Error(Precondition) when an invariant is broken.
  void validate() const;
};

// Divisor file: {"components":[{"genus","boundary","area","weight"}], "intersections":[[...]]}.
// A missing matrix means no crossings.
WeightedDivisor divisor_from_json(const std::string& text);
std::string divisor_to_json(const WeightedDivisor& d);

// Selection of `count` crossings between components i and j.
struct NodeSelection {
  std::size_t i = 0;
  std::size_t j = 0;
  std::int64_t count = 1;
};

struct SmoothingResult {
  double area = 0.0;
  std::int64_t genus = 0;
  std::int64_t boundary_count = 0;
  std::int64_t nodes = 0;       // nu
  std::int64_t components = 0;  // c
};

// Resolves the selected nodes of d. Every component must be reached through
// resolved nodes, and the weights at each resolved node must agree.
SmoothingResult smooth_divisor_invariants(const WeightedDivisor& d, const std::vector<NodeSelection>& resolve);

// One named quantity of a report; integral quantities keep their exact value.
struct ReportEntry {
  std::string name;
  std::string value;
};

struct FeasibilityReport {
  bool feasible = false;
  std::vector<ReportEntry> numbers;
  std::vector<std::string> certificate;  // non-empty when feasible and a witness exists
  std::string violated;                  // first failing condition when infeasible

  void add(const std::string& name, std::int64_t v);
  void add(const std::string& name, double v);
  void add(const std::string& name, const std::string& v);
  const std::string* find(const std::string& name) const;
};

std::string report_to_json(const FeasibilityReport& r);
std::string report_to_text(const FeasibilityReport& r);

// Source components are assigned to target components of equal weight. Per
// target component the assigned areas must sum to strictly less than its area
// and sum(g + b - 1) <= g'. Crossings between two source components must be
// supplied by crossings between their images, and crossing source components
// cannot share an image.
FeasibilityReport check_morphism(const WeightedDivisor& source, const WeightedDivisor& target);

// Disc grid of degree k in the ball against the k-sheeted target in Z(A).
struct BabyNumbers {
  std::int64_t source_area, source_genus, source_boundary;
  std::int64_t target_area, target_genus;
};
BabyNumbers baby_numbers(std::int64_t k, std::int64_t A);
FeasibilityReport feasibility_baby(std::int64_t k);

struct EllipsoidNumbers {
  std::int64_t k, source_area, source_genus, source_boundary;
  std::int64_t target_area, target_genus;
};
EllipsoidNumbers ellipsoid_numbers(std::int64_t m, std::int64_t d, std::int64_t N);
FeasibilityReport feasibility_ellipsoid(std::int64_t m, std::int64_t d, std::int64_t N);

// K for m x n discs of areas a, b, with a band certificate.
struct MonotoneK {
  std::int64_t K = 0;
  std::int64_t spare = 0;   // K / (m n)
  double vertical_block_area = 0.0;    // Sigma'_1 area given to each of the m discs
  double horizontal_block_area = 0.0;  // Sigma'_2 area given to each of the n discs
  // point c of Sigma'_1 cap Sigma'_2 goes to pair (assignment[c].first, assignment[c].second)
  std::vector<std::pair<std::int64_t, std::int64_t>> assignment;
};
MonotoneK monotone_K(std::int64_t m, std::int64_t n, double a, double b);
// Independent check of a MonotoneK certificate; empty string when valid.
std::string verify_monotone_certificate(const MonotoneK& k, std::int64_t m, std::int64_t n, double a, double b);

struct RembNumbers {
  std::int64_t M;           // 2 N^2 + 1
  std::int64_t area1;       // (2M)^2
  std::int64_t area2;       // (2M)^2 + 2 M^2
  std::int64_t crossings;   // (2M)^2
  std::int64_t required;    // 16 N^4
};
RembNumbers remb_numbers(std::int64_t N);
FeasibilityReport feasibility_Remb(std::int64_t N);

double rigidity_threshold(double a, double b);
bool chekanov_excluded(double A_min, double a, double b);

// Model annulus (p, theta) in (p0, p1) x R/Z with omega = dp ^ dtheta and
// alpha' = p dtheta. The correction form is theta_form = period dtheta + dh with
// h = amp sin(2 pi theta) cos(pi (p - p0) / (p1 - p0)); its dual field Y has
// omega(Y, .) = theta_form. The test loop is p = p_mid + wiggle sin(2 pi s).
struct FluxModel {
  double p0 = 0.0;
  double p1 = 2.0;
  double period = 0.3;
  double amp = 0.02;
  double p_mid = 0.3;
  double wiggle = 0.05;
  int samples = 256;
};

struct FluxResult {
  double before = 0.0;     // action of the loop
  double after = 0.0;      // action of its image
  double expected = 0.0;   // t * period
  double residual = 0.0;   // after - before - expected
};

// Throws Error(Domain) when the loop leaves the annulus.
FluxResult verify_flux_identity(const FluxModel& model, double t);

}  // namespace lvlab
