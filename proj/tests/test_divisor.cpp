#include <doctest.h>

#include <random>

#include "lvlab/divisor.hpp"
#include "lvlab/common.hpp"
#include "oracles.hpp"

using namespace lvlab;

namespace {

// k unit discs of weight 1, pairwise crossing once.
WeightedDivisor line_arrangement(int k) {
  WeightedDivisor d;
  d.components.assign(static_cast<std::size_t>(k), {0, 1, 1.0, 1.0});
  d.intersections.assign(static_cast<std::size_t>(k), std::vector<std::int64_t>(static_cast<std::size_t>(k), 1));
  for (int i = 0; i < k; ++i) d.intersections[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 0;
  return d;
}

std::vector<NodeSelection> all_nodes(int k) {
  std::vector<NodeSelection> s;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) s.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), 1});
  return s;
}

}  // namespace

TEST_CASE("smoothing k lines gives the plane curve genus") {
  std::mt19937_64 rng(1);
  for (int k = 2; k <= 7; ++k) {
    const auto r = smooth_divisor_invariants(line_arrangement(k), all_nodes(k));
    CHECK(r.genus == oracle::binom2(k - 1));
    CHECK(r.nodes == oracle::binom2(k));
    CHECK(r.boundary_count == k);
    std::vector<oracle::Piece> pieces(static_cast<std::size_t>(k), {0, 1});
    std::vector<std::pair<int, int>> nodes;
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) nodes.emplace_back(i, j);
    const auto o = oracle::ribbon_smoothing(pieces, nodes, rng);
    CHECK(o.pieces == 1);
    CHECK(o.genus == r.genus);
    CHECK(o.boundary == r.boundary_count);
  }
}

TEST_CASE("smoothing genus matches the ribbon graph oracle") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> G(0, 2), B(0, 2);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 5)(rng);
    WeightedDivisor d;
    std::vector<oracle::Piece> pieces;
    for (int i = 0; i < n; ++i) {
      const int g = G(rng), b = B(rng);
      d.components.push_back({g, b, 1.0, 1.0});
      pieces.push_back({g, b});
    }
    d.intersections.assign(static_cast<std::size_t>(n), std::vector<std::int64_t>(static_cast<std::size_t>(n), 0));
    std::vector<NodeSelection> sel;
    std::vector<std::pair<int, int>> nodes;
    const int m = n == 1 ? 0 : std::uniform_int_distribution<int>(0, 8)(rng);
    for (int e = 0; e < m; ++e) {
      const int i = std::uniform_int_distribution<int>(0, n - 1)(rng);
      int j = std::uniform_int_distribution<int>(0, n - 2)(rng);
      if (j >= i) ++j;
      ++d.intersections[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      ++d.intersections[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
      sel.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), 1});
      nodes.emplace_back(i, j);
    }
    const auto o = oracle::ribbon_smoothing(pieces, nodes, rng);
    REQUIRE(o.pieces >= 1);
    CAPTURE(trial);
    if (o.pieces > 1) {
      CHECK_THROWS_AS(smooth_divisor_invariants(d, sel), Error);
    } else {
      const auto r = smooth_divisor_invariants(d, sel);
      CHECK(r.genus == o.genus);
      CHECK(r.boundary_count == o.boundary);
    }
  }
}

TEST_CASE("smoothing preconditions") {
  auto d = line_arrangement(3);
  CHECK_THROWS_AS(smooth_divisor_invariants(d, {{0, 1, 2}, {1, 2, 1}}), Error);  // too many nodes
  CHECK_THROWS_AS(smooth_divisor_invariants(d, {{0, 1, 1}}), Error);             // disconnected
  d.components[2].weight = 2.0;
  CHECK_THROWS_AS(smooth_divisor_invariants(d, all_nodes(3)), Error);            // weight mismatch
  d.intersections[0][1] = 2;
  CHECK_THROWS_AS(d.validate(), Error);  // asymmetric
}

TEST_CASE("baby case numbers") {
  const auto r = feasibility_baby(3);
  REQUIRE(r.feasible);
  CHECK(*r.find("A") == "2");
  CHECK(*r.find("cylinder") == "Z4(2/3)");
  for (std::int64_t k = 2; k <= 50; ++k) {
    const auto rep = feasibility_baby(k);
    CHECK(rep.feasible);
    CHECK(*rep.find("A") == std::to_string((k + 1) / 2));
    CHECK(*rep.find("source_genus") == std::to_string((k - 1) * (k - 2) / 2));
  }
}

TEST_CASE("ellipsoid numbers") {
  const auto e = ellipsoid_numbers(2, 2, 1);
  CHECK(e.k == 4);
  CHECK(e.target_area == 6);
  CHECK_FALSE(feasibility_ellipsoid(2, 2, 1).feasible);
  CHECK(feasibility_ellipsoid(3, 2, 1).feasible);
  CHECK_FALSE(feasibility_ellipsoid(2, 3, 1).feasible);  // m < d
  CHECK_THROWS_AS(ellipsoid_numbers(3, 2, 2), Error);    // gcd(d, N) = 2
}

TEST_CASE("Remb numbers") {
  const auto r = remb_numbers(2);
  CHECK(r.M == 9);
  CHECK(r.area1 == 324);
  CHECK(r.required == 256);
  for (std::int64_t N = 1; N <= 10; ++N) CHECK(feasibility_Remb(N).feasible);
}

TEST_CASE("monotone certificate verifies") {
  for (auto [m, n, a, b] : {std::tuple{1, 1, 1.0, 1.0}, std::tuple{2, 3, 0.5, 1.5}, std::tuple{4, 2, 2.0, 0.25}}) {
    const auto k = monotone_K(m, n, a, b);
    CHECK(k.K % (m * n) == 0);
    CHECK(verify_monotone_certificate(k, m, n, a, b).empty());
  }
  auto k = monotone_K(2, 2, 1.0, 1.0);
  k.assignment.pop_back();
  CHECK_FALSE(verify_monotone_certificate(k, 2, 2, 1.0, 1.0).empty());
}

TEST_CASE("morphism check") {
  WeightedDivisor src, tgt;
  src.components = {{0, 1, 1.0, 1.0}, {0, 1, 1.0, 1.0}};
  src.intersections = {{0, 1}, {1, 0}};
  tgt.components = {{1, 0, 3.0, 1.0}, {1, 0, 3.0, 1.0}};
  tgt.intersections = {{0, 2}, {2, 0}};
  CHECK(check_morphism(src, tgt).feasible);
  tgt.intersections = {{0, 0}, {0, 0}};
  CHECK_FALSE(check_morphism(src, tgt).feasible);
}

TEST_CASE("flux identity") {
  FluxModel m;
  for (double t : {1.0, 2.0}) {
    const auto r = verify_flux_identity(m, t);
    CHECK(std::abs(r.residual) < 1e-4);
    CHECK(r.expected == doctest::Approx(t * m.period));
  }
  m.p_mid = 1.99;
  CHECK_THROWS_AS(verify_flux_identity(m, 1.0), Error);
}

TEST_CASE("divisor json round trip") {
  const auto d = line_arrangement(3);
  const auto e = divisor_from_json(divisor_to_json(d));
  CHECK(e.size() == 3);
  CHECK(e.crossings(0, 2) == 1);
  CHECK_THROWS_AS(divisor_from_json("{\"components\": 3}"), Error);
}
