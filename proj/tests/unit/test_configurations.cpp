#include <cmath>
#include <limits>
#include <vector>

#include "clusterexp/configurations.hpp"
#include "clusterexp/errors.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace clusterexp;

namespace {

PointConfiguration line(std::vector<double> xs) {
  std::vector<Point> p;
  for (double x : xs) p.push_back(make_point(x));
  return PointConfiguration(p, 1);
}

// Subsets of a configuration by bitmask.
PointConfiguration subset(const PointConfiguration& c, unsigned mask) {
  std::vector<Point> p;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (mask >> i & 1U) p.push_back(c[i]);
  return PointConfiguration(p, c.dimension());
}

}  // namespace

TEST_SUITE("configurations") {
  TEST_CASE("canonical order and repeated points") {
    const auto c = line({3.0, -1.0, 2.0});
    CHECK(c[0][0] == -1.0);
    CHECK(c[2][0] == 3.0);
    CHECK(line({1.0, 1.0}).has_repeated_point());
    CHECK_FALSE(c.has_repeated_point());
  }

  TEST_CASE("energies on small examples") {
    const PairPotential rod(HardCore{1.0}, 1);
    CHECK(energy_U(PointConfiguration{}, rod) == 0.0);
    CHECK(energy_U(line({0.0, 0.5}), rod) == std::numeric_limits<double>::infinity());
    CHECK(energy_U(line({0.0, 1.5, 3.0}), rod) == 0.0);

    const PairPotential lj(LennardJones{1.0, 1.0}, 2);
    const auto tri = PointConfiguration::from_coordinates({{0.0, 0.0}, {1.0, 0.0}, {0.5, std::sqrt(3.0) / 2}}, 2);
    CHECK(std::abs(energy_U(tri, lj)) < 1e-12);

    const PairPotential lj1(LennardJones{1.0, 1.0}, 1);
    CHECK(energy_W(line({0.0}), line({2.0, -2.0}), lj1) == doctest::Approx(-2.0 * 63.0 / 4096.0));
    CHECK(energy_W(line({0.0}), line({0.0}), lj1) == std::numeric_limits<double>::infinity());
  }

  TEST_CASE("energy is additive over a split") {
    const PairPotential lj(LennardJones{1.0, 1.0}, 1);
    auto g = oracle::rng(11);
    for (int trial = 0; trial < 100; ++trial) {
      const int n = oracle::uniform_int(g, 2, 7);
      const auto all = PointConfiguration(oracle::spread_points(g, n, -4.0, 4.0, 0.7), 1);
      const unsigned mask = static_cast<unsigned>(oracle::uniform_int(g, 0, (1 << n) - 1));
      const auto a = subset(all, mask);
      const auto b = subset(all, ~mask & ((1U << n) - 1));
      const double lhs = energy_U(all, lj);
      const double rhs = energy_U(a, lj) + energy_U(b, lj) + energy_W(a, b, lj);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12).scale(1.0));
    }
  }

  TEST_CASE("base point choice") {
    const PairPotential lj(LennardJones{1.0, 1.0}, 1);
    // The first point in canonical order already satisfies the stability bound.
    CHECK(choose_base_point(line({0.0, 1.2, 2.4}), lj, 0.5) == 0);
    // With B = 0 only a point with nonnegative interaction energy qualifies.
    const auto c = line({0.0, 1.2, 2.15});
    std::size_t expected = c.size();
    for (std::size_t i = 0; i < c.size(); ++i) {
      double w = 0.0;
      for (std::size_t j = 0; j < c.size(); ++j)
        if (j != i) w += lj(std::abs(c[i][0] - c[j][0]));
      if (w >= 0.0) {
        expected = i;
        break;
      }
    }
    REQUIRE(expected < c.size());
    CHECK(choose_base_point(c, lj, 0.0) == expected);
    CHECK_THROWS_AS(choose_base_point(line({0.0, 1.2}), lj, 0.0), InconsistencyError);
  }

  TEST_CASE("product kernel") {
    const PairPotential rod(HardCore{1.0}, 1);
    const Point x = make_point(0.0);
    CHECK(product_kernel_K(x, PointConfiguration{}, rod, 1.0) == 1.0);
    CHECK(product_kernel_K(x, line({0.5, -0.3}), rod, 1.0) == 1.0);   // (−1)(−1)
    CHECK(product_kernel_K(x, line({0.5, -0.3, 0.2}), rod, 1.0) == -1.0);
    CHECK(product_kernel_K(x, line({0.5, 2.0}), rod, 1.0) == 0.0);
  }

  TEST_CASE("fan kernel against subset enumeration") {
    auto g = oracle::rng(5);
    const auto w = [](double r) { return 1.0 / (1.0 + r * r); };
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<PointConfiguration> clusters;
      const int m = oracle::uniform_int(g, 1, 3);
      for (int i = 0; i < m; ++i)
        clusters.push_back(PointConfiguration(oracle::spread_points(g, oracle::uniform_int(g, 1, 3), -3.0, 3.0, 0.1), 1));
      const Point x = make_point(oracle::uniform(g, -3.0, 3.0));
      // Brute force: every subset of the union that meets each cluster.
      std::vector<std::pair<int, Point>> tagged;
      for (int i = 0; i < m; ++i)
        for (const auto& p : clusters[i].points()) tagged.push_back({i, p});
      const unsigned total = 1U << tagged.size();
      double brute = 0.0;
      for (unsigned mask = 0; mask < total; ++mask) {
        std::vector<bool> met(m, false);
        double prod = 1.0;
        for (std::size_t k = 0; k < tagged.size(); ++k)
          if (mask >> k & 1U) {
            met[tagged[k].first] = true;
            prod *= w(distance(x, tagged[k].second));
          }
        bool all = true;
        for (bool b : met) all = all && b;
        if (all) brute += prod;
      }
      CHECK(fan_kernel_K0(x, clusters, w) == doctest::Approx(brute).epsilon(1e-13));
    }
  }

  TEST_CASE("kernel sum over subsets splits across a union") {
    // Σ_{ξ ⊆ γ∪η} K(x; ξ) = Σ_{ξ ⊆ η} Σ_{ς ⊆ γ} K(x; ξ∪ς), by explicit enumeration.
    const PairPotential lj(LennardJones{1.0, 1.0}, 1);
    auto g = oracle::rng(21);
    for (int trial = 0; trial < 20; ++trial) {
      const auto pts = oracle::spread_points(g, 7, -3.0, 3.0, 0.2);
      const Point x = pts[0];
      const PointConfiguration eta(std::vector<Point>(pts.begin() + 1, pts.begin() + 4), 1);
      const PointConfiguration gamma(std::vector<Point>(pts.begin() + 4, pts.end()), 1);
      std::vector<Point> joined = eta.points();
      joined.insert(joined.end(), gamma.points().begin(), gamma.points().end());
      const PointConfiguration all(joined, 1);
      double lhs = 0.0;
      for (unsigned mask = 0; mask < (1U << all.size()); ++mask) lhs += product_kernel_K(x, subset(all, mask), lj, 1.0);
      double rhs = 0.0;
      for (unsigned a = 0; a < (1U << eta.size()); ++a)
        for (unsigned b = 0; b < (1U << gamma.size()); ++b) {
          std::vector<Point> u = subset(eta, a).points();
          const auto s = subset(gamma, b).points();
          u.insert(u.end(), s.begin(), s.end());
          rhs += product_kernel_K(x, PointConfiguration(u, 1), lj, 1.0);
        }
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
  }

  TEST_CASE("Boltzmann weight factorizes at the base point") {
    // e^{−βU(η∪γ)} = e^{−βW(x;η')} Σ_{ξ⊆γ} K(x;ξ) e^{−βU(η'∪γ)} with η = {x} ∪ η'.
    const PairPotential lj(LennardJones{1.0, 1.0}, 1);
    const double beta = 0.8;
    auto g = oracle::rng(3);
    for (int trial = 0; trial < 20; ++trial) {
      const auto pts = oracle::spread_points(g, 5, -2.5, 2.5, 0.8);
      const Point x = pts[0];
      const PointConfiguration rest(std::vector<Point>(pts.begin() + 1, pts.begin() + 3), 1);
      const PointConfiguration gamma(std::vector<Point>(pts.begin() + 3, pts.end()), 1);
      std::vector<Point> tail = rest.points();
      tail.insert(tail.end(), gamma.points().begin(), gamma.points().end());
      std::vector<Point> everything = tail;
      everything.push_back(x);
      const double lhs = std::exp(-beta * energy_U(everything, lj));
      double sum = 0.0;
      for (unsigned mask = 0; mask < (1U << gamma.size()); ++mask) sum += product_kernel_K(x, subset(gamma, mask), lj, beta);
      const double rhs =
          std::exp(-beta * energy_W(std::span<const Point>(&x, 1), rest.points(), lj)) * sum * std::exp(-beta * energy_U(tail, lj));
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
  }

  TEST_CASE("volume cutoff") {
    const VolumeCutoff box(2, {0.0, -1.0, 0.0}, {2.0, 1.0, 0.0});
    CHECK(box.volume() == 4.0);
    CHECK(box.contains(make_point(1.0, 0.5)));
    CHECK_FALSE(box.contains(make_point(2.5, 0.0)));
  }
}
