#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "clusterexp/errors.hpp"
#include "clusterexp/potentials.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace clusterexp;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

// Reference LJ energy in long double: strength·((σ/r)^12 − (σ/r)^6).
double lj_reference(double strength, double sigma, double r) {
  const long double s6 = std::pow(static_cast<long double>(sigma) / r, 6.0L);
  return static_cast<double>(strength * (s6 * s6 - s6));
}

}  // namespace

TEST_SUITE("potentials") {
  TEST_CASE("Lennard-Jones values") {
    const PairPotential lj(LennardJones{1.0, 1.0}, 1);
    CHECK(lj(1.0) == 0.0);
    CHECK(lj(2.0) == doctest::Approx(-63.0 / 4096.0).epsilon(1e-15));
    CHECK(lj(0.0) == kInf);
    CHECK_THROWS_AS(lj(-0.5), DomainError);
    auto g = oracle::rng(7);
    for (int i = 0; i < 200; ++i) {
      const double r = oracle::uniform(g, 0.5, 6.0);
      CHECK(lj(r) == doctest::Approx(lj_reference(1.0, 1.0, r)).epsilon(1e-13));
    }
  }

  TEST_CASE("every kind is +inf at the origin") {
    CHECK(PairPotential(HardCore{0.0}, 1)(0.0) == kInf);
    CHECK(PairPotential(HardCore{1.0}, 1)(0.5) == kInf);
    CHECK(PairPotential(HardCore{1.0}, 1)(1.0) == 0.0);
    CHECK(PairPotential(HardCorePowerTail{}, 1)(0.0) == kInf);
    CHECK(PairPotential(TabulatedProfile{{1.0, 2.0}, {1.0, 0.0}, 0.0}, 1)(0.0) == kInf);
  }

  TEST_CASE("positive and negative parts split the energy") {
    const PairPotential lj(LennardJones{2.0, 1.0}, 1);
    for (double r = 0.8; r < 4.0; r += 0.037) {
      CHECK(lj.positive_part(r) >= 0.0);
      CHECK(lj.negative_part(r) >= 0.0);
      CHECK(lj.positive_part(r) - lj.negative_part(r) == doctest::Approx(lj(r)).epsilon(1e-15));
    }
    // LJ well depth strength/4 at r = 2^{1/6}σ.
    CHECK(lj.max_attraction() == doctest::Approx(0.5).epsilon(1e-9));
  }

  TEST_CASE("Mayer factor range") {
    const PairPotential lj(LennardJones{1.0, 1.0}, 1);
    CHECK(mayer_factor(lj, 1.0, 0.0) == -1.0);
    CHECK(mayer_factor(lj, 1.0, 1.0) == 0.0);
    CHECK(std::abs(mayer_factor(lj, 1.0, 50.0)) < 1e-9);
    for (double r = 0.05; r < 5.0; r += 0.01) CHECK(mayer_factor(lj, 2.0, r) >= -1.0);
    CHECK(boltzmann_factor(1.0, kInf) == 0.0);
  }

  TEST_CASE("hard rod regularity constants") {
    for (double a : {0.5, 1.0, 2.5}) {
      const PairPotential rod(HardCore{a}, 1);
      const auto s = compute_summary(rod, 1.0, {});
      CHECK(s.mayer_integral == doctest::Approx(2.0 * a).epsilon(1e-12));
      CHECK(s.mayer_sup == 1.0);
      CHECK(s.stability == 0.0);
    }
  }

  TEST_CASE("Lennard-Jones regularity integral against a trapezoid oracle") {
    const PairPotential lj(LennardJones{1.0, 1.0}, 1);
    const double beta = 0.5;
    const auto f = [&](double r) { return mayer_magnitude(lj, beta, r); };
    // Both halves of the line; the neglected tail beyond 60 is below β∫ r^{-6} ≈ 1e-10.
    const double reference = 2.0 * (oracle::richardson(f, 0.0, 0.8, 4000) + oracle::richardson(f, 0.8, 3.0, 40000) +
                                    oracle::richardson(f, 3.0, 60.0, 40000));
    const auto s = compute_summary(lj, beta, {});
    CHECK(s.mayer_integral == doctest::Approx(reference).epsilon(1e-7));
    CHECK(s.mayer_integral_error < 1e-6);
  }

  TEST_CASE("regularity grows with beta for repulsive potentials") {
    const PairPotential tab(TabulatedProfile{{0.5, 1.0, 2.0}, {3.0, 1.0, 0.0}, 0.2}, 1);
    REQUIRE(tab.purely_repulsive());
    double previous = 0.0;
    for (double beta : {0.1, 0.3, 1.0, 3.0, 10.0}) {
      const double nu1 = compute_summary(tab, beta, {}).mayer_integral;
      CHECK(nu1 >= previous);
      previous = nu1;
    }
  }

  TEST_CASE("default stability constant") {
    CHECK(default_stability_constant(PairPotential(HardCore{1.0}, 1), 10) == 0.0);
    const PairPotential lj(LennardJones{1.0, 1.0}, 1);
    CHECK(default_stability_constant(lj, 5) == doctest::Approx(2.0 * 0.25).epsilon(1e-9));
  }

  TEST_CASE("power-law assumptions and polynomial decay") {
    const PairPotential hcpt(HardCorePowerTail{}, 1);
    const auto check = check_power_law_assumptions(hcpt);
    CHECK(check.repulsive_core_ok);
    CHECK(check.attractive_tail_ok);
    const double alpha = 2.0;
    const double c = polynomial_decay_constant(hcpt, 1.0, alpha);
    CHECK(c >= 1.0);
    for (double r = 0.0; r < 200.0; r += 0.013)
      CHECK(mayer_magnitude(hcpt, 1.0, r) <= c / (1.0 + std::pow(r, alpha)));
  }

  TEST_CASE("tabulated profile from CSV") {
    const auto path = std::filesystem::temp_directory_path() / "clusterexp_profile_test.csv";
    {
      std::ofstream out(path);
      out << "r,phi\n1.0,2.0\n2.0,-0.5\n3.0,0.0\n";
    }
    const auto profile = read_profile_csv(path.string(), 0.5);
    std::filesystem::remove(path);
    REQUIRE(profile.radius.size() == 3);
    const PairPotential pot(profile, 1);
    CHECK(pot(0.4) == kInf);
    CHECK(pot(0.7) == 2.0);
    CHECK(pot(1.5) == doctest::Approx(0.75));
    CHECK(pot(3.5) == 0.0);
    CHECK(pot.max_attraction() == doctest::Approx(0.5));
  }

  TEST_CASE("invalid parameters are rejected") {
    CHECK_THROWS_AS(PairPotential(HardCore{-1.0}, 1), DomainError);
    CHECK_THROWS_AS(PairPotential(LennardJones{1.0, 1.0}, 4), DomainError);
    CHECK_THROWS_AS(PairPotential(TabulatedProfile{{2.0, 1.0}, {0.0, 0.0}, 0.0}, 1), DomainError);
  }
}
