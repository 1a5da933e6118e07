#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "clusterexp/bounds.hpp"
#include "clusterexp/combinatorics.hpp"
#include "clusterexp/correlations.hpp"
#include "clusterexp/errors.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace clusterexp;

namespace {

const double kE = std::numbers::e;

PointConfiguration line(std::vector<double> xs) {
  std::vector<Point> p;
  for (double x : xs) p.push_back(make_point(x));
  return PointConfiguration(p, 1);
}

BoundParams params(double h, std::vector<int> sizes) {
  BoundParams p;
  p.h = h;
  p.nu1 = 2.0;
  p.alpha = 2.0;
  p.nubar1 = std::numbers::pi;
  p.C = 0.8;
  p.sizes = std::move(sizes);
  return p;
}

// Two-cluster constant written out independently.
double two_cluster_reference(const BoundParams& p) {
  const double a = p.h * p.nu1 * kE;
  const double b = p.h * p.nubar1 * std::pow(2.0, 1.0 + p.alpha) * p.C;
  const int l = p.sizes[0] + p.sizes[1];
  return 0.5 * p.sizes[0] * p.sizes[1] * p.C * std::pow(1.0 + p.C, p.sizes[1] - 1) * std::pow(p.h / (1.0 - a), l) *
         (1.0 - a) / (1.0 - a - b);
}

// Σ_{n > n_max} N_n/n! h^{l+n} ν̃0^{l−l1} ν1^n summed far out in long double.
long double forest_tail_reference(const std::vector<int>& sizes, int n_max, double h, double nu0, double nu1) {
  int l = 0;
  for (int s : sizes) l += s;
  const long double nu0t = std::max(1.0, nu0);
  const int m = static_cast<int>(sizes.size());
  long double log_prefactor = std::log(static_cast<long double>(sizes[0]));
  for (int i = 1; i < m; ++i) log_prefactor += std::log(std::pow(2.0L, sizes[i]) - 1.0L);
  long double sum = 0.0L;
  for (int n = n_max + 1; n <= 400; ++n) {
    // log of l1 Π(2^{l_i} − 1) (l+n)^{m+n−2}
    const long double log_count = log_prefactor + (m + n - 2) * std::log(static_cast<long double>(l + n));
    const long double log_term = log_count - std::lgamma(n + 1.0L) + (l + n) * std::log(static_cast<long double>(h)) +
                                 (l - sizes[0]) * std::log(nu0t) + n * std::log(static_cast<long double>(nu1));
    sum += std::exp(log_term);
  }
  return sum;
}

}  // namespace

TEST_SUITE("bounds") {
  TEST_CASE("convergence radius and margin") {
    CHECK(radius_r_beta(1.0, 0.0, 1.0) == doctest::Approx(std::exp(-1.0)));
    CHECK(radius_r_beta(1.0, 0.0, 2.0) == doctest::Approx(std::exp(-1.0) / 2.0));
    CHECK(radius_r_beta(1.0, 0.5, 1.0) < radius_r_beta(1.0, 0.25, 1.0));
    CHECK_THROWS_AS(radius_r_beta(1.0, 0.0, 0.0), DomainError);
    CHECK(convergence_margin(0.0, 1.0, 0.3, 5.0) == 1.0);
    CHECK(convergence_margin(0.1, 1.0, 0.0, 1.0) == doctest::Approx(1.0 - 0.1 * kE * kE));
    CHECK(convergence_margin(0.1, 0.5, 1.0, 2.0) == doctest::Approx(1.0 - 0.2 * std::exp(3.0)));
  }

  TEST_CASE("closed-form correlation bound") {
    const double z = 0.02;
    const double expected = std::pow(2.0 * z * kE, 2) / (1.0 - z * kE * kE * 2.0);
    CHECK(ptcf_upper_bound({1, 1}, z, 1.0, 0.0, 1.0, 2.0) == doctest::Approx(expected));
    // ν0 ≤ 1 contributes the factor 1; ν0 = 3 contributes 3^{l − l1}.
    CHECK(ptcf_upper_bound({1, 2}, z, 1.0, 0.0, 3.0, 2.0) ==
          doctest::Approx(9.0 * ptcf_upper_bound({1, 2}, z, 1.0, 0.0, 0.5, 2.0)));
    CHECK_THROWS_AS(ptcf_upper_bound({1, 1}, 1.0, 1.0, 0.0, 1.0, 2.0), DivergenceError);

    const auto rod = GasModel{PairPotential(HardCore{1.0}, 1), compute_summary(PairPotential(HardCore{1.0}, 1), 1.0, {})};
    SeriesSpec spec;
    spec.activity = z;
    spec.n_max = 2;
    spec.box = VolumeCutoff(1, {-1.5, 0.0, 0.0}, {1.5, 0.0, 0.0});
    const auto r = ptcf_forest_series(ClusterFamily({line({-0.3}), line({0.4})}), rod, spec);
    CHECK(std::abs(r.value) <= ptcf_upper_bound({1, 1}, z, 1.0, 0.0, 1.0, 2.0));
  }

  TEST_CASE("forest-series tail against a long explicit sum") {
    for (const auto& sizes : {std::vector<int>{1, 1}, std::vector<int>{2, 1}, std::vector<int>{1, 1, 1}}) {
      for (double x : {0.05, 0.2, 0.3}) {
        const double nu1 = 2.0;
        const double h = x / (nu1 * kE);
        for (int n_max : {0, 2, 4}) {
          const auto tail = forest_series_tail(sizes, n_max, h, 1.0, nu1);
          const double reference = static_cast<double>(forest_tail_reference(sizes, n_max, h, 1.0, nu1));
          CHECK(tail.rigorous);
          CHECK(tail.bound >= reference * (1.0 - 1e-12));
          CHECK(tail.bound <= 2.0 * reference);
        }
      }
    }
    const auto divergent = forest_series_tail({1, 1}, 2, 1.0 / kE, 1.0, 1.0);
    CHECK_FALSE(divergent.rigorous);
    CHECK(forest_series_tail({1, 1}, 2, 0.1, 1.0, 0.0).bound == 0.0);
  }

  TEST_CASE("two-cluster decay constant") {
    for (const auto& sizes : {std::vector<int>{1, 1}, std::vector<int>{2, 3}, std::vector<int>{3, 1}}) {
      const auto p = params(0.01, sizes);
      CHECK(decay_constant_A(p, 1) == doctest::Approx(two_cluster_reference(p)).epsilon(1e-14));
      CHECK(decay_constant_A(p, 2) == decay_constant_A(p, 1));
    }
  }

  TEST_CASE("three-cluster constants match the general form at sigma = 1") {
    auto g = oracle::rng(31);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<int> sizes{oracle::uniform_int(g, 1, 4), oracle::uniform_int(g, 1, 4), oracle::uniform_int(g, 1, 4)};
      auto p = params(oracle::uniform(g, 1e-4, 0.02), sizes);
      p.C = oracle::uniform(g, 0.1, 2.0);
      const double general = decay_constant_A_general(p, 1);
      const double three = decay_constant_A_three(p, 1);
      CHECK(general == doctest::Approx(three).epsilon(1e-12));
    }
  }

  TEST_CASE("decay constants are positive, increasing in h, and blow up at the boundary") {
    const auto base = params(0.0, {1, 2, 1, 1});
    // σ ≥ 3 requires the stricter margin; find where it closes.
    const double rate = base.nu1 * kE + base.nubar1 * base.C * (kE + std::pow(2.0, 1.0 + base.alpha));
    const double h_star = 1.0 / rate;
    for (int sigma = 1; sigma <= 4; ++sigma) {
      double previous = 0.0;
      for (double f : {1e-6, 1e-3, 0.1, 0.5, 0.9, 0.99}) {
        const double a = decay_constant_A(params(f * h_star, {1, 2, 1, 1}), sigma);
        CHECK(std::isfinite(a));
        CHECK(a > previous);
        previous = a;
      }
    }
    const double near = decay_constant_A(params(h_star * (1.0 - 1e-9), {1, 2, 1, 1}), 4);
    CHECK(near > 1e6 * decay_constant_A(params(0.5 * h_star, {1, 2, 1, 1}), 4));
    CHECK_THROWS_AS(decay_constant_A(params(1.01 * h_star, {1, 2, 1, 1}), 4), DivergenceError);

    // The two-cluster constant diverges as h(ν1 e + ν̄1 2^{1+α} C) → 1.
    const double h2 = 1.0 / (base.nu1 * kE + base.nubar1 * std::pow(2.0, 1.0 + base.alpha) * base.C);
    CHECK(decay_constant_A(params(h2 * (1.0 - 1e-10), {1, 1}), 1) >
          1e8 * decay_constant_A(params(0.5 * h2, {1, 1}), 1));
    CHECK_THROWS_AS(decay_constant_A(params(1.001 * h2, {1, 1}), 1), DivergenceError);
  }

  TEST_CASE("decay envelope") {
    const auto nb = [](double r) { return nubar(2.0, r); };
    const ClusterFamily pair({line({0.0, 1.0}), line({5.0, 9.0})});
    CHECK(decay_envelope(pair, nb) == doctest::Approx(nubar(2.0, 4.0)));
    const ClusterFamily row({line({0.0}), line({10.0}), line({30.0})});
    const double e01 = nubar(2.0, 10.0), e02 = nubar(2.0, 30.0), e12 = nubar(2.0, 20.0);
    CHECK(decay_envelope(row, nb) == doctest::Approx(std::max({e01 * e02, e01 * e12, e02 * e12})));
    const ClusterFamily shifted({line({7.5}), line({17.5}), line({37.5})});
    CHECK(decay_envelope(shifted, nb) == doctest::Approx(decay_envelope(row, nb)).epsilon(1e-15));
    std::vector<PointConfiguration> many;
    for (int i = 0; i < 8; ++i) many.push_back(line({3.0 * i}));
    CHECK_THROWS_AS(decay_envelope(ClusterFamily(many), nb), ResourceError);
  }

  TEST_CASE("integral of the decay profile") {
    const auto pi = nubar_integral(2.0, 1);
    CHECK(pi.analytic);
    CHECK(pi.value == doctest::Approx(std::numbers::pi).epsilon(1e-15));
    for (int d = 1; d <= 3; ++d)
      for (double alpha : {d + 0.5, d + 1.0, d + 3.0}) {
        const auto exact = nubar_integral(alpha, d, true);
        const auto numeric = nubar_integral(alpha, d, false);
        CHECK_FALSE(numeric.analytic);
        CHECK(numeric.value == doctest::Approx(exact.value).epsilon(1e-8));
      }
    CHECK_THROWS_AS(nubar_integral(1.0, 1), DomainError);
  }

  TEST_CASE("chain-kernel inequality on points") {
    const auto coincident = decay_lemma_check(2.0, {0.0, 0.0});
    CHECK(coincident.rhs == doctest::Approx(std::pow(2.0, 3.0) * std::numbers::pi));
    CHECK(coincident.holds());
    CHECK(decay_lemma_check(2.0, {0.0, 10.0}).holds());
    auto g = oracle::rng(77);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<double> pts;
      for (int i = 0; i < 3; ++i) pts.push_back(oracle::uniform(g, -10.0, 10.0));
      CHECK(decay_lemma_check(3.0, pts).holds());
    }
  }

  TEST_CASE("auxiliary tail series inequality") {
    for (int u = 0; u <= 4; ++u)
      for (int v = 0; v <= 4; ++v)
        for (double x : {0.1, 0.5, 0.9}) {
          const auto s = tail_series_check(u, v, x);
          CHECK(s.holds());
        }
    // u = 0: Σ_{r ≥ v} x^{r−v} = 1/(1−x) on both sides.
    const auto flat = tail_series_check(0, 2, 0.5);
    CHECK(flat.lhs == doctest::Approx(2.0));
    CHECK(flat.rhs == doctest::Approx(2.0));
  }

  TEST_CASE("decay theorem gate") {
    HardCorePowerTail shape;
    const PairPotential pot(shape, 1);
    const double alpha = 2.0;
    const double c = polynomial_decay_constant(pot, 1.0, alpha);
    const GasModel model{pot, compute_summary(pot, 1.0, {})};
    SeriesSpec spec;
    spec.activity = 10.0;
    spec.n_max = 1;
    const ClusterFamily pair({line({0.0}), line({5.0})});
    const auto report = decay_theorem_check(pair, model, spec, c, alpha);
    CHECK_FALSE(report.condition_ok);
    CHECK_FALSE(report.ok);
    CHECK(report.condition_margin < 0.0);

    const PairPotential ideal(HardCore{0.0}, 1);
    const GasModel free{ideal, compute_summary(ideal, 1.0, {})};
    spec.activity = 0.01;
    const auto zero = decay_theorem_check(pair, free, spec, 1.0, alpha);
    CHECK(zero.condition_ok);
    CHECK(zero.ptcf == 0.0);
    CHECK(zero.ok);
  }
}
