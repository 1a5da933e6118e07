#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "clusterexp/geometry.hpp"

namespace clusterexp {

struct QuadratureSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_intervals = 4000;
};

struct IntegralEstimate {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
};

struct VectorIntegralEstimate {
  std::vector<double> value;
  double error = 0.0;  // max-norm over components
  bool converged = true;
};

using ScalarIntegrand = std::function<double(double)>;
// Writes `width` components into out (pre-sized by the caller).
using VectorIntegrand = std::function<void(double, std::span<double> out)>;

// Globally adaptive Gauss-Kronrod (7/15) on [a, b]. Either end may be infinite;
// infinite ends are mapped to (0, 1] by x = c ± (1 - t) / t. Breakpoints split
// the range before adaptation so that known kinks and jumps sit on interval ends.
IntegralEstimate integrate(const ScalarIntegrand& f, double a, double b,
                           std::span<const double> breakpoints, const QuadratureSpec& spec);

VectorIntegralEstimate integrate(const VectorIntegrand& f, std::size_t width, double a, double b,
                                 std::span<const double> breakpoints, const QuadratureSpec& spec);

// Integration of symmetric functions of n points over a product domain.
struct PointIntegrationSpec {
  int dimension = 1;
  // Per-axis bounds; in d=1 they may be infinite.
  std::array<double, kMaxDimension> lower{};
  std::array<double, kMaxDimension> upper{};
  // Radii at which the integrand may jump or kink as a function of a pair
  // distance; used to place breakpoints in d=1.
  std::vector<double> feature_radii;
  QuadratureSpec quad;
  std::size_t mc_samples = 200000;
  std::uint64_t seed = 12345;
  // d=1 integrals over more points than this also use Monte Carlo.
  std::size_t max_nested_points = 4;
};

// out has `width` components; points holds the n integration points.
using PointsIntegrand = std::function<void(std::span<const Point> points, std::span<double> out)>;

// Integral over (domain)^n. d=1 uses nested adaptive quadrature with
// breakpoints at c ± k·radius (0 ≤ k ≤ remaining depth) for every anchor, every
// already-fixed integration point and every finite box edge c. d ≥ 2, or more than
// max_nested_points points, uses stratified Monte Carlo; the reported error is
// then three standard errors.
VectorIntegralEstimate integrate_points(std::size_t n, std::span<const Point> anchors,
                                        std::size_t width, const PointsIntegrand& f,
                                        const PointIntegrationSpec& spec);

}  // namespace clusterexp
