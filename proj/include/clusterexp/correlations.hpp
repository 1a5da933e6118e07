#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>

#include "clusterexp/configurations.hpp"
#include "clusterexp/potentials.hpp"
#include "clusterexp/quadrature.hpp"
#include "clusterexp/series.hpp"

namespace clusterexp {

// A potential together with its derived scalars at one inverse temperature.
struct GasModel {
  PairPotential potential;
  PotentialSummary summary;  // beta, B, sup and integral of |e^{−βφ} − 1|
};

struct SeriesSpec {
  double activity = 0.0;
  int n_max = 3;
  // Integration region; empty means all of R^d (d = 1 only).
  std::optional<VolumeCutoff> box;
  QuadratureSpec quad{1e-10, 1e-14, 4000};
  std::size_t mc_samples = 200000;
  std::uint64_t seed = 12345;
  std::size_t max_nested_points = 4;
};

enum class Route { Direct, UrsellSeries, ForestSeries, Mobius };
std::string to_string(Route route);

struct CorrelationResult {
  double value = 0.0;
  double truncation_error = 0.0;  // bound on the omitted orders
  double quadrature_error = 0.0;
  bool tail_rigorous = true;      // false when the tail is a last-term estimate
  Route route = Route::Direct;
  // Taylor coefficients: value = Σ_k series[k] z^{power + k}.
  int power = 0;
  TruncatedSeries series{0};
  TruncatedSeries series_error{0};  // per-coefficient quadrature error bounds
  // Direct route only: truncated Σ_n z^n/n! ∫ e^{−βU(η∪y)} and the same for η = ∅.
  double raw_numerator = 0.0;
  double raw_partition_function = 0.0;

  double total_error() const { return truncation_error + quadrature_error; }
};

// Integration settings derived from a series spec and a potential.
PointIntegrationSpec integration_spec(const SeriesSpec& spec, const PairPotential& pot);

// F_n receives the n points of order n.
using ConfigurationFunction = std::function<double(std::span<const Point>)>;

struct LebesguePoissonSum {
  double value = 0.0;
  double error = 0.0;
  std::vector<double> orders;  // z^n/n! ∫ F_n for n = 0..n_max
};

// Σ_{n ≤ n_max} z^n/n! ∫_{Λ^n} F_n; the n = 0 term is F_0 evaluated on no points.
LebesguePoissonSum lp_integral(const ConfigurationFunction& f, const SeriesSpec& spec,
                               const PointIntegrationSpec& integration);

// ρ_Λ(η) from the Gibbs ratio, expanded as a power series in z by exact series
// division of the numerator and partition-function series.
CorrelationResult rho_direct(const PointConfiguration& eta, const GasModel& model, const SeriesSpec& spec);

inline constexpr int kDefaultUrsellCap = 7;

// Σ over connected graphs on the points of Π (e^{−βφ} − 1) over edges.
double ursell(std::span<const Point> gamma, const PairPotential& pot, double beta, int cap = kDefaultUrsellCap);
double ursell(const PointConfiguration& gamma, const PairPotential& pot, double beta, int cap = kDefaultUrsellCap);

// z^{|η|} Σ_n z^n/n! ∫ Φ^T(η ∪ y) dy. Outside the disk z < r(β) the tail is
// flagged non-rigorous.
CorrelationResult tcf_series(const PointConfiguration& eta, const GasModel& model, const SeriesSpec& spec);

// Values of ρ on unions of clusters, keyed by the bitmask of cluster indices.
using BlockValues = std::map<std::uint32_t, double>;

// Σ over set partitions of the m clusters of (−1)^{k−1}(k−1)! Π ρ(block unions).
double mobius_truncate(int m, const BlockValues& rho);

struct ValueWithError {
  double value = 0.0;
  double error = 0.0;
};
// Same sum, propagating absolute errors through each product.
ValueWithError mobius_truncate(int m, const BlockValues& rho, const BlockValues& error);
TruncatedSeries mobius_truncate(int m, const std::map<std::uint32_t, TruncatedSeries>& rho);

// ρ̃^T_Λ as Möbius combination of direct-route series, truncated at total order l + n_max.
CorrelationResult ptcf_mobius_series(const ClusterFamily& family, const GasModel& model, const SeriesSpec& spec);

// Σ_{n ≤ n_max} 1/n! ∫ T_m(η_1; …; η_m | y_1..y_n) dy with the exact-count tail bound.
CorrelationResult ptcf_forest_series(const ClusterFamily& family, const GasModel& model, const SeriesSpec& spec);

struct KirkwoodSalsburgResidual {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double bound = 0.0;  // both sides' tail bounds plus quadrature errors
  bool within_bound = false;
};

// Both sides of the cluster Kirkwood–Salsburg relation as power series truncated
// at the same total order, with the base point chosen as for kernel T.
KirkwoodSalsburgResidual ks_residual(const ClusterFamily& family, const GasModel& model, const SeriesSpec& spec);

// H(η, γ) for disjoint point tuples.
using SplitFunction = std::function<double(std::span<const Point> eta, std::span<const Point> gamma)>;

struct ResummationSides {
  double lhs = 0.0;
  double rhs = 0.0;
  double error = 0.0;  // combined quadrature error
};

// Σ_n z^n/n! ∫ F(γ) Σ_{η ⊆ γ} H(η, γ∖η)  against  Σ_{a+b ≤ n_max} z^{a+b}/(a! b!) ∫∫ F(η∪γ) H(η, γ).
ResummationSides resummation_check(const ConfigurationFunction& f, const SplitFunction& h, const SeriesSpec& spec,
                                   const PointIntegrationSpec& integration);

}  // namespace clusterexp
