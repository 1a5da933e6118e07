#pragma once

#include <string>
#include <vector>

#include "clusterexp/configurations.hpp"
#include "clusterexp/correlations.hpp"

namespace clusterexp {

// Inputs of the closed-form decay constants. nubar1 is the plain integral of
// 1/(1 + |x|^alpha); the constant C multiplies it explicitly wherever it appears.
struct BoundParams {
  double h = 0.0;       // z e^{2βB}
  double nu1 = 0.0;     // ∫ |e^{−βφ} − 1|
  double nubar1 = 0.0;  // ∫ 1/(1 + |x|^α)
  double C = 0.0;       // |e^{−βφ(x)} − 1| ≤ C/(1 + |x|^α)
  double alpha = 0.0;
  std::vector<int> sizes;  // l_1..l_m
};

// e^{−2βB−1}/ν_1; requires ν_1 > 0.
double radius_r_beta(double beta, double stability, double nu1);

// 1 − z e^{2βB+2} ν_1; positive inside the convergence region.
double convergence_margin(double z, double beta, double stability, double nu1);

// (2z e^{2βB+1})^l ν̃_0^{l−l_1} l^{m−2} / (1 − z e^{2βB+2} ν_1), ν̃_0 = max(1, ν_0).
// Throws DivergenceError outside the convergence region.
double ptcf_upper_bound(const std::vector<int>& sizes, double z, double beta, double stability, double nu0,
                        double nu1);

struct SeriesTail {
  double bound = 0.0;
  bool rigorous = true;
};

// Σ_{n > n_max} N_n(sizes)/n! h^{l+n} ν̃_0^{l−l_1} ν_1^n, with N_n the exact forest
// count. Explicit terms are summed until the term ratio is provably below 1/2,
// then a geometric remainder is added. If h ν_1 e ≥ 1 the series may diverge and
// the first omitted term is returned, flagged non-rigorous.
SeriesTail forest_series_tail(const std::vector<int>& sizes, int n_max, double h, double nu0, double nu1);

// 1 − h(ν_1 e + ν̄_1 2^{1+α} C): positivity needed by the σ ≤ 2 constants and by m ≤ 3.
double chain_condition_margin(const BoundParams& p);
// 1 − h[ν_1 e + ν̄_1 C (e + 2^{1+α})]: the smallness condition of the decay theorem.
double decay_condition_margin(const BoundParams& p);

// A_{m,σ}: m = 2 and m = 3 use their dedicated forms, m ≥ 4 the general ones.
double decay_constant_A(const BoundParams& p, int sigma);
// The general-m forms evaluated at any m ≥ 2 (σ = 1, 2, or σ ≥ 3).
double decay_constant_A_general(const BoundParams& p, int sigma);
// The dedicated three-cluster forms.
double decay_constant_A_three(const BoundParams& p, int sigma);

inline constexpr int kDefaultEnvelopeCap = 7;

// max over labeled trees on the m clusters of Π_edges max_{x_i, x_j} nubar(|x_i − x_j|).
double decay_envelope(const ClusterFamily& family, const RadialWeight& nubar, int cap = kDefaultEnvelopeCap);

struct NubarIntegral {
  double value = 0.0;
  double error = 0.0;
  bool analytic = true;
};
// ∫_{R^d} 1/(1 + |x|^α) dx = ω_d (π/α)/sin(πd/α) for α > d; quadrature on request.
NubarIntegral nubar_integral(double alpha, int dimension, bool analytic = true);

// 1/(1 + r^α).
double nubar(double alpha, double r);

struct InequalitySides {
  double lhs = 0.0;
  double rhs = 0.0;
  double lhs_error = 0.0;
  bool holds() const { return lhs <= rhs; }
};

// ∫_R Π_r ν̄(x_r − y) dy  against  2^{α(p−1)} ν̄_1 Σ_r Π_{k≠r} ν̄(x_k − x_r), in d = 1.
InequalitySides decay_lemma_check(double alpha, const std::vector<double>& points, const QuadratureSpec& quad = {});

// Σ_{r ≥ v} r^u x^{r−v}  against  Σ_{k ≤ u} k! (v+k)^u / (1−x)^{k+1}, for 0 ≤ x < 1.
InequalitySides tail_series_check(int u, int v, double x);

// (h ν̄_1 2^{1+α} C)^k C (1+C)^{l_j − 1} Σ_{y ∈ target} ν̄(x − y): the common bound on chain kernels.
double chain_kernel_bound(const Point& x, const PointConfiguration& target, int k, double h, double C,
                          double alpha, double nubar1);

struct DecayReport {
  double condition_margin = 0.0;
  bool condition_ok = false;
  double ptcf = 0.0;           // truncated forest-series value
  double ptcf_error = 0.0;     // its truncation plus quadrature error
  double envelope = 0.0;
  std::vector<double> A;       // A_{m,1..m}
  double bound = 0.0;          // Σ_σ A_{m,σ} · envelope
  bool ok = false;             // condition holds and |ptcf| ≤ bound
  bool nubar_analytic = true;
};

// Evaluates the decay bound for `family` and compares it with the forest series.
// With the condition violated the bound is not evaluated and ok is false.
DecayReport decay_theorem_check(const ClusterFamily& family, const GasModel& model, const SeriesSpec& spec,
                                double decay_constant, double alpha);

}  // namespace clusterexp
