#include "clusterexp/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "clusterexp/combinatorics.hpp"
#include "clusterexp/errors.hpp"

namespace clusterexp {

namespace {

constexpr double kE = std::numbers::e;

int total(const std::vector<int>& sizes) { return std::accumulate(sizes.begin(), sizes.end(), 0); }

void validate_sizes(const std::vector<int>& sizes) {
  if (sizes.empty()) throw DomainError("at least one cluster is required");
  for (int s : sizes) {
    if (s < 0) throw DomainError("cluster sizes must be >= 0");
  }
}

}  // namespace

double radius_r_beta(double beta, double stability, double nu1) {
  if (!(nu1 > 0.0)) throw DomainError("r(beta) needs nu1 > 0");
  return std::exp(-2.0 * beta * stability - 1.0) / nu1;
}

double convergence_margin(double z, double beta, double stability, double nu1) {
  return 1.0 - z * std::exp(2.0 * beta * stability + 2.0) * nu1;
}

double ptcf_upper_bound(const std::vector<int>& sizes, double z, double beta, double stability, double nu0,
                        double nu1) {
  validate_sizes(sizes);
  const double margin = convergence_margin(z, beta, stability, nu1);
  if (margin <= 0.0) throw DivergenceError("activity outside the convergence region: 1 − z e^{2βB+2} ν_1 ≤ 0");
  const int m = static_cast<int>(sizes.size());
  if (m >= 2 && std::find(sizes.begin(), sizes.end(), 0) != sizes.end()) return 0.0;
  const int l = total(sizes);
  const double nu0t = std::max(1.0, nu0);
  return std::pow(2.0 * z * std::exp(2.0 * beta * stability + 1.0), l) * std::pow(nu0t, l - sizes[0]) *
         std::pow(static_cast<double>(l), m - 2) / margin;
}

SeriesTail forest_series_tail(const std::vector<int>& sizes, int n_max, double h, double nu0, double nu1) {
  validate_sizes(sizes);
  if (n_max < 0) throw DomainError("n_max must be >= 0");
  const int m = static_cast<int>(sizes.size());
  const int l = total(sizes);
  if (l == 0 || (m >= 2 && std::find(sizes.begin(), sizes.end(), 0) != sizes.end())) return {0.0, true};
  if (h == 0.0 || nu1 == 0.0) return {0.0, true};
  const double x = h * nu1;
  double log_fixed = std::log(static_cast<double>(sizes[0])) + l * std::log(h) +
                     (l - sizes[0]) * std::log(std::max(1.0, nu0));
  for (int i = 1; i < m; ++i) log_fixed += std::log(std::exp2(sizes[i]) - 1.0);
  auto term = [&](int n) {
    return std::exp(log_fixed + (m + n - 2) * std::log(static_cast<double>(l + n)) - std::lgamma(n + 1.0) +
                    n * std::log(x));
  };
  // t_{n+1}/t_n ≤ x e (l+n+1)/(n+1), decreasing in n towards x e.
  auto ratio = [&](int n) { return x * kE * (l + n + 1.0) / (n + 1.0); };
  if (x * kE >= 1.0) return {term(n_max + 1), false};
  const double target = std::max(0.5, 0.5 * (1.0 + x * kE));
  double sum = 0.0;
  for (int n = n_max + 1;; ++n) {
    const double t = term(n);
    sum += t;
    const double q = ratio(n);
    if (q <= target) return {sum + t * q / (1.0 - q), true};
  }
}

double chain_condition_margin(const BoundParams& p) {
  return 1.0 - p.h * (p.nu1 * kE + p.nubar1 * std::pow(2.0, 1.0 + p.alpha) * p.C);
}

double decay_condition_margin(const BoundParams& p) {
  return 1.0 - p.h * (p.nu1 * kE + p.nubar1 * p.C * (kE + std::pow(2.0, 1.0 + p.alpha)));
}

namespace {

struct Shared {
  int m = 0;
  int l = 0;
  double a = 0.0;       // h ν_1 e
  double b = 0.0;       // h ν̄_1 2^{1+α} C
  double scale = 0.0;   // (h/(1−a))^l
  double sizes_product = 1.0;
};

Shared shared(const BoundParams& p, int sigma) {
  validate_sizes(p.sizes);
  Shared s;
  s.m = static_cast<int>(p.sizes.size());
  if (s.m < 2) throw DomainError("decay constants need at least two clusters");
  if (sigma < 1 || sigma > s.m) throw DomainError("sigma must lie in [1, m]");
  for (int v : p.sizes) {
    if (v == 0) throw DomainError("decay constants need nonempty clusters");
    s.sizes_product *= v;
  }
  s.l = total(p.sizes);
  s.a = p.h * p.nu1 * kE;
  s.b = p.h * p.nubar1 * std::pow(2.0, 1.0 + p.alpha) * p.C;
  if (chain_condition_margin(p) <= 0.0) throw DivergenceError("h(ν_1 e + ν̄_1 2^{1+α} C) ≥ 1");
  s.scale = std::pow(p.h / (1.0 - s.a), s.l);
  return s;
}

}  // namespace

double decay_constant_A_general(const BoundParams& p, int sigma) {
  const Shared s = shared(p, sigma);
  const double C = p.C;
  const int l1 = p.sizes[0];
  const double ld = s.l;
  if (sigma == 1) {
    return std::pow(ld, s.m - 2) * s.sizes_product * std::pow(C, s.m - 1) * std::pow(1.0 + C, s.l - l1 - s.m + 1) *
           s.scale;
  }
  if (sigma == 2) {
    return (s.m - 1) * s.sizes_product * std::pow(ld, s.m - 2) * std::pow(C, s.m - 1) *
           std::pow(1.0 + C, s.l - l1 - s.m + 1) * s.scale * s.b / (1.0 - s.a - s.b);
  }
  const double margin = decay_condition_margin(p);
  if (margin <= 0.0) throw DivergenceError("h[ν_1 e + ν̄_1 C (e + 2^{1+α})] ≥ 1");
  const double choose = static_cast<double>(binomial(s.m - 1, sigma - 1));
  return std::pow(sigma - 2.0, sigma) * choose * std::pow(2.0, p.alpha * (sigma - 1) * (sigma - 1)) *
         std::pow(ld, s.m - sigma) * std::pow(C, s.m) * std::pow(1.0 + C, s.l - l1 - sigma + 1) * s.scale *
         std::pow((1.0 - s.a) / (1.0 - s.a - s.b), sigma) * p.h * p.nubar1 * kE * (1.0 - s.a - s.b) / margin;
}

double decay_constant_A_three(const BoundParams& p, int sigma) {
  if (p.sizes.size() != 3) throw DomainError("the three-cluster constants need exactly three clusters");
  const Shared s = shared(p, sigma);
  const double C = p.C;
  const double common = s.sizes_product * std::pow(1.0 + C, p.sizes[1] + p.sizes[2] - 2) * s.scale;
  switch (sigma) {
    case 1: return common * s.l * C * C;
    case 2: return 2.0 * common * s.l * C * C * s.b / (1.0 - s.a - s.b);
    default:
      return 3.0 * common * std::pow(2.0, 2.0 * p.alpha) * C * C * C * p.h * p.nubar1 * (1.0 - s.a) * (1.0 - s.a) /
             std::pow(1.0 - s.a - s.b, 3);
  }
}

double decay_constant_A(const BoundParams& p, int sigma) {
  const std::size_t m = p.sizes.size();
  if (m == 2) {
    const Shared s = shared(p, sigma);
    return 0.5 * p.sizes[0] * p.sizes[1] * p.C * std::pow(1.0 + p.C, p.sizes[1] - 1) * s.scale * (1.0 - s.a) /
           (1.0 - s.a - s.b);
  }
  if (m == 3) return decay_constant_A_three(p, sigma);
  return decay_constant_A_general(p, sigma);
}

double decay_envelope(const ClusterFamily& family, const RadialWeight& nubar_weight, int cap) {
  const int m = static_cast<int>(family.count());
  if (m == 0) throw DomainError("at least one cluster is required");
  if (m > cap) {
    throw ResourceError("decay envelope over " + std::to_string(m) + " clusters exceeds the cap of " +
                        std::to_string(cap));
  }
  if (family.has_empty_cluster()) throw DomainError("decay envelope needs nonempty clusters");
  std::vector<std::vector<double>> link(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(m)));
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      double best = 0.0;
      for (const Point& x : family[i].points()) {
        for (const Point& y : family[j].points()) best = std::max(best, nubar_weight(distance(x, y)));
      }
      link[i][j] = link[j][i] = best;
    }
  }
  double envelope = 0.0;
  for_each_labeled_tree(m, [&](const std::vector<std::pair<int, int>>& edges) {
    double w = 1.0;
    for (const auto& [a, b] : edges) w *= link[a][b];
    envelope = std::max(envelope, w);
  });
  return envelope;
}

double nubar(double alpha, double r) { return 1.0 / (1.0 + std::pow(std::abs(r), alpha)); }

NubarIntegral nubar_integral(double alpha, int dimension, bool analytic) {
  if (dimension < 1 || dimension > 3) throw DomainError("dimension must be 1, 2 or 3");
  if (!(alpha > dimension)) throw DomainError("the integral of 1/(1 + |x|^α) needs α > d");
  const double pi = std::numbers::pi;
  const double sphere = dimension == 1 ? 2.0 : (dimension == 2 ? 2.0 * pi : 4.0 * pi);
  NubarIntegral out;
  out.analytic = analytic;
  if (analytic) {
    out.value = sphere * (pi / alpha) / std::sin(pi * dimension / alpha);
    return out;
  }
  const double breaks[] = {1.0};
  const IntegralEstimate est = integrate(
      [&](double r) { return std::pow(r, dimension - 1) * nubar(alpha, r); }, 0.0,
      std::numeric_limits<double>::infinity(), breaks, QuadratureSpec{1e-12, 1e-15, 4000});
  if (!est.converged) throw NumericError("radial integral of 1/(1 + r^α) did not converge");
  out.value = sphere * est.value;
  out.error = sphere * est.error;
  return out;
}

InequalitySides decay_lemma_check(double alpha, const std::vector<double>& points, const QuadratureSpec& quad) {
  if (points.empty()) throw DomainError("at least one point is required");
  const int p = static_cast<int>(points.size());
  const IntegralEstimate est = integrate(
      [&](double y) {
        double v = 1.0;
        for (double x : points) v *= nubar(alpha, x - y);
        return v;
      },
      -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), points, quad);
  if (!est.converged) throw NumericError("decay lemma integral did not converge");
  double sum = 0.0;
  for (int r = 0; r < p; ++r) {
    double prod = 1.0;
    for (int k = 0; k < p; ++k) {
      if (k != r) prod *= nubar(alpha, points[k] - points[r]);
    }
    sum += prod;
  }
  return {est.value, std::pow(2.0, alpha * (p - 1)) * nubar_integral(alpha, 1).value * sum, est.error};
}

InequalitySides tail_series_check(int u, int v, double x) {
  if (u < 0 || v < 0) throw DomainError("u and v must be >= 0");
  if (!(x >= 0.0 && x < 1.0)) throw DomainError("x must lie in [0, 1)");
  long double lhs = 0.0L;
  for (int r = v;; ++r) {
    const long double t = std::pow(static_cast<long double>(r), u) * std::pow(static_cast<long double>(x), r - v);
    lhs += t;
    // Past r > u/(1−x) the terms shrink by at least (1 + 1/r)^u x < 1.
    const bool decreasing = r > 0 && std::pow(1.0 + 1.0 / r, u) * x < 1.0;
    if ((decreasing && t <= 1e-19L * lhs) || x == 0.0) break;
    if (r - v > 10000000) throw NumericError("tail series did not settle");
  }
  double rhs = 0.0;
  for (int k = 0; k <= u; ++k) {
    rhs += std::tgamma(k + 1.0) * std::pow(static_cast<double>(v + k), u) / std::pow(1.0 - x, k + 1);
  }
  return {static_cast<double>(lhs), rhs, 0.0};
}

double chain_kernel_bound(const Point& x, const PointConfiguration& target, int k, double h, double C, double alpha,
                          double nubar1) {
  if (k < 0) throw DomainError("chain length must be >= 0");
  if (target.empty()) throw DomainError("chain target must be nonempty");
  double sum = 0.0;
  for (const Point& y : target.points()) sum += nubar(alpha, distance(x, y));
  return std::pow(h * nubar1 * std::pow(2.0, 1.0 + alpha) * C, k) * C *
         std::pow(1.0 + C, static_cast<double>(target.size()) - 1.0) * sum;
}

DecayReport decay_theorem_check(const ClusterFamily& family, const GasModel& model, const SeriesSpec& spec,
                                double decay_constant, double alpha) {
  if (family.count() < 2) throw DomainError("the decay bound needs at least two clusters");
  DecayReport report;
  BoundParams p;
  p.h = spec.activity * std::exp(2.0 * model.summary.beta * model.summary.stability);
  p.nu1 = model.summary.mayer_integral;
  const NubarIntegral nb = nubar_integral(alpha, family.dimension());
  p.nubar1 = nb.value;
  p.C = decay_constant;
  p.alpha = alpha;
  p.sizes = family.sizes();
  report.nubar_analytic = nb.analytic;
  report.condition_margin = decay_condition_margin(p);
  report.condition_ok = report.condition_margin > 0.0;
  if (!report.condition_ok) return report;
  const CorrelationResult r = ptcf_forest_series(family, model, spec);
  report.ptcf = r.value;
  report.ptcf_error = r.total_error();
  report.envelope = decay_envelope(family, [alpha](double d) { return nubar(alpha, d); });
  for (int sigma = 1; sigma <= static_cast<int>(family.count()); ++sigma) {
    report.A.push_back(decay_constant_A(p, sigma));
  }
  report.bound = std::accumulate(report.A.begin(), report.A.end(), 0.0) * report.envelope;
  report.ok = std::abs(report.ptcf) <= report.bound;
  return report;
}

}  // namespace clusterexp
