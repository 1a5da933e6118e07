#include "clusterexp/correlations.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "clusterexp/bounds.hpp"
#include "clusterexp/combinatorics.hpp"
#include "clusterexp/errors.hpp"
#include "clusterexp/kernels.hpp"

namespace clusterexp {

std::string to_string(Route route) {
  switch (route) {
    case Route::Direct: return "direct";
    case Route::UrsellSeries: return "ursell_series";
    case Route::ForestSeries: return "forest_series";
    case Route::Mobius: return "mobius";
  }
  return "unknown";
}

PointIntegrationSpec integration_spec(const SeriesSpec& spec, const PairPotential& pot) {
  PointIntegrationSpec p;
  p.dimension = pot.dimension();
  if (spec.box) {
    if (spec.box->dimension != pot.dimension()) throw DomainError("box dimension differs from the potential dimension");
    p.lower = spec.box->lower;
    p.upper = spec.box->upper;
  } else {
    if (pot.dimension() != 1) throw DomainError("integration over all of R^d needs d = 1; give a box");
    p.lower[0] = -std::numeric_limits<double>::infinity();
    p.upper[0] = std::numeric_limits<double>::infinity();
  }
  p.feature_radii = pot.feature_radii();
  p.quad = spec.quad;
  p.mc_samples = spec.mc_samples;
  p.seed = spec.seed;
  p.max_nested_points = spec.max_nested_points;
  return p;
}

namespace {

void validate_spec(const SeriesSpec& spec) {
  if (spec.n_max < 0) throw DomainError("n_max must be >= 0");
  if (!(spec.activity > 0.0)) throw DomainError("activity z must be > 0");
}

void require_inside(const SeriesSpec& spec, std::span<const Point> pts) {
  if (!spec.box) return;
  for (const Point& p : pts) {
    if (!spec.box->contains(p)) throw DomainError("configuration point lies outside the box");
  }
}

double factorial_d(int n) { return std::tgamma(static_cast<double>(n) + 1.0); }

TruncatedSeries abs_series(const TruncatedSeries& s) {
  TruncatedSeries out(s.order());
  for (int k = 0; k <= s.order(); ++k) out[k] = std::abs(s[k]);
  return out;
}

TruncatedSeries truncate(const TruncatedSeries& s, int order) { return TruncatedSeries(s.coefficients(), order); }

// Coefficients with per-coefficient absolute error bounds.
struct SeriesWithError {
  TruncatedSeries v;
  TruncatedSeries e;
};

SeriesWithError multiply(const SeriesWithError& a, const SeriesWithError& b) {
  return {a.v * b.v, a.e * abs_series(b.v) + abs_series(a.v) * b.e + a.e * b.e};
}

// First-order propagation: δ(a/b) ≈ (δa + |a/b| δb) · |1/b|.
SeriesWithError divide(const SeriesWithError& a, const SeriesWithError& b) {
  const TruncatedSeries q = a.v / b.v;
  const TruncatedSeries inv = TruncatedSeries::constant(1.0, b.v.order()) / b.v;
  return {q, (a.e + abs_series(q) * b.e) * abs_series(inv)};
}

SeriesWithError truncate(const SeriesWithError& s, int order) { return {truncate(s.v, order), truncate(s.e, order)}; }

std::vector<Point> concat(std::span<const Point> a, std::span<const Point> b) {
  std::vector<Point> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

// Series of the Gibbs numerator Σ_k z^k/k! ∫ e^{−βU(η ∪ y)} and of ρ_Λ(η)/z^{|η|}.
class GibbsExpansion {
 public:
  GibbsExpansion(const GasModel& model, const SeriesSpec& spec)
      : model_(model), integration_(integration_spec(spec, model.potential)),
        partition_(numerator({}, spec.n_max)) {}

  SeriesWithError numerator(std::span<const Point> eta, int order) const {
    SeriesWithError out{TruncatedSeries(order), TruncatedSeries(order)};
    if (energy_U(eta, model_.potential) == std::numeric_limits<double>::infinity()) return out;
    std::vector<Point> all(eta.begin(), eta.end());
    const std::size_t base = all.size();
    const double beta = model_.summary.beta;
    for (int k = 0; k <= order; ++k) {
      all.resize(base + static_cast<std::size_t>(k));
      const VectorIntegralEstimate est = integrate_points(
          static_cast<std::size_t>(k), eta, 1,
          [&](std::span<const Point> ys, std::span<double> o) {
            std::copy(ys.begin(), ys.end(), all.begin() + static_cast<std::ptrdiff_t>(base));
            o[0] = boltzmann_factor(beta, energy_U(all, model_.potential));
          },
          integration_);
      out.v[k] = est.value[0] / factorial_d(k);
      out.e[k] = est.error / factorial_d(k);
    }
    return out;
  }

  SeriesWithError rho(std::span<const Point> eta, int order) const {
    if (eta.empty()) return {TruncatedSeries::constant(1.0, order), TruncatedSeries(order)};
    return divide(numerator(eta, order), truncate(partition_, order));
  }

  // ρ̃^T of the given clusters divided by z^{Σ sizes}.
  SeriesWithError ptcf(const std::vector<std::vector<Point>>& clusters, int order) const {
    const int m = static_cast<int>(clusters.size());
    SeriesWithError zero{TruncatedSeries(order), TruncatedSeries(order)};
    if (m >= 2 && std::any_of(clusters.begin(), clusters.end(), [](const auto& c) { return c.empty(); })) return zero;
    if (m == 1) return rho(clusters[0], order);
    std::map<std::uint32_t, SeriesWithError> blocks;
    for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << m); ++mask) {
      std::vector<Point> pts;
      for (int i = 0; i < m; ++i) {
        if (mask & (std::uint32_t{1} << i)) pts.insert(pts.end(), clusters[i].begin(), clusters[i].end());
      }
      blocks.emplace(mask, rho(pts, order));
    }
    SeriesWithError total = zero;
    for_each_partition(m, [&](const SetPartition& p) {
      const int k = static_cast<int>(p.blocks.size());
      const double coef = ((k % 2 == 1) ? 1.0 : -1.0) * factorial_d(k - 1);
      SeriesWithError prod{TruncatedSeries::constant(1.0, order), TruncatedSeries(order)};
      for (const auto& block : p.blocks) {
        std::uint32_t mask = 0;
        for (int i : block) mask |= std::uint32_t{1} << i;
        prod = multiply(prod, blocks.at(mask));
      }
      total.v += prod.v * coef;
      total.e += prod.e * std::abs(coef);
    });
    return total;
  }

  const SeriesWithError& partition() const { return partition_; }
  const PointIntegrationSpec& integration() const { return integration_; }

 private:
  const GasModel& model_;
  PointIntegrationSpec integration_;
  SeriesWithError partition_;
};

double h_of(const GasModel& model, double z) {
  return z * std::exp(2.0 * model.summary.beta * model.summary.stability);
}

CorrelationResult finish(const SeriesWithError& s, int power, double z, Route route, const SeriesTail& tail) {
  CorrelationResult r;
  r.route = route;
  r.power = power;
  r.series = s.v;
  r.series_error = s.e;
  const double zp = std::pow(z, power);
  r.value = zp * s.v.evaluate(z);
  r.quadrature_error = zp * s.e.evaluate_abs(z);
  r.truncation_error = tail.bound;
  r.tail_rigorous = tail.rigorous;
  return r;
}

std::vector<std::vector<Point>> cluster_points(const ClusterFamily& family) {
  std::vector<std::vector<Point>> out;
  for (const auto& c : family.clusters()) out.push_back(c.points());
  return out;
}

// Φ^T by the subset recursion c(S) = W(S) − Σ_{T ∋ min S, T ⊊ S} c(T) W(S∖T),
// W(S) = Π_{pairs in S}(1 + C). Used inside integrands; checked against the graph sum.
double ursell_by_subsets(std::span<const Point> pts, const PairPotential& pot, double beta) {
  const int n = static_cast<int>(pts.size());
  if (n == 0) return 0.0;
  if (n == 1) return 1.0;
  const std::uint32_t full = (std::uint32_t{1} << n) - 1;
  std::vector<double> boltz(static_cast<std::size_t>(full) + 1, 1.0);
  for (std::uint32_t s = 1; s <= full; ++s) {
    const int top = 31 - std::countl_zero(s);
    const std::uint32_t rest = s & ~(std::uint32_t{1} << top);
    double w = boltz[rest];
    for (std::uint32_t b = rest; b != 0 && w != 0.0; b &= b - 1) {
      w *= 1.0 + mayer_factor(pot, beta, distance(pts[top], pts[std::countr_zero(b)]));
    }
    boltz[s] = w;
  }
  std::vector<double> connected(static_cast<std::size_t>(full) + 1, 0.0);
  for (std::uint32_t s = 1; s <= full; ++s) {
    const std::uint32_t low = s & (~s + 1);
    const std::uint32_t others = s & ~low;
    double c = boltz[s];
    // T = low ∪ t for every proper subset t of `others`.
    for (std::uint32_t t = (others - 1) & others;; t = (t - 1) & others) {
      const std::uint32_t tt = low | t;
      c -= connected[tt] * boltz[s & ~tt];
      if (t == 0) break;
    }
    if (others == 0) c = boltz[s];
    connected[s] = c;
  }
  return connected[full];
}

}  // namespace

LebesguePoissonSum lp_integral(const ConfigurationFunction& f, const SeriesSpec& spec,
                               const PointIntegrationSpec& integration) {
  if (spec.n_max < 0) throw DomainError("n_max must be >= 0");
  LebesguePoissonSum out;
  for (int n = 0; n <= spec.n_max; ++n) {
    const VectorIntegralEstimate est = integrate_points(
        static_cast<std::size_t>(n), {}, 1, [&](std::span<const Point> ys, std::span<double> o) { o[0] = f(ys); },
        integration);
    if (!est.converged) throw NumericError("Lebesgue-Poisson order " + std::to_string(n) + " did not converge");
    const double w = std::pow(spec.activity, n) / factorial_d(n);
    out.orders.push_back(w * est.value[0]);
    out.value += w * est.value[0];
    out.error += w * est.error;
  }
  return out;
}

CorrelationResult rho_direct(const PointConfiguration& eta, const GasModel& model, const SeriesSpec& spec) {
  validate_spec(spec);
  require_inside(spec, eta.points());
  const GibbsExpansion gibbs(model, spec);
  const SeriesWithError num = gibbs.numerator(eta.points(), spec.n_max);
  const SeriesWithError s = gibbs.rho(eta.points(), spec.n_max);
  const double z = spec.activity;
  const SeriesTail tail = eta.empty() ? SeriesTail{0.0, true}
                                      : forest_series_tail({static_cast<int>(eta.size())}, spec.n_max, h_of(model, z),
                                                           model.summary.mayer_sup, model.summary.mayer_integral);
  CorrelationResult r = finish(s, static_cast<int>(eta.size()), z, Route::Direct, tail);
  r.raw_numerator = num.v.evaluate(z);
  r.raw_partition_function = gibbs.partition().v.evaluate(z);
  return r;
}

double ursell(std::span<const Point> gamma, const PairPotential& pot, double beta, int cap) {
  const int n = static_cast<int>(gamma.size());
  if (n > cap) {
    throw ResourceError("Ursell function of " + std::to_string(n) + " points exceeds the cap of " + std::to_string(cap));
  }
  if (n == 0) return 0.0;
  if (n == 1) return 1.0;
  if (n > 8) throw ResourceError("Ursell graph enumeration supports at most 8 points");
  std::vector<std::pair<int, int>> edges;
  std::vector<double> mayer;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      edges.emplace_back(a, b);
      mayer.push_back(mayer_factor(pot, beta, distance(gamma[a], gamma[b])));
    }
  }
  const std::size_t ne = edges.size();
  const std::uint32_t all = (std::uint32_t{1} << n) - 1;
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << ne); ++mask) {
    std::vector<std::uint32_t> adj(static_cast<std::size_t>(n), 0);
    double w = 1.0;
    for (std::size_t e = 0; e < ne; ++e) {
      if (mask & (std::uint64_t{1} << e)) {
        adj[edges[e].first] |= std::uint32_t{1} << edges[e].second;
        adj[edges[e].second] |= std::uint32_t{1} << edges[e].first;
        w *= mayer[e];
      }
    }
    if (w == 0.0) continue;
    std::uint32_t reach = 1;
    for (std::uint32_t prev = 0; prev != reach;) {
      prev = reach;
      for (std::uint32_t b = prev; b != 0; b &= b - 1) reach |= adj[std::countr_zero(b)];
    }
    if (reach == all) total += w;
  }
  return total;
}

double ursell(const PointConfiguration& gamma, const PairPotential& pot, double beta, int cap) {
  return ursell(std::span<const Point>(gamma.points()), pot, beta, cap);
}

CorrelationResult tcf_series(const PointConfiguration& eta, const GasModel& model, const SeriesSpec& spec) {
  validate_spec(spec);
  if (eta.empty()) throw DomainError("truncated correlation needs a nonempty configuration");
  require_inside(spec, eta.points());
  const int l = static_cast<int>(eta.size());
  if (l + spec.n_max > kDefaultUrsellCap) {
    throw ResourceError("Ursell series needs " + std::to_string(l + spec.n_max) + " points, above the cap of " +
                        std::to_string(kDefaultUrsellCap));
  }
  const PointIntegrationSpec integration = integration_spec(spec, model.potential);
  SeriesWithError s{TruncatedSeries(spec.n_max), TruncatedSeries(spec.n_max)};
  std::vector<Point> all = eta.points();
  const double beta = model.summary.beta;
  for (int n = 0; n <= spec.n_max; ++n) {
    all.resize(static_cast<std::size_t>(l + n));
    const VectorIntegralEstimate est = integrate_points(
        static_cast<std::size_t>(n), eta.points(), 1,
        [&](std::span<const Point> ys, std::span<double> o) {
          std::copy(ys.begin(), ys.end(), all.begin() + l);
          o[0] = ursell_by_subsets(all, model.potential, beta);
        },
        integration);
    s.v[n] = est.value[0] / factorial_d(n);
    s.e[n] = est.error / factorial_d(n);
  }
  const double z = spec.activity;
  SeriesTail tail = forest_series_tail(std::vector<int>(static_cast<std::size_t>(l), 1), spec.n_max, h_of(model, z),
                                       model.summary.mayer_sup, model.summary.mayer_integral);
  if (model.summary.mayer_integral > 0.0 &&
      z >= radius_r_beta(beta, model.summary.stability, model.summary.mayer_integral)) {
    tail.rigorous = false;
  }
  return finish(s, l, z, Route::UrsellSeries, tail);
}

double mobius_truncate(int m, const BlockValues& rho) {
  BlockValues none;
  for (const auto& [mask, v] : rho) none.emplace(mask, 0.0);
  return mobius_truncate(m, rho, none).value;
}

namespace {

std::uint32_t block_mask(const std::vector<int>& block) {
  std::uint32_t mask = 0;
  for (int i : block) mask |= std::uint32_t{1} << i;
  return mask;
}

template <class Map>
const typename Map::mapped_type& lookup(const Map& values, std::uint32_t mask) {
  auto it = values.find(mask);
  if (it == values.end()) throw DomainError("missing correlation value for cluster block mask " + std::to_string(mask));
  return it->second;
}

void validate_m(int m) {
  if (m < 1 || m > 20) throw DomainError("Mobius truncation needs 1 <= m <= 20");
}

}  // namespace

ValueWithError mobius_truncate(int m, const BlockValues& rho, const BlockValues& error) {
  validate_m(m);
  ValueWithError out;
  for_each_partition(m, [&](const SetPartition& p) {
    const int k = static_cast<int>(p.blocks.size());
    const double coef = ((k % 2 == 1) ? 1.0 : -1.0) * factorial_d(k - 1);
    double prod = 1.0;
    double err = 0.0;
    for (const auto& block : p.blocks) {
      const std::uint32_t mask = block_mask(block);
      const double v = lookup(rho, mask);
      const double e = lookup(error, mask);
      err = err * std::abs(v) + std::abs(prod) * e + err * e;
      prod *= v;
    }
    out.value += coef * prod;
    out.error += std::abs(coef) * err;
  });
  return out;
}

TruncatedSeries mobius_truncate(int m, const std::map<std::uint32_t, TruncatedSeries>& rho) {
  validate_m(m);
  if (rho.empty()) throw DomainError("missing correlation series");
  const int order = rho.begin()->second.order();
  TruncatedSeries total(order);
  for_each_partition(m, [&](const SetPartition& p) {
    const int k = static_cast<int>(p.blocks.size());
    const double coef = ((k % 2 == 1) ? 1.0 : -1.0) * factorial_d(k - 1);
    TruncatedSeries prod = TruncatedSeries::constant(1.0, order);
    for (const auto& block : p.blocks) prod = prod * lookup(rho, block_mask(block));
    total += prod * coef;
  });
  return total;
}

namespace {

SeriesTail ptcf_tail(const ClusterFamily& family, const GasModel& model, const SeriesSpec& spec) {
  return forest_series_tail(family.sizes(), spec.n_max, h_of(model, spec.activity), model.summary.mayer_sup,
                            model.summary.mayer_integral);
}

CorrelationResult zero_result(Route route, int order) {
  CorrelationResult r;
  r.route = route;
  r.series = TruncatedSeries(order);
  r.series_error = TruncatedSeries(order);
  return r;
}

}  // namespace

CorrelationResult ptcf_mobius_series(const ClusterFamily& family, const GasModel& model, const SeriesSpec& spec) {
  validate_spec(spec);
  require_inside(spec, family.all_points());
  if (family.count() >= 2 && family.has_empty_cluster()) return zero_result(Route::Mobius, spec.n_max);
  const GibbsExpansion gibbs(model, spec);
  const SeriesWithError s = gibbs.ptcf(cluster_points(family), spec.n_max);
  return finish(s, static_cast<int>(family.total_size()), spec.activity, Route::Mobius, ptcf_tail(family, model, spec));
}

CorrelationResult ptcf_forest_series(const ClusterFamily& family, const GasModel& model, const SeriesSpec& spec) {
  validate_spec(spec);
  require_inside(spec, family.all_points());
  if (family.count() >= 2 && family.has_empty_cluster()) return zero_result(Route::ForestSeries, spec.n_max);
  const PointIntegrationSpec integration = integration_spec(spec, model.potential);
  const std::vector<Point> anchors = family.all_points();
  const int d = family.dimension();
  const InteractionModel unit{&model.potential, model.summary.beta, 1.0, model.summary.stability};
  KernelOptions opts;
  opts.vertex_cap = 64;
  opts.require_disjoint = false;
  SeriesWithError s{TruncatedSeries(spec.n_max), TruncatedSeries(spec.n_max)};
  for (int n = 0; n <= spec.n_max; ++n) {
    const VectorIntegralEstimate est = integrate_points(
        static_cast<std::size_t>(n), anchors, 1,
        [&](std::span<const Point> ys, std::span<double> o) {
          const PointConfiguration gamma(std::vector<Point>(ys.begin(), ys.end()), d);
          o[0] = kernel_T(KernelInstance{family, gamma}, unit, opts).value;
        },
        integration);
    s.v[n] = est.value[0] / factorial_d(n);
    s.e[n] = est.error / factorial_d(n);
  }
  return finish(s, static_cast<int>(family.total_size()), spec.activity, Route::ForestSeries,
                ptcf_tail(family, model, spec));
}

KirkwoodSalsburgResidual ks_residual(const ClusterFamily& family, const GasModel& model, const SeriesSpec& spec) {
  validate_spec(spec);
  if (family.count() == 0 || family[0].empty()) throw DomainError("the relation needs a nonempty first cluster");
  require_inside(spec, family.all_points());
  const int m = static_cast<int>(family.count());
  const int order = spec.n_max;
  const double beta = model.summary.beta;
  const PairPotential& pot = model.potential;
  const GibbsExpansion gibbs(model, spec);
  const auto clusters = cluster_points(family);

  const SeriesWithError lhs = gibbs.ptcf(clusters, order);

  // Base point and the remainder of the first cluster.
  const std::size_t base = choose_base_point(family[0], pot, model.summary.stability);
  const Point x1 = family[0][base];
  std::vector<Point> first_rest;
  for (std::size_t i = 0; i < family[0].size(); ++i) {
    if (i != base) first_rest.push_back(family[0][i]);
  }
  const double prefactor = boltzmann_factor(beta, energy_W(std::span<const Point>(&x1, 1), first_rest, pot));

  SeriesWithError rhs{TruncatedSeries(order), TruncatedSeries(order)};
  const std::uint32_t others = m == 1 ? 0u : ((std::uint32_t{1} << (m - 1)) - 1u);  // bit i ↔ cluster i+1
  for (std::uint32_t chosen = 0;; chosen = ((chosen | ~others) + 1) & others) {
    std::vector<Point> absorbed;
    std::vector<int> owner;  // cluster bit of each absorbed point
    std::vector<std::vector<Point>> remaining;
    for (int i = 1; i < m; ++i) {
      if (chosen & (std::uint32_t{1} << (i - 1))) {
        for (const Point& p : clusters[i]) {
          absorbed.push_back(p);
          owner.push_back(i - 1);
        }
      } else {
        remaining.push_back(clusters[i]);
      }
    }
    // Σ over ξ ⊆ absorbed meeting every chosen cluster of K(x1; ξ).
    double fan = 0.0;
    const std::uint32_t na = static_cast<std::uint32_t>(absorbed.size());
    for (std::uint32_t sub = 0; sub < (std::uint32_t{1} << na); ++sub) {
      std::uint32_t met = 0;
      double k = 1.0;
      for (std::uint32_t b = sub; b != 0; b &= b - 1) {
        const int j = std::countr_zero(b);
        met |= std::uint32_t{1} << owner[j];
        k *= mayer_factor(pot, beta, distance(x1, absorbed[j]));
      }
      if (met == chosen) fan += k;
    }
    if (fan != 0.0) {
      std::vector<Point> new_first = first_rest;
      new_first.insert(new_first.end(), absorbed.begin(), absorbed.end());
      for (int n = 0; n <= order; ++n) {
        const int inner = order - n;
        const std::size_t width = static_cast<std::size_t>(inner + 1);
        const VectorIntegralEstimate est = integrate_points(
            static_cast<std::size_t>(n), concat(std::span<const Point>(&x1, 1), family.all_points()), 2 * width,
            [&](std::span<const Point> ys, std::span<double> o) {
              double k = 1.0;
              for (const Point& y : ys) k *= mayer_factor(pot, beta, distance(x1, y));
              std::fill(o.begin(), o.end(), 0.0);
              if (k == 0.0) return;
              std::vector<std::vector<Point>> args;
              args.push_back(concat(new_first, ys));
              args.insert(args.end(), remaining.begin(), remaining.end());
              const SeriesWithError s = gibbs.ptcf(args, inner);
              for (std::size_t c = 0; c < width; ++c) {
                o[c] = k * s.v[c];
                o[width + c] = std::abs(k) * s.e[c];
              }
            },
            gibbs.integration());
        const double w = prefactor * fan / factorial_d(n);
        for (int c = 0; c <= inner; ++c) {
          rhs.v[n + c] += w * est.value[static_cast<std::size_t>(c)];
          rhs.e[n + c] += std::abs(w) * (est.value[width + static_cast<std::size_t>(c)] + est.error);
        }
      }
    }
    if (chosen == others) break;
  }

  const double z = spec.activity;
  const int l = static_cast<int>(family.total_size());
  const double zl = std::pow(z, l);
  KirkwoodSalsburgResidual r;
  r.lhs = zl * lhs.v.evaluate(z);
  r.rhs = zl * rhs.v.evaluate(z);
  r.residual = std::abs(r.lhs - r.rhs);
  const SeriesTail tail = ptcf_tail(family, model, spec);
  r.bound = 2.0 * tail.bound + zl * (lhs.e.evaluate_abs(z) + rhs.e.evaluate_abs(z));
  r.within_bound = r.residual <= r.bound;
  return r;
}

ResummationSides resummation_check(const ConfigurationFunction& f, const SplitFunction& h, const SeriesSpec& spec,
                                   const PointIntegrationSpec& integration) {
  if (spec.n_max < 0) throw DomainError("n_max must be >= 0");
  if (spec.n_max > 16) throw ResourceError("resummation check supports n_max <= 16");
  ResummationSides out;
  for (int n = 0; n <= spec.n_max; ++n) {
    const VectorIntegralEstimate est = integrate_points(
        static_cast<std::size_t>(n), {}, 2,
        [&](std::span<const Point> xs, std::span<double> o) {
          const double fx = f(xs);
          double subsets = 0.0;
          std::vector<Point> eta;
          std::vector<Point> rest;
          for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
            eta.clear();
            rest.clear();
            for (int i = 0; i < n; ++i) ((mask >> i) & 1u ? eta : rest).push_back(xs[i]);
            subsets += h(eta, rest);
          }
          double splits = 0.0;
          for (int a = 0; a <= n; ++a) {
            splits += h(xs.first(static_cast<std::size_t>(a)), xs.subspan(static_cast<std::size_t>(a))) /
                      (factorial_d(a) * factorial_d(n - a));
          }
          o[0] = fx * subsets / factorial_d(n);
          o[1] = fx * splits;
        },
        integration);
    const double zn = std::pow(spec.activity, n);
    out.lhs += zn * est.value[0];
    out.rhs += zn * est.value[1];
    out.error += 2.0 * zn * est.error;
  }
  return out;
}

}  // namespace clusterexp
