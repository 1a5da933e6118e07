#include "clusterexp/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_map>

#include "clusterexp/errors.hpp"
#include "neighbourhood.hpp"

namespace clusterexp {

using detail::Mask;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Below this many vertices the recursion is cheaper than hashing its states.
constexpr int kMemoThreshold = 7;

struct StateKey {
  Mask first;
  Mask external;
  std::uint32_t rest;
  bool operator==(const StateKey&) const = default;
};

struct StateHash {
  std::size_t operator()(const StateKey& k) const {
    std::size_t h = std::hash<Mask>{}(k.first);
    h ^= std::hash<Mask>{}(k.external) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= std::hash<std::uint32_t>{}(k.rest) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

// Positions indexed like VertexRegistry: clusters in order, then γ.
struct Flattened {
  detail::Layout layout;
  std::vector<Point> positions;
  std::uint32_t rest = 0;
  bool empty_cluster = false;
};

Flattened flatten(const KernelInstance& inst, const KernelOptions& options) {
  const auto& family = inst.family;
  if (family.count() == 0) throw DomainError("kernel instance needs at least one cluster");
  if (family.count() > 32) throw ResourceError("kernel recursion supports at most 32 clusters");
  if (!inst.gamma.empty() && inst.gamma.dimension() != family.dimension()) {
    throw DomainError("external points and clusters must share one dimension");
  }
  Flattened out;
  out.positions = family.all_points();
  out.positions.insert(out.positions.end(), inst.gamma.points().begin(), inst.gamma.points().end());
  const int nv = static_cast<int>(out.positions.size());
  if (options.vertex_cap > 64) throw DomainError("kernel vertex cap must be <= 64");
  if (nv > options.vertex_cap) {
    throw ResourceError("kernel instance has " + std::to_string(nv) + " points, above the vertex cap of " +
                        std::to_string(options.vertex_cap));
  }
  if (options.require_disjoint) {
    const auto cluster_points = family.all_points();
    for (const Point& y : inst.gamma.points()) {
      if (std::find(cluster_points.begin(), cluster_points.end(), y) != cluster_points.end()) {
        throw DomainError("external points must be disjoint from the clusters");
      }
    }
  }
  out.layout.vertex_count = nv;
  int next = 0;
  for (const auto& c : family.clusters()) {
    Mask mask = 0;
    for (std::size_t k = 0; k < c.size(); ++k) mask |= Mask{1} << next++;
    out.layout.cluster_members.push_back(mask);
    if (c.empty()) out.empty_cluster = true;
  }
  for (; next < nv; ++next) out.layout.external |= Mask{1} << next;
  const int m = static_cast<int>(family.count());
  out.rest = m == 1 ? 0u : ((std::uint32_t{1} << m) - 2u);
  return out;
}

// Step policy: base(first) → vertex, prefactor(x, first without x) → factor.
template <class Policy>
class KernelRecursion {
 public:
  KernelRecursion(const detail::Layout& layout, std::vector<double> edge_weight, Policy policy)
      : layout_(layout), n_(layout.vertex_count), weight_(std::move(edge_weight)), policy_(std::move(policy)),
        memoize_(layout.vertex_count >= kMemoThreshold) {}

  double eval(Mask first, std::uint32_t rest, Mask external) {
    if (first == 0) return (rest == 0 && external == 0) ? 1.0 : 0.0;
    const StateKey key{first, external, rest};
    if (memoize_) {
      if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    }
    ++states_;
    const int x = policy_.base(first);
    const Mask after = first & ~(Mask{1} << x);
    const double prefactor = policy_.prefactor(x, after);
    double total = 0.0;
    if (prefactor != 0.0) {
      const double* row = weight_.data() + static_cast<std::size_t>(x) * n_;
      detail::for_each_neighbourhood(layout_, after, rest, external,
                                     [&](std::uint32_t chosen, Mask absorbed, Mask s, Mask xi) {
                                       double k = 1.0;
                                       for (Mask b = s | xi; b != 0 && k != 0.0; b &= b - 1) k *= row[std::countr_zero(b)];
                                       if (k == 0.0) return;
                                       total += k * eval(after | absorbed | xi, rest & ~chosen, external & ~xi);
                                     });
      total *= prefactor;
    }
    if (memoize_) memo_.emplace(key, total);
    return total;
  }

  std::size_t states() const { return states_; }

 private:
  const detail::Layout& layout_;
  std::size_t n_;
  std::vector<double> weight_;
  Policy policy_;
  bool memoize_;
  std::unordered_map<StateKey, double, StateHash> memo_;
  std::size_t states_ = 0;
};

struct AbstractPolicy {
  double h;
  int base(Mask first) const { return std::countr_zero(first); }
  double prefactor(int, Mask) const { return h; }
};

struct PhysicalPolicy {
  std::vector<double> energy;  // φ between vertex pairs, row-major
  std::vector<int> canonical;  // vertices in lexicographic order of their points
  std::size_t n;
  double beta, activity, stability;
  mutable double last_w = 0.0;

  double interaction(int x, Mask others) const {
    double w = 0.0;
    for (Mask b = others; b != 0; b &= b - 1) {
      const double phi = energy[static_cast<std::size_t>(x) * n + std::countr_zero(b)];
      if (phi == kInf) return kInf;
      w += phi;
    }
    return w;
  }
  int base(Mask first) const {
    for (int v : canonical) {
      const Mask bit = Mask{1} << v;
      if (!(first & bit)) continue;
      last_w = interaction(v, first & ~bit);
      if (last_w >= -2.0 * stability) return v;
    }
    throw InconsistencyError("no base point with W(x; rest) >= -2B; the stability constant is too small");
  }
  // Uses the interaction computed by the preceding base() call.
  double prefactor(int, Mask) const { return activity * boltzmann_factor(beta, last_w); }
};

}  // namespace

KernelValue kernel_T(const KernelInstance& inst, const InteractionModel& model, const KernelOptions& options) {
  if (model.potential == nullptr) throw DomainError("kernel T needs a pair potential");
  if (!(model.beta > 0.0)) throw DomainError("beta must be positive");
  if (!(model.stability >= 0.0)) throw DomainError("stability constant must be >= 0");
  const Flattened flat = flatten(inst, options);
  if (inst.family.count() >= 2 && flat.empty_cluster) return {0.0, 0};
  const std::size_t n = flat.positions.size();
  PhysicalPolicy policy{{}, {}, n, model.beta, model.activity, model.stability};
  policy.energy.assign(n * n, 0.0);
  std::vector<double> mayer(n * n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      const double r = distance(flat.positions[a], flat.positions[b]);
      policy.energy[a * n + b] = (*model.potential)(r);
      mayer[a * n + b] = mayer_factor(*model.potential, model.beta, r);
    }
  }
  policy.canonical.resize(n);
  std::iota(policy.canonical.begin(), policy.canonical.end(), 0);
  std::stable_sort(policy.canonical.begin(), policy.canonical.end(),
                   [&](int a, int b) { return flat.positions[a] < flat.positions[b]; });
  KernelRecursion<PhysicalPolicy> rec(flat.layout, std::move(mayer), std::move(policy));
  const double v = rec.eval(flat.layout.cluster_members[0], flat.rest, flat.layout.external);
  return {v, rec.states()};
}

KernelValue kernel_Q(const KernelInstance& inst, double h, const RadialWeight& weight, const KernelOptions& options) {
  if (!(h >= 0.0)) throw DomainError("h must be >= 0");
  const Flattened flat = flatten(inst, options);
  if (inst.family.count() >= 2 && flat.empty_cluster) return {0.0, 0};
  const std::size_t n = flat.positions.size();
  std::vector<double> w(n * n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      w[a * n + b] = w[b * n + a] = weight(distance(flat.positions[a], flat.positions[b]));
    }
  }
  KernelRecursion<AbstractPolicy> rec(flat.layout, std::move(w), AbstractPolicy{h});
  const double v = rec.eval(flat.layout.cluster_members[0], flat.rest, flat.layout.external);
  return {v, rec.states()};
}

KernelComparison compare_T_Q(const KernelInstance& inst, const InteractionModel& model, const KernelOptions& options) {
  const double t = kernel_T(inst, model, options).value;
  const double h = model.activity * std::exp(2.0 * model.beta * model.stability);
  const PairPotential& pot = *model.potential;
  const double beta = model.beta;
  const double q = kernel_Q(inst, h, [&](double r) { return mayer_magnitude(pot, beta, r); }, options).value;
  KernelComparison c;
  c.abs_T = std::abs(t);
  c.Q = q;
  c.ok = c.abs_T <= q * (1.0 + 1e-12);
  return c;
}

namespace {

void check_order(int n, int cap) {
  if (n < 0) throw DomainError("integration order must be >= 0");
  if (n > cap) {
    throw ResourceError("integration order " + std::to_string(n) + " exceeds the order cap of " + std::to_string(cap));
  }
}

PointConfiguration as_configuration(std::span<const Point> pts, int dimension) {
  return PointConfiguration(std::vector<Point>(pts.begin(), pts.end()), dimension);
}

}  // namespace

VectorIntegralEstimate integrated_Q(const ClusterFamily& family, int n, double h, const RadialWeight& weight,
                                    const PointIntegrationSpec& spec, int order_cap) {
  check_order(n, order_cap);
  const std::vector<Point> anchors = family.all_points();
  const int d = family.dimension();
  KernelOptions opts;
  opts.require_disjoint = false;
  return integrate_points(
      static_cast<std::size_t>(n), anchors, 1,
      [&](std::span<const Point> ys, std::span<double> out) {
        out[0] = kernel_Q(KernelInstance{family, as_configuration(ys, d)}, h, weight, opts).value;
      },
      spec);
}

VectorIntegralEstimate integrated_forest_sum(const ClusterFamily& family, int n, double h,
                                             const RadialWeight& weight, const PointIntegrationSpec& spec,
                                             const std::function<bool(const ForestGraph&, const VertexRegistry&)>& keep,
                                             int order_cap) {
  check_order(n, order_cap);
  const std::vector<Point> anchors = family.all_points();
  const VertexRegistry registry(family.sizes(), n);
  // The forest set depends only on sizes; enumerate once and integrate the sum.
  std::vector<ForestGraph> forests;
  enumerate_forests(registry, [&](const ForestGraph& f) {
    if (!keep || keep(f, registry)) forests.push_back(f);
  });
  std::vector<Point> positions(anchors);
  positions.resize(anchors.size() + static_cast<std::size_t>(n));
  return integrate_points(
      static_cast<std::size_t>(n), anchors, 1,
      [&](std::span<const Point> ys, std::span<double> out) {
        std::copy(ys.begin(), ys.end(), positions.begin() + static_cast<std::ptrdiff_t>(anchors.size()));
        double s = 0.0;
        for (const auto& f : forests) s += contribution_G_nu(f, positions, h, weight);
        out[0] = s;
      },
      spec);
}

IntegralEstimate chain_kernel(const Point& x, const PointConfiguration& target, int k, double h,
                              const RadialWeight& weight, const PointIntegrationSpec& spec, int order_cap) {
  check_order(k, order_cap);
  if (target.empty()) throw DomainError("chain kernel target cluster must be nonempty");
  const std::vector<PointConfiguration> targets{target};
  if (k == 0) return {fan_kernel_K0(x, targets, weight), 0.0, true};
  std::vector<Point> anchors{x};
  anchors.insert(anchors.end(), target.points().begin(), target.points().end());
  const double hk = std::pow(h, k);
  const VectorIntegralEstimate est = integrate_points(
      static_cast<std::size_t>(k), anchors, 1,
      [&](std::span<const Point> ys, std::span<double> out) {
        double v = hk * weight(distance(x, ys[0]));
        for (std::size_t r = 0; r + 1 < ys.size() && v != 0.0; ++r) v *= weight(distance(ys[r], ys[r + 1]));
        if (v != 0.0) v *= fan_kernel_K0(ys.back(), targets, weight);
        out[0] = v;
      },
      spec);
  return {est.value[0], est.error, est.converged};
}

}  // namespace clusterexp
