#pragma once

#include <cstddef>
#include <functional>

#include "clusterexp/configurations.hpp"
#include "clusterexp/forests.hpp"
#include "clusterexp/quadrature.hpp"

namespace clusterexp {

// Clusters η_1..η_m and external points γ.
struct KernelInstance {
  ClusterFamily family;
  PointConfiguration gamma;
};

// The physical kernel T: activity z, stability constant B.
struct InteractionModel {
  const PairPotential* potential = nullptr;
  double beta = 1.0;
  double activity = 0.0;
  double stability = 0.0;
};

struct KernelOptions {
  int vertex_cap = 24;
  // Reject γ meeting a cluster. Integration routines switch this off: such
  // coincidences have measure zero and the recursion stays finite there.
  bool require_disjoint = true;
};

struct KernelValue {
  double value = 0.0;
  std::size_t states = 0;  // distinct recursion states evaluated
};

// Recursion over the base point of the first cluster, chosen in canonical
// order with W(x; rest of first cluster) ≥ −2B. Each step contributes
// z·e^{−βW} and Mayer factors on the new edges. m ≥ 2 with an empty cluster gives 0.
KernelValue kernel_T(const KernelInstance& inst, const InteractionModel& model, const KernelOptions& options = {});

// Same recursion with h per step, weight(|x − y|) per edge and the lowest
// vertex as base point. Equals the sum of forest contributions.
KernelValue kernel_Q(const KernelInstance& inst, double h, const RadialWeight& weight,
                     const KernelOptions& options = {});

struct KernelComparison {
  double abs_T = 0.0;
  double Q = 0.0;
  bool ok = false;  // |T| ≤ Q(1 + 1e-12)
};

// Q evaluated with h = z e^{2βB} and weight = |e^{−βφ} − 1|.
KernelComparison compare_T_Q(const KernelInstance& inst, const InteractionModel& model,
                             const KernelOptions& options = {});

inline constexpr int kDefaultIntegratedOrderCap = 2;

// ∫ Q(family | {y_1..y_n}) dy_1..dy_n over the domain of `spec` (no 1/n!).
VectorIntegralEstimate integrated_Q(const ClusterFamily& family, int n, double h, const RadialWeight& weight,
                                    const PointIntegrationSpec& spec, int order_cap = kDefaultIntegratedOrderCap);

// ∫ Σ_{forests kept by `keep`} G over the n external points (no 1/n!).
VectorIntegralEstimate integrated_forest_sum(const ClusterFamily& family, int n, double h,
                                             const RadialWeight& weight, const PointIntegrationSpec& spec,
                                             const std::function<bool(const ForestGraph&, const VertexRegistry&)>& keep,
                                             int order_cap = kDefaultIntegratedOrderCap);

// h^k ∫ w(x−y_1) Π w(y_r−y_{r+1}) K0(y_k; target) dy; k = 0 is K0(x; target).
IntegralEstimate chain_kernel(const Point& x, const PointConfiguration& target, int k, double h,
                              const RadialWeight& weight, const PointIntegrationSpec& spec,
                              int order_cap = kDefaultIntegratedOrderCap);

}  // namespace clusterexp
