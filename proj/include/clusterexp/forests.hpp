#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "clusterexp/configurations.hpp"

namespace clusterexp {

// Vertices are numbered clusters first (cluster 0 .. m−1, each in its own
// order), then the external points.
class VertexRegistry {
 public:
  VertexRegistry(std::vector<int> sizes, int external_count);
  static VertexRegistry of(const ClusterFamily& family, const PointConfiguration& gamma);

  int vertex_count() const { return static_cast<int>(cluster_of_.size()); }
  int cluster_count() const { return static_cast<int>(sizes_.size()); }
  int external_count() const { return external_; }
  const std::vector<int>& sizes() const { return sizes_; }
  // Cluster index of a vertex, or −1 for an external point.
  int cluster_of(int v) const { return cluster_of_[static_cast<std::size_t>(v)]; }
  bool is_external(int v) const { return cluster_of(v) < 0; }
  int first_vertex(int cluster) const { return offsets_[static_cast<std::size_t>(cluster)]; }
  int first_external() const { return offsets_.back(); }

 private:
  std::vector<int> sizes_;
  int external_;
  std::vector<int> cluster_of_;
  std::vector<int> offsets_;  // offsets_[i] = first vertex of cluster i; last entry = first external
};

struct ForestGraph {
  std::vector<std::pair<int, int>> edges;  // (a, b) with a < b, sorted
  std::vector<int> roots;                  // one per tree, ascending

  friend bool operator==(const ForestGraph&, const ForestGraph&) = default;
};

// Which vertex of a tree counts as its root.
enum class RootRule {
  // The unique vertex closest to cluster 0 in the graph obtained by collapsing
  // every cluster to one node; it must be a cluster point. Matches the kernel recursion.
  NearestToFirstCluster,
  // The unique point of the lowest-indexed cluster present in the tree.
  LowestClusterIndex,
};

// Where "the only point of η_i joined to η_j" is checked.
enum class PathScope { WholeForest, CurrentTree };

struct AdmissibilityReading {
  RootRule root = RootRule::NearestToFirstCluster;
  PathScope path = PathScope::WholeForest;
};

enum class ForestClause { None, Structure, Acyclic, IntraCluster, Collapse, Root, Path };

struct AdmissibilityReport {
  bool admissible = true;
  ForestClause violated = ForestClause::None;
  std::string detail;
};

std::string to_string(ForestClause clause);

// Checks clauses in the order: structure, acyclic, intra-cluster, collapse,
// root, path. If f.roots is nonempty it must equal the computed roots.
AdmissibilityReport is_admissible(const ForestGraph& f, const VertexRegistry& registry,
                                  AdmissibilityReading reading = {});
AdmissibilityReport is_admissible(const ForestGraph& f, const ClusterFamily& family,
                                  const PointConfiguration& gamma, AdmissibilityReading reading = {});

inline constexpr int kDefaultVertexCap = 10;

// Streams every admissible forest exactly once, in the order produced by the
// base-point recursion (lowest remaining vertex of the first cluster).
void enumerate_forests(const VertexRegistry& registry, const std::function<void(const ForestGraph&)>& visit,
                       int vertex_cap = kDefaultVertexCap);
std::vector<ForestGraph> enumerate_forests(const ClusterFamily& family, const PointConfiguration& gamma,
                                           int vertex_cap = kDefaultVertexCap);
std::size_t count_forests(const VertexRegistry& registry, int vertex_cap = kDefaultVertexCap);

// h^{|vertices|} Π_{edges} weight(|x − y|); positions indexed like the registry.
double contribution_G_nu(const ForestGraph& f, std::span<const Point> positions, double h,
                         const RadialWeight& weight);

// Σ of contribution_G_nu over enumerate_forests, optionally restricted by `keep`.
double sum_contributions(const ClusterFamily& family, const PointConfiguration& gamma, double h,
                         const RadialWeight& weight, int vertex_cap = kDefaultVertexCap,
                         const std::function<bool(const ForestGraph&)>& keep = {});

// True when every external vertex has degree ≥ 2.
bool externals_have_degree_two(const ForestGraph& f, const VertexRegistry& registry);

}  // namespace clusterexp
