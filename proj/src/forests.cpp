#include "clusterexp/forests.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>

#include "clusterexp/errors.hpp"
#include "neighbourhood.hpp"

namespace clusterexp {

using detail::Mask;

VertexRegistry::VertexRegistry(std::vector<int> sizes, int external_count)
    : sizes_(std::move(sizes)), external_(external_count) {
  if (sizes_.empty()) throw DomainError("a vertex registry needs at least one cluster");
  if (external_ < 0) throw DomainError("external point count must be >= 0");
  offsets_.push_back(0);
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    if (sizes_[i] < 0) throw DomainError("cluster sizes must be >= 0");
    for (int k = 0; k < sizes_[i]; ++k) cluster_of_.push_back(static_cast<int>(i));
    offsets_.push_back(offsets_.back() + sizes_[i]);
  }
  cluster_of_.insert(cluster_of_.end(), static_cast<std::size_t>(external_), -1);
}

VertexRegistry VertexRegistry::of(const ClusterFamily& family, const PointConfiguration& gamma) {
  return VertexRegistry(family.sizes(), static_cast<int>(gamma.size()));
}

std::string to_string(ForestClause clause) {
  switch (clause) {
    case ForestClause::None: return "none";
    case ForestClause::Structure: return "structure";
    case ForestClause::Acyclic: return "acyclic";
    case ForestClause::IntraCluster: return "intra-cluster";
    case ForestClause::Collapse: return "collapse";
    case ForestClause::Root: return "root";
    case ForestClause::Path: return "path";
  }
  return "unknown";
}

namespace {

AdmissibilityReport reject(ForestClause clause, std::string detail) {
  return AdmissibilityReport{false, clause, std::move(detail)};
}

int find_root(std::vector<int>& parent, int v) {
  while (parent[v] != v) {
    parent[v] = parent[parent[v]];
    v = parent[v];
  }
  return v;
}

}  // namespace

AdmissibilityReport is_admissible(const ForestGraph& f, const VertexRegistry& reg, AdmissibilityReading reading) {
  const int nv = reg.vertex_count();
  const int m = reg.cluster_count();
  const int supers = m + reg.external_count();
  auto super_of = [&](int v) { return reg.is_external(v) ? m + (v - reg.first_external()) : reg.cluster_of(v); };

  std::set<std::pair<int, int>> seen;
  for (auto [a, b] : f.edges) {
    if (a < 0 || b < 0 || a >= nv || b >= nv) {
      return reject(ForestClause::Structure, "edge endpoint outside the vertex registry");
    }
    if (a == b) return reject(ForestClause::Structure, "self-loop at vertex " + std::to_string(a));
    if (!seen.emplace(std::min(a, b), std::max(a, b)).second) {
      return reject(ForestClause::Structure, "repeated edge");
    }
  }

  std::vector<int> uf(static_cast<std::size_t>(nv));
  std::iota(uf.begin(), uf.end(), 0);
  for (auto [a, b] : seen) {
    const int ra = find_root(uf, a);
    const int rb = find_root(uf, b);
    if (ra == rb) return reject(ForestClause::Acyclic, "edge " + std::to_string(a) + "-" + std::to_string(b) + " closes a cycle");
    uf[ra] = rb;
  }

  for (auto [a, b] : seen) {
    if (!reg.is_external(a) && reg.cluster_of(a) == reg.cluster_of(b)) {
      return reject(ForestClause::IntraCluster, "edge " + std::to_string(a) + "-" + std::to_string(b) +
                                                    " joins two points of cluster " + std::to_string(reg.cluster_of(a)));
    }
  }

  // Collapsed graph: one node per cluster and per external point.
  std::vector<std::set<int>> collapsed(static_cast<std::size_t>(supers));
  std::size_t collapsed_edges = 0;
  for (auto [a, b] : seen) {
    const int sa = super_of(a);
    const int sb = super_of(b);
    if (collapsed[sa].insert(sb).second) {
      collapsed[sb].insert(sa);
      ++collapsed_edges;
    }
  }
  std::vector<int> depth(static_cast<std::size_t>(supers), -1);
  {
    std::queue<int> q;
    depth[0] = 0;
    q.push(0);
    while (!q.empty()) {
      const int s = q.front();
      q.pop();
      for (int t : collapsed[s]) {
        if (depth[t] < 0) {
          depth[t] = depth[s] + 1;
          q.push(t);
        }
      }
    }
  }
  const bool connected = std::all_of(depth.begin(), depth.end(), [](int d) { return d >= 0; });
  if (!connected || collapsed_edges + 1 != static_cast<std::size_t>(supers)) {
    return reject(ForestClause::Collapse, "collapsing clusters does not give a tree on " + std::to_string(supers) + " nodes");
  }

  // Trees of the forest.
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(nv));
  for (auto [a, b] : seen) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<int> component(static_cast<std::size_t>(nv), -1);
  std::vector<std::vector<int>> trees;
  for (int v = 0; v < nv; ++v) {
    if (component[v] >= 0) continue;
    trees.emplace_back();
    std::vector<int> stack{v};
    component[v] = static_cast<int>(trees.size()) - 1;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      trees.back().push_back(u);
      for (int w : adj[u]) {
        if (component[w] < 0) {
          component[w] = component[v];
          stack.push_back(w);
        }
      }
    }
  }

  std::vector<int> roots;
  for (const auto& tree : trees) {
    int root = -1;
    if (reading.root == RootRule::NearestToFirstCluster) {
      int best = supers + 1;
      int ties = 0;
      for (int v : tree) {
        const int dv = depth[super_of(v)];
        if (dv < best) {
          best = dv;
          root = v;
          ties = 1;
        } else if (dv == best) {
          ++ties;
        }
      }
      if (ties != 1) return reject(ForestClause::Root, "tree containing vertex " + std::to_string(tree.front()) + " has no unique vertex nearest to cluster 0");
      if (reg.is_external(root)) return reject(ForestClause::Root, "tree containing vertex " + std::to_string(root) + " is rooted at an external point");
    } else {
      int lowest = m;
      for (int v : tree) {
        if (!reg.is_external(v)) lowest = std::min(lowest, reg.cluster_of(v));
      }
      if (lowest == m) return reject(ForestClause::Root, "tree containing vertex " + std::to_string(tree.front()) + " has no cluster point");
      int count = 0;
      for (int v : tree) {
        if (!reg.is_external(v) && reg.cluster_of(v) == lowest) {
          ++count;
          root = v;
        }
      }
      if (count != 1) return reject(ForestClause::Root, "tree containing vertex " + std::to_string(root) + " has " + std::to_string(count) + " points of its lowest cluster");
    }
    roots.push_back(root);
  }
  std::sort(roots.begin(), roots.end());
  if (!f.roots.empty() && f.roots != roots) {
    return reject(ForestClause::Root, "declared roots differ from the computed roots");
  }

  // Path condition on every edge oriented away from its tree's root.
  auto joined_sources = [&](int cluster_a, int target_super, int tree_id) {
    std::set<int> sources;
    for (auto [a, b] : seen) {
      for (auto [p, q] : {std::pair{a, b}, std::pair{b, a}}) {
        if (reg.is_external(p) || reg.cluster_of(p) != cluster_a || super_of(q) != target_super) continue;
        if (reading.path == PathScope::CurrentTree && component[p] != tree_id) continue;
        sources.insert(p);
      }
    }
    return sources;
  };
  for (int root : roots) {
    std::vector<int> parent(static_cast<std::size_t>(nv), -2);
    std::vector<int> stack{root};
    parent[root] = -1;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int w : adj[u]) {
        if (parent[w] != -2) continue;
        parent[w] = u;
        stack.push_back(w);
        if (reg.is_external(u)) continue;
        const auto sources = joined_sources(reg.cluster_of(u), super_of(w), component[root]);
        if (sources.size() != 1 || *sources.begin() != u) {
          return reject(ForestClause::Path, "vertex " + std::to_string(u) + " is not the only point of cluster " +
                                                std::to_string(reg.cluster_of(u)) + " joined to the part containing vertex " +
                                                std::to_string(w));
        }
      }
    }
  }
  return {};
}

AdmissibilityReport is_admissible(const ForestGraph& f, const ClusterFamily& family, const PointConfiguration& gamma,
                                  AdmissibilityReading reading) {
  return is_admissible(f, VertexRegistry::of(family, gamma), reading);
}

namespace {

void check_cap(int vertices, int cap) {
  if (cap < 1 || cap > 64) throw DomainError("vertex cap must lie in [1, 64]");
  if (vertices > cap) {
    throw ResourceError("forest enumeration over " + std::to_string(vertices) +
                        " vertices exceeds the vertex cap of " + std::to_string(cap));
  }
}

detail::Layout layout_of(const VertexRegistry& reg) {
  detail::Layout layout;
  layout.vertex_count = reg.vertex_count();
  for (int i = 0; i < reg.cluster_count(); ++i) {
    Mask mask = 0;
    for (int k = 0; k < reg.sizes()[i]; ++k) mask |= Mask{1} << (reg.first_vertex(i) + k);
    layout.cluster_members.push_back(mask);
  }
  for (int j = 0; j < reg.external_count(); ++j) layout.external |= Mask{1} << (reg.first_external() + j);
  return layout;
}

class ForestBuilder {
 public:
  ForestBuilder(const detail::Layout& layout, const std::function<void(const ForestGraph&)>& visit)
      : layout_(layout), visit_(visit) {
    for (Mask b = layout.cluster_members[0]; b != 0; b &= b - 1) roots_.push_back(std::countr_zero(b));
  }

  void run(Mask first, std::uint32_t rest, Mask external) {
    if (first == 0) {
      if (rest == 0 && external == 0) emit();
      return;
    }
    const int x = std::countr_zero(first);
    const Mask after = first & ~(Mask{1} << x);
    detail::for_each_neighbourhood(layout_, after, rest, external,
                                   [&](std::uint32_t chosen, Mask absorbed, Mask s, Mask xi) {
                                     const std::size_t edge_mark = edges_.size();
                                     const std::size_t root_mark = roots_.size();
                                     for (Mask b = s | xi; b != 0; b &= b - 1) edges_.emplace_back(x, std::countr_zero(b));
                                     for (Mask b = absorbed & ~s; b != 0; b &= b - 1) roots_.push_back(std::countr_zero(b));
                                     run(after | absorbed | xi, rest & ~chosen, external & ~xi);
                                     edges_.resize(edge_mark);
                                     roots_.resize(root_mark);
                                   });
  }


 private:
  void emit() {
    out_.edges.clear();
    for (auto [a, b] : edges_) out_.edges.emplace_back(std::min(a, b), std::max(a, b));
    std::sort(out_.edges.begin(), out_.edges.end());
    out_.roots = roots_;
    std::sort(out_.roots.begin(), out_.roots.end());
    visit_(out_);
  }

  const detail::Layout& layout_;
  const std::function<void(const ForestGraph&)>& visit_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<int> roots_;  // vertices of the first cluster, then absorbed vertices left unjoined
  ForestGraph out_;
};

}  // namespace

void enumerate_forests(const VertexRegistry& reg, const std::function<void(const ForestGraph&)>& visit, int vertex_cap) {
  check_cap(reg.vertex_count(), vertex_cap);
  if (reg.cluster_count() > 32) throw ResourceError("forest enumeration supports at most 32 clusters");
  const detail::Layout layout = layout_of(reg);
  const Mask first = layout.cluster_members[0];
  const std::uint32_t rest = reg.cluster_count() == 1 ? 0u : ((std::uint32_t{1} << reg.cluster_count()) - 2u);
  if (first == 0) {
    // Q_1(∅|∅) = 1: only the empty forest, and only when nothing else is present.
    if (rest == 0 && layout.external == 0) visit(ForestGraph{});
    return;
  }
  ForestBuilder(layout, visit).run(first, rest, layout.external);
}

std::vector<ForestGraph> enumerate_forests(const ClusterFamily& family, const PointConfiguration& gamma, int vertex_cap) {
  std::vector<ForestGraph> out;
  enumerate_forests(VertexRegistry::of(family, gamma), [&](const ForestGraph& f) { out.push_back(f); }, vertex_cap);
  return out;
}

std::size_t count_forests(const VertexRegistry& reg, int vertex_cap) {
  std::size_t n = 0;
  enumerate_forests(reg, [&](const ForestGraph&) { ++n; }, vertex_cap);
  return n;
}

double contribution_G_nu(const ForestGraph& f, std::span<const Point> positions, double h, const RadialWeight& weight) {
  double g = std::pow(h, static_cast<double>(positions.size()));
  for (auto [a, b] : f.edges) g *= weight(distance(positions[a], positions[b]));
  return g;
}

double sum_contributions(const ClusterFamily& family, const PointConfiguration& gamma, double h,
                         const RadialWeight& weight, int vertex_cap, const std::function<bool(const ForestGraph&)>& keep) {
  std::vector<Point> positions = family.all_points();
  positions.insert(positions.end(), gamma.points().begin(), gamma.points().end());
  double total = 0.0;
  enumerate_forests(
      VertexRegistry::of(family, gamma),
      [&](const ForestGraph& f) {
        if (!keep || keep(f)) total += contribution_G_nu(f, positions, h, weight);
      },
      vertex_cap);
  return total;
}

bool externals_have_degree_two(const ForestGraph& f, const VertexRegistry& reg) {
  std::vector<int> degree(static_cast<std::size_t>(reg.vertex_count()), 0);
  for (auto [a, b] : f.edges) {
    ++degree[a];
    ++degree[b];
  }
  for (int v = reg.first_external(); v < reg.vertex_count(); ++v) {
    if (degree[v] < 2) return false;
  }
  return true;
}

}  // namespace clusterexp
