#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <vector>

#include "clusterexp/combinatorics.hpp"
#include "clusterexp/errors.hpp"
#include "clusterexp/forests.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace clusterexp;

namespace {

using EdgeList = std::vector<std::pair<int, int>>;

// Every acyclic edge set avoiding intra-cluster pairs that the checker accepts.
std::set<EdgeList> brute_force(const VertexRegistry& reg, AdmissibilityReading reading = {}) {
  EdgeList candidates;
  for (int a = 0; a < reg.vertex_count(); ++a)
    for (int b = a + 1; b < reg.vertex_count(); ++b)
      if (reg.is_external(a) || reg.cluster_of(a) != reg.cluster_of(b)) candidates.push_back({a, b});
  std::set<EdgeList> out;
  const std::size_t e = candidates.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << e); ++mask) {
    EdgeList edges;
    for (std::size_t k = 0; k < e; ++k)
      if (mask >> k & 1U) edges.push_back(candidates[k]);
    if (!oracle::acyclic(reg.vertex_count(), edges)) continue;
    if (is_admissible(ForestGraph{edges, {}}, reg, reading).admissible) out.insert(edges);
  }
  return out;
}

// Collapsing each cluster to one node (parallel edges merged) must leave a tree
// on clusters plus externals.
bool collapses_to_tree(const ForestGraph& f, const VertexRegistry& reg) {
  const int m = reg.cluster_count();
  const auto node = [&](int v) { return reg.is_external(v) ? m + (v - reg.first_external()) : reg.cluster_of(v); };
  std::set<std::pair<int, int>> merged;
  for (auto [a, b] : f.edges) merged.insert({std::min(node(a), node(b)), std::max(node(a), node(b))});
  const EdgeList collapsed(merged.begin(), merged.end());
  const int nodes = m + reg.external_count();
  return static_cast<int>(collapsed.size()) == nodes - 1 && oracle::acyclic(nodes, collapsed) &&
         oracle::connected(nodes, collapsed);
}

void for_each_shape(int max_m, int max_l, int max_n, const std::function<void(std::vector<int>, int)>& visit) {
  for (int m = 1; m <= max_m; ++m) {
    std::vector<int> sizes(static_cast<std::size_t>(m), 1);
    for (;;) {
      for (int n = 0; n <= max_n; ++n) visit(sizes, n);
      std::size_t i = 0;
      while (i < sizes.size() && sizes[i] == max_l) sizes[i++] = 1;
      if (i == sizes.size()) break;
      ++sizes[i];
    }
  }
}

}  // namespace

TEST_SUITE("forests") {
  TEST_CASE("small counts") {
    CHECK(count_forests(VertexRegistry({1, 1}, 0)) == 1);
    CHECK(count_forests(VertexRegistry({1, 1}, 1)) == 3);
    CHECK(count_forests(VertexRegistry({2, 1}, 0)) == 2);
    CHECK(count_forests(VertexRegistry({1}, 0)) == 1);
    CHECK(count_forests(VertexRegistry({3}, 0)) == 1);  // isolated points of one cluster
  }

  TEST_CASE("enumeration matches a brute-force filter") {
    for_each_shape(3, 2, 2, [](std::vector<int> sizes, int n) {
      const VertexRegistry reg(sizes, n);
      if (reg.vertex_count() > 6) return;
      std::set<EdgeList> listed;
      enumerate_forests(reg, [&](const ForestGraph& f) {
        CHECK(listed.insert(f.edges).second);  // no duplicates
        CHECK(collapses_to_tree(f, reg));
        CHECK(is_admissible(f, reg).admissible);
      });
      CHECK(listed == brute_force(reg));
      CHECK(BigInt(listed.size()) == forest_count_formula(sizes, n));
    });
  }

  TEST_CASE("count is nondecreasing in the number of external points") {
    for_each_shape(2, 3, 0, [](std::vector<int> sizes, int) {
      std::size_t previous = 0;
      for (int n = 0; n <= 3; ++n) {
        const std::size_t c = count_forests(VertexRegistry(sizes, n));
        CHECK(c >= previous);
        previous = c;
      }
    });
  }

  TEST_CASE("clause reports") {
    const VertexRegistry reg({2, 1}, 1);  // vertices 0,1 | 2 | 3
    const auto intra = is_admissible(ForestGraph{{{0, 1}}, {}}, reg);
    CHECK(intra.violated == ForestClause::IntraCluster);
    const auto cycle = is_admissible(ForestGraph{{{0, 2}, {0, 3}, {2, 3}}, {}}, reg);
    CHECK(cycle.violated == ForestClause::Acyclic);
    const auto loose = is_admissible(ForestGraph{{{0, 2}}, {}}, reg);  // external point left alone
    CHECK_FALSE(loose.admissible);
    CHECK(to_string(ForestClause::Path) == "path");
    // One cluster of isolated points is a forest of single-vertex trees.
    CHECK(is_admissible(ForestGraph{{}, {}}, VertexRegistry({3}, 0)).admissible);
  }

  TEST_CASE("a tree may be rooted in a later cluster") {
    // η1 = {0}, η2 = {1, 2}, γ = {3}: edges 0–1 and 2–3. Trees {0,1} and {2,3}.
    const VertexRegistry reg({1, 2}, 1);
    const ForestGraph f{{{0, 1}, {2, 3}}, {0, 2}};
    CHECK(is_admissible(f, reg).admissible);
  }

  TEST_CASE("literal readings disagree with the closed form") {
    // Rooting at the lowest-index cluster loses forests that the kernel recursion produces.
    const VertexRegistry three({1, 2, 2}, 0);
    CHECK(brute_force(three, {RootRule::LowestClusterIndex, PathScope::WholeForest}).size() == 43);
    CHECK(forest_count_formula({1, 2, 2}, 0) == 45);
    // Checking the single-joiner clause tree by tree admits extra forests.
    const VertexRegistry two({2, 2}, 0);
    CHECK(brute_force(two, {RootRule::NearestToFirstCluster, PathScope::CurrentTree}).size() == 8);
    CHECK(forest_count_formula({2, 2}, 0) == 6);
  }

  TEST_CASE("contributions") {
    const ClusterFamily fam({PointConfiguration({make_point(0.0)}, 1), PointConfiguration({make_point(1.0)}, 1)});
    const PointConfiguration gamma({make_point(3.0)}, 1);
    const auto w = [](double r) { return std::exp(-r); };
    const double h = 0.7;
    const double w12 = w(1.0), w1y = w(3.0), w2y = w(2.0);
    const double expected = h * h * h * (w12 * w1y + w12 * w2y + w1y * w2y);
    CHECK(sum_contributions(fam, gamma, h, w) == doctest::Approx(expected).epsilon(1e-14));
    const std::vector<Point> pos{make_point(0.0), make_point(1.0), make_point(3.0)};
    CHECK(contribution_G_nu(ForestGraph{{{0, 1}, {1, 2}}, {0}}, pos, h, w) == doctest::Approx(h * h * h * w12 * w2y));
    // Only the forest with y joined to both clusters keeps y at degree two.
    const auto kept = sum_contributions(fam, gamma, h, w, kDefaultVertexCap, [&](const ForestGraph& f) {
      return externals_have_degree_two(f, VertexRegistry::of(fam, gamma));
    });
    CHECK(kept == doctest::Approx(h * h * h * w1y * w2y).epsilon(1e-14));
  }

  TEST_CASE("vertex cap") {
    CHECK_THROWS_AS(count_forests(VertexRegistry({3, 3}, 3), 8), ResourceError);
    CHECK_NOTHROW(count_forests(VertexRegistry({1, 1}, 1), 3));
  }
}
