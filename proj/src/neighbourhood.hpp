#pragma once

// Shared skeleton of the kernel recursions. The recursion state is
// (first cluster C, untouched clusters R, untouched external points G), all as
// vertex bitmasks. One step removes a base point x from C and picks
//   I ⊆ R, a set S of cluster vertices meeting every cluster in I, and ξ ⊆ G;
// x is joined to S ∪ ξ and C becomes (C∖x) ∪ (clusters of I) ∪ ξ.

#include <bit>
#include <cstdint>
#include <vector>

namespace clusterexp::detail {

using Mask = std::uint64_t;

struct Layout {
  std::vector<Mask> cluster_members;  // one mask per cluster
  Mask external = 0;
  int vertex_count = 0;
};

// Calls visit(absorbed_clusters_bitset, absorbed_vertices, S, xi) for every
// admissible choice. Choices that leave C empty while anything remains are skipped:
// they contribute zero through the initial conditions.
template <class Visit>
void for_each_neighbourhood(const Layout& layout, Mask first_after_removal, std::uint32_t rest,
                            Mask external, Visit&& visit) {
  for (std::uint32_t chosen = rest;; chosen = (chosen - 1) & rest) {
    Mask absorbed = 0;
    for (std::uint32_t b = chosen; b != 0; b &= b - 1) {
      absorbed |= layout.cluster_members[static_cast<std::size_t>(std::countr_zero(b))];
    }
    const std::uint32_t rest_after = rest & ~chosen;
    // Every nonempty S ⊆ absorbed meeting each chosen cluster.
    for (Mask s = absorbed;; s = (s - 1) & absorbed) {
      bool meets_all = true;
      for (std::uint32_t b = chosen; b != 0 && meets_all; b &= b - 1) {
        meets_all = (s & layout.cluster_members[static_cast<std::size_t>(std::countr_zero(b))]) != 0;
      }
      if (meets_all) {
        for (Mask xi = external;; xi = (xi - 1) & external) {
          const Mask first_next = first_after_removal | absorbed | xi;
          const bool dead = first_next == 0 && (rest_after != 0 || (external & ~xi) != 0);
          if (!dead) visit(chosen, absorbed, s, xi);
          if (xi == 0) break;
        }
      }
      if (s == 0) break;
    }
    if (chosen == 0) break;
  }
}

}  // namespace clusterexp::detail
