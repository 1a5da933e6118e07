#include <algorithm>
#include <set>
#include <vector>

#include "clusterexp/combinatorics.hpp"
#include "clusterexp/errors.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace clusterexp;

namespace {

// Stirling numbers of the second kind by the standard recurrence.
long long stirling2(int n, int k) {
  std::vector<std::vector<long long>> s(n + 1, std::vector<long long>(k + 1, 0));
  s[0][0] = 1;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= std::min(i, k); ++j) s[i][j] = j * s[i - 1][j] + s[i - 1][j - 1];
  return s[n][k];
}

// Spanning trees of K_n by filtering all (n−1)-edge subsets.
long long brute_trees(int n) {
  std::vector<std::pair<int, int>> all;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) all.push_back({a, b});
  const int e = static_cast<int>(all.size());
  long long count = 0;
  for (unsigned mask = 0; mask < (1U << e); ++mask) {
    if (__builtin_popcount(mask) != n - 1) continue;
    std::vector<std::pair<int, int>> edges;
    for (int k = 0; k < e; ++k)
      if (mask >> k & 1U) edges.push_back(all[k]);
    if (oracle::connected(n, edges)) ++count;
  }
  return count;
}

}  // namespace

TEST_SUITE("combinatorics") {
  TEST_CASE("partition counts are Stirling and Bell numbers") {
    CHECK(partitions(3, 3).size() == 1);
    CHECK(partitions(4, 2).size() == 7);
    CHECK(partitions(2, 3).empty());
    for (int r = 1; r <= 8; ++r) {
      std::size_t bell = 0;
      for_each_partition(r, [&](const SetPartition&) { ++bell; });
      long long expected = 0;
      for (int k = 1; k <= r; ++k) {
        CHECK(partitions(r, k).size() == static_cast<std::size_t>(stirling2(r, k)));
        expected += stirling2(r, k);
      }
      CHECK(bell == static_cast<std::size_t>(expected));
    }
  }

  TEST_CASE("partitions are valid, distinct and ordered") {
    std::set<std::vector<std::vector<int>>> seen;
    for_each_partition(6, 3, [&](const SetPartition& p) {
      std::vector<int> cover;
      for (const auto& b : p.blocks) {
        CHECK_FALSE(b.empty());
        cover.insert(cover.end(), b.begin(), b.end());
      }
      std::sort(cover.begin(), cover.end());
      CHECK(cover == std::vector<int>{0, 1, 2, 3, 4, 5});
      for (std::size_t i = 1; i < p.blocks.size(); ++i) CHECK(p.blocks[i - 1].front() < p.blocks[i].front());
      CHECK(seen.insert(p.blocks).second);
    });
    CHECK(seen.size() == 90);
    const auto first = partitions(3, 2);
    CHECK(first.front().blocks == std::vector<std::vector<int>>{{0, 1}, {2}});
  }

  TEST_CASE("Cayley numbers") {
    CHECK(cayley_count(1) == 1);
    CHECK(cayley_count(2) == 1);
    CHECK(cayley_count(3) == 3);
    CHECK(cayley_count(4) == 16);
    CHECK(cayley_count(5) == 125);
    for (int n = 1; n <= 6; ++n) {
      std::set<std::vector<std::pair<int, int>>> trees;
      for_each_labeled_tree(n, [&](const std::vector<std::pair<int, int>>& t) {
        CHECK(static_cast<int>(t.size()) == std::max(n - 1, 0));
        CHECK(oracle::connected(n, t));
        auto sorted = t;
        std::sort(sorted.begin(), sorted.end());
        trees.insert(sorted);
      });
      CHECK(BigInt(trees.size()) == cayley_count(n));
      CHECK(static_cast<long long>(trees.size()) == brute_trees(n));
    }
  }

  TEST_CASE("forest count formula examples") {
    CHECK(forest_count_formula({1, 1}, 0) == 1);
    CHECK(forest_count_formula({1, 1}, 1) == 3);
    CHECK(forest_count_formula({2, 1}, 0) == 2);
    CHECK(forest_count_formula({3}, 0) == 1);
    CHECK(forest_count_formula({2}, 2) == 2 * 4);
    // l1·Π(2^{l_i} − 1)·(l+n)^{m+n−2}
    CHECK(forest_count_formula({1, 2, 2}, 1) == BigInt(1 * 3 * 3) * 36);
    CHECK_THROWS_AS(forest_count_formula({1, 0}, 1), DomainError);
  }

  TEST_CASE("recursion equals closed form") {
    CHECK(forest_count_recursion({1, 1}, 1) == 3);
    for (int m = 1; m <= 3; ++m) {
      std::vector<int> sizes(static_cast<std::size_t>(m), 1);
      for (;;) {
        for (int n = 0; n <= 3; ++n) CHECK(forest_count_recursion(sizes, n) == forest_count_formula(sizes, n));
        std::size_t i = 0;
        while (i < sizes.size() && sizes[i] == 3) sizes[i++] = 1;
        if (i == sizes.size()) break;
        ++sizes[i];
      }
    }
  }

  TEST_CASE("remarkable identity") {
    const auto [lhs, rhs] = remarkable_identity_check(3, 3);
    CHECK(lhs == 3 * 36);
    // Compositions of 3 into 3 nonnegative parts: (3,0,0)×3 → 3!/3!·4^2 = 16 each,
    // (2,1,0)×6 → 3!/2!·3·2^0 = 3·3·1 = 9 each, (1,1,1) → 6·1 = 6.
    CHECK(rhs == 3 * 16 + 6 * 9 + 6);
    for (int n = 0; n <= 6; ++n)
      for (int l = 1; l <= 4; ++l) {
        const auto [a, b] = remarkable_identity_check(n, l);
        CHECK(a == b);
      }
  }

  TEST_CASE("partition identity") {
    const auto [lhs, rhs] = partition_identity_check({1, 2, 1, 3}, 2);
    CHECK(lhs == rhs);
    CHECK(rhs == 3 * 7 * 7);  // (m−1) l^{m−2}
    CHECK_THROWS_AS(partition_identity_check({2, 2}, 1), DomainError);
    auto g = oracle::rng(17);
    for (int trial = 0; trial < 20; ++trial) {
      const int m = oracle::uniform_int(g, 2, 6);
      std::vector<int> sizes;
      for (int i = 0; i < m; ++i) sizes.push_back(oracle::uniform_int(g, 1, 4));
      for (int sigma = 2; sigma <= m; ++sigma) {
        const auto [a, b] = partition_identity_check(sizes, sigma);
        CHECK(a == b);
      }
    }
  }

  TEST_CASE("auxiliary sum") {
    for (int n = 0; n <= 8; ++n)
      for (int l = 1; l <= 5; ++l) {
        if (l + n < 2) continue;
        const auto [a, b] = auxiliary_sum_check(n, l);
        CHECK(a == b);
      }
    CHECK_THROWS_AS(auxiliary_sum_check(0, 1), DomainError);
  }

  TEST_CASE("count recursion splits into three closed forms") {
    for (int m = 2; m <= 4; ++m)
      for (int l = 1; l <= 2; ++l)
        for (int n = 0; n <= 3; ++n) {
          std::vector<int> sizes(static_cast<std::size_t>(m), l);
          sizes[0] = l + 1;
          const auto s = count_split_check(sizes, n);
          CHECK(s.first_explicit == s.first_closed);
          CHECK(s.second_explicit == s.second_closed);
          CHECK(s.third_explicit == s.third_closed);
          CHECK(s.first_closed + s.second_closed + s.third_closed == Rational(s.total_closed));
        }
  }

  TEST_CASE("big-integer helpers") {
    CHECK(binomial(10, 3) == 120);
    CHECK(binomial(3, 5) == 0);
    CHECK(factorial(20) == BigInt("2432902008176640000"));
    CHECK(power(Rational(2), -3) == Rational(1, 8));
  }
}
