#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace clusterexp {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Blocks of a partition of {0, …, r−1}; blocks ordered by their smallest element.
struct SetPartition {
  std::vector<std::vector<int>> blocks;
};

// Every partition of {0..r−1} into exactly k blocks, in restricted-growth-string
// order (lexicographic in the block label of element 0, 1, …). Empty if k > r.
void for_each_partition(int r, int k, const std::function<void(const SetPartition&)>& visit);
std::vector<SetPartition> partitions(int r, int k);
// All partitions of {0..r−1}, any number of blocks, in restricted-growth-string order.
void for_each_partition(int r, const std::function<void(const SetPartition&)>& visit);

// Labeled trees on {0..n−1} decoded from every sequence in {0..n−1}^{n−2}, in
// lexicographic sequence order. n = 1 yields the empty tree once.
void for_each_labeled_tree(int n, const std::function<void(const std::vector<std::pair<int, int>>&)>& visit);

BigInt binomial(int n, int k);
BigInt factorial(int n);
BigInt power(const BigInt& base, int exponent);
Rational power(const Rational& base, int exponent);  // negative exponents allowed

// n^{n−2}; 1 for n = 1.
BigInt cayley_count(int n);

// Number of admissible forests on clusters of the given sizes with n external
// points: sizes[0]·Π_{i≥1}(2^{sizes[i]} − 1)·(Σsizes + n)^{m+n−2}. For one
// cluster this is l(l+n)^{n−1}, with value 1 at n = 0.
BigInt forest_count_formula(const std::vector<int>& sizes, int n);

// The same count from the recursion over the base point's neighbourhood:
// N_n(l_1; rest) = Σ_k C(n,k) Σ_{I⊆rest} Π_{i∈I}(2^{l_i}−1) N_{n−k}(l_1 + l_I + k − 1; rest∖I),
// with N = 1 when the first cluster is exhausted, nothing else remains and n = 0.
BigInt forest_count_recursion(const std::vector<int>& sizes, int n);

// l(l+n)^{n−1} against Σ over compositions n_1+…+n_l = n of n!/Πn_i! Π(n_i+1)^{n_i−1}.
std::pair<BigInt, BigInt> remarkable_identity_check(int n, int l);

// Σ over partitions of {0..m−1} into sigma blocks of Π_blocks (Σ_{i∈block} l_i)^{|block|−1}
// against C(m−1, sigma−1)·l^{m−sigma}.
std::pair<BigInt, BigInt> partition_identity_check(const std::vector<int>& sizes, int sigma);

// Σ_k C(n,k)(k−1)(l+n−1)^{n−k−1} against −l(l+n−1)^{−1}(l+n)^{n−1}. Requires l+n ≥ 2.
std::pair<Rational, Rational> auxiliary_sum_check(int n, int l);

// The three sums splitting the count recursion after substituting the closed form,
// each as an explicit sum and as its closed form.
struct CountSplit {
  Rational first_explicit, first_closed;    // l_1 part
  Rational second_explicit, second_closed;  // l_I part
  Rational third_explicit, third_closed;    // (k − 1) part
  BigInt total_closed;                      // l_1 (l+n)^{m+n−2}
};
CountSplit count_split_check(const std::vector<int>& sizes, int n);

}  // namespace clusterexp
