#include "clusterexp/combinatorics.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>

#include "clusterexp/errors.hpp"

namespace clusterexp {
namespace {

void validate_sizes(const std::vector<int>& sizes, int n) {
  if (sizes.empty()) throw DomainError("at least one cluster size is required");
  for (int l : sizes) {
    if (l < 1) throw DomainError("cluster sizes must be >= 1 (got " + std::to_string(l) + ")");
  }
  if (n < 0) throw DomainError("external point count must be >= 0");
}

BigInt fan_factor(int l) { return (BigInt(1) << l) - 1; }

// Restricted growth strings: label[i] ≤ 1 + max(label[0..i−1]).
void grow(int r, int k, std::vector<int>& label, int i, int used,
          const std::function<void(const SetPartition&)>& visit) {
  if (i == r) {
    if (k > 0 && used != k) return;
    SetPartition p;
    p.blocks.assign(used, {});
    for (int e = 0; e < r; ++e) p.blocks[label[e]].push_back(e);
    visit(p);
    return;
  }
  const int limit = (k > 0) ? std::min(used, k - 1) : used;
  for (int b = 0; b <= limit; ++b) {
    const int now = std::max(used, b + 1);
    if (k > 0 && now + (r - i - 1) < k) continue;
    label[i] = b;
    grow(r, k, label, i + 1, now, visit);
  }
}

}  // namespace

void for_each_partition(int r, int k, const std::function<void(const SetPartition&)>& visit) {
  if (r < 0 || k < 1) throw DomainError("partitions need r >= 0 and k >= 1");
  if (k > r) return;
  std::vector<int> label(r, 0);
  grow(r, k, label, 0, 0, visit);
}

void for_each_partition(int r, const std::function<void(const SetPartition&)>& visit) {
  if (r < 0) throw DomainError("partitions need r >= 0");
  if (r == 0) {
    visit(SetPartition{});
    return;
  }
  std::vector<int> label(r, 0);
  grow(r, 0, label, 0, 0, visit);
}

std::vector<SetPartition> partitions(int r, int k) {
  std::vector<SetPartition> out;
  for_each_partition(r, k, [&](const SetPartition& p) { out.push_back(p); });
  return out;
}

void for_each_labeled_tree(int n, const std::function<void(const std::vector<std::pair<int, int>>&)>& visit) {
  if (n < 1) throw DomainError("labeled trees need n >= 1");
  if (n == 1) {
    visit({});
    return;
  }
  const int len = n - 2;
  std::vector<int> seq(len, 0);
  std::vector<std::pair<int, int>> edges;
  std::vector<int> degree(n);
  while (true) {
    std::fill(degree.begin(), degree.end(), 1);
    for (int s : seq) ++degree[s];
    edges.clear();
    for (int s : seq) {
      int leaf = 0;
      while (degree[leaf] != 1) ++leaf;
      edges.emplace_back(std::min(leaf, s), std::max(leaf, s));
      --degree[leaf];
      --degree[s];
    }
    int u = -1;
    for (int v = 0; v < n; ++v) {
      if (degree[v] == 1) {
        if (u < 0) {
          u = v;
        } else {
          edges.emplace_back(u, v);
          break;
        }
      }
    }
    visit(edges);
    int pos = len - 1;
    while (pos >= 0 && seq[pos] == n - 1) {
      seq[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++seq[pos];
  }
}

BigInt binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

BigInt factorial(int n) {
  if (n < 0) throw DomainError("factorial of a negative number");
  BigInt r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

BigInt power(const BigInt& base, int exponent) {
  if (exponent < 0) throw DomainError("negative exponent in integer power");
  return boost::multiprecision::pow(base, static_cast<unsigned>(exponent));
}

Rational power(const Rational& base, int exponent) {
  if (exponent >= 0) {
    Rational r = 1;
    for (int i = 0; i < exponent; ++i) r *= base;
    return r;
  }
  if (base == 0) throw DomainError("zero raised to a negative power");
  return Rational(1) / power(base, -exponent);
}

BigInt cayley_count(int n) {
  if (n < 1) throw DomainError("Cayley count needs n >= 1");
  if (n <= 2) return 1;
  return power(BigInt(n), n - 2);
}

BigInt forest_count_formula(const std::vector<int>& sizes, int n) {
  validate_sizes(sizes, n);
  const int m = static_cast<int>(sizes.size());
  const int l = std::accumulate(sizes.begin(), sizes.end(), 0);
  if (m == 1) {
    if (n == 0) return 1;
    return BigInt(l) * power(BigInt(l + n), n - 1);
  }
  BigInt r = sizes[0];
  for (int i = 1; i < m; ++i) r *= fan_factor(sizes[i]);
  return r * power(BigInt(l + n), m + n - 2);
}

namespace {

class CountRecursion {
 public:
  BigInt count(int first, std::vector<int> rest, int n) {
    if (first == 0) return (rest.empty() && n == 0) ? BigInt(1) : BigInt(0);
    std::sort(rest.begin(), rest.end());
    auto key = std::make_tuple(first, rest, n);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    BigInt total = 0;
    const int r = static_cast<int>(rest.size());
    for (int k = 0; k <= n; ++k) {
      const BigInt choose = binomial(n, k);
      for (std::uint32_t mask = 0; mask < (1u << r); ++mask) {
        BigInt weight = choose;
        int absorbed = 0;
        std::vector<int> remaining;
        for (int i = 0; i < r; ++i) {
          if (mask & (1u << i)) {
            weight *= fan_factor(rest[i]);
            absorbed += rest[i];
          } else {
            remaining.push_back(rest[i]);
          }
        }
        total += weight * count(first - 1 + absorbed + k, remaining, n - k);
      }
    }
    memo_.emplace(std::move(key), total);
    return total;
  }

 private:
  std::map<std::tuple<int, std::vector<int>, int>, BigInt> memo_;
};

}  // namespace

BigInt forest_count_recursion(const std::vector<int>& sizes, int n) {
  validate_sizes(sizes, n);
  CountRecursion rec;
  return rec.count(sizes[0], std::vector<int>(sizes.begin() + 1, sizes.end()), n);
}

std::pair<BigInt, BigInt> remarkable_identity_check(int n, int l) {
  if (n < 0 || l < 1) throw DomainError("remarkable identity needs n >= 0 and l >= 1");
  const BigInt lhs = n == 0 ? BigInt(1) : BigInt(l) * power(BigInt(l + n), n - 1);
  BigInt rhs = 0;
  const BigInt n_fact = factorial(n);
  std::vector<int> parts(l, 0);
  std::function<void(int, int)> place = [&](int slot, int left) {
    if (slot == l - 1) {
      parts[slot] = left;
      BigInt term = n_fact;
      for (int p : parts) term /= factorial(p);
      for (int p : parts) {
        if (p >= 1) term *= power(BigInt(p + 1), p - 1);
      }
      rhs += term;
      return;
    }
    for (int v = 0; v <= left; ++v) {
      parts[slot] = v;
      place(slot + 1, left - v);
    }
  };
  place(0, n);
  return {lhs, rhs};
}

std::pair<BigInt, BigInt> partition_identity_check(const std::vector<int>& sizes, int sigma) {
  validate_sizes(sizes, 0);
  const int m = static_cast<int>(sizes.size());
  if (sigma < 2 || sigma > m) throw DomainError("partition identity needs 2 <= sigma <= m");
  const int l = std::accumulate(sizes.begin(), sizes.end(), 0);
  BigInt lhs = 0;
  for_each_partition(m, sigma, [&](const SetPartition& p) {
    BigInt term = 1;
    for (const auto& block : p.blocks) {
      int mass = 0;
      for (int i : block) mass += sizes[i];
      term *= power(BigInt(mass), static_cast<int>(block.size()) - 1);
    }
    lhs += term;
  });
  const BigInt rhs = binomial(m - 1, sigma - 1) * power(BigInt(l), m - sigma);
  return {lhs, rhs};
}

std::pair<Rational, Rational> auxiliary_sum_check(int n, int l) {
  if (n < 0 || l < 1 || l + n < 2) throw DomainError("auxiliary identity needs n >= 0, l >= 1, l + n >= 2");
  const Rational x = l + n - 1;
  Rational lhs = 0;
  for (int k = 0; k <= n; ++k) lhs += Rational(binomial(n, k)) * (k - 1) * power(x, n - k - 1);
  const Rational rhs = Rational(-l) / x * power(Rational(l + n), n - 1);
  return {lhs, rhs};
}

CountSplit count_split_check(const std::vector<int>& sizes, int n) {
  validate_sizes(sizes, n);
  const int m = static_cast<int>(sizes.size());
  if (m < 2) throw DomainError("the count split needs m >= 2");
  const int l = std::accumulate(sizes.begin(), sizes.end(), 0);
  const int l1 = sizes[0];
  const Rational x = l + n - 1;
  CountSplit s;
  const int others = m - 1;
  for (int k = 0; k <= n; ++k) {
    const Rational outer = Rational(binomial(n, k)) * power(x, n - k - 1);
    for (std::uint32_t mask = 0; mask < (1u << others); ++mask) {
      int card = 0;
      int mass = 0;
      for (int i = 0; i < others; ++i) {
        if (mask & (1u << i)) {
          ++card;
          mass += sizes[i + 1];
        }
      }
      const Rational inner = power(x, m - card - 1);
      s.first_explicit += outer * l1 * inner;
      s.second_explicit += outer * mass * inner;
      s.third_explicit += outer * (k - 1) * inner;
    }
  }
  const Rational big = l + n;
  s.first_closed = Rational(l1) / x * power(big, m + n - 1);
  s.second_closed = Rational(l - l1) / x * power(big, m + n - 2);
  s.third_closed = Rational(-l) / x * power(big, m + n - 2);
  s.total_closed = BigInt(l1) * power(BigInt(l + n), m + n - 2);
  return s;
}

}  // namespace clusterexp
