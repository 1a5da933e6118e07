#pragma once

#include <cstddef>
#include <vector>

namespace clusterexp {

// Power series in the activity truncated after order `order`: c[k] is the
// coefficient of z^k. Arithmetic keeps the truncation order of the operands.
class TruncatedSeries {
 public:
  explicit TruncatedSeries(int order = 0);
  TruncatedSeries(std::vector<double> coefficients, int order);
  static TruncatedSeries constant(double c, int order);
  // z^k (zero if k > order).
  static TruncatedSeries monomial(int k, int order);

  int order() const { return static_cast<int>(c_.size()) - 1; }
  double operator[](std::size_t k) const { return c_[k]; }
  double& operator[](std::size_t k) { return c_[k]; }
  const std::vector<double>& coefficients() const { return c_; }

  double evaluate(double z) const;
  // Σ_k |c_k| |z|^k; dominates |evaluate(z)|.
  double evaluate_abs(double z) const;

  TruncatedSeries& operator+=(const TruncatedSeries& o);
  TruncatedSeries& operator-=(const TruncatedSeries& o);
  TruncatedSeries& operator*=(double s);

  friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
  friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
  friend TruncatedSeries operator*(TruncatedSeries a, double s) { return a *= s; }
  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);
  // Requires b[0] != 0.
  friend TruncatedSeries operator/(const TruncatedSeries& a, const TruncatedSeries& b);

 private:
  std::vector<double> c_;
};

}  // namespace clusterexp
