#include "clusterexp/series.hpp"

#include <algorithm>
#include <cmath>

#include "clusterexp/errors.hpp"

namespace clusterexp {

TruncatedSeries::TruncatedSeries(int order) {
  if (order < 0) throw DomainError("series order must be >= 0");
  c_.assign(static_cast<std::size_t>(order) + 1, 0.0);
}

TruncatedSeries::TruncatedSeries(std::vector<double> coefficients, int order) : TruncatedSeries(order) {
  const std::size_t n = std::min(coefficients.size(), c_.size());
  std::copy_n(coefficients.begin(), n, c_.begin());
}

TruncatedSeries TruncatedSeries::constant(double c, int order) {
  TruncatedSeries s(order);
  s.c_[0] = c;
  return s;
}

TruncatedSeries TruncatedSeries::monomial(int k, int order) {
  TruncatedSeries s(order);
  if (k >= 0 && k <= order) s.c_[static_cast<std::size_t>(k)] = 1.0;
  return s;
}

double TruncatedSeries::evaluate(double z) const {
  double v = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * z + *it;
  return v;
}

double TruncatedSeries::evaluate_abs(double z) const {
  double v = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * std::abs(z) + std::abs(*it);
  return v;
}

namespace {
void require_same_order(const TruncatedSeries& a, const TruncatedSeries& b) {
  if (a.order() != b.order()) throw DomainError("series operands must share one truncation order");
}
}  // namespace

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& o) {
  require_same_order(*this, o);
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
  return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& o) {
  require_same_order(*this, o);
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
  return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(double s) {
  for (double& c : c_) c *= s;
  return *this;
}

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
  require_same_order(a, b);
  TruncatedSeries out(a.order());
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    for (std::size_t j = 0; i + j < a.c_.size(); ++j) out.c_[i + j] += a.c_[i] * b.c_[j];
  }
  return out;
}

TruncatedSeries operator/(const TruncatedSeries& a, const TruncatedSeries& b) {
  require_same_order(a, b);
  if (b.c_[0] == 0.0) throw DomainError("series division needs a nonzero constant term");
  TruncatedSeries q(a.order());
  for (std::size_t k = 0; k < a.c_.size(); ++k) {
    double v = a.c_[k];
    for (std::size_t j = 1; j <= k; ++j) v -= b.c_[j] * q.c_[k - j];
    q.c_[k] = v / b.c_[0];
  }
  return q;
}

}  // namespace clusterexp
