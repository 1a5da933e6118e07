#include "clusterexp/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>

#include "clusterexp/errors.hpp"

namespace clusterexp {
namespace {

constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the nodes kKronrodNodes[1], [3], [5], [7].
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

enum class Map { kIdentity, kRightTail, kLeftTail };

struct Segment {
  double lo;
  double hi;
  Map map;
  std::vector<double> value;
  double error;
};

struct SegmentOrder {
  bool operator()(const Segment& a, const Segment& b) const { return a.error < b.error; }
};

double max_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

class Engine {
 public:
  Engine(const VectorIntegrand& f, std::size_t width) : f_(f), width_(width), buf_(width) {}

  Segment evaluate(double lo, double hi, Map map, double anchor) {
    Segment s{lo, hi, map, std::vector<double>(width_, 0.0), 0.0};
    std::vector<double> gauss(width_, 0.0);
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    auto sample = [&](double t, double w_kronrod, double w_gauss) {
      double x = t;
      double jac = 1.0;
      if (map == Map::kRightTail) {
        x = anchor + (1.0 - t) / t;
        jac = 1.0 / (t * t);
      } else if (map == Map::kLeftTail) {
        x = anchor - (1.0 - t) / t;
        jac = 1.0 / (t * t);
      }
      f_(x, buf_);
      for (std::size_t c = 0; c < width_; ++c) {
        const double v = buf_[c] * jac;
        s.value[c] += w_kronrod * v;
        gauss[c] += w_gauss * v;
      }
    };
    for (int i = 0; i < 7; ++i) {
      const double dx = half * kKronrodNodes[i];
      const double wg = (i % 2 == 1) ? kGaussWeights[i / 2] : 0.0;
      sample(center - dx, kKronrodWeights[i], wg);
      sample(center + dx, kKronrodWeights[i], wg);
    }
    sample(center, kKronrodWeights[7], kGaussWeights[3]);
    double err = 0.0;
    for (std::size_t c = 0; c < width_; ++c) {
      s.value[c] *= half;
      gauss[c] *= half;
      err = std::max(err, std::abs(s.value[c] - gauss[c]));
    }
    s.error = err;
    return s;
  }

 private:
  const VectorIntegrand& f_;
  std::size_t width_;
  std::vector<double> buf_;
};

}  // namespace

VectorIntegralEstimate integrate(const VectorIntegrand& f, std::size_t width, double a, double b,
                                 std::span<const double> breakpoints, const QuadratureSpec& spec) {
  VectorIntegralEstimate out;
  out.value.assign(width, 0.0);
  if (std::isnan(a) || std::isnan(b)) throw DomainError("integration limits must not be NaN");
  if (a == b) return out;
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }

  std::vector<double> cuts;
  for (double p : breakpoints) {
    if (std::isfinite(p) && p > a && p < b) cuts.push_back(p);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  Engine engine(f, width);
  std::priority_queue<Segment, std::vector<Segment>, SegmentOrder> queue;
  double left_anchor = 0.0;
  double right_anchor = 0.0;

  std::vector<double> finite_points;
  if (std::isfinite(a)) finite_points.push_back(a);
  finite_points.insert(finite_points.end(), cuts.begin(), cuts.end());
  if (std::isfinite(b)) finite_points.push_back(b);
  if (finite_points.empty()) finite_points.push_back(0.0);

  if (!std::isfinite(a)) {
    left_anchor = finite_points.front();
    queue.push(engine.evaluate(0.0, 1.0, Map::kLeftTail, left_anchor));
  }
  for (std::size_t i = 0; i + 1 < finite_points.size(); ++i) {
    queue.push(engine.evaluate(finite_points[i], finite_points[i + 1], Map::kIdentity, 0.0));
  }
  if (!std::isfinite(b)) {
    right_anchor = finite_points.back();
    queue.push(engine.evaluate(0.0, 1.0, Map::kRightTail, right_anchor));
  }

  auto totals = [&](std::vector<double>& value, double& error) {
    value.assign(width, 0.0);
    error = 0.0;
    auto copy = queue;
    while (!copy.empty()) {
      const Segment& s = copy.top();
      for (std::size_t c = 0; c < width; ++c) value[c] += s.value[c];
      error += s.error;
      copy.pop();
    }
  };

  std::vector<double> total;
  double total_error = 0.0;
  totals(total, total_error);
  int intervals = static_cast<int>(queue.size());
  while (total_error > std::max(spec.abs_tol, spec.rel_tol * max_norm(total))) {
    if (intervals >= spec.max_intervals) {
      out.converged = false;
      break;
    }
    Segment worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const double anchor = worst.map == Map::kLeftTail ? left_anchor : right_anchor;
    Segment left = engine.evaluate(worst.lo, mid, worst.map, anchor);
    Segment right = engine.evaluate(mid, worst.hi, worst.map, anchor);
    for (std::size_t c = 0; c < width; ++c) total[c] += left.value[c] + right.value[c] - worst.value[c];
    total_error += left.error + right.error - worst.error;
    queue.push(std::move(left));
    queue.push(std::move(right));
    ++intervals;
    if (intervals % 64 == 0) totals(total, total_error);  // curb drift from incremental updates
  }
  totals(total, total_error);
  for (std::size_t c = 0; c < width; ++c) out.value[c] = sign * total[c];
  out.error = total_error;
  return out;
}

IntegralEstimate integrate(const ScalarIntegrand& f, double a, double b,
                           std::span<const double> breakpoints, const QuadratureSpec& spec) {
  VectorIntegrand g = [&f](double x, std::span<double> out) { out[0] = f(x); };
  const VectorIntegralEstimate v = integrate(g, 1, a, b, breakpoints, spec);
  return IntegralEstimate{v.value[0], v.error, v.converged};
}

namespace {

class NestedLine {
 public:
  NestedLine(std::size_t n, std::span<const Point> anchors, std::size_t width,
             const PointsIntegrand& f, const PointIntegrationSpec& spec)
      : n_(n), anchors_(anchors.begin(), anchors.end()), width_(width), f_(f), spec_(spec),
        points_(n, Point{}) {}

  // Fills out[0..width) with the integral over points j..n-1 and out[width]
  // with its error estimate.
  void level(std::size_t j, std::span<double> out) {
    if (j == n_) {
      f_(points_, out.first(width_));
      out[width_] = 0.0;
      return;
    }
    std::vector<double> cuts;
    const auto depth = static_cast<int>(n_ - j);
    auto add_around = [&](double c) {
      cuts.push_back(c);  // overlapping exclusion zones leave a kink at coincidence
      for (double r : spec_.feature_radii) {
        if (!(r > 0.0) || !std::isfinite(r)) continue;
        for (int k = 1; k <= depth; ++k) {
          cuts.push_back(c - k * r);
          cuts.push_back(c + k * r);
        }
      }
    };
    for (const Point& p : anchors_) add_around(p[0]);
    // Inner domains shrink to nothing at a box edge shifted by multiples of the radii.
    if (std::isfinite(spec_.lower[0])) add_around(spec_.lower[0]);
    if (std::isfinite(spec_.upper[0])) add_around(spec_.upper[0]);
    for (std::size_t i = 0; i < j; ++i) add_around(points_[i][0]);

    VectorIntegrand g = [this, j](double y, std::span<double> o) {
      points_[j] = make_point(y);
      level(j + 1, o);
    };
    const VectorIntegralEstimate est =
        integrate(g, width_ + 1, spec_.lower[0], spec_.upper[0], cuts, spec_.quad);
    if (!est.converged) converged_ = false;
    for (std::size_t c = 0; c < width_; ++c) out[c] = est.value[c];
    out[width_] = est.error + std::abs(est.value[width_]);
  }

  bool converged() const { return converged_; }

 private:
  std::size_t n_;
  std::vector<Point> anchors_;
  std::size_t width_;
  const PointsIntegrand& f_;
  const PointIntegrationSpec& spec_;
  std::vector<Point> points_;
  bool converged_ = true;
};

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

VectorIntegralEstimate monte_carlo(std::size_t n, std::size_t width, const PointsIntegrand& f,
                                   const PointIntegrationSpec& spec) {
  const int d = spec.dimension;
  double volume = 1.0;
  for (int k = 0; k < d; ++k) {
    if (!std::isfinite(spec.lower[k]) || !std::isfinite(spec.upper[k])) {
      throw DomainError("Monte Carlo integration needs a bounded box");
    }
    volume *= spec.upper[k] - spec.lower[k];
  }
  const double total_volume = std::pow(volume, static_cast<double>(n));
  constexpr std::size_t kStrata = 16;
  const std::size_t per_stratum = std::max<std::size_t>(2, spec.mc_samples / kStrata);
  std::mt19937_64 rng(spec.seed);
  std::vector<Point> pts(n, Point{});
  std::vector<double> buf(width);
  VectorIntegralEstimate out;
  out.value.assign(width, 0.0);
  std::vector<double> variance(width, 0.0);
  for (std::size_t s = 0; s < kStrata; ++s) {
    std::vector<double> sum(width, 0.0);
    std::vector<double> sum_sq(width, 0.0);
    for (std::size_t t = 0; t < per_stratum; ++t) {
      for (std::size_t i = 0; i < n; ++i) {
        for (int k = 0; k < d; ++k) {
          double u = unit_uniform(rng);
          if (i == 0 && k == 0) u = (static_cast<double>(s) + u) / kStrata;
          pts[i][k] = spec.lower[k] + u * (spec.upper[k] - spec.lower[k]);
        }
      }
      f(pts, buf);
      for (std::size_t c = 0; c < width; ++c) {
        sum[c] += buf[c];
        sum_sq[c] += buf[c] * buf[c];
      }
    }
    const auto ns = static_cast<double>(per_stratum);
    for (std::size_t c = 0; c < width; ++c) {
      const double mean = sum[c] / ns;
      const double var = std::max(0.0, sum_sq[c] / ns - mean * mean) * ns / (ns - 1.0);
      out.value[c] += total_volume * mean / kStrata;
      variance[c] += total_volume * total_volume * var / (ns * kStrata * kStrata);
    }
  }
  double err = 0.0;
  for (double v : variance) err = std::max(err, 3.0 * std::sqrt(v));
  out.error = err;
  return out;
}

}  // namespace

VectorIntegralEstimate integrate_points(std::size_t n, std::span<const Point> anchors,
                                        std::size_t width, const PointsIntegrand& f,
                                        const PointIntegrationSpec& spec) {
  if (spec.dimension < 1 || spec.dimension > kMaxDimension) {
    throw DomainError("dimension must be between 1 and 3");
  }
  VectorIntegralEstimate out;
  out.value.assign(width, 0.0);
  if (n == 0) {
    f(std::span<const Point>{}, out.value);
    return out;
  }
  if (spec.dimension >= 2 || n > spec.max_nested_points) return monte_carlo(n, width, f, spec);
  NestedLine nested(n, anchors, width, f, spec);
  std::vector<double> buf(width + 1);
  nested.level(0, buf);
  for (std::size_t c = 0; c < width; ++c) out.value[c] = buf[c];
  out.error = buf[width];
  out.converged = nested.converged();
  return out;
}

}  // namespace clusterexp
