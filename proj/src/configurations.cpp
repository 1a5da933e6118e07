#include "clusterexp/configurations.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "clusterexp/errors.hpp"

namespace clusterexp {
namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

PointConfiguration::PointConfiguration(std::vector<Point> points, int dimension)
    : points_(std::move(points)), dimension_(dimension) {
  if (dimension < 1 || dimension > kMaxDimension) throw DomainError("dimension must be 1, 2 or 3");
  for (const Point& p : points_) {
    for (int k = 0; k < kMaxDimension; ++k) {
      if (!std::isfinite(p[k])) throw DomainError("coordinates must be finite");
      if (k >= dimension && p[k] != 0.0) throw DomainError("coordinate beyond the configuration dimension");
    }
  }
  std::sort(points_.begin(), points_.end());
}

PointConfiguration PointConfiguration::from_coordinates(const std::vector<std::vector<double>>& coords,
                                                        int dimension) {
  std::vector<Point> pts;
  pts.reserve(coords.size());
  for (const auto& c : coords) {
    if (static_cast<int>(c.size()) != dimension) {
      throw DomainError("point has " + std::to_string(c.size()) + " coordinates, expected " +
                        std::to_string(dimension));
    }
    Point p{};
    for (int k = 0; k < dimension; ++k) p[k] = c[k];
    pts.push_back(p);
  }
  return PointConfiguration(std::move(pts), dimension);
}

bool PointConfiguration::has_repeated_point() const {
  return std::adjacent_find(points_.begin(), points_.end()) != points_.end();
}

ClusterFamily::ClusterFamily(std::vector<PointConfiguration> clusters) : clusters_(std::move(clusters)) {
  if (clusters_.empty()) throw DomainError("a cluster family needs at least one cluster");
  const int d = clusters_.front().dimension();
  for (const auto& c : clusters_) {
    if (c.dimension() != d) throw DomainError("clusters must share one dimension");
  }
  std::vector<Point> all = all_points();
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i + 1 < all.size(); ++i) {
    if (all[i] == all[i + 1]) {
      // Repeats inside one cluster are allowed (energy +∞); across clusters they are not.
      std::size_t owners = 0;
      for (const auto& c : clusters_) {
        if (std::find(c.points().begin(), c.points().end(), all[i]) != c.points().end()) ++owners;
      }
      if (owners > 1) throw DomainError("clusters must be pairwise disjoint");
    }
  }
}

std::vector<int> ClusterFamily::sizes() const {
  std::vector<int> s;
  for (const auto& c : clusters_) s.push_back(static_cast<int>(c.size()));
  return s;
}

std::size_t ClusterFamily::total_size() const {
  std::size_t n = 0;
  for (const auto& c : clusters_) n += c.size();
  return n;
}

int ClusterFamily::dimension() const { return clusters_.empty() ? 1 : clusters_.front().dimension(); }

bool ClusterFamily::has_empty_cluster() const {
  return std::any_of(clusters_.begin(), clusters_.end(), [](const auto& c) { return c.empty(); });
}

std::vector<Point> ClusterFamily::all_points() const {
  std::vector<Point> out;
  for (const auto& c : clusters_) out.insert(out.end(), c.points().begin(), c.points().end());
  return out;
}

VolumeCutoff::VolumeCutoff(int dim, std::array<double, kMaxDimension> lo, std::array<double, kMaxDimension> hi)
    : dimension(dim), lower(lo), upper(hi) {
  if (dim < 1 || dim > kMaxDimension) throw DomainError("box dimension must be 1, 2 or 3");
  for (int k = 0; k < dim; ++k) {
    if (!(std::isfinite(lo[k]) && std::isfinite(hi[k]) && hi[k] > lo[k])) {
      throw DomainError("box must have finite bounds with positive side lengths");
    }
  }
}

bool VolumeCutoff::contains(const Point& p) const {
  for (int k = 0; k < dimension; ++k) {
    if (p[k] < lower[k] || p[k] > upper[k]) return false;
  }
  return true;
}

double VolumeCutoff::volume() const {
  double v = 1.0;
  for (int k = 0; k < dimension; ++k) v *= upper[k] - lower[k];
  return v;
}

double energy_U(std::span<const Point> points, const PairPotential& pot) {
  double u = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double phi = pot(distance(points[i], points[j]));
      if (phi == kInf) return kInf;
      u += phi;
    }
  }
  return u;
}

double energy_U(const PointConfiguration& cfg, const PairPotential& pot) { return energy_U(cfg.points(), pot); }

double energy_W(std::span<const Point> eta, std::span<const Point> gamma, const PairPotential& pot) {
  double w = 0.0;
  for (const Point& x : eta) {
    for (const Point& y : gamma) {
      const double phi = pot(distance(x, y));
      if (phi == kInf) return kInf;
      w += phi;
    }
  }
  return w;
}

double energy_W(const PointConfiguration& eta, const PointConfiguration& gamma, const PairPotential& pot) {
  return energy_W(eta.points(), gamma.points(), pot);
}

std::size_t choose_base_point(const PointConfiguration& eta, const PairPotential& pot, double stability) {
  if (eta.empty()) throw DomainError("base point requires a nonempty configuration");
  const auto& pts = eta.points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double w = 0.0;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (j != i) w += pot(distance(pts[i], pts[j]));
    }
    if (w >= -2.0 * stability) return i;
  }
  throw InconsistencyError("no point x with W(x; rest) >= -2B; the stability constant is too small");
}

double product_kernel_K(const Point& x, const PointConfiguration& xi, const PairPotential& pot, double beta) {
  double k = 1.0;
  for (const Point& y : xi.points()) k *= mayer_factor(pot, beta, distance(x, y));
  return k;
}

double fan_kernel_K0(const Point& x, std::span<const PointConfiguration> clusters, const RadialWeight& weight) {
  double total = 1.0;
  for (const auto& c : clusters) {
    if (c.empty()) throw DomainError("fan kernel clusters must be nonempty");
    double all = 1.0;
    for (const Point& y : c.points()) all *= 1.0 + weight(distance(x, y));
    total *= all - 1.0;
  }
  return total;
}

}  // namespace clusterexp
