#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "clusterexp/geometry.hpp"
#include "clusterexp/potentials.hpp"

namespace clusterexp {

// Finite multiset of points, kept in lexicographic order.
class PointConfiguration {
 public:
  PointConfiguration() = default;
  PointConfiguration(std::vector<Point> points, int dimension);

  static PointConfiguration from_coordinates(const std::vector<std::vector<double>>& coords, int dimension);

  int dimension() const { return dimension_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const Point& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<Point>& points() const { return points_; }
  bool has_repeated_point() const;

  friend bool operator==(const PointConfiguration&, const PointConfiguration&) = default;

 private:
  std::vector<Point> points_;
  int dimension_ = 1;
};

// Ordered family of pairwise disjoint configurations η_1, …, η_m.
class ClusterFamily {
 public:
  ClusterFamily() = default;
  explicit ClusterFamily(std::vector<PointConfiguration> clusters);

  std::size_t count() const { return clusters_.size(); }
  const PointConfiguration& operator[](std::size_t i) const { return clusters_[i]; }
  const std::vector<PointConfiguration>& clusters() const { return clusters_; }
  std::vector<int> sizes() const;
  std::size_t total_size() const;
  int dimension() const;
  bool has_empty_cluster() const;
  // Cluster points concatenated in cluster order.
  std::vector<Point> all_points() const;

 private:
  std::vector<PointConfiguration> clusters_;
};

struct VolumeCutoff {
  int dimension = 1;
  std::array<double, kMaxDimension> lower{};
  std::array<double, kMaxDimension> upper{};

  VolumeCutoff() = default;
  VolumeCutoff(int dimension, std::array<double, kMaxDimension> lower, std::array<double, kMaxDimension> upper);
  bool contains(const Point& p) const;
  double volume() const;
};

// Σ over unordered pairs of φ(|x − y|); +∞ for a repeated point.
double energy_U(const PointConfiguration& cfg, const PairPotential& pot);
double energy_U(std::span<const Point> points, const PairPotential& pot);

// Σ_{x∈η, y∈γ} φ(|x − y|); +∞ if η and γ share a point.
double energy_W(const PointConfiguration& eta, const PointConfiguration& gamma, const PairPotential& pot);
double energy_W(std::span<const Point> eta, std::span<const Point> gamma, const PairPotential& pot);

// Lowest index i (in canonical order) with W(η_i; η∖η_i) ≥ −2·stability.
std::size_t choose_base_point(const PointConfiguration& eta, const PairPotential& pot, double stability);

// Π_{y∈ξ} (e^{−βφ(|x−y|)} − 1); 1 for empty ξ.
double product_kernel_K(const Point& x, const PointConfiguration& xi, const PairPotential& pot, double beta);

using RadialWeight = std::function<double(double)>;

// Σ over η ⊆ ∪ clusters meeting every cluster of Π_{y∈η} weight(|x − y|).
// Each cluster contributes Π_y(1 + w) − 1, so the sum factorizes.
double fan_kernel_K0(const Point& x, std::span<const PointConfiguration> clusters, const RadialWeight& weight);

}  // namespace clusterexp
