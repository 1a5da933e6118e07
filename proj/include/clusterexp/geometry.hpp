#pragma once

#include <array>
#include <cmath>
#include <compare>

namespace clusterexp {

inline constexpr int kMaxDimension = 3;

// Coordinates beyond the configuration's dimension are kept at zero, so
// distances never need to know d.
using Point = std::array<double, kMaxDimension>;

inline double distance(const Point& a, const Point& b) {
  double s = 0.0;
  for (int k = 0; k < kMaxDimension; ++k) {
    const double t = a[k] - b[k];
    s += t * t;
  }
  return std::sqrt(s);
}

inline Point make_point(double x, double y = 0.0, double z = 0.0) { return Point{x, y, z}; }

}  // namespace clusterexp
