// pcfill - exemplar-based hole filling for 3D point cloud geometry
// SPDX-License-Identifier: Apache-2.0

#include "pcfill/hausdorff.hpp"

#include <algorithm>
#include <cmath>

namespace pcfill {

double ohd(std::span<const Point3> from, std::span<const Point3> to) {
  if (from.empty() || to.empty()) throw EmptySet("ohd: empty point set");
  // Brute force is faster for the small sets that dominate matching.
  if (from.size() * to.size() <= 65536) {
    double worst = 0.0;
    for (const Point3& a : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const Point3& b : to) best = std::min(best, (a - b).squaredNorm());
      worst = std::max(worst, best);
    }
    return std::sqrt(worst);
  }
  KdTree index(to);
  return ohd(from, index);
}

double ohd(std::span<const Point3> from, const KdTree& to_index) {
  if (from.empty() || to_index.empty()) throw EmptySet("ohd: empty point set");
  double worst = 0.0;
#pragma omp parallel for reduction(max : worst) schedule(static)
  for (std::int64_t i = 0; i < std::int64_t(from.size()); ++i) {
    const double d = to_index.nearest(from[i]).second;
    worst = std::max(worst, d);
  }
  return worst;
}

}  // namespace pcfill
