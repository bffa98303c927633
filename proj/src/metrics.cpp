// pcfill - exemplar-based hole filling for 3D point cloud geometry
// SPDX-License-Identifier: Apache-2.0

#include "pcfill/metrics.hpp"

#include <algorithm>

#include "pcfill/hausdorff.hpp"

namespace pcfill {

double nshd(std::span<const Point3> reconstructed, std::span<const Point3> original,
            double volume) {
  if (reconstructed.empty() || original.empty()) throw EmptySet("nshd: empty point set");
  if (!(volume > 0.0)) {
    throw DegenerateCloud("nshd: normalizing volume must be positive");
  }
  double d;
  if (reconstructed.size() + original.size() > 2048) {
    const KdTree rec_index(reconstructed);
    const KdTree orig_index(original);
    d = std::max(ohd(reconstructed, orig_index), ohd(original, rec_index));
  } else {
    d = std::max(ohd(reconstructed, original), ohd(original, reconstructed));
  }
  return d / volume;
}

double nshd_full(const PointCloud& reconstructed, const PointCloud& original) {
  return nshd(reconstructed.points(), original.points(), original.bbox().volume());
}

namespace {

std::vector<Point3> restrict_to(std::span<const Point3> pts, const Aabb& box) {
  std::vector<Point3> out;
  for (const Point3& p : pts) {
    if (box.contains(p)) out.push_back(p);
  }
  return out;
}

}  // namespace

double nshd_local(const PointCloud& reconstructed, const PointCloud& original,
                  const Aabb& hole_box, double voxel_edge) {
  const Aabb region = hole_box.dilated(2.0 * voxel_edge);
  const auto rec = restrict_to(reconstructed.points(), region);
  const auto orig = restrict_to(original.points(), region);
  return nshd(rec, orig, original.bbox().volume());
}

}  // namespace pcfill
