// pcfill - exemplar-based hole filling for 3D point cloud geometry
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "pcfill/errors.hpp"

namespace pcfill {

using Point3 = Eigen::Vector3d;

/// Axis-aligned bounding box, closed on both sides.
struct Aabb {
  Point3 min = Point3::Constant(std::numeric_limits<double>::infinity());
  Point3 max = Point3::Constant(-std::numeric_limits<double>::infinity());

  bool valid() const { return (min.array() <= max.array()).all(); }

  void expand(const Point3& p) {
    min = min.cwiseMin(p);
    max = max.cwiseMax(p);
  }

  Point3 extent() const { return max - min; }

  double volume() const {
    const Point3 e = extent();
    return e.x() * e.y() * e.z();
  }

  bool contains(const Point3& p) const {
    return (p.array() >= min.array()).all() && (p.array() <= max.array()).all();
  }

  /// Strict interior test; points on a face do not count.
  bool contains_strict(const Point3& p) const {
    return (p.array() > min.array()).all() && (p.array() < max.array()).all();
  }

  Aabb dilated(double margin) const {
    Aabb out;
    out.min = min - Point3::Constant(margin);
    out.max = max + Point3::Constant(margin);
    return out;
  }

  static Aabb of(std::span<const Point3> pts) {
    Aabb box;
    for (const Point3& p : pts) box.expand(p);
    return box;
  }
};

/// Ordered set of 3D points with a maintained bounding box.
///
/// Points are append-only; the bounding box is updated on every append so it
/// always encloses the whole set. An empty cloud is representable (a punched
/// hole can remove every point); operations that need points enforce their
/// own preconditions.
class PointCloud {
 public:
  PointCloud() = default;

  explicit PointCloud(std::vector<Point3> pts) : points_(std::move(pts)) {
    for (const Point3& p : points_) {
      if (!p.allFinite()) throw DegenerateCloud("point cloud contains non-finite coordinates");
      bbox_.expand(p);
    }
  }

  const std::vector<Point3>& points() const { return points_; }
  const Point3& point(std::size_t i) const { return points_[i]; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const Aabb& bbox() const { return bbox_; }

  void append(std::span<const Point3> pts) {
    for (const Point3& p : pts) {
      if (!p.allFinite()) throw DegenerateCloud("appended point has non-finite coordinates");
      points_.push_back(p);
      bbox_.expand(p);
    }
  }

  /// Removes exactly coincident duplicates, keeping the first occurrence.
  PointCloud deduplicated(std::size_t* removed = nullptr) const;

  bool has_exact_duplicates() const;

 private:
  std::vector<Point3> points_;
  Aabb bbox_;
};

}  // namespace pcfill
