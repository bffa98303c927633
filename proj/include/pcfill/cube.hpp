// pcfill - exemplar-based hole filling for 3D point cloud geometry
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "pcfill/kdtree.hpp"
#include "pcfill/types.hpp"
#include "pcfill/voxel_grid.hpp"

namespace pcfill {

/// An n x n x n-voxel axis-aligned cube centered at a point, together with
/// the cloud points resident in it.
///
/// Residency is half-open per axis: [center - n*edge/2, center + n*edge/2).
struct Cube {
  Point3 center = Point3::Zero();
  int n = 0;
  double voxel_edge = 0.0;
  std::vector<int> resident_indices;    // ascending cloud indices
  std::vector<Point3> resident_points;  // world coordinates, same order

  double half_width() const { return 0.5 * n * voxel_edge; }

  bool contains(const Point3& p) const {
    const double h = half_width();
    return (p.array() >= (center.array() - h)).all() &&
           (p.array() < (center.array() + h)).all();
  }

  std::size_t size() const { return resident_indices.size(); }
  bool empty() const { return resident_indices.empty(); }
};

/// Linear-scan extraction; reference behavior for any cloud.
Cube extract_cube(const PointCloud& cloud, const Point3& center, int n, double voxel_edge);

/// Indexed extraction over a kd-tree built on the same cloud.
Cube extract_cube(const PointCloud& cloud, const KdTree& index, const Point3& center, int n,
                  double voxel_edge);

/// Resident-point count without materializing the cube.
int count_in_cube(const KdTree& index, const Point3& center, int n, double voxel_edge);

/// True when any voxel overlapped by the cube carries the given label.
bool cube_overlaps_label(const VoxelGrid& grid, const Point3& center, int n, VoxelLabel label);

}  // namespace pcfill
