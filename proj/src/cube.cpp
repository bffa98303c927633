// pcfill - exemplar-based hole filling for 3D point cloud geometry
// SPDX-License-Identifier: Apache-2.0

#include "pcfill/cube.hpp"

#include <cmath>

namespace pcfill {

namespace {

Cube make_cube(const PointCloud& cloud, const Point3& center, int n, double voxel_edge,
               std::vector<int> indices) {
  Cube cube;
  cube.center = center;
  cube.n = n;
  cube.voxel_edge = voxel_edge;
  cube.resident_indices = std::move(indices);
  cube.resident_points.reserve(cube.resident_indices.size());
  for (int i : cube.resident_indices) cube.resident_points.push_back(cloud.point(i));
  return cube;
}

}  // namespace

Cube extract_cube(const PointCloud& cloud, const Point3& center, int n, double voxel_edge) {
  Cube probe;
  probe.center = center;
  probe.n = n;
  probe.voxel_edge = voxel_edge;
  std::vector<int> indices;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (probe.contains(cloud.point(i))) indices.push_back(int(i));
  }
  return make_cube(cloud, center, n, voxel_edge, std::move(indices));
}

Cube extract_cube(const PointCloud& cloud, const KdTree& index, const Point3& center, int n,
                  double voxel_edge) {
  const double h = 0.5 * n * voxel_edge;
  std::vector<int> indices;
  index.collect_in_box(center - Point3::Constant(h), center + Point3::Constant(h), indices);
  return make_cube(cloud, center, n, voxel_edge, std::move(indices));
}

int count_in_cube(const KdTree& index, const Point3& center, int n, double voxel_edge) {
  const double h = 0.5 * n * voxel_edge;
  return index.count_in_box(center - Point3::Constant(h), center + Point3::Constant(h));
}

bool cube_overlaps_label(const VoxelGrid& grid, const Point3& center, int n, VoxelLabel label) {
  const double h = 0.5 * n * grid.edge();
  const Point3 lo = center - Point3::Constant(h);
  const Point3 hi = center + Point3::Constant(h);
  std::array<std::int64_t, 3> lo_c, hi_c;
  for (int a = 0; a < 3; ++a) {
    lo_c[a] = std::max<std::int64_t>(0, std::int64_t(std::floor((lo[a] - grid.origin()[a]) / grid.edge())));
    hi_c[a] = std::min<std::int64_t>(grid.dims()[a] - 1,
                                     std::int64_t(std::floor((hi[a] - grid.origin()[a]) / grid.edge())));
  }
  for (std::int64_t i = lo_c[0]; i <= hi_c[0]; ++i) {
    for (std::int64_t j = lo_c[1]; j <= hi_c[1]; ++j) {
      for (std::int64_t k = lo_c[2]; k <= hi_c[2]; ++k) {
        const VoxelKey key = VoxelGrid::pack(i, j, k);
        if (grid.label(key) != label) continue;
        // Exact overlap test: cell [cmin, cmin+e) vs half-open cube [lo, hi).
        const Point3 cmin = grid.cell_min(key);
        bool overlaps = true;
        for (int a = 0; a < 3; ++a) {
          if (!(cmin[a] < hi[a] && cmin[a] + grid.edge() > lo[a])) {
            overlaps = false;
            break;
          }
        }
        if (overlaps) return true;
      }
    }
  }
  return false;
}

}  // namespace pcfill
