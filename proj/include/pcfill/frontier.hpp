// pcfill - exemplar-based hole filling for 3D point cloud geometry
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <unordered_map>
#include <unordered_set>

#include "pcfill/cube.hpp"
#include "pcfill/kdtree.hpp"
#include "pcfill/types.hpp"
#include "pcfill/voxel_grid.hpp"

namespace pcfill {

/// Floor of the data term; keeps flat regions at nonzero priority.
inline constexpr double kDataTermFloor = 0.05;

/// The hole: a set of voxels with no resident points. Shrinks monotonically
/// as transferred points land in its voxels.
struct HoleRegion {
  std::unordered_set<VoxelKey> voxels;
  std::optional<Aabb> generator;  // box that punched it, when known

  bool empty() const { return voxels.empty(); }
  std::size_t size() const { return voxels.size(); }
};

/// Builds a hole from a generator box: every voxel overlapping the box
/// interior that contains no cloud point. Marks those voxels Hole in grid.
HoleRegion hole_from_box(VoxelGrid& grid, const Aabb& box);

/// Builds a hole from explicit voxel coordinates. Voxels that contain points
/// are skipped (counted in `skipped` when given); the rest are marked Hole.
HoleRegion hole_from_voxels(VoxelGrid& grid,
                            std::span<const std::array<std::int64_t, 3>> voxels,
                            std::size_t* skipped = nullptr);

/// The fill front: source points whose voxel is 26-adjacent to the hole.
struct FillFront {
  std::vector<int> points;         // ascending cloud indices
  std::vector<double> priorities;  // parallel to points; empty until computed

  bool empty() const { return points.empty(); }
  std::size_t size() const { return points.size(); }
};

/// Front adjacency radius in voxels. Calibration puts every point in its own
/// voxel, so on most clouds occupied voxels sit a few cells apart; the front
/// adjacency has to reach across that gap. Returns the median nearest-
/// neighbor spacing (over a deterministic sample) in voxel units, at least 1.
/// Clouds sampled at voxel pitch get 1, the plain 26-adjacency.
int occupancy_reach(const PointCloud& cloud, const KdTree& index, double voxel_edge);

/// Front points: cloud points whose voxel lies within `reach` cells
/// (Chebyshev) of a hole voxel; reach = 1 is 26-adjacency.
FillFront compute_fill_front(const VoxelGrid& grid, const PointCloud& cloud,
                             const HoleRegion& hole, int reach = 1);

/// C(p): number of cloud points in the n-cube around p (p itself counts).
int confidence(const PointCloud& cloud, const KdTree& index, const Point3& p, int n,
               double voxel_edge);

/// D(p): PCA surface-variation score of the cube residents, rescaled to
/// [eps_d, 1]. sigma = lambda_min / (lambda_1+lambda_2+lambda_3) is 0 on a
/// plane and 1/3 for isotropic scatter; ridges and valleys score high.
/// Fewer than 3 residents yields eps_d (and sets `flagged` when provided).
double data_term(const PointCloud& cloud, const KdTree& index, const Point3& p, int n,
                 double voxel_edge, double eps_d = kDataTermFloor, bool* flagged = nullptr);

/// Populates front.priorities with P(p) = D(p) * C(p) for every front point.
void compute_priorities(FillFront& front, const PointCloud& cloud, const KdTree& index, int n,
                        double voxel_edge, double eps_d = kDataTermFloor);

/// Priority store with local updates: after a transfer, only front points
/// whose priority cube can see the transferred region are recomputed.
/// `full_recompute` forces recomputation of every front point (testing mode;
/// both modes must agree exactly).
class PriorityCache {
 public:
  void update(FillFront& front, const PointCloud& cloud, const KdTree& index, int n,
              double voxel_edge, double eps_d, const std::optional<Aabb>& dirty_region,
              bool full_recompute);

  void clear() { cache_.clear(); }

 private:
  std::unordered_map<int, double> cache_;
};

/// Index (into front.points) of the highest-priority unmasked point; ties by
/// lowest cloud index. Returns -1 when every point is masked.
int argmax_priority(const FillFront& front, const std::unordered_set<int>& masked);

}  // namespace pcfill
