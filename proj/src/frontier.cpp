// pcfill - exemplar-based hole filling for 3D point cloud geometry
// SPDX-License-Identifier: Apache-2.0

#include "pcfill/frontier.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace pcfill {

HoleRegion hole_from_box(VoxelGrid& grid, const Aabb& box) {
  HoleRegion hole;
  hole.generator = box;
  const double e = grid.edge();
  std::array<std::int64_t, 3> lo, hi;
  for (int a = 0; a < 3; ++a) {
    lo[a] = std::max<std::int64_t>(0, std::int64_t(std::floor((box.min[a] - grid.origin()[a]) / e)));
    hi[a] = std::min<std::int64_t>(grid.dims()[a] - 1,
                                   std::int64_t(std::floor((box.max[a] - grid.origin()[a]) / e)));
  }
  for (std::int64_t i = lo[0]; i <= hi[0]; ++i) {
    for (std::int64_t j = lo[1]; j <= hi[1]; ++j) {
      for (std::int64_t k = lo[2]; k <= hi[2]; ++k) {
        const VoxelKey key = VoxelGrid::pack(i, j, k);
        const Point3 cmin = grid.cell_min(key);
        bool overlaps = true;
        for (int a = 0; a < 3; ++a) {
          if (!(cmin[a] < box.max[a] && cmin[a] + e > box.min[a])) {
            overlaps = false;
            break;
          }
        }
        if (!overlaps) continue;
        const auto* pts = grid.points_in(key);
        if (pts && !pts->empty()) continue;  // occupied voxels stay Source
        grid.set_label(key, VoxelLabel::Hole);
        hole.voxels.insert(key);
      }
    }
  }
  return hole;
}

HoleRegion hole_from_voxels(VoxelGrid& grid,
                            std::span<const std::array<std::int64_t, 3>> voxels,
                            std::size_t* skipped) {
  HoleRegion hole;
  std::size_t skip = 0;
  for (const auto& c : voxels) {
    if (c[0] < 0 || c[1] < 0 || c[2] < 0 || c[0] >= grid.dims()[0] || c[1] >= grid.dims()[1] ||
        c[2] >= grid.dims()[2]) {
      ++skip;
      continue;
    }
    const VoxelKey key = VoxelGrid::pack(c[0], c[1], c[2]);
    const auto* pts = grid.points_in(key);
    if (pts && !pts->empty()) {
      ++skip;
      continue;
    }
    grid.set_label(key, VoxelLabel::Hole);
    hole.voxels.insert(key);
  }
  if (skipped) *skipped = skip;
  return hole;
}

int occupancy_reach(const PointCloud& cloud, const KdTree& index, double voxel_edge) {
  if (cloud.size() < 2) return 1;
  const std::size_t sample = std::min<std::size_t>(cloud.size(), 256);
  const std::size_t step = std::max<std::size_t>(1, cloud.size() / sample);
  std::vector<double> gaps;
  gaps.reserve(sample);
  for (std::size_t i = 0; i < cloud.size(); i += step) {
    const auto two = index.knn(cloud.point(i), 2);  // self plus nearest other
    gaps.push_back((cloud.point(two[1]) - cloud.point(i)).norm());
  }
  std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
  const double median = gaps[gaps.size() / 2];
  return std::max(1, int(std::ceil(median / voxel_edge)));
}

FillFront compute_fill_front(const VoxelGrid& grid, const PointCloud& cloud,
                             const HoleRegion& hole, int reach) {
  (void)cloud;
  std::unordered_set<int> members;
  const std::int64_t r = std::max(1, reach);
  for (VoxelKey key : hole.voxels) {
    const auto c = VoxelGrid::unpack(key);
    for (std::int64_t di = -r; di <= r; ++di) {
      for (std::int64_t dj = -r; dj <= r; ++dj) {
        for (std::int64_t dk = -r; dk <= r; ++dk) {
          if (di == 0 && dj == 0 && dk == 0) continue;
          const std::int64_t i = c[0] + di, j = c[1] + dj, k = c[2] + dk;
          if (i < 0 || j < 0 || k < 0 || i >= grid.dims()[0] || j >= grid.dims()[1] ||
              k >= grid.dims()[2]) {
            continue;
          }
          const auto* pts = grid.points_in(VoxelGrid::pack(i, j, k));
          if (!pts) continue;
          members.insert(pts->begin(), pts->end());
        }
      }
    }
  }
  FillFront front;
  front.points.assign(members.begin(), members.end());
  std::sort(front.points.begin(), front.points.end());
  return front;
}

int confidence(const PointCloud& cloud, const KdTree& index, const Point3& p, int n,
               double voxel_edge) {
  (void)cloud;
  return count_in_cube(index, p, n, voxel_edge);
}

double data_term(const PointCloud& cloud, const KdTree& index, const Point3& p, int n,
                 double voxel_edge, double eps_d, bool* flagged) {
  if (flagged) *flagged = false;
  const Cube cube = extract_cube(cloud, index, p, n, voxel_edge);
  if (cube.size() < 3) {
    if (flagged) *flagged = true;
    return eps_d;
  }
  Point3 mean = Point3::Zero();
  for (const Point3& q : cube.resident_points) mean += q;
  mean /= double(cube.size());
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const Point3& q : cube.resident_points) {
    const Point3 d = q - mean;
    cov += d * d.transpose();
  }
  cov /= double(cube.size());

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
  const Eigen::Vector3d ev = eig.eigenvalues();  // ascending
  const double sum = ev.sum();
  const double sigma = sum > 0.0 ? std::max(0.0, ev[0]) / sum : 0.0;
  // sigma_ref = 1/3 is the isotropic maximum.
  return eps_d + (1.0 - eps_d) * std::min(1.0, 3.0 * sigma);
}

void compute_priorities(FillFront& front, const PointCloud& cloud, const KdTree& index, int n,
                        double voxel_edge, double eps_d) {
  front.priorities.resize(front.points.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < std::int64_t(front.points.size()); ++i) {
    const Point3& p = cloud.point(front.points[i]);
    const double d = data_term(cloud, index, p, n, voxel_edge, eps_d);
    const int c = confidence(cloud, index, p, n, voxel_edge);
    front.priorities[i] = d * double(c);
  }
}

void PriorityCache::update(FillFront& front, const PointCloud& cloud, const KdTree& index, int n,
                           double voxel_edge, double eps_d,
                           const std::optional<Aabb>& dirty_region, bool full_recompute) {
  front.priorities.resize(front.points.size());

  // A front point's cube sees the dirty region iff it lies within half the
  // cube edge of it; one voxel of slack absorbs boundary effects.
  Aabb dirty;
  if (dirty_region) dirty = dirty_region->dilated((0.5 * n + 1.0) * voxel_edge);

  std::vector<std::int64_t> stale;
  for (std::int64_t i = 0; i < std::int64_t(front.points.size()); ++i) {
    const int idx = front.points[i];
    auto it = cache_.find(idx);
    const bool hit = it != cache_.end();
    const bool in_dirty = dirty_region && dirty.contains(cloud.point(idx));
    if (full_recompute || !hit || in_dirty) {
      stale.push_back(i);
    } else {
      front.priorities[i] = it->second;
    }
  }

#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t s = 0; s < std::int64_t(stale.size()); ++s) {
    const std::int64_t i = stale[s];
    const Point3& p = cloud.point(front.points[i]);
    const double d = data_term(cloud, index, p, n, voxel_edge, eps_d);
    const int c = confidence(cloud, index, p, n, voxel_edge);
    front.priorities[i] = d * double(c);
  }
  for (std::int64_t i : stale) cache_[front.points[i]] = front.priorities[i];
}

int argmax_priority(const FillFront& front, const std::unordered_set<int>& masked) {
  int best = -1;
  for (std::size_t i = 0; i < front.points.size(); ++i) {
    if (masked.count(front.points[i])) continue;
    if (best < 0 || front.priorities[i] > front.priorities[best] ||
        (front.priorities[i] == front.priorities[best] &&
         front.points[i] < front.points[best])) {
      best = int(i);
    }
  }
  return best;
}

}  // namespace pcfill
