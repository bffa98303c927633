// pcfill - exemplar-based hole filling for 3D point cloud geometry
// SPDX-License-Identifier: Apache-2.0

#include "pcfill/voxel_grid.hpp"

#include <cmath>

namespace pcfill {

VoxelGrid::VoxelGrid(const Aabb& cloud_bbox, double voxel_edge, int pad_voxels) {
  if (!(voxel_edge > 0.0)) throw Error("voxel edge must be positive");
  edge_ = voxel_edge;
  const double cube = cloud_bbox.valid() ? cloud_bbox.extent().maxCoeff() : 0.0;
  const std::int64_t inner = std::max<std::int64_t>(1, std::int64_t(std::ceil(cube / voxel_edge - 1e-9)));
  const std::int64_t d = inner + 2 * pad_voxels;
  if (d >= (std::int64_t(1) << 21)) throw Error("voxel grid too fine to index");
  dims_ = {d, d, d};
  origin_ = (cloud_bbox.valid() ? Point3(cloud_bbox.min) : Point3::Zero()) -
            Point3::Constant(pad_voxels * voxel_edge);
}

VoxelGrid VoxelGrid::build(const PointCloud& cloud, double voxel_edge, int pad_voxels) {
  VoxelGrid grid(cloud.bbox(), voxel_edge, pad_voxels);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    grid.add_point(int(i), cloud.point(i));
  }
  return grid;
}

std::optional<VoxelKey> VoxelGrid::key_of(const Point3& p) const {
  std::array<std::int64_t, 3> c;
  for (int a = 0; a < 3; ++a) {
    c[a] = std::int64_t(std::floor((p[a] - origin_[a]) / edge_));
    if (c[a] < 0 || c[a] >= dims_[a]) return std::nullopt;
  }
  return pack(c[0], c[1], c[2]);
}

Point3 VoxelGrid::cell_min(VoxelKey key) const {
  const auto c = unpack(key);
  return origin_ + edge_ * Point3(double(c[0]), double(c[1]), double(c[2]));
}

VoxelLabel VoxelGrid::label(VoxelKey key) const {
  auto it = labels_.find(key);
  return it == labels_.end() ? VoxelLabel::Empty : it->second;
}

void VoxelGrid::set_label(VoxelKey key, VoxelLabel label) {
  const VoxelLabel old = this->label(key);
  if (old == label) return;
  if (old == VoxelLabel::Source) --source_count_;
  if (old == VoxelLabel::Hole) --hole_count_;
  if (label == VoxelLabel::Empty) {
    labels_.erase(key);
  } else {
    labels_[key] = label;
    if (label == VoxelLabel::Source) ++source_count_;
    if (label == VoxelLabel::Hole) ++hole_count_;
  }
}

std::size_t VoxelGrid::count(VoxelLabel label) const {
  switch (label) {
    case VoxelLabel::Source:
      return source_count_;
    case VoxelLabel::Hole:
      return hole_count_;
    default:
      return total_voxels() - source_count_ - hole_count_;
  }
}

bool VoxelGrid::add_point(int index, const Point3& p) {
  const auto key = key_of(p);
  if (!key) return false;
  points_[*key].push_back(index);
  set_label(*key, VoxelLabel::Source);
  return true;
}

const std::vector<int>* VoxelGrid::points_in(VoxelKey key) const {
  auto it = points_.find(key);
  return it == points_.end() ? nullptr : &it->second;
}

void VoxelGrid::neighbors26(VoxelKey key, std::vector<VoxelKey>& out) const {
  out.clear();
  const auto c = unpack(key);
  for (std::int64_t di = -1; di <= 1; ++di) {
    for (std::int64_t dj = -1; dj <= 1; ++dj) {
      for (std::int64_t dk = -1; dk <= 1; ++dk) {
        if (di == 0 && dj == 0 && dk == 0) continue;
        const std::int64_t i = c[0] + di, j = c[1] + dj, k = c[2] + dk;
        if (i < 0 || j < 0 || k < 0 || i >= dims_[0] || j >= dims_[1] || k >= dims_[2]) continue;
        out.push_back(pack(i, j, k));
      }
    }
  }
}

}  // namespace pcfill
