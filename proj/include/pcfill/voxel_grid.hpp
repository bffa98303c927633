// pcfill - exemplar-based hole filling for 3D point cloud geometry
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "pcfill/types.hpp"

namespace pcfill {

/// Packed (i, j, k) voxel coordinates, 21 bits per axis.
using VoxelKey = std::uint64_t;

enum class VoxelLabel : std::uint8_t { Empty, Source, Hole };

/// Cubic lattice over the (padded) cubic bounding volume of a cloud.
///
/// Storage is sparse: only Source and Hole voxels are materialized, Empty is
/// implicit. Every registered cloud point lives in exactly one Source voxel;
/// Hole voxels never contain points.
class VoxelGrid {
 public:
  VoxelGrid() = default;
  VoxelGrid(const Aabb& cloud_bbox, double voxel_edge, int pad_voxels);

  /// Builds the grid and registers every cloud point (labels become Source).
  static VoxelGrid build(const PointCloud& cloud, double voxel_edge, int pad_voxels = 17);

  const Point3& origin() const { return origin_; }
  double edge() const { return edge_; }
  const std::array<std::int64_t, 3>& dims() const { return dims_; }
  std::size_t total_voxels() const {
    return std::size_t(dims_[0]) * std::size_t(dims_[1]) * std::size_t(dims_[2]);
  }

  static VoxelKey pack(std::int64_t i, std::int64_t j, std::int64_t k) {
    return (VoxelKey(i) << 42) | (VoxelKey(j) << 21) | VoxelKey(k);
  }
  static std::array<std::int64_t, 3> unpack(VoxelKey key) {
    constexpr VoxelKey mask = (VoxelKey(1) << 21) - 1;
    return {std::int64_t(key >> 42), std::int64_t((key >> 21) & mask), std::int64_t(key & mask)};
  }

  /// Voxel containing p, or nullopt when p is outside the grid.
  std::optional<VoxelKey> key_of(const Point3& p) const;

  /// Minimum corner of a voxel cell; the cell is [corner, corner + edge)^3.
  Point3 cell_min(VoxelKey key) const;

  VoxelLabel label(VoxelKey key) const;
  void set_label(VoxelKey key, VoxelLabel label);
  std::size_t count(VoxelLabel label) const;

  /// Registers a cloud point; its voxel becomes Source.
  /// Returns false when the point falls outside the grid (not registered).
  bool add_point(int index, const Point3& p);

  /// Point indices resident in a voxel, or nullptr when none.
  const std::vector<int>* points_in(VoxelKey key) const;

  /// Keys of the up-to-26 in-grid neighbors of a voxel.
  void neighbors26(VoxelKey key, std::vector<VoxelKey>& out) const;

  const std::unordered_map<VoxelKey, VoxelLabel>& labeled_voxels() const { return labels_; }

 private:
  Point3 origin_ = Point3::Zero();
  double edge_ = 0.0;
  std::array<std::int64_t, 3> dims_{0, 0, 0};
  std::unordered_map<VoxelKey, VoxelLabel> labels_;
  std::unordered_map<VoxelKey, std::vector<int>> points_;
  std::size_t source_count_ = 0;
  std::size_t hole_count_ = 0;
};

}  // namespace pcfill
