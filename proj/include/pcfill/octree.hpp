// pcfill - exemplar-based hole filling for 3D point cloud geometry
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "pcfill/types.hpp"

namespace pcfill {

/// Default hard cap on octree subdivision depth. Guards against
/// near-coincident points; hitting the cap raises DepthCapExceeded.
inline constexpr int kOctreeDepthCap = 21;

/// Calibrates the voxel edge length for a cloud.
///
/// Octree-partitions the cubic bounding box until every point resides in its
/// own leaf; a node stops subdividing once it holds at most one point. The
/// returned edge is the edge length of the smallest leaf produced anywhere,
/// i.e. bounding-cube-edge * 2^-d where d is the deepest subdivision level.
///
/// Throws DegenerateCloud (< 2 points), DuplicatePoints (exactly coincident
/// points) or DepthCapExceeded.
double calibrate_voxel_size(const PointCloud& cloud, int depth_cap = kOctreeDepthCap);

}  // namespace pcfill
