// pcfill - exemplar-based hole filling for 3D point cloud geometry
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "pcfill/types.hpp"

namespace pcfill {

/// Normalized symmetric Hausdorff distance:
///   max(ohd(reconstructed, original), ohd(original, reconstructed)) / volume.
/// Units are length/volume, taken literally. Throws EmptySet on empty inputs
/// and DegenerateCloud when volume is not positive.
double nshd(std::span<const Point3> reconstructed, std::span<const Point3> original,
            double volume);

/// NSHD over full clouds; the normalizing volume is the original cloud's
/// axis-aligned bounding box (the same normalizer for every variant).
double nshd_full(const PointCloud& reconstructed, const PointCloud& original);

/// Hole-local NSHD: both sets are restricted to the hole box dilated by two
/// voxel edges; the normalizer stays the original cloud's bounding volume.
/// Throws EmptySet when either restriction is empty.
double nshd_local(const PointCloud& reconstructed, const PointCloud& original,
                  const Aabb& hole_box, double voxel_edge);

}  // namespace pcfill
