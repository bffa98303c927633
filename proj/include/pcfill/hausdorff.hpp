// pcfill - exemplar-based hole filling for 3D point cloud geometry
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "pcfill/kdtree.hpp"
#include "pcfill/types.hpp"

namespace pcfill {

/// One-sided Hausdorff distance from `from` to `to`:
/// max over a in `from` of min over b in `to` of |a - b|.
///
/// Not symmetric. Throws EmptySet when either set is empty.
double ohd(std::span<const Point3> from, std::span<const Point3> to);

/// OHD against a prebuilt index over the `to` set.
double ohd(std::span<const Point3> from, const KdTree& to_index);

}  // namespace pcfill
