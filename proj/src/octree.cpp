// pcfill - exemplar-based hole filling for 3D point cloud geometry
// SPDX-License-Identifier: Apache-2.0

#include "pcfill/octree.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace pcfill {

namespace {

struct OctreeState {
  const std::vector<Point3>* pts = nullptr;
  int depth_cap = kOctreeDepthCap;
  int max_leaf_depth = 0;
};

// Subdivides [first, last) in place. node_min/half describe the current cube.
void subdivide(OctreeState& st, std::vector<int>& idx, int first, int last,
               const Point3& node_min, double half, int depth) {
  const int count = last - first;
  if (count <= 1) {
    st.max_leaf_depth = std::max(st.max_leaf_depth, depth);
    return;
  }
  if (depth >= st.depth_cap) {
    throw DepthCapExceeded("octree depth cap reached; points are nearly coincident");
  }

  const Point3 center = node_min + Point3::Constant(half);
  auto octant = [&](int i) {
    const Point3& p = (*st.pts)[i];
    return (p.x() >= center.x() ? 1 : 0) | (p.y() >= center.y() ? 2 : 0) |
           (p.z() >= center.z() ? 4 : 0);
  };

  // Three binary partitions give the eight octant ranges.
  std::array<int, 9> bounds{};
  bounds[0] = first;
  bounds[8] = last;
  auto mid = std::partition(idx.begin() + first, idx.begin() + last,
                            [&](int i) { return (octant(i) & 4) == 0; });
  bounds[4] = int(mid - idx.begin());
  for (int hi : {0, 4}) {
    auto m2 = std::partition(idx.begin() + bounds[hi], idx.begin() + bounds[hi + 4],
                             [&](int i) { return (octant(i) & 2) == 0; });
    bounds[hi + 2] = int(m2 - idx.begin());
    for (int lo : {0, 2}) {
      auto m1 = std::partition(idx.begin() + bounds[hi + lo], idx.begin() + bounds[hi + lo + 2],
                               [&](int i) { return (octant(i) & 1) == 0; });
      bounds[hi + lo + 1] = int(m1 - idx.begin());
    }
  }

  const double child_half = 0.5 * half;
  for (int o = 0; o < 8; ++o) {
    Point3 child_min = node_min;
    if (o & 1) child_min.x() += half;
    if (o & 2) child_min.y() += half;
    if (o & 4) child_min.z() += half;
    subdivide(st, idx, bounds[o], bounds[o + 1], child_min, child_half, depth + 1);
  }
}

}  // namespace

double calibrate_voxel_size(const PointCloud& cloud, int depth_cap) {
  if (cloud.size() < 2) {
    throw DegenerateCloud("voxel calibration needs at least 2 points");
  }
  if (cloud.has_exact_duplicates()) {
    throw DuplicatePoints("cloud contains exactly coincident points; deduplicate first");
  }

  const Aabb& box = cloud.bbox();
  const double edge = box.extent().maxCoeff();
  if (!(edge > 0.0)) {
    throw DuplicatePoints("cloud bounding box has zero extent");
  }

  std::vector<int> idx(cloud.size());
  std::iota(idx.begin(), idx.end(), 0);

  OctreeState st;
  st.pts = &cloud.points();
  st.depth_cap = depth_cap;
  subdivide(st, idx, 0, int(cloud.size()), box.min, 0.5 * edge, 0);

  return edge * std::pow(2.0, -st.max_leaf_depth);
}

bool PointCloud::has_exact_duplicates() const {
  std::vector<int> order(points_.size());
  std::iota(order.begin(), order.end(), 0);
  auto lex = [&](int a, int b) {
    const Point3& pa = points_[a];
    const Point3& pb = points_[b];
    if (pa.x() != pb.x()) return pa.x() < pb.x();
    if (pa.y() != pb.y()) return pa.y() < pb.y();
    return pa.z() < pb.z();
  };
  std::sort(order.begin(), order.end(), lex);
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (points_[order[i - 1]] == points_[order[i]]) return true;
  }
  return false;
}

PointCloud PointCloud::deduplicated(std::size_t* removed) const {
  std::vector<int> order(points_.size());
  std::iota(order.begin(), order.end(), 0);
  auto lex = [&](int a, int b) {
    const Point3& pa = points_[a];
    const Point3& pb = points_[b];
    if (pa.x() != pb.x()) return pa.x() < pb.x();
    if (pa.y() != pb.y()) return pa.y() < pb.y();
    return pa.z() < pb.z();
  };
  std::sort(order.begin(), order.end(), lex);

  std::vector<char> drop(points_.size(), 0);
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (points_[order[i - 1]] == points_[order[i]]) {
      // Keep the earliest index of each duplicate run.
      drop[std::max(order[i - 1], order[i])] = 1;
      order[i] = std::min(order[i - 1], order[i]);
    }
  }
  std::vector<Point3> kept;
  kept.reserve(points_.size());
  std::size_t dropped = 0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (drop[i]) {
      ++dropped;
    } else {
      kept.push_back(points_[i]);
    }
  }
  if (removed) *removed = dropped;
  return PointCloud(std::move(kept));
}

}  // namespace pcfill
