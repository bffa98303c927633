// pcfill - exemplar-based hole filling for 3D point cloud geometry
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <utility>
#include <vector>

#include "pcfill/types.hpp"

namespace pcfill {

/// Static kd-tree over a point set. Built once, queried concurrently.
///
/// All queries are deterministic: distance ties are broken by the lowest
/// point index.
class KdTree {
 public:
  KdTree() = default;
  explicit KdTree(std::span<const Point3> pts);

  bool empty() const { return pts_.empty(); }
  std::size_t size() const { return pts_.size(); }

  /// Index and Euclidean distance of the nearest point to q.
  std::pair<int, double> nearest(const Point3& q) const;

  /// Indices of the k nearest points, ordered by (distance, index).
  /// Throws InsufficientPoints when k exceeds the tree size.
  std::vector<int> knn(const Point3& q, int k) const;

  /// Number of points inside the half-open box [bmin, bmax).
  int count_in_box(const Point3& bmin, const Point3& bmax) const;

  /// Appends indices of points inside [bmin, bmax) to out (ascending index).
  void collect_in_box(const Point3& bmin, const Point3& bmax, std::vector<int>& out) const;

 private:
  struct Node {
    int axis = -1;        // -1 marks a leaf
    double split = 0.0;
    int left = -1, right = -1;
    int begin = 0, end = 0;  // index range into order_ (leaves only)
  };

  int build(int begin, int end);

  void nearest_rec(int node, const Point3& q, double& best_d2, int& best_idx) const;
  void knn_rec(int node, const Point3& q, int k,
               std::vector<std::pair<double, int>>& heap) const;
  void box_rec(int node, const Point3& bmin, const Point3& bmax,
               std::vector<int>* out, int& count) const;

  std::vector<Point3> pts_;
  std::vector<int> order_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace pcfill
