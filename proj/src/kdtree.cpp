// pcfill - exemplar-based hole filling for 3D point cloud geometry
// SPDX-License-Identifier: Apache-2.0

#include "pcfill/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pcfill {

namespace {
constexpr int kLeafSize = 8;
}

KdTree::KdTree(std::span<const Point3> pts) : pts_(pts.begin(), pts.end()) {
  order_.resize(pts_.size());
  std::iota(order_.begin(), order_.end(), 0);
  nodes_.reserve(pts_.empty() ? 0 : 2 * pts_.size() / kLeafSize + 2);
  if (!pts_.empty()) root_ = build(0, int(pts_.size()));
}

int KdTree::build(int begin, int end) {
  const int id = int(nodes_.size());
  nodes_.push_back({});
  if (end - begin <= kLeafSize) {
    // Ascending index order makes box collection deterministic.
    std::sort(order_.begin() + begin, order_.begin() + end);
    nodes_[id].begin = begin;
    nodes_[id].end = end;
    return id;
  }

  Aabb box;
  for (int i = begin; i < end; ++i) box.expand(pts_[order_[i]]);
  int axis = 0;
  box.extent().maxCoeff(&axis);

  const int mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](int a, int b) {
                     if (pts_[a][axis] != pts_[b][axis]) return pts_[a][axis] < pts_[b][axis];
                     return a < b;
                   });
  const double split = pts_[order_[mid]][axis];

  nodes_[id].axis = axis;
  nodes_[id].split = split;
  const int l = build(begin, mid);
  const int r = build(mid, end);
  nodes_[id].left = l;
  nodes_[id].right = r;
  return id;
}

void KdTree::nearest_rec(int node, const Point3& q, double& best_d2, int& best_idx) const {
  const Node& nd = nodes_[node];
  if (nd.axis < 0) {
    for (int i = nd.begin; i < nd.end; ++i) {
      const int idx = order_[i];
      const double d2 = (pts_[idx] - q).squaredNorm();
      if (d2 < best_d2 || (d2 == best_d2 && idx < best_idx)) {
        best_d2 = d2;
        best_idx = idx;
      }
    }
    return;
  }
  const double diff = q[nd.axis] - nd.split;
  const int near = diff < 0.0 ? nd.left : nd.right;
  const int far = diff < 0.0 ? nd.right : nd.left;
  nearest_rec(near, q, best_d2, best_idx);
  if (diff * diff <= best_d2) nearest_rec(far, q, best_d2, best_idx);
}

std::pair<int, double> KdTree::nearest(const Point3& q) const {
  if (empty()) throw EmptySet("nearest query on empty kd-tree");
  double best_d2 = std::numeric_limits<double>::infinity();
  int best_idx = -1;
  nearest_rec(root_, q, best_d2, best_idx);
  return {best_idx, std::sqrt(best_d2)};
}

void KdTree::knn_rec(int node, const Point3& q, int k,
                     std::vector<std::pair<double, int>>& heap) const {
  const Node& nd = nodes_[node];
  if (nd.axis < 0) {
    for (int i = nd.begin; i < nd.end; ++i) {
      const int idx = order_[i];
      const std::pair<double, int> cand{(pts_[idx] - q).squaredNorm(), idx};
      if (int(heap.size()) < k) {
        heap.push_back(cand);
        std::push_heap(heap.begin(), heap.end());
      } else if (cand < heap.front()) {
        std::pop_heap(heap.begin(), heap.end());
        heap.back() = cand;
        std::push_heap(heap.begin(), heap.end());
      }
    }
    return;
  }
  const double diff = q[nd.axis] - nd.split;
  const int near = diff < 0.0 ? nd.left : nd.right;
  const int far = diff < 0.0 ? nd.right : nd.left;
  knn_rec(near, q, k, heap);
  // <= keeps equidistant points reachable so the index tie-break stays exact.
  if (int(heap.size()) < k || diff * diff <= heap.front().first) knn_rec(far, q, k, heap);
}

std::vector<int> KdTree::knn(const Point3& q, int k) const {
  if (k > int(size())) throw InsufficientPoints("knn: k exceeds point count");
  std::vector<std::pair<double, int>> heap;
  heap.reserve(k);
  if (k > 0) knn_rec(root_, q, k, heap);
  std::sort(heap.begin(), heap.end());
  std::vector<int> out(heap.size());
  for (std::size_t i = 0; i < heap.size(); ++i) out[i] = heap[i].second;
  return out;
}

void KdTree::box_rec(int node, const Point3& bmin, const Point3& bmax,
                     std::vector<int>* out, int& count) const {
  const Node& nd = nodes_[node];
  if (nd.axis < 0) {
    for (int i = nd.begin; i < nd.end; ++i) {
      const int idx = order_[i];
      const Point3& p = pts_[idx];
      if ((p.array() >= bmin.array()).all() && (p.array() < bmax.array()).all()) {
        ++count;
        if (out) out->push_back(idx);
      }
    }
    return;
  }
  // Left may hold points equal to the split value (index tie-break), so <=.
  if (bmin[nd.axis] <= nd.split) box_rec(nd.left, bmin, bmax, out, count);
  if (bmax[nd.axis] > nd.split) box_rec(nd.right, bmin, bmax, out, count);
}

int KdTree::count_in_box(const Point3& bmin, const Point3& bmax) const {
  int count = 0;
  if (root_ >= 0) box_rec(root_, bmin, bmax, nullptr, count);
  return count;
}

void KdTree::collect_in_box(const Point3& bmin, const Point3& bmax, std::vector<int>& out) const {
  int count = 0;
  const std::size_t before = out.size();
  if (root_ >= 0) box_rec(root_, bmin, bmax, &out, count);
  std::sort(out.begin() + before, out.end());
}

}  // namespace pcfill
