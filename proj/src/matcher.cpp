// pcfill - exemplar-based hole filling for 3D point cloud geometry
// SPDX-License-Identifier: Apache-2.0

#include "pcfill/matcher.hpp"

#include <algorithm>
#include <cmath>

#include "pcfill/cube.hpp"

namespace pcfill {

int auto_stride(std::size_t cloud_size) {
  if (cloud_size < 50000) return 1;
  return int((cloud_size + 49999) / 50000);
}

std::vector<int> enumerate_candidates(const PointCloud& cloud, const KdTree& index,
                                      const VoxelGrid& grid, const Point3& pivot, int n,
                                      int stride) {
  if (stride <= 0) stride = auto_stride(cloud.size());
  const double edge = grid.edge();
  const int tmpl_count = count_in_cube(index, pivot, n, edge);

  std::vector<int> centers;
  for (std::size_t i = 0; i < cloud.size(); i += stride) {
    const Point3& q = cloud.point(i);
    if (count_in_cube(index, q, n, edge) < tmpl_count) continue;
    if (cube_overlaps_label(grid, q, n, VoxelLabel::Hole)) continue;
    centers.push_back(int(i));
  }
  if (centers.empty()) {
    throw NoCandidates("no candidate cube matches the template's density outside the hole");
  }
  return centers;
}

std::vector<ScoredCandidate> score_candidates(const PointCloud& cloud, const KdTree& index,
                                              const Cube& tmpl, std::span<const int> centers,
                                              const IcpParams& icp) {
  std::vector<ScoredCandidate> scored(centers.size());
  std::vector<char> ok(centers.size(), 0);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t i = 0; i < std::int64_t(centers.size()); ++i) {
    const Cube cand =
        extract_cube(cloud, index, cloud.point(centers[i]), tmpl.n, tmpl.voxel_edge);
    try {
      scored[i] = {centers[i], align_rigid(tmpl, cand, icp)};
      ok[i] = 1;
    } catch (const DegenerateGeometry&) {
      // unusable candidate; dropped below
    }
  }
  std::vector<ScoredCandidate> out;
  out.reserve(centers.size());
  for (std::size_t i = 0; i < centers.size(); ++i) {
    if (ok[i]) out.push_back(std::move(scored[i]));
  }
  return out;
}

namespace {

const ScoredCandidate* min_score(const std::vector<ScoredCandidate>& scored) {
  const ScoredCandidate* best = nullptr;
  for (const auto& s : scored) {
    if (!best || s.align.score < best->align.score ||
        (s.align.score == best->align.score && s.center < best->center)) {
      best = &s;
    }
  }
  return best;
}

}  // namespace

MatchResult best_match_fixed_n(const PointCloud& cloud, const KdTree& index,
                               const VoxelGrid& grid, const Point3& pivot, int n,
                               const MatchParams& params) {
  const double edge = grid.edge();
  const Cube tmpl = extract_cube(cloud, index, pivot, n, edge);
  const auto centers = enumerate_candidates(cloud, index, grid, pivot, n, params.stride);
  const auto scored = score_candidates(cloud, index, tmpl, centers, params.icp);
  const ScoredCandidate* best = min_score(scored);
  if (!best) throw NoCandidates("every candidate was geometrically degenerate");
  return {best->center, n, best->align};
}

MatchResult match_adaptive(const PointCloud& cloud, const KdTree& index, const VoxelGrid& grid,
                           const Point3& pivot, const MatchParams& params) {
  const double edge = grid.edge();
  int n = params.base_n;

  const Cube tmpl0 = extract_cube(cloud, index, pivot, n, edge);
  const auto centers = enumerate_candidates(cloud, index, grid, pivot, n, params.stride);
  auto survivors = score_candidates(cloud, index, tmpl0, centers, params.icp);
  const ScoredCandidate* base_best = min_score(survivors);
  if (!base_best) throw NoCandidates("every candidate was geometrically degenerate");

  const double epsilon = base_best->align.score;
  const double threshold = params.t_factor * epsilon;

  std::erase_if(survivors, [&](const ScoredCandidate& s) { return s.align.score > threshold; });
  // The base best always satisfies its own threshold, so survivors is nonempty.

  while (survivors.size() > 1 && n < params.n_max) {
    // Snapshot: "previous size" fallback if the next round evicts everyone.
    const ScoredCandidate prev_best = *min_score(survivors);
    const int prev_n = n;

    n += 2;
    const Cube tmpl = extract_cube(cloud, index, pivot, n, edge);

    std::vector<ScoredCandidate> next(survivors.size());
    std::vector<char> keep(survivors.size(), 0);
#pragma omp parallel for schedule(dynamic, 4)
    for (std::int64_t i = 0; i < std::int64_t(survivors.size()); ++i) {
      const Point3& q = cloud.point(survivors[i].center);
      // A grown cube that reaches into the hole no longer lies inside the
      // source region.
      if (cube_overlaps_label(grid, q, n, VoxelLabel::Hole)) continue;
      const Cube cand = extract_cube(cloud, index, q, n, edge);
      try {
        const Eigen::Matrix3d* seed =
            params.warm_start ? &survivors[i].align.rotation : nullptr;
        RigidAlignment a = align_rigid(tmpl, cand, params.icp, seed);
        if (a.score > threshold) continue;
        next[i] = {survivors[i].center, std::move(a)};
        keep[i] = 1;
      } catch (const DegenerateGeometry&) {
        // evicted
      }
    }
    std::vector<ScoredCandidate> filtered;
    filtered.reserve(next.size());
    for (std::size_t i = 0; i < next.size(); ++i) {
      if (keep[i]) filtered.push_back(std::move(next[i]));
    }

    if (filtered.empty()) {
      return {prev_best.center, prev_n, prev_best.align};
    }
    survivors = std::move(filtered);
  }

  const ScoredCandidate winner = *min_score(survivors);
  return {winner.center, n, winner.align};
}

}  // namespace pcfill
