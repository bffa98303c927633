// pcfill - exemplar-based hole filling for 3D point cloud geometry
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "pcfill/icp.hpp"
#include "pcfill/kdtree.hpp"
#include "pcfill/types.hpp"
#include "pcfill/voxel_grid.hpp"

namespace pcfill {

struct MatchParams {
  int base_n = 5;            // seed cube size for adaptive matching
  double t_factor = 1.0001;  // threshold T = t_factor * epsilon
  int n_max = 15;            // hard cap on adaptive growth
  int stride = 0;            // candidate subsampling; 0 = auto from cloud size
  bool warm_start = true;    // seed re-alignment at the next size from the previous rotation
  IcpParams icp;
};

/// Stride used when MatchParams.stride is 0: every point below 50k, then
/// proportionally coarser.
int auto_stride(std::size_t cloud_size);

/// Candidate cube centers for a template centered at `pivot`:
/// source points whose n-cube overlaps no Hole voxel and holds at least as
/// many points as the template cube, visited with the given stride.
/// Throws NoCandidates when empty.
std::vector<int> enumerate_candidates(const PointCloud& cloud, const KdTree& index,
                                      const VoxelGrid& grid, const Point3& pivot, int n,
                                      int stride);

struct ScoredCandidate {
  int center;  // cloud index of the candidate center
  RigidAlignment align;
};

/// Aligns every candidate against the template. Degenerate candidates are
/// dropped. Order follows the input centers; evaluation may be concurrent but
/// results are deterministic.
std::vector<ScoredCandidate> score_candidates(const PointCloud& cloud, const KdTree& index,
                                              const Cube& tmpl, std::span<const int> centers,
                                              const IcpParams& icp);

struct MatchResult {
  int center = -1;  // cloud index of the winning center
  int n = 0;        // cube size the match was made at
  RigidAlignment align;
};

/// Best match at a fixed cube size: the scored candidate with the smallest
/// aligned OHD, ties by lowest center index. Throws NoCandidates.
MatchResult best_match_fixed_n(const PointCloud& cloud, const KdTree& index,
                               const VoxelGrid& grid, const Point3& pivot, int n,
                               const MatchParams& params);

/// Adaptive-cube-size matching.
///
/// Finds the best match at the base size with error epsilon, keeps every
/// candidate within T = t_factor * epsilon, then grows the cube two voxels at
/// a time, re-aligning survivors and evicting those whose error exceeds T
/// (or whose grown cube reaches into the hole). A single survivor is the
/// match at the grown size; if all are evicted the best of the previous size
/// wins; at n_max the lowest-error survivor wins.
MatchResult match_adaptive(const PointCloud& cloud, const KdTree& index, const VoxelGrid& grid,
                           const Point3& pivot, const MatchParams& params);

}  // namespace pcfill
