// pcfill - exemplar-based hole filling for 3D point cloud geometry
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "pcfill/frontier.hpp"
#include "pcfill/matcher.hpp"
#include "pcfill/nrt.hpp"
#include "pcfill/types.hpp"

namespace pcfill {

enum class Variant { Base, BaseAcs, BaseNrt, BaseAcsNrt };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& name);

struct FillConfig {
  Variant variant = Variant::BaseAcsNrt;
  int base_n = 5;         // template size; fixed size for Base variants, seed for ACS
  double lambda = 1.0;    // NRT smoothness weight
  double mu = 1e-6;       // NRT identity regularizer
  double t_factor = 1.0001;
  int n_max = 15;
  int stride = 0;         // 0 = auto
  int max_iterations = 0; // 0 = 10 x initial hole voxel count
  int knn_k = 5;          // NRT smoothness graph degree
  int max_icp = 30;
  double icp_tol_scale = 1e-4;  // ICP stop tolerance = scale * voxel_edge
  double eps_d = kDataTermFloor;
  bool icp_restarts = true;
  bool warm_start = true;
  bool full_priority_recompute = false;

  bool uses_acs() const { return variant == Variant::BaseAcs || variant == Variant::BaseAcsNrt; }
  bool uses_nrt() const { return variant == Variant::BaseNrt || variant == Variant::BaseAcsNrt; }

  /// Paper defaults: fixed 10-voxel cubes for the Base variants, 5-voxel seed
  /// for adaptive sizing.
  static FillConfig for_variant(Variant v) {
    FillConfig cfg;
    cfg.variant = v;
    cfg.base_n = cfg.uses_acs() ? 5 : 10;
    return cfg;
  }
};

enum class Termination {
  FrontCovered,   // the template cube contained the whole fill front
  FrontEmpty,     // no source point borders the hole
  MaxIterations,  // iteration budget exhausted
  NoProgress      // every front point is masked or matchless
};

std::string to_string(Termination t);

struct IterationRecord {
  int iteration = 0;
  int phat_index = -1;  // cloud index of the chosen front point
  Point3 phat = Point3::Zero();
  Point3 qhat = Point3::Zero();
  int n_star = 0;
  double pre_ohd = 0.0;   // aligned OHD of the rigid match
  double post_ohd = 0.0;  // OHD after refinement (equals pre_ohd without NRT)
  int transferred = 0;
};

struct FillReport {
  int iterations = 0;
  int points_transferred = 0;
  int duplicates_dropped = 0;
  std::size_t initial_hole_voxels = 0;
  std::size_t remaining_hole_voxels = 0;
  Termination termination = Termination::FrontEmpty;
  std::vector<IterationRecord> records;

  /// One JSON object per iteration plus a trailing summary object.
  std::string to_json_lines() const;
};

struct FillResult {
  PointCloud cloud;
  FillReport report;
  /// Provenance: true for points appended by the fill, aligned with cloud.
  std::vector<char> filled_flag;
};

/// Unmatched candidate points, in candidate order: the transfer set
/// (refined candidate minus the matched set M).
std::vector<Point3> transfer_points(std::span<const Point3> refined_candidate,
                                    const MatchPairs& pairs);

/// Runs the full fill loop on a copy of the cloud. The grid and hole must be
/// consistent with the cloud (as produced by punch/hole resolution).
FillResult fill_hole(const PointCloud& cloud, VoxelGrid grid, HoleRegion hole,
                     const FillConfig& config);

}  // namespace pcfill
