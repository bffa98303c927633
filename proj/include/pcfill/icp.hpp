// pcfill - exemplar-based hole filling for 3D point cloud geometry
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>

#include "pcfill/cube.hpp"
#include "pcfill/types.hpp"

namespace pcfill {

struct IcpParams {
  int max_sweeps = 30;
  double tol = 1e-12;      // absolute OHD improvement that still counts as progress
  bool restarts = true;    // also try 90-degree starts about each axis
  int stall_patience = 3;  // sweeps without tol-improvement before giving up
};

/// Rotation about a fixed pivot, with the OHD it achieved.
struct RigidAlignment {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Point3 pivot = Point3::Zero();
  double score = 0.0;                // aligned OHD, template -> candidate
  std::vector<double> sweep_scores;  // best score after each accepted sweep

  // Translate the candidate center onto the pivot, then rotate about it.
  Point3 apply(const Point3& candidate_point, const Point3& candidate_center) const {
    return pivot + rotation * (candidate_point - candidate_center);
  }
};

/// Positions of the candidate residents after translating its center onto the
/// pivot and applying the alignment rotation about the pivot.
std::vector<Point3> aligned_candidate_points(const Cube& candidate, const RigidAlignment& a);

/// Aligns a candidate cube to a template cube.
///
/// The candidate is translated so its center lands on the template center,
/// then rotation-only ICP runs about that pivot: nearest template-to-candidate
/// correspondences, an orthogonal-Procrustes rotation update (SVD with
/// reflection correction), OHD evaluated each sweep, best-OHD rotation kept.
/// Stops when a sweep improves OHD by less than params.tol.
///
/// Throws DegenerateGeometry when either cube has fewer than 3 points or all
/// its points are collinear. `warm_start`, when given, seeds the first sweep.
RigidAlignment align_rigid(const Cube& tmpl, const Cube& candidate, const IcpParams& params = {},
                           const Eigen::Matrix3d* warm_start = nullptr);

}  // namespace pcfill
