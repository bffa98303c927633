// pcfill - exemplar-based hole filling for 3D point cloud geometry
// SPDX-License-Identifier: Apache-2.0

#include "pcfill/icp.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/Geometry>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <memory>

namespace pcfill {

namespace {

// Cubes with all points collinear leave the rotation underdetermined.
bool is_collinear(const std::vector<Point3>& pts) {
  Point3 mean = Point3::Zero();
  for (const Point3& p : pts) mean += p;
  mean /= double(pts.size());
  Eigen::Matrix3d scatter = Eigen::Matrix3d::Zero();
  for (const Point3& p : pts) {
    const Point3 d = p - mean;
    scatter += d * d.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(scatter);
  const Eigen::Vector3d ev = eig.eigenvalues();  // ascending
  return ev[2] <= 0.0 || ev[1] <= 1e-12 * ev[2];
}

Eigen::Matrix3d procrustes_rotation(const std::vector<Point3>& tmpl_local,
                                    const std::vector<Point3>& cand_local,
                                    const std::vector<int>& corr) {
  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  for (std::size_t i = 0; i < tmpl_local.size(); ++i) {
    h += cand_local[corr[i]] * tmpl_local[i].transpose();
  }
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d r = svd.matrixV() * svd.matrixU().transpose();
  if (r.determinant() < 0.0) {
    Eigen::Matrix3d flip = Eigen::Matrix3d::Identity();
    flip(2, 2) = -1.0;
    r = svd.matrixV() * flip * svd.matrixU().transpose();
  }
  return r;
}

Eigen::Matrix3d principal_axes(const std::vector<Point3>& pts) {
  Point3 mean = Point3::Zero();
  for (const Point3& p : pts) mean += p;
  mean /= double(pts.size());
  Eigen::Matrix3d scatter = Eigen::Matrix3d::Zero();
  for (const Point3& p : pts) {
    const Point3 d = p - mean;
    scatter += d * d.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(scatter);
  return eig.eigenvectors();
}

struct SweepEval {
  std::vector<int> corr;  // per template point: index of nearest candidate point
  double score = 0.0;     // OHD under the evaluated rotation
};

// One correspondence pass. Rotating the query into the candidate frame
// (R^T (x - pivot)) lets the static candidate index serve every sweep.
SweepEval evaluate(const std::vector<Point3>& tmpl_local, const std::vector<Point3>& cand_local,
                   const KdTree* cand_index, const Eigen::Matrix3d& r) {
  SweepEval ev;
  ev.corr.resize(tmpl_local.size());
  const Eigen::Matrix3d rt = r.transpose();
  double worst2 = 0.0;
  for (std::size_t i = 0; i < tmpl_local.size(); ++i) {
    const Point3 q = rt * tmpl_local[i];
    int best = 0;
    double best2 = std::numeric_limits<double>::infinity();
    if (cand_index) {
      const auto [idx, dist] = cand_index->nearest(q);
      best = idx;
      best2 = dist * dist;
    } else {
      for (std::size_t j = 0; j < cand_local.size(); ++j) {
        const double d2 = (cand_local[j] - q).squaredNorm();
        if (d2 < best2) {
          best2 = d2;
          best = int(j);
        }
      }
    }
    ev.corr[i] = best;
    worst2 = std::max(worst2, best2);
  }
  ev.score = std::sqrt(worst2);
  return ev;
}

}  // namespace

std::vector<Point3> aligned_candidate_points(const Cube& candidate, const RigidAlignment& a) {
  std::vector<Point3> out;
  out.reserve(candidate.resident_points.size());
  for (const Point3& y : candidate.resident_points) {
    out.push_back(a.apply(y, candidate.center));
  }
  return out;
}

RigidAlignment align_rigid(const Cube& tmpl, const Cube& candidate, const IcpParams& params,
                           const Eigen::Matrix3d* warm_start) {
  if (tmpl.size() < 3 || candidate.size() < 3) {
    throw DegenerateGeometry("align_rigid: cube has fewer than 3 points");
  }
  if (is_collinear(tmpl.resident_points) || is_collinear(candidate.resident_points)) {
    throw DegenerateGeometry("align_rigid: collinear cube leaves rotation underdetermined");
  }

  // Pivot-local frames: template about its center, candidate about its own
  // center (the translation q -> p-hat is implicit).
  std::vector<Point3> tmpl_local(tmpl.size()), cand_local(candidate.size());
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    tmpl_local[i] = tmpl.resident_points[i] - tmpl.center;
  }
  for (std::size_t j = 0; j < candidate.size(); ++j) {
    cand_local[j] = candidate.resident_points[j] - candidate.center;
  }

  std::unique_ptr<KdTree> index;
  if (cand_local.size() > 256) index = std::make_unique<KdTree>(cand_local);

  std::vector<Eigen::Matrix3d> starts;
  if (warm_start) starts.push_back(*warm_start);
  starts.push_back(Eigen::Matrix3d::Identity());
  if (params.restarts) {
    for (int axis = 0; axis < 3; ++axis) {
      starts.push_back(
          Eigen::AngleAxisd(M_PI / 2.0, Eigen::Vector3d::Unit(axis)).toRotationMatrix());
    }
    // Principal-axis alignments (proper-rotation sign combinations) give a
    // correspondence-free global seed that escapes ICP's local minima.
    const Eigen::Matrix3d u_t = principal_axes(tmpl.resident_points);
    const Eigen::Matrix3d u_c = principal_axes(candidate.resident_points);
    for (int sx = -1; sx <= 1; sx += 2) {
      for (int sy = -1; sy <= 1; sy += 2) {
        for (int sz = -1; sz <= 1; sz += 2) {
          const Eigen::Matrix3d r0 =
              u_t * Eigen::Vector3d(double(sx), double(sy), double(sz)).asDiagonal() *
              u_c.transpose();
          if (r0.determinant() > 0.0) starts.push_back(r0);
        }
      }
    }
  }

  RigidAlignment best;
  best.pivot = tmpl.center;
  best.score = std::numeric_limits<double>::infinity();

  for (const Eigen::Matrix3d& r0 : starts) {
    Eigen::Matrix3d r = r0;
    SweepEval ev = evaluate(tmpl_local, cand_local, index.get(), r);
    double run_best = ev.score;
    Eigen::Matrix3d run_best_r = r;
    std::vector<double> trace{run_best};

    // Classic ICP iterates on the correspondences even when the max-metric
    // stalls for a sweep; the best-OHD rotation is what gets returned.
    int stall = 0;
    for (int sweep = 0; run_best > 0.0 && sweep < params.max_sweeps; ++sweep) {
      const Eigen::Matrix3d r_new = procrustes_rotation(tmpl_local, cand_local, ev.corr);
      const SweepEval ev_new = evaluate(tmpl_local, cand_local, index.get(), r_new);
      if (ev_new.score < run_best - params.tol) {
        run_best = ev_new.score;
        run_best_r = r_new;
        trace.push_back(run_best);
        stall = 0;
      } else if (++stall >= std::max(1, params.stall_patience)) {
        break;
      }
      const bool fixed_point = (r_new - r).norm() < 1e-15;
      r = r_new;
      ev = ev_new;
      if (fixed_point) break;
    }

    if (run_best < best.score) {
      best.rotation = run_best_r;
      best.score = run_best;
      best.sweep_scores = std::move(trace);
    }
    // A perfect match cannot be improved by further restarts.
    if (best.score <= params.tol) break;
  }
  return best;
}

}  // namespace pcfill
