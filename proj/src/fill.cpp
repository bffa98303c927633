// pcfill - exemplar-based hole filling for 3D point cloud geometry
// SPDX-License-Identifier: Apache-2.0

#include "pcfill/fill.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "pcfill/hausdorff.hpp"

namespace pcfill {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::Base:
      return "BASE";
    case Variant::BaseAcs:
      return "BASE_ACS";
    case Variant::BaseNrt:
      return "BASE_NRT";
    default:
      return "BASE_ACS_NRT";
  }
}

Variant variant_from_string(const std::string& name) {
  if (name == "BASE") return Variant::Base;
  if (name == "BASE_ACS") return Variant::BaseAcs;
  if (name == "BASE_NRT") return Variant::BaseNrt;
  if (name == "BASE_ACS_NRT") return Variant::BaseAcsNrt;
  throw Error("unknown variant: " + name);
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::FrontCovered:
      return "front_covered";
    case Termination::FrontEmpty:
      return "front_empty";
    case Termination::MaxIterations:
      return "max_iterations";
    default:
      return "no_progress";
  }
}

namespace {

std::string json_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string json_point(const Point3& p) {
  return "[" + json_number(p.x()) + "," + json_number(p.y()) + "," + json_number(p.z()) + "]";
}

}  // namespace

std::string FillReport::to_json_lines() const {
  std::string out;
  for (const IterationRecord& r : records) {
    out += "{\"iter\":" + std::to_string(r.iteration);
    out += ",\"phat_index\":" + std::to_string(r.phat_index);
    out += ",\"phat\":" + json_point(r.phat);
    out += ",\"qhat\":" + json_point(r.qhat);
    out += ",\"n\":" + std::to_string(r.n_star);
    out += ",\"pre_ohd\":" + json_number(r.pre_ohd);
    out += ",\"post_ohd\":" + json_number(r.post_ohd);
    out += ",\"transferred\":" + std::to_string(r.transferred);
    out += "}\n";
  }
  out += "{\"iterations\":" + std::to_string(iterations);
  out += ",\"points_transferred\":" + std::to_string(points_transferred);
  out += ",\"duplicates_dropped\":" + std::to_string(duplicates_dropped);
  out += ",\"initial_hole_voxels\":" + std::to_string(initial_hole_voxels);
  out += ",\"remaining_hole_voxels\":" + std::to_string(remaining_hole_voxels);
  out += ",\"termination\":\"" + to_string(termination) + "\"}\n";
  return out;
}

std::vector<Point3> transfer_points(std::span<const Point3> refined_candidate,
                                    const MatchPairs& pairs) {
  std::vector<Point3> out;
  out.reserve(refined_candidate.size());
  for (std::size_t j = 0; j < refined_candidate.size(); ++j) {
    if (!pairs.matched[j]) out.push_back(refined_candidate[j]);
  }
  return out;
}

FillResult fill_hole(const PointCloud& cloud, VoxelGrid grid, HoleRegion hole,
                     const FillConfig& config) {
  FillResult result;
  result.cloud = cloud;
  result.filled_flag.assign(cloud.size(), 0);

  FillReport& report = result.report;
  report.initial_hole_voxels = hole.size();

  const int max_iterations = config.max_iterations > 0
                                 ? config.max_iterations
                                 : std::max<int>(1, 10 * int(hole.size()));

  MatchParams match;
  match.base_n = config.base_n;
  match.t_factor = config.t_factor;
  match.n_max = config.n_max;
  match.stride = config.stride;
  match.warm_start = config.warm_start;
  match.icp.max_sweeps = config.max_icp;
  match.icp.tol = config.icp_tol_scale * grid.edge();
  match.icp.restarts = config.icp_restarts;

  PriorityCache priorities;
  std::unordered_map<int, int> masked_until;  // cloud index -> iteration
  std::optional<Aabb> dirty;

  // Fixed for the whole fill: the front has to reach across the occupancy
  // gap of the original sampling (transfers only densify it).
  int reach = 1;
  if (result.cloud.size() >= 2) {
    const KdTree initial_index(result.cloud.points());
    reach = occupancy_reach(result.cloud, initial_index, grid.edge());
  }

  int iter = 0;
  Termination termination = Termination::MaxIterations;

  while (iter < max_iterations) {
    FillFront front = compute_fill_front(grid, result.cloud, hole, reach);
    if (front.empty()) {
      termination = Termination::FrontEmpty;
      break;
    }

    const KdTree index(result.cloud.points());
    priorities.update(front, result.cloud, index, config.base_n, grid.edge(), config.eps_d,
                      dirty, config.full_priority_recompute);
    dirty.reset();

    // Front points by descending priority, ties by lowest cloud index.
    std::vector<int> order(front.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = int(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (front.priorities[a] != front.priorities[b]) {
        return front.priorities[a] > front.priorities[b];
      }
      return front.points[a] < front.points[b];
    });

    const int mask_window = int(front.size());
    bool matched = false;
    MatchResult best;
    int phat_index = -1;

    for (int oi : order) {
      const int pi = front.points[oi];
      auto mit = masked_until.find(pi);
      if (mit != masked_until.end() && mit->second > iter) continue;
      const Point3& pivot = result.cloud.point(pi);
      try {
        best = config.uses_acs()
                   ? match_adaptive(result.cloud, index, grid, pivot, match)
                   : best_match_fixed_n(result.cloud, index, grid, pivot, config.base_n, match);
        phat_index = pi;
        matched = true;
        break;
      } catch (const NoCandidates&) {
        masked_until[pi] = iter + mask_window;
      } catch (const DegenerateGeometry&) {
        masked_until[pi] = iter + mask_window;
      }
    }
    if (!matched) {
      termination = Termination::NoProgress;
      break;
    }

    const Point3 pivot = result.cloud.point(phat_index);
    const Cube tmpl = extract_cube(result.cloud, index, pivot, best.n, grid.edge());
    const Cube cand =
        extract_cube(result.cloud, index, result.cloud.point(best.center), best.n, grid.edge());
    std::vector<Point3> refined = aligned_candidate_points(cand, best.align);

    double post_ohd = best.align.score;
    if (config.uses_nrt() && !refined.empty() && !tmpl.resident_points.empty()) {
      const MatchPairs rigid_pairs = match_points(tmpl.resident_points, refined);
      const SmoothnessGraph graph = knn_graph(refined, config.knn_k);
      const NrtSystem sys = assemble_cost(rigid_pairs, tmpl.resident_points, refined, pivot,
                                          graph, config.lambda, config.mu);
      const AffineStack stack = solve_nrt(sys);
      refined = apply_nrt(stack, refined, pivot);
      post_ohd = ohd(tmpl.resident_points, refined);
    }

    // Matching for the transfer set runs on the refined candidate.
    const MatchPairs pairs = match_points(tmpl.resident_points, refined);
    std::vector<Point3> outgoing = transfer_points(refined, pairs);

    // A voxel is the unit of space: a transferred point within a quarter
    // voxel of an existing one is the same sample and would only pile up
    // density around stubborn cells, so it is dropped (counted).
    const double dup_radius = 0.25 * grid.edge();
    std::vector<Point3> accepted;
    accepted.reserve(outgoing.size());
    for (const Point3& p : outgoing) {
      bool dup = false;
      if (!result.cloud.empty()) {
        dup = index.nearest(p).second < dup_radius;
      }
      for (std::size_t k = 0; !dup && k < accepted.size(); ++k) {
        dup = (accepted[k] - p).norm() < dup_radius;
      }
      if (dup) {
        ++report.duplicates_dropped;
      } else {
        accepted.push_back(p);
      }
    }

    IterationRecord rec;
    rec.iteration = iter;
    rec.phat_index = phat_index;
    rec.phat = pivot;
    rec.qhat = result.cloud.point(best.center);
    rec.n_star = best.n;
    rec.pre_ohd = best.align.score;
    rec.post_ohd = post_ohd;
    rec.transferred = int(accepted.size());
    report.records.push_back(rec);

    if (accepted.empty()) {
      // No progress at this front point; keep it out of the argmax for a
      // front-sized window so the loop cannot livelock.
      masked_until[phat_index] = iter + 1 + mask_window;
    } else {
      const int first_new = int(result.cloud.size());
      result.cloud.append(accepted);
      result.filled_flag.resize(result.cloud.size(), 1);
      report.points_transferred += int(accepted.size());

      Aabb batch = Aabb::of(accepted);
      dirty = batch;

      for (std::size_t k = 0; k < accepted.size(); ++k) {
        const int idx = first_new + int(k);
        const auto key = grid.key_of(accepted[k]);
        if (!key) continue;  // outside padded grid; cannot happen for in-bbox holes
        const bool was_hole = grid.label(*key) == VoxelLabel::Hole;
        grid.add_point(idx, accepted[k]);
        if (was_hole) hole.voxels.erase(*key);
      }
    }

    ++iter;

    // Stop when the template cube covered the whole front it was drawn from.
    bool covers = true;
    for (int pi : front.points) {
      if (!tmpl.contains(result.cloud.point(pi))) {
        covers = false;
        break;
      }
    }
    if (covers) {
      termination = Termination::FrontCovered;
      break;
    }
  }

  report.iterations = iter;
  report.termination = termination;
  report.remaining_hole_voxels = hole.size();
  return result;
}

}  // namespace pcfill
