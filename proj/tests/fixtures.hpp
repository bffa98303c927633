// Deterministic synthetic clouds shared by the unit and acceptance suites.

#pragma once

#include <cmath>
#include <vector>

#include "pcfill/hole.hpp"
#include "pcfill/types.hpp"

namespace fixtures {

using pcfill::Aabb;
using pcfill::Point3;
using pcfill::PointCloud;
using pcfill::SplitRng;

inline std::vector<Point3> random_points(SplitRng& rng, int count, const Aabb& box) {
  std::vector<Point3> pts;
  pts.reserve(count);
  for (int i = 0; i < count; ++i) {
    pts.emplace_back(rng.uniform(box.min.x(), box.max.x()),
                     rng.uniform(box.min.y(), box.max.y()),
                     rng.uniform(box.min.z(), box.max.z()));
  }
  return pts;
}

inline Aabb unit_box() {
  Aabb box;
  box.min = Point3::Zero();
  box.max = Point3::Ones();
  return box;
}

/// Tilted plane sampled on a regular grid, with a triangular ridge running
/// parallel to the y axis. Exactly self-similar under y-grid translations,
/// which keeps adaptive matching honest: exact ties engage the growth loop.
/// The tilt is along y only, so hole slabs bite clean lattice-parallel
/// bands, and the ridge sits at high x where index tie-breaks do not prefer
/// its flanks.
inline PointCloud ridge_plane(int nx = 90, int ny = 90, double spacing = 0.04) {
  std::vector<Point3> pts;
  pts.reserve(std::size_t(nx) * ny);
  const double ridge_x = 0.80 * nx * spacing;
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const double x = i * spacing;
      const double y = j * spacing;
      double z = 0.25 * y;
      const double d = std::abs(x - ridge_x);
      const double ridge_half_width = 6.0 * spacing;
      if (d < ridge_half_width) {
        z += 4.0 * spacing * (1.0 - d / ridge_half_width);
      }
      pts.emplace_back(x, y, z);
    }
  }
  return PointCloud(std::move(pts));
}

/// Open torus section (300 degrees around the main axis), sampled on a
/// regular angular grid; rotationally self-similar in theta steps.
inline PointCloud torus_section(int n_theta = 150, int n_phi = 60, double major = 1.0,
                                double minor = 0.35) {
  std::vector<Point3> pts;
  pts.reserve(std::size_t(n_theta) * n_phi);
  const double theta_span = 2.0 * M_PI * (300.0 / 360.0);
  for (int i = 0; i < n_theta; ++i) {
    const double theta = theta_span * double(i) / double(n_theta);
    for (int j = 0; j < n_phi; ++j) {
      const double phi = 2.0 * M_PI * double(j) / double(n_phi);
      const double ring = major + minor * std::cos(phi);
      pts.emplace_back(ring * std::cos(theta), ring * std::sin(theta),
                       minor * std::sin(phi));
    }
  }
  return PointCloud(std::move(pts));
}

/// Two exact copies of a bumpy, tilted patch, separated along x. A hole in
/// one copy finds its exemplars in the other. The jitter is keyed to the
/// patch-local index, so corresponding points of the two copies stay exact
/// translates of each other.
inline PointCloud twin_patches(int nx = 60, int ny = 60, double spacing = 0.05, int gap = 20) {
  std::vector<Point3> pts;
  pts.reserve(2 * std::size_t(nx) * ny);
  for (int copy = 0; copy < 2; ++copy) {
    const int off = copy * (nx + gap);
    for (int i = 0; i < nx; ++i) {
      for (int j = 0; j < ny; ++j) {
        const double x = (i + off) * spacing;
        const double y = j * spacing;
        // Bumps keyed to the local patch index; both copies are congruent.
        const double bump = 0.10 * std::sin(2.0 * M_PI * i / 17.3) *
                                std::cos(2.0 * M_PI * j / 23.7) +
                            0.06 * std::sin(2.0 * M_PI * (i + 2 * j) / 41.1);
        pts.emplace_back(x, y, 0.4 * x + 0.25 * y + bump);
      }
    }
  }
  return PointCloud(std::move(pts));
}

/// Centered box spanning the given fraction of each bbox axis.
inline Aabb centered_hole_box(const PointCloud& cloud, double fraction) {
  const Aabb& bb = cloud.bbox();
  const Point3 c = 0.5 * (bb.min + bb.max);
  const Point3 h = 0.5 * fraction * bb.extent();
  Aabb box;
  box.min = c - h;
  box.max = c + h;
  return box;
}

/// Box centered on a given point, spanning a fraction of each axis range.
inline Aabb hole_box_at(const PointCloud& cloud, const Point3& center, double fraction) {
  const Point3 h = 0.5 * fraction * cloud.bbox().extent();
  Aabb box;
  box.min = center - h;
  box.max = center + h;
  return box;
}

// ---------------------------------------------------------------------------
// Hand-built scenes for adaptive matching: a template site whose +x half is
// missing (those voxels are the hole) and two far-away exemplar sites. Unit
// voxels, integer lattice; exact copies score an exact OHD of zero.
// ---------------------------------------------------------------------------

enum class Ring { None, Flat, Lifted };

/// One site: a 5x5 patch at z=0 (optionally only the dx<=0 half), a marker
/// point at (-2, 0, marker_z), and an optional square ring of radius 3.
inline void add_site(std::vector<Point3>& pts, const Point3& center, bool full_patch,
                     double marker_z, Ring ring) {
  for (int dx = -2; dx <= (full_patch ? 2 : 0); ++dx) {
    for (int dy = -2; dy <= 2; ++dy) {
      pts.emplace_back(center + Point3(dx, dy, 0.0));
    }
  }
  pts.emplace_back(center + Point3(-2.0, 0.0, marker_z));
  if (ring != Ring::None) {
    const double rz = ring == Ring::Flat ? 0.0 : 1.5;
    for (int dx = -3; dx <= 3; ++dx) {
      for (int dy = -3; dy <= 3; ++dy) {
        if (std::max(std::abs(dx), std::abs(dy)) != 3) continue;
        pts.emplace_back(center + Point3(dx, dy, rz));
      }
    }
  }
}

struct MatcherScene {
  PointCloud cloud;
  pcfill::VoxelGrid grid;
  pcfill::HoleRegion hole;
  Point3 pivot;        // template center (a cloud point)
  int copy1_index = -1;  // cloud index of the first exemplar center
  int copy2_index = -1;
};

/// Template site at the origin with its +x half punched out; two exemplar
/// sites at x=20 and x=40 whose rings are chosen by the caller.
inline MatcherScene matcher_scene(Ring copy_ring1, Ring copy_ring2, double copy_marker_z) {
  std::vector<Point3> pts;
  const Point3 t_center(0, 0, 0);
  add_site(pts, t_center, false, 0.7, Ring::Flat);
  // In a full 5x5 patch the center point (dx=0, dy=0) is the 13th added.
  const int copy1 = int(pts.size()) + 12;
  add_site(pts, Point3(20, 0, 0), true, copy_marker_z, copy_ring1);
  const int copy2 = int(pts.size()) + 12;
  add_site(pts, Point3(40, 0, 0), true, copy_marker_z, copy_ring2);

  MatcherScene scene{PointCloud(std::move(pts)), {}, {}, t_center, copy1, copy2};
  scene.grid = pcfill::VoxelGrid::build(scene.cloud, 1.0, 17);

  // The missing half of the template patch is the hole.
  for (int dx = 1; dx <= 2; ++dx) {
    for (int dy = -2; dy <= 2; ++dy) {
      const auto key = scene.grid.key_of(t_center + Point3(dx + 0.5, dy + 0.5, 0.5));
      if (!key) continue;
      scene.grid.set_label(*key, pcfill::VoxelLabel::Hole);
      scene.hole.voxels.insert(*key);
    }
  }
  return scene;
}

}  // namespace fixtures
