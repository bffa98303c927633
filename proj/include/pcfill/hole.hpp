// pcfill - exemplar-based hole filling for 3D point cloud geometry
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pcfill/frontier.hpp"
#include "pcfill/types.hpp"
#include "pcfill/voxel_grid.hpp"

namespace pcfill {

/// Deterministic splittable generator (splitmix64 core). Streams derived
/// from the same seed with different stream ids are independent, so per-hole
/// randomness never depends on variant order.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : state_(seed) {}

  static SplitRng stream(std::uint64_t seed, std::uint64_t stream_id) {
    SplitRng mix(seed + 0x9e3779b97f4a7c15ULL * (stream_id + 1));
    mix.next();
    return mix;
  }

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1); platform-independent by construction.
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

/// Wire form of a hole: a box (6 reals) or an explicit voxel-index list.
struct HoleSpec {
  std::optional<Aabb> box;
  std::vector<std::array<std::int64_t, 3>> voxels;

  std::string to_json() const;
  static HoleSpec from_json_text(const std::string& text);
  static HoleSpec from_json_file(const std::string& path);
};

struct PunchResult {
  PointCloud holed;
  std::vector<Point3> removed;
  bool empty_hole = false;  // the box contained no points (warned, legal)
};

/// Removes every point strictly inside the box. Boundary points survive.
PunchResult punch_hole(const PointCloud& cloud, const Aabb& box);

/// The surface hole left by a punch: voxels that held removed points and now
/// hold none. Never-occupied cells inside the punch box are not part of it,
/// so the fill front can actually evolve inward. Marks the voxels Hole.
HoleRegion hole_from_points(VoxelGrid& grid, std::span<const Point3> removed,
                            std::size_t* skipped = nullptr);

/// Voxel-list wire form of a hole region (for handoff between punch and fill).
HoleSpec spec_from_hole(const VoxelGrid& grid, const HoleRegion& hole);

/// Draws a hole box: per-axis extent uniform in [0.8 f, 1.2 f] of the axis
/// range, center uniform with the box kept inside the bounding box.
HoleSpec random_hole(const PointCloud& cloud, double fraction, SplitRng& rng);

/// Resolves a spec against a grid (marks Hole voxels). Box holes become the
/// voxels overlapping the box interior that contain no points.
HoleRegion resolve_hole(VoxelGrid& grid, const HoleSpec& spec, std::size_t* skipped = nullptr);

}  // namespace pcfill
