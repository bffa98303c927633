// pcfill - exemplar-based hole filling for 3D point cloud geometry
// SPDX-License-Identifier: Apache-2.0

#include "pcfill/hole.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace pcfill {

std::string HoleSpec::to_json() const {
  nlohmann::json j;
  if (box) {
    j["box"]["min"] = {box->min.x(), box->min.y(), box->min.z()};
    j["box"]["max"] = {box->max.x(), box->max.y(), box->max.z()};
  }
  if (!voxels.empty()) {
    auto& arr = j["voxels"] = nlohmann::json::array();
    for (const auto& v : voxels) arr.push_back({v[0], v[1], v[2]});
  }
  return j.dump();
}

HoleSpec HoleSpec::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("hole spec: invalid JSON: ") + e.what());
  }
  HoleSpec spec;
  if (j.contains("box")) {
    const auto& b = j["box"];
    if (!b.contains("min") || !b.contains("max") || b["min"].size() != 3 ||
        b["max"].size() != 3) {
      throw IoError("hole spec: box needs 3-element min and max");
    }
    Aabb box;
    for (int a = 0; a < 3; ++a) {
      box.min[a] = b["min"][a].get<double>();
      box.max[a] = b["max"][a].get<double>();
    }
    if (!(box.min.x() < box.max.x() && box.min.y() < box.max.y() && box.min.z() < box.max.z())) {
      throw IoError("hole spec: box min must be strictly below max per axis");
    }
    spec.box = box;
  }
  if (j.contains("voxels")) {
    for (const auto& v : j["voxels"]) {
      if (v.size() != 3) throw IoError("hole spec: voxel entries need 3 indices");
      spec.voxels.push_back({v[0].get<std::int64_t>(), v[1].get<std::int64_t>(),
                             v[2].get<std::int64_t>()});
    }
  }
  if (!spec.box && spec.voxels.empty()) {
    throw IoError("hole spec: needs either a box or a voxel list");
  }
  return spec;
}

HoleSpec HoleSpec::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open hole spec: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

PunchResult punch_hole(const PointCloud& cloud, const Aabb& box) {
  PunchResult result;
  std::vector<Point3> kept;
  kept.reserve(cloud.size());
  for (const Point3& p : cloud.points()) {
    if (box.contains_strict(p)) {
      result.removed.push_back(p);
    } else {
      kept.push_back(p);
    }
  }
  result.empty_hole = result.removed.empty();
  result.holed = PointCloud(std::move(kept));
  return result;
}

HoleRegion hole_from_points(VoxelGrid& grid, std::span<const Point3> removed,
                            std::size_t* skipped) {
  HoleRegion hole;
  std::size_t skip = 0;
  for (const Point3& p : removed) {
    const auto key = grid.key_of(p);
    if (!key) {
      ++skip;
      continue;
    }
    const auto* pts = grid.points_in(*key);
    if (pts && !pts->empty()) {
      ++skip;  // a surviving point shares the voxel
      continue;
    }
    grid.set_label(*key, VoxelLabel::Hole);
    hole.voxels.insert(*key);
  }
  if (skipped) *skipped = skip;
  return hole;
}

HoleSpec spec_from_hole(const VoxelGrid& grid, const HoleRegion& hole) {
  (void)grid;
  HoleSpec spec;
  spec.voxels.reserve(hole.voxels.size());
  for (VoxelKey key : hole.voxels) {
    spec.voxels.push_back(VoxelGrid::unpack(key));
  }
  std::sort(spec.voxels.begin(), spec.voxels.end());
  return spec;
}

HoleSpec random_hole(const PointCloud& cloud, double fraction, SplitRng& rng) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw Error("hole fraction must be in (0, 1)");
  const Aabb& bbox = cloud.bbox();
  const Point3 range = bbox.extent();

  // A flat axis still gets a sliver of extent so the box stays valid.
  const double floor_ext = 1e-9 * std::max(range.maxCoeff(), 1.0);
  Point3 ext;
  for (int a = 0; a < 3; ++a) {
    ext[a] = std::max(std::min(range[a], fraction * range[a] * rng.uniform(0.8, 1.2)), floor_ext);
  }
  Aabb box;
  for (int a = 0; a < 3; ++a) {
    const double clo = bbox.min[a] + 0.5 * ext[a];
    const double chi = bbox.max[a] - 0.5 * ext[a];
    const double center = clo <= chi ? rng.uniform(clo, chi) : 0.5 * (bbox.min[a] + bbox.max[a]);
    box.min[a] = center - 0.5 * ext[a];
    box.max[a] = center + 0.5 * ext[a];
  }
  HoleSpec spec;
  spec.box = box;
  return spec;
}

HoleRegion resolve_hole(VoxelGrid& grid, const HoleSpec& spec, std::size_t* skipped) {
  if (spec.box) {
    HoleRegion hole = hole_from_box(grid, *spec.box);
    if (!spec.voxels.empty()) {
      std::size_t extra_skipped = 0;
      HoleRegion more = hole_from_voxels(grid, spec.voxels, &extra_skipped);
      hole.voxels.insert(more.voxels.begin(), more.voxels.end());
      if (skipped) *skipped = extra_skipped;
    } else if (skipped) {
      *skipped = 0;
    }
    return hole;
  }
  return hole_from_voxels(grid, spec.voxels, skipped);
}

}  // namespace pcfill
