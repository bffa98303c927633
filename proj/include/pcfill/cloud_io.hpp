// pcfill - exemplar-based hole filling for 3D point cloud geometry
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "pcfill/types.hpp"

namespace pcfill {

enum class CloudFormat { PlyAscii, Xyz };

/// Format by file extension: .ply -> PLY, everything else -> XYZ.
CloudFormat format_for_path(const std::string& path);

/// Reads an ASCII PLY (x y z vertex properties; other properties and
/// elements are ignored) or a whitespace XYZ file. Throws IoError.
PointCloud read_cloud(const std::string& path);

/// Writes coordinates with 9 significant digits; values representable at
/// that precision round-trip bit-exactly.
void write_cloud(const std::string& path, const PointCloud& cloud);
void write_cloud(const std::string& path, std::span<const Point3> points, CloudFormat format);

}  // namespace pcfill
