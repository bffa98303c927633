// pcfill - exemplar-based hole filling for 3D point cloud geometry
// SPDX-License-Identifier: Apache-2.0

#include "pcfill/cloud_io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace pcfill {

CloudFormat format_for_path(const std::string& path) {
  const auto dot = path.find_last_of('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  for (char& c : ext) c = char(std::tolower(static_cast<unsigned char>(c)));
  return ext == "ply" ? CloudFormat::PlyAscii : CloudFormat::Xyz;
}

namespace {

struct PlyElement {
  std::string name;
  long count = 0;
  std::vector<std::string> properties;
};

PointCloud read_ply(std::istream& in, const std::string& path) {
  std::string line;
  if (!std::getline(in, line) || line.substr(0, 3) != "ply") {
    throw IoError(path + ": not a PLY file (missing 'ply' magic)");
  }

  std::vector<PlyElement> elements;
  bool ascii = false;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    ls >> tok;
    if (tok == "comment" || tok == "obj_info" || tok.empty()) continue;
    if (tok == "format") {
      std::string fmt;
      ls >> fmt;
      ascii = fmt == "ascii";
      if (!ascii) throw IoError(path + ": only ASCII PLY is supported");
    } else if (tok == "element") {
      PlyElement el;
      ls >> el.name >> el.count;
      elements.push_back(el);
    } else if (tok == "property") {
      if (elements.empty()) throw IoError(path + ": property before element");
      std::string type, name;
      ls >> type;
      if (type == "list") {
        std::string t1, t2;
        ls >> t1 >> t2 >> name;
      } else {
        ls >> name;
      }
      elements.back().properties.push_back(name);
    } else if (tok == "end_header") {
      break;
    } else {
      throw IoError(path + ": unrecognized header line: " + line);
    }
  }
  if (!ascii) throw IoError(path + ": missing format line");

  std::vector<Point3> pts;
  bool mid_line = false;  // token-wise vertex reads leave a partial line behind
  for (const PlyElement& el : elements) {
    if (el.name == "vertex") {
      int xi = -1, yi = -1, zi = -1;
      for (std::size_t i = 0; i < el.properties.size(); ++i) {
        if (el.properties[i] == "x") xi = int(i);
        if (el.properties[i] == "y") yi = int(i);
        if (el.properties[i] == "z") zi = int(i);
      }
      if (xi < 0 || yi < 0 || zi < 0) {
        throw IoError(path + ": vertex element lacks x/y/z properties");
      }
      pts.reserve(std::size_t(el.count));
      std::vector<double> row(el.properties.size());
      for (long v = 0; v < el.count; ++v) {
        for (double& val : row) {
          if (!(in >> val)) throw IoError(path + ": truncated vertex data");
        }
        pts.emplace_back(row[xi], row[yi], row[zi]);
      }
      mid_line = el.count > 0;
    } else {
      // Skip the data lines of non-vertex elements.
      std::string skip;
      if (mid_line) {
        std::getline(in, skip);
        mid_line = false;
      }
      for (long v = 0; v < el.count; ++v) {
        if (!std::getline(in, skip)) throw IoError(path + ": truncated element data");
      }
    }
  }
  return PointCloud(std::move(pts));
}

PointCloud read_xyz(std::istream& in, const std::string& path) {
  std::vector<Point3> pts;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    double x, y, z;
    if (!(ls >> x >> y >> z)) {
      throw IoError(path + ":" + std::to_string(lineno) + ": expected three coordinates");
    }
    pts.emplace_back(x, y, z);
  }
  return PointCloud(std::move(pts));
}

void format_coord(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  out += buf;
}

}  // namespace

PointCloud read_cloud(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open input file: " + path);
  if (format_for_path(path) == CloudFormat::PlyAscii) return read_ply(in, path);
  return read_xyz(in, path);
}

void write_cloud(const std::string& path, std::span<const Point3> points, CloudFormat format) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open output file: " + path);
  std::string body;
  body.reserve(points.size() * 40);
  for (const Point3& p : points) {
    format_coord(body, p.x());
    body += ' ';
    format_coord(body, p.y());
    body += ' ';
    format_coord(body, p.z());
    body += '\n';
  }
  if (format == CloudFormat::PlyAscii) {
    out << "ply\nformat ascii 1.0\nelement vertex " << points.size()
        << "\nproperty double x\nproperty double y\nproperty double z\nend_header\n";
  }
  out << body;
  if (!out) throw IoError("failed while writing: " + path);
}

void write_cloud(const std::string& path, const PointCloud& cloud) {
  write_cloud(path, cloud.points(), format_for_path(path));
}

}  // namespace pcfill
