#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "pcfill/bench.hpp"
#include "pcfill/cloud_io.hpp"
#include "pcfill/hole.hpp"
#include "pcfill/metrics.hpp"

using namespace pcfill;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("pcfill_test_" + std::to_string(std::rand()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(PCFILL_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("cloud io: xyz and ply round-trip bit-exactly after one write") {
  TempDir tmp;
  SplitRng rng = SplitRng::stream(80, 13);
  const auto pts = fixtures::random_points(rng, 200, fixtures::unit_box());
  const PointCloud cloud(pts);

  for (const char* name : {"cloud.xyz", "cloud.ply"}) {
    const std::string path = tmp.file(name);
    write_cloud(path, cloud);
    const PointCloud once = read_cloud(path);
    const std::string path2 = tmp.file(std::string("again_") + name);
    write_cloud(path2, once);
    const PointCloud twice = read_cloud(path2);
    REQUIRE(once.size() == twice.size());
    for (std::size_t i = 0; i < once.size(); ++i) {
      CHECK(once.point(i) == twice.point(i));
    }
    CHECK(slurp(path) == slurp(path2));
  }
}

TEST_CASE("cloud io: ply parser ignores extra properties and elements") {
  TempDir tmp;
  const std::string path = tmp.file("mesh.ply");
  {
    std::ofstream out(path);
    out << "ply\nformat ascii 1.0\ncomment made by hand\n"
        << "element vertex 3\n"
        << "property float x\nproperty float y\nproperty float z\n"
        << "property uchar red\n"
        << "element face 1\nproperty list uchar int vertex_indices\n"
        << "end_header\n"
        << "0 0 0 255\n1 0 0.5 10\n0 1 0.25 0\n"
        << "3 0 1 2\n";
  }
  const PointCloud cloud = read_cloud(path);
  REQUIRE(cloud.size() == 3);
  CHECK(cloud.point(1) == Point3(1, 0, 0.5));
  CHECK(cloud.point(2) == Point3(0, 1, 0.25));
}

TEST_CASE("cloud io: errors carry the path") {
  CHECK_THROWS_WITH_AS(read_cloud("/nonexistent/cloud.ply"),
                       doctest::Contains("/nonexistent/cloud.ply"), IoError);
  TempDir tmp;
  const std::string path = tmp.file("bad.ply");
  {
    std::ofstream out(path);
    out << "ply\nformat binary_little_endian 1.0\nend_header\n";
  }
  CHECK_THROWS_AS(read_cloud(path), IoError);
}

TEST_CASE("punch_hole: strict interior, outside box is a warned no-op") {
  const PointCloud plane = fixtures::ridge_plane(20, 20, 0.05);

  Aabb outside;
  outside.min = Point3(10, 10, 10);
  outside.max = Point3(11, 11, 11);
  const PunchResult miss = punch_hole(plane, outside);
  CHECK(miss.empty_hole);
  CHECK(miss.holed.size() == plane.size());
  CHECK(miss.removed.empty());

  // The whole (slightly dilated) bounding box removes everything.
  const PunchResult all = punch_hole(plane, plane.bbox().dilated(1e-9));
  CHECK(all.holed.empty());
  CHECK(all.removed.size() == plane.size());

  // Boundary points survive a box whose face passes through them.
  PointCloud tiny(std::vector<Point3>{{0, 0, 0}, {0.5, 0.5, 0.5}, {1, 1, 1}});
  Aabb exact;
  exact.min = Point3(0, 0, 0);
  exact.max = Point3(1, 1, 1);
  const PunchResult strict = punch_hole(tiny, exact);
  CHECK(strict.removed.size() == 1);
  CHECK(strict.holed.size() == 2);

  // Removed set equals a per-point scan on a random cloud.
  SplitRng rng = SplitRng::stream(81, 13);
  const auto pts = fixtures::random_points(rng, 300, fixtures::unit_box());
  Aabb box;
  box.min = Point3(0.2, 0.3, 0.1);
  box.max = Point3(0.7, 0.8, 0.9);
  const PunchResult punched = punch_hole(PointCloud(pts), box);
  std::size_t inside = 0;
  for (const Point3& p : pts) {
    const bool strict_in = p.x() > box.min.x() && p.x() < box.max.x() && p.y() > box.min.y() &&
                           p.y() < box.max.y() && p.z() > box.min.z() && p.z() < box.max.z();
    inside += strict_in;
  }
  CHECK(punched.removed.size() == inside);
}

TEST_CASE("random_hole: extents, determinism, and the Monte-Carlo mean") {
  const PointCloud cube(
      std::vector<Point3>{{0, 0, 0}, {1, 1, 1}, {0.3, 0.4, 0.5}, {0.9, 0.2, 0.7}});

  SplitRng a = SplitRng::stream(7, 0);
  SplitRng b = SplitRng::stream(7, 0);
  const HoleSpec s1 = random_hole(cube, 0.2, a);
  const HoleSpec s2 = random_hole(cube, 0.2, b);
  REQUIRE(s1.box.has_value());
  CHECK(s1.box->min == s2.box->min);
  CHECK(s1.box->max == s2.box->max);

  double mean = 0.0;
  const int draws = 1000;
  for (int i = 0; i < draws; ++i) {
    SplitRng rng = SplitRng::stream(100, std::uint64_t(i));
    const HoleSpec s = random_hole(cube, 0.2, rng);
    const Point3 ext = s.box->extent();
    for (int axis = 0; axis < 3; ++axis) {
      CHECK(ext[axis] >= 0.16 - 1e-12);
      CHECK(ext[axis] <= 0.24 + 1e-12);
      CHECK(s.box->min[axis] >= cube.bbox().min[axis] - 1e-12);
      CHECK(s.box->max[axis] <= cube.bbox().max[axis] + 1e-12);
    }
    mean += ext.x();
  }
  mean /= draws;
  CHECK(mean == doctest::Approx(0.2).epsilon(0.02));
}

TEST_CASE("hole spec json: box and voxel forms round-trip, bad specs rejected") {
  const HoleSpec box_spec = HoleSpec::from_json_text(
      R"({"box": {"min": [0, 0, 0], "max": [1, 2, 3]}})");
  REQUIRE(box_spec.box.has_value());
  CHECK(box_spec.box->max == Point3(1, 2, 3));
  const HoleSpec reparsed = HoleSpec::from_json_text(box_spec.to_json());
  CHECK(reparsed.box->min == box_spec.box->min);

  const HoleSpec voxel_spec = HoleSpec::from_json_text(R"({"voxels": [[1,2,3],[4,5,6]]})");
  CHECK(voxel_spec.voxels.size() == 2);

  CHECK_THROWS_AS(HoleSpec::from_json_text("{}"), IoError);
  CHECK_THROWS_AS(HoleSpec::from_json_text(R"({"box": {"min": [0,0,0], "max": [0,1,1]}})"),
                  IoError);
  CHECK_THROWS_AS(HoleSpec::from_json_text("not json"), IoError);
}

TEST_CASE("run_bench: shape, determinism, and variant-order independence") {
  TempDir tmp;
  const PointCloud plane = fixtures::ridge_plane(26, 26, 0.05);
  const std::string cloud_path = tmp.file("plane.xyz");
  write_cloud(cloud_path, plane);

  BenchPlan plan;
  plan.cloud_path = cloud_path;
  plan.holes = 1;
  plan.fraction = 0.2;
  plan.seed = 11;
  plan.variants = {Variant::Base};
  plan.fill.stride = 1;
  plan.fill.icp_restarts = false;

  const BenchResult r1 = run_bench(plan);
  CHECK(r1.rows.size() == 1);
  CHECK(r1.summaries.size() == 1);
  CHECK(r1.summaries[0].holes == 1);
  CHECK(r1.summaries[0].std_nshd == 0.0);

  const std::string csv1 = r1.to_csv(false);
  CHECK(csv1.substr(0, csv1.find('\n')) ==
        "cloud,variant,hole_id,nshd,nshd_local,seconds,points_transferred,termination");

  // Same seed, second run: byte-identical CSV.
  const BenchResult r2 = run_bench(plan);
  CHECK(csv1 == r2.to_csv(false));

  // Reversing the variant list does not move the holes.
  BenchPlan reversed = plan;
  reversed.variants = {Variant::BaseAcs, Variant::Base};
  const BenchResult r3 = run_bench(reversed);
  REQUIRE(r3.hole_specs.size() == r1.hole_specs.size());
  CHECK(r3.hole_specs[0].box->min == r1.hole_specs[0].box->min);
  CHECK(r3.hole_specs[0].box->max == r1.hole_specs[0].box->max);
  // Rows are keyed (hole, variant): the BASE row matches run 1 exactly.
  bool found = false;
  for (const BenchRow& row : r3.rows) {
    if (row.variant == Variant::Base && row.hole_id == 0) {
      CHECK(row.nshd == r1.rows[0].nshd);
      CHECK(row.points_transferred == r1.rows[0].points_transferred);
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("cli: calibrate, nshd self-distance, exit codes") {
  TempDir tmp;
  const PointCloud plane = fixtures::ridge_plane(16, 16, 0.05);
  const std::string cloud_path = tmp.file("plane.ply");
  write_cloud(cloud_path, plane);

  CHECK(run_cli("calibrate " + cloud_path) == 0);
  CHECK(run_cli("nshd " + cloud_path + " " + cloud_path) == 0);
  // Usage problems exit 1: missing subcommand argument and missing file.
  CHECK(run_cli("nshd " + cloud_path) == 1);
  CHECK(run_cli("calibrate " + tmp.file("missing.ply")) == 1);
  CHECK(run_cli("definitely-not-a-subcommand") == 1);
}

TEST_CASE("cli: punch -> fill -> nshd pipeline improves on the holed cloud") {
  TempDir tmp;
  const PointCloud plane = fixtures::ridge_plane(30, 30, 0.05);
  const std::string orig = tmp.file("orig.ply");
  write_cloud(orig, plane);

  const Aabb box = fixtures::centered_hole_box(plane, 0.2);
  HoleSpec spec;
  spec.box = box;
  const std::string hole_json = tmp.file("hole.json");
  {
    std::ofstream out(hole_json);
    out << spec.to_json();
  }

  const std::string holed = tmp.file("holed.ply");
  const std::string filled = tmp.file("filled.ply");
  const std::string log = tmp.file("fill_log.jsonl");
  const std::string voxel_spec = tmp.file("hole_voxels.json");
  REQUIRE(run_cli("punch " + orig + " --hole " + hole_json + " --out " + holed +
                  " --spec-out " + voxel_spec) == 0);
  REQUIRE(run_cli("fill " + holed + " --hole " + voxel_spec + " --variant BASE_ACS --out " +
                  filled + " --log " + log) == 0);

  const PointCloud holed_cloud = read_cloud(holed);
  const PointCloud filled_cloud = read_cloud(filled);
  REQUIRE(filled_cloud.size() > holed_cloud.size());
  CHECK(nshd_full(filled_cloud, plane) < nshd_full(holed_cloud, plane));

  // The JSON-lines log has one record per iteration plus a summary.
  std::ifstream lines(log);
  REQUIRE(lines);
  int count = 0;
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty()) ++count;
  }
  CHECK(count >= 2);
}
