// pcfill - exemplar-based hole filling for 3D point cloud geometry
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "pcfill/bench.hpp"
#include "pcfill/cloud_io.hpp"
#include "pcfill/fill.hpp"
#include "pcfill/hole.hpp"
#include "pcfill/metrics.hpp"
#include "pcfill/octree.hpp"

namespace {

using namespace pcfill;

void require_file(const std::string& path) {
  if (!std::filesystem::exists(path)) {
    throw CLI::ValidationError("input file does not exist: " + path);
  }
}

PointCloud load(const std::string& path, bool dedupe_quietly = true) {
  require_file(path);
  PointCloud cloud = read_cloud(path);
  if (cloud.has_exact_duplicates() && dedupe_quietly) {
    std::size_t removed = 0;
    cloud = cloud.deduplicated(&removed);
    std::cerr << "warning: " << path << ": removed " << removed
              << " exactly coincident duplicate points\n";
  }
  return cloud;
}

struct FillFlags {
  std::string variant = "BASE_ACS_NRT";
  int base_n = 0;  // 0 = variant default
  double lambda = 1.0;
  double t_factor = 1.0001;
  int n_max = 15;
  int stride = 0;
  int max_iter = 0;
  std::uint64_t seed = 0;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--variant", variant, "BASE, BASE_ACS, BASE_NRT or BASE_ACS_NRT")
        ->capture_default_str();
    cmd->add_option("--base-n", base_n, "template cube size in voxels (0 = variant default)");
    cmd->add_option("--lambda", lambda, "NRT smoothness weight")->capture_default_str();
    cmd->add_option("--t-factor", t_factor, "adaptive matching threshold factor")
        ->capture_default_str();
    cmd->add_option("--n-max", n_max, "adaptive cube size cap")->capture_default_str();
    cmd->add_option("--stride", stride, "candidate stride (0 = auto)");
    cmd->add_option("--max-iter", max_iter, "iteration cap (0 = 10x hole voxels)");
    cmd->add_option("--seed", seed, "seed for any randomized step");
  }

  FillConfig config() const {
    FillConfig cfg = FillConfig::for_variant(variant_from_string(variant));
    if (base_n > 0) cfg.base_n = base_n;
    cfg.lambda = lambda;
    cfg.t_factor = t_factor;
    cfg.n_max = n_max;
    cfg.stride = stride;
    cfg.max_iterations = max_iter;
    return cfg;
  }
};

int cmd_calibrate(const std::string& cloud_path) {
  const PointCloud cloud = load(cloud_path);
  std::printf("%.9g\n", calibrate_voxel_size(cloud));
  return 0;
}

int cmd_punch(const std::string& cloud_path, const std::string& hole_path, double random_fraction,
              std::uint64_t seed, const std::string& out_path, const std::string& removed_path,
              const std::string& spec_out) {
  const PointCloud cloud = load(cloud_path);

  HoleSpec spec;
  if (!hole_path.empty()) {
    require_file(hole_path);
    spec = HoleSpec::from_json_file(hole_path);
    if (!spec.box) {
      throw CLI::ValidationError("punch needs a box hole spec (voxel lists only make sense "
                                 "against a fill-time grid)");
    }
  } else if (random_fraction > 0.0) {
    SplitRng rng = SplitRng::stream(seed, 0);
    spec = random_hole(cloud, random_fraction, rng);
  } else {
    throw CLI::ValidationError("punch needs --hole or --random");
  }

  const PunchResult result = punch_hole(cloud, *spec.box);
  if (result.empty_hole) {
    std::cerr << "warning: hole box contains no points; output equals input\n";
  }
  write_cloud(out_path, result.holed);
  if (!removed_path.empty()) {
    write_cloud(removed_path, result.removed, format_for_path(removed_path));
  }
  if (!spec_out.empty()) {
    // Voxel-list spec against the grid that `fill` will rebuild from the
    // holed cloud: exactly the surface voxels the punch emptied.
    if (result.holed.size() < 2) {
      std::cerr << "warning: too few points left to calibrate; no spec written\n";
    } else {
      const double edge = calibrate_voxel_size(result.holed);
      VoxelGrid grid = VoxelGrid::build(result.holed, edge);
      const HoleRegion hole = hole_from_points(grid, result.removed);
      std::ofstream out(spec_out);
      if (!out) throw IoError("cannot open spec output: " + spec_out);
      out << spec_from_hole(grid, hole).to_json() << "\n";
    }
  }
  std::cerr << "removed " << result.removed.size() << " points\n";
  return 0;
}

int cmd_fill(const std::string& cloud_path, const std::string& hole_path, const FillFlags& flags,
             const std::string& out_path, const std::string& log_path) {
  const PointCloud cloud = load(cloud_path);
  require_file(hole_path);
  const HoleSpec spec = HoleSpec::from_json_file(hole_path);

  const double edge = calibrate_voxel_size(cloud);
  FillConfig cfg = flags.config();
  // Fixed padding keeps voxel-list specs portable between punch and fill.
  VoxelGrid grid = VoxelGrid::build(cloud, edge);
  std::size_t skipped = 0;
  HoleRegion hole = resolve_hole(grid, spec, &skipped);
  if (skipped > 0) {
    std::cerr << "warning: skipped " << skipped << " occupied or out-of-grid hole voxels\n";
  }

  const FillResult result = fill_hole(cloud, std::move(grid), std::move(hole), cfg);
  write_cloud(out_path, result.cloud);
  if (!log_path.empty()) {
    std::ofstream log(log_path);
    if (!log) throw IoError("cannot open log output: " + log_path);
    log << result.report.to_json_lines();
  }
  std::cerr << "transferred " << result.report.points_transferred << " points in "
            << result.report.iterations << " iterations ("
            << to_string(result.report.termination) << ")\n";
  return 0;
}

int cmd_nshd(const std::string& rec_path, const std::string& orig_path, const std::string& metric,
             const std::string& hole_path) {
  const PointCloud rec = load(rec_path, false);
  const PointCloud orig = load(orig_path, false);
  double value = 0.0;
  if (metric == "local") {
    if (hole_path.empty()) throw CLI::ValidationError("--metric local needs --hole");
    require_file(hole_path);
    const HoleSpec spec = HoleSpec::from_json_file(hole_path);
    if (!spec.box) throw CLI::ValidationError("--metric local needs a box hole spec");
    value = nshd_local(rec, orig, *spec.box, calibrate_voxel_size(orig));
  } else {
    value = nshd_full(rec, orig);
  }
  std::printf("%.9g\n", value);
  return 0;
}

int cmd_bench(const std::string& plan_path, const std::string& out_override,
              std::uint64_t seed_override, bool seed_set, bool timing) {
  require_file(plan_path);
  BenchPlan plan = BenchPlan::from_json_file(plan_path);
  if (!out_override.empty()) plan.csv_path = out_override;
  if (seed_set) plan.seed = seed_override;
  if (timing) plan.timing = true;
  const BenchResult result = run_bench(plan);
  if (plan.csv_path.empty()) {
    std::cout << result.to_csv(plan.timing);
  } else {
    std::cerr << "wrote " << plan.csv_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exemplar-based hole filling for 3D point clouds"};
  app.require_subcommand(1);
  app.set_config("--config");

  std::string cloud_path, hole_path, out_path, removed_path, spec_out, log_path;
  std::string rec_path, orig_path, metric = "full", plan_path, csv_out;
  double random_fraction = 0.0;
  std::uint64_t punch_seed = 0, bench_seed = 0;
  bool timing = false;
  FillFlags flags;

  auto* calibrate = app.add_subcommand("calibrate", "print the calibrated voxel edge");
  calibrate->add_option("cloud", cloud_path, "input cloud (.ply or .xyz)")->required();

  auto* punch = app.add_subcommand("punch", "remove the points inside a hole box");
  punch->add_option("cloud", cloud_path, "input cloud")->required();
  punch->add_option("--hole", hole_path, "hole spec JSON (box form)");
  punch->add_option("--random", random_fraction, "draw a random hole of this fraction");
  punch->add_option("--seed", punch_seed, "seed for --random");
  punch->add_option("--out", out_path, "holed cloud output")->required();
  punch->add_option("--removed", removed_path, "write removed points here");
  punch->add_option("--spec-out", spec_out, "write the effective hole spec here");

  auto* fill = app.add_subcommand("fill", "fill a hole by exemplar transfer");
  fill->add_option("cloud", cloud_path, "input (holed) cloud")->required();
  fill->add_option("--hole", hole_path, "hole spec JSON")->required();
  fill->add_option("--out", out_path, "filled cloud output")->required();
  fill->add_option("--log", log_path, "per-iteration JSON-lines log");
  flags.add_to(fill);

  auto* nshd_cmd = app.add_subcommand("nshd", "normalized symmetric Hausdorff distance");
  nshd_cmd->add_option("reconstructed", rec_path, "reconstructed cloud")->required();
  nshd_cmd->add_option("original", orig_path, "original cloud (defines the volume)")->required();
  nshd_cmd->add_option("--metric", metric, "full or local")->capture_default_str();
  nshd_cmd->add_option("--hole", hole_path, "hole spec JSON (for --metric local)");

  auto* bench = app.add_subcommand("bench", "run a seeded hole-filling benchmark");
  bench->add_option("plan", plan_path, "bench plan JSON")->required();
  bench->add_option("--out", csv_out, "CSV output path (overrides plan)");
  auto* seed_opt = bench->add_option("--seed", bench_seed, "seed (overrides plan)");
  bench->add_flag("--timing", timing, "measure wall-clock seconds (CSV no longer reproducible)");

  try {
    app.parse(argc, argv);
    if (*calibrate) return cmd_calibrate(cloud_path);
    if (*punch) {
      return cmd_punch(cloud_path, hole_path, random_fraction, punch_seed, out_path,
                       removed_path, spec_out);
    }
    if (*fill) return cmd_fill(cloud_path, hole_path, flags, out_path, log_path);
    if (*nshd_cmd) return cmd_nshd(rec_path, orig_path, metric, hole_path);
    if (*bench) return cmd_bench(plan_path, csv_out, bench_seed, seed_opt->count() > 0, timing);
    return 1;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const pcfill::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 2;
  }
}
