// pcfill - exemplar-based hole filling for 3D point cloud geometry
// SPDX-License-Identifier: Apache-2.0

#include "pcfill/bench.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "pcfill/cloud_io.hpp"
#include "pcfill/metrics.hpp"
#include "pcfill/octree.hpp"

namespace pcfill {

BenchPlan BenchPlan::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("bench plan: invalid JSON: ") + e.what());
  }
  BenchPlan plan;
  if (!j.contains("cloud")) throw IoError("bench plan: missing 'cloud'");
  plan.cloud_path = j["cloud"].get<std::string>();
  plan.csv_path = j.value("out", std::string{});
  plan.holes = j.value("holes", plan.holes);
  plan.fraction = j.value("fraction", plan.fraction);
  plan.seed = j.value("seed", plan.seed);
  plan.timing = j.value("timing", plan.timing);
  if (plan.holes < 1) throw IoError("bench plan: holes must be >= 1");
  if (!(plan.fraction > 0.0 && plan.fraction < 1.0)) {
    throw IoError("bench plan: fraction must be in (0, 1)");
  }
  if (j.contains("variants")) {
    plan.variants.clear();
    for (const auto& v : j["variants"]) {
      plan.variants.push_back(variant_from_string(v.get<std::string>()));
    }
    if (plan.variants.empty()) throw IoError("bench plan: variants list is empty");
  }
  if (j.contains("fill")) {
    const auto& f = j["fill"];
    plan.fill.lambda = f.value("lambda", plan.fill.lambda);
    plan.fill.mu = f.value("mu", plan.fill.mu);
    plan.fill.t_factor = f.value("t_factor", plan.fill.t_factor);
    plan.fill.n_max = f.value("n_max", plan.fill.n_max);
    plan.fill.stride = f.value("stride", plan.fill.stride);
    plan.fill.max_iterations = f.value("max_iterations", plan.fill.max_iterations);
    plan.fill.max_icp = f.value("max_icp", plan.fill.max_icp);
    plan.fill.icp_restarts = f.value("icp_restarts", plan.fill.icp_restarts);
    plan.fill.eps_d = f.value("eps_d", plan.fill.eps_d);
  }
  return plan;
}

BenchPlan BenchPlan::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open bench plan: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

namespace {

std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string base_name(const std::string& path) {
  const auto slash = path.find_last_of("/\\");
  return slash == std::string::npos ? path : path.substr(slash + 1);
}

}  // namespace

std::string BenchResult::to_csv(bool timing) const {
  std::string out = "cloud,variant,hole_id,nshd,nshd_local,seconds,points_transferred,termination\n";
  for (const BenchRow& r : rows) {
    char seconds[32];
    std::snprintf(seconds, sizeof(seconds), "%.3f", timing ? r.seconds : 0.0);
    out += cloud_name + "," + to_string(r.variant) + "," + std::to_string(r.hole_id) + "," +
           csv_number(r.nshd) + "," + csv_number(r.nshd_local) + "," + seconds + "," +
           std::to_string(r.points_transferred) + "," + to_string(r.termination) + "\n";
  }
  out += "# summary\n";
  out += "cloud,variant,mean_nshd,std_nshd,holes\n";
  for (const BenchSummary& s : summaries) {
    out += cloud_name + "," + to_string(s.variant) + "," + csv_number(s.mean_nshd) + "," +
           csv_number(s.std_nshd) + "," + std::to_string(s.holes) + "\n";
  }
  return out;
}

BenchResult run_bench(const BenchPlan& plan, const PointCloud& original) {
  BenchResult result;
  result.cloud_name = base_name(plan.cloud_path);

  // Hole boxes depend only on (seed, hole id), never on variant order.
  result.hole_specs.reserve(plan.holes);
  for (int h = 0; h < plan.holes; ++h) {
    SplitRng rng = SplitRng::stream(plan.seed, std::uint64_t(h));
    result.hole_specs.push_back(random_hole(original, plan.fraction, rng));
  }

  struct Job {
    int hole_id;
    int variant_index;
  };
  std::vector<Job> jobs;
  for (int h = 0; h < plan.holes; ++h) {
    for (std::size_t v = 0; v < plan.variants.size(); ++v) {
      jobs.push_back({h, int(v)});
    }
  }
  std::vector<BenchRow> rows(jobs.size());

#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t ji = 0; ji < std::int64_t(jobs.size()); ++ji) {
    const Job job = jobs[ji];
    const Variant variant = plan.variants[job.variant_index];
    const Aabb box = *result.hole_specs[job.hole_id].box;

    BenchRow row;
    row.hole_id = job.hole_id;
    row.variant = variant;

    PunchResult punched = punch_hole(original, box);
    FillConfig cfg = plan.fill;
    cfg.variant = variant;
    cfg.base_n = cfg.uses_acs() ? 5 : 10;

    if (punched.holed.size() < 2) {
      // Nothing left to work with; score the holed cloud as-is.
      row.termination = Termination::NoProgress;
      row.nshd = std::numeric_limits<double>::quiet_NaN();
      row.nshd_local = std::numeric_limits<double>::quiet_NaN();
      rows[ji] = row;
      continue;
    }

    const double edge = calibrate_voxel_size(punched.holed);
    VoxelGrid grid = VoxelGrid::build(punched.holed, edge);
    HoleRegion hole = hole_from_points(grid, punched.removed);

    const auto t0 = std::chrono::steady_clock::now();
    FillResult filled = fill_hole(punched.holed, std::move(grid), std::move(hole), cfg);
    const auto t1 = std::chrono::steady_clock::now();

    row.seconds = std::chrono::duration<double>(t1 - t0).count();
    row.points_transferred = filled.report.points_transferred;
    row.termination = filled.report.termination;
    row.nshd = nshd_full(filled.cloud, original);
    try {
      row.nshd_local = nshd_local(filled.cloud, original, box, edge);
    } catch (const EmptySet&) {
      row.nshd_local = std::numeric_limits<double>::quiet_NaN();
    }
    rows[ji] = row;
  }

  result.rows = std::move(rows);

  for (std::size_t v = 0; v < plan.variants.size(); ++v) {
    BenchSummary s;
    s.variant = plan.variants[v];
    std::vector<double> values;
    for (const BenchRow& r : result.rows) {
      if (r.variant == s.variant && !std::isnan(r.nshd)) values.push_back(r.nshd);
    }
    s.holes = int(values.size());
    if (!values.empty()) {
      double sum = 0.0;
      for (double x : values) sum += x;
      s.mean_nshd = sum / double(values.size());
      double sq = 0.0;
      for (double x : values) sq += (x - s.mean_nshd) * (x - s.mean_nshd);
      s.std_nshd = values.size() > 1 ? std::sqrt(sq / double(values.size() - 1)) : 0.0;
    }
    result.summaries.push_back(s);
  }
  return result;
}

BenchResult run_bench(const BenchPlan& plan) {
  PointCloud cloud = read_cloud(plan.cloud_path);
  if (cloud.has_exact_duplicates()) {
    std::size_t removed = 0;
    cloud = cloud.deduplicated(&removed);
    std::cerr << "warning: " << plan.cloud_path << ": removed " << removed
              << " exactly coincident duplicate points\n";
  }
  BenchResult result = run_bench(plan, cloud);
  if (!plan.csv_path.empty()) {
    std::ofstream out(plan.csv_path);
    if (!out) throw IoError("cannot open CSV output: " + plan.csv_path);
    out << result.to_csv(plan.timing);
    if (!out) throw IoError("failed while writing CSV: " + plan.csv_path);
  }
  return result;
}

}  // namespace pcfill
