// pcfill - exemplar-based hole filling for 3D point cloud geometry
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pcfill/fill.hpp"
#include "pcfill/hole.hpp"
#include "pcfill/types.hpp"

namespace pcfill {

/// A seeded benchmark: H random holes x a set of variants on one cloud.
struct BenchPlan {
  std::string cloud_path;
  std::string csv_path;
  int holes = 15;
  double fraction = 0.2;
  std::uint64_t seed = 0;
  std::vector<Variant> variants = {Variant::Base, Variant::BaseAcs, Variant::BaseNrt,
                                   Variant::BaseAcsNrt};
  /// Wall-clock timing is opt-in: with it off the seconds column is 0.000 and
  /// the CSV is byte-reproducible for a fixed seed.
  bool timing = false;
  FillConfig fill;  // variant and base_n are overridden per run

  static BenchPlan from_json_file(const std::string& path);
  static BenchPlan from_json_text(const std::string& text);
};

struct BenchRow {
  int hole_id = 0;
  Variant variant = Variant::Base;
  double nshd = 0.0;
  double nshd_local = 0.0;  // NaN when the hole-local restriction is empty
  double seconds = 0.0;     // always measured; written as 0 when timing is off
  int points_transferred = 0;
  Termination termination = Termination::FrontEmpty;
};

struct BenchSummary {
  Variant variant = Variant::Base;
  double mean_nshd = 0.0;
  double std_nshd = 0.0;  // sample standard deviation
  int holes = 0;
};

struct BenchResult {
  std::string cloud_name;
  std::vector<BenchRow> rows;          // ordered by (hole_id, variant)
  std::vector<BenchSummary> summaries; // plan variant order
  std::vector<HoleSpec> hole_specs;    // per hole id

  std::string to_csv(bool timing) const;
};

/// Runs the plan on an already-loaded cloud (exact duplicates must have been
/// removed). Deterministic for a fixed seed.
BenchResult run_bench(const BenchPlan& plan, const PointCloud& original);

/// Loads the cloud (deduplicating with a warning if needed), runs the plan
/// and writes the CSV when plan.csv_path is set.
BenchResult run_bench(const BenchPlan& plan);

}  // namespace pcfill
