// pcfill - exemplar-based hole filling for 3D point cloud geometry
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <utility>
#include <vector>

#include "pcfill/cube.hpp"
#include "pcfill/types.hpp"

namespace pcfill {

/// Template-to-candidate nearest-point matches.
///
/// Every template point is matched to its nearest candidate point; a
/// candidate point may serve several template points. `matched[j]` marks
/// candidate points that appear in at least one pair (the matched set M).
struct MatchPairs {
  std::vector<std::pair<int, int>> pairs;  // (template index, candidate index)
  std::vector<char> matched;               // per candidate point

  std::size_t matched_count() const {
    std::size_t c = 0;
    for (char m : matched) c += (m != 0);
    return c;
  }
};

MatchPairs match_points(std::span<const Point3> tmpl_points,
                        std::span<const Point3> candidate_points);

/// Symmetrized k-nearest-neighbor graph over candidate points.
struct SmoothnessGraph {
  int vertex_count = 0;
  std::vector<std::pair<int, int>> edges;  // i < j, no duplicates, no self-loops
};

/// k is clamped to vertex_count - 1; fewer than 2 points yields no edges.
SmoothnessGraph knn_graph(std::span<const Point3> points, int k = 5);

/// One 3x3 linear map per candidate point, acting on pivot-local offsets.
using AffineStack = std::vector<Eigen::Matrix3d>;

/// Sparse least-squares form of the NRT objective
///   J(T) = sum_matched |x_i - T_i y_i|^2
///        + lambda * sum_edges |T_i - T_j|_F^2
///        + mu * sum_i |T_i - I|_F^2
/// with all positions taken relative to the pivot. Unknown layout:
/// t[9 i + 3 r + c] = T_i(r, c).
struct NrtSystem {
  Eigen::SparseMatrix<double> a;  // rows x 9N
  Eigen::VectorXd b;
  int point_count = 0;
  double lambda = 1.0;
  double mu = 1e-6;
};

NrtSystem assemble_cost(const MatchPairs& pairs, std::span<const Point3> tmpl_points,
                        std::span<const Point3> candidate_points, const Point3& pivot,
                        const SmoothnessGraph& graph, double lambda, double mu = 1e-6);

/// Solves the normal equations of the assembled system by sparse Cholesky.
/// Post-condition: |A^T A t - A^T b|_inf < 1e-8 * (1 + |A^T b|_inf).
/// Throws SingularSystem when the factorization fails (mu = 0 forced).
AffineStack solve_nrt(const NrtSystem& system);

/// Moves candidate point i to pivot + T_i * (y_i - pivot).
std::vector<Point3> apply_nrt(const AffineStack& stack, std::span<const Point3> candidate_points,
                              const Point3& pivot);

/// J evaluated directly from its definition (distortion + smoothness +
/// regularizer); used for cost-never-worse guarantees.
double nrt_cost(const MatchPairs& pairs, std::span<const Point3> tmpl_points,
                std::span<const Point3> candidate_points, const Point3& pivot,
                const SmoothnessGraph& graph, double lambda, double mu,
                const AffineStack& stack);

/// Identity stack of the right length (the "do nothing" transform).
AffineStack identity_stack(std::size_t point_count);

}  // namespace pcfill
