// pcfill - exemplar-based hole filling for 3D point cloud geometry
// SPDX-License-Identifier: Apache-2.0

#include "pcfill/nrt.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <memory>

#include "pcfill/kdtree.hpp"

namespace pcfill {

MatchPairs match_points(std::span<const Point3> tmpl_points,
                        std::span<const Point3> candidate_points) {
  MatchPairs mp;
  mp.matched.assign(candidate_points.size(), 0);
  if (tmpl_points.empty() || candidate_points.empty()) return mp;

  std::unique_ptr<KdTree> index;
  if (candidate_points.size() > 256) index = std::make_unique<KdTree>(candidate_points);

  mp.pairs.reserve(tmpl_points.size());
  for (std::size_t i = 0; i < tmpl_points.size(); ++i) {
    int best = 0;
    if (index) {
      best = index->nearest(tmpl_points[i]).first;
    } else {
      double best2 = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < candidate_points.size(); ++j) {
        const double d2 = (candidate_points[j] - tmpl_points[i]).squaredNorm();
        if (d2 < best2) {
          best2 = d2;
          best = int(j);
        }
      }
    }
    mp.pairs.emplace_back(int(i), best);
    mp.matched[best] = 1;
  }
  return mp;
}

SmoothnessGraph knn_graph(std::span<const Point3> points, int k) {
  SmoothnessGraph g;
  g.vertex_count = int(points.size());
  if (points.size() < 2 || k < 1) return g;
  k = std::min<int>(k, int(points.size()) - 1);

  const KdTree index(points);
  std::vector<std::vector<int>> nbrs(points.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < std::int64_t(points.size()); ++i) {
    // k+1 because the vertex itself is its own nearest neighbor.
    auto knn = index.knn(points[i], k + 1);
    auto& out = nbrs[i];
    for (int j : knn) {
      if (j != int(i)) out.push_back(j);
    }
    if (int(out.size()) > k) out.resize(k);
  }

  // Symmetrize: undirected edge (i, j) with i < j, deduplicated.
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < g.vertex_count; ++i) {
    for (int j : nbrs[i]) {
      edges.emplace_back(std::min(i, j), std::max(i, j));
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  g.edges = std::move(edges);
  return g;
}

namespace {

inline int var(int point, int row, int col) { return 9 * point + 3 * row + col; }

}  // namespace

NrtSystem assemble_cost(const MatchPairs& pairs, std::span<const Point3> tmpl_points,
                        std::span<const Point3> candidate_points, const Point3& pivot,
                        const SmoothnessGraph& graph, double lambda, double mu) {
  NrtSystem sys;
  sys.point_count = int(candidate_points.size());
  sys.lambda = lambda;
  sys.mu = mu;

  const int rows =
      3 * int(pairs.pairs.size()) + 9 * int(graph.edges.size()) + 9 * sys.point_count;
  const int cols = 9 * sys.point_count;
  sys.a.resize(rows, cols);
  sys.b = Eigen::VectorXd::Zero(rows);

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(9 * pairs.pairs.size() + 18 * graph.edges.size() + 9 * sys.point_count);

  int row = 0;
  // Distortion: T_j y_local = x_local, three rows per matched pair.
  for (const auto& [ti, cj] : pairs.pairs) {
    const Point3 x = tmpl_points[ti] - pivot;
    const Point3 y = candidate_points[cj] - pivot;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        trip.emplace_back(row, var(cj, r, c), y[c]);
      }
      sys.b[row] = x[r];
      ++row;
    }
  }

  // Smoothness: sqrt(lambda) (T_i - T_j) = 0, nine rows per edge.
  const double sl = std::sqrt(lambda);
  for (const auto& [i, j] : graph.edges) {
    for (int m = 0; m < 9; ++m) {
      trip.emplace_back(row, 9 * i + m, sl);
      trip.emplace_back(row, 9 * j + m, -sl);
      ++row;
    }
  }

  // Tikhonov pull toward the identity map, nine rows per point.
  const double sm = std::sqrt(mu);
  for (int p = 0; p < sys.point_count; ++p) {
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        trip.emplace_back(row, var(p, r, c), sm);
        sys.b[row] = (r == c) ? sm : 0.0;
        ++row;
      }
    }
  }

  sys.a.setFromTriplets(trip.begin(), trip.end());
  return sys;
}

AffineStack solve_nrt(const NrtSystem& system) {
  const Eigen::SparseMatrix<double> ata = system.a.transpose() * system.a;
  const Eigen::VectorXd atb = system.a.transpose() * system.b;

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(ata);
  if (solver.info() != Eigen::Success) {
    throw SingularSystem("NRT normal equations could not be factorized (mu = 0?)");
  }
  const Eigen::VectorXd t = solver.solve(atb);
  if (solver.info() != Eigen::Success) {
    throw SingularSystem("NRT normal equations solve failed");
  }

  const double residual = (ata * t - atb).lpNorm<Eigen::Infinity>();
  const double bound = 1e-8 * (1.0 + atb.lpNorm<Eigen::Infinity>());
  if (!(residual < bound)) {
    throw SingularSystem("NRT solution residual exceeds tolerance");
  }

  AffineStack stack(system.point_count);
  for (int p = 0; p < system.point_count; ++p) {
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        stack[p](r, c) = t[var(p, r, c)];
      }
    }
  }
  return stack;
}

std::vector<Point3> apply_nrt(const AffineStack& stack, std::span<const Point3> candidate_points,
                              const Point3& pivot) {
  std::vector<Point3> out(candidate_points.size());
  for (std::size_t i = 0; i < candidate_points.size(); ++i) {
    out[i] = pivot + stack[i] * (candidate_points[i] - pivot);
  }
  return out;
}

double nrt_cost(const MatchPairs& pairs, std::span<const Point3> tmpl_points,
                std::span<const Point3> candidate_points, const Point3& pivot,
                const SmoothnessGraph& graph, double lambda, double mu,
                const AffineStack& stack) {
  double distortion = 0.0;
  for (const auto& [ti, cj] : pairs.pairs) {
    const Point3 x = tmpl_points[ti] - pivot;
    const Point3 y = candidate_points[cj] - pivot;
    distortion += (x - stack[cj] * y).squaredNorm();
  }
  double smooth = 0.0;
  for (const auto& [i, j] : graph.edges) {
    smooth += (stack[i] - stack[j]).squaredNorm();
  }
  double reg = 0.0;
  for (const auto& t : stack) {
    reg += (t - Eigen::Matrix3d::Identity()).squaredNorm();
  }
  return distortion + lambda * smooth + mu * reg;
}

AffineStack identity_stack(std::size_t point_count) {
  return AffineStack(point_count, Eigen::Matrix3d::Identity());
}

}  // namespace pcfill
