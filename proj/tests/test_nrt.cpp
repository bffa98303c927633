#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "pcfill/hausdorff.hpp"
#include "pcfill/nrt.hpp"

using namespace pcfill;

namespace {

oracle::AffineProblem as_problem(const MatchPairs& pairs, const std::vector<Point3>& tmpl,
                                 const std::vector<Point3>& cand, const Point3& pivot,
                                 const SmoothnessGraph& graph, double lambda, double mu) {
  oracle::AffineProblem pr;
  pr.pairs = pairs.pairs;
  pr.tmpl = tmpl;
  pr.cand = cand;
  pr.pivot = pivot;
  pr.edges = graph.edges;
  pr.lambda = lambda;
  pr.mu = mu;
  return pr;
}

std::vector<double> flatten(const AffineStack& stack) {
  std::vector<double> t;
  t.reserve(9 * stack.size());
  for (const auto& m : stack) {
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) t.push_back(m(r, c));
    }
  }
  return t;
}

struct SmallFixture {
  std::vector<Point3> tmpl;
  std::vector<Point3> cand;
  Point3 pivot = Point3::Zero();
  MatchPairs pairs;
  SmoothnessGraph graph;
};

SmallFixture random_fixture(std::uint64_t seed, int n_tmpl, int n_cand) {
  SmallFixture f;
  SplitRng rng = SplitRng::stream(seed, 31);
  f.tmpl = fixtures::random_points(rng, n_tmpl, fixtures::unit_box());
  f.cand = fixtures::random_points(rng, n_cand, fixtures::unit_box());
  f.pivot = Point3(0.5, 0.5, 0.5);
  f.pairs = match_points(f.tmpl, f.cand);
  f.graph = knn_graph(f.cand, 5);
  return f;
}

}  // namespace

TEST_CASE("match_points: identical clouds match index by index") {
  SplitRng rng = SplitRng::stream(40, 31);
  const auto pts = fixtures::random_points(rng, 30, fixtures::unit_box());
  const MatchPairs mp = match_points(pts, pts);
  REQUIRE(mp.pairs.size() == pts.size());
  for (const auto& [ti, ci] : mp.pairs) CHECK(ti == ci);
  CHECK(mp.matched_count() == pts.size());
}

TEST_CASE("match_points: nearer candidate wins; a candidate may serve many") {
  const std::vector<Point3> tmpl{{0, 0, 0}, {0.1, 0, 0}};
  const std::vector<Point3> cand{{1, 0, 0}, {2, 0, 0}};
  const MatchPairs mp = match_points(tmpl, cand);
  REQUIRE(mp.pairs.size() == 2);
  CHECK(mp.pairs[0].second == 0);
  CHECK(mp.pairs[1].second == 0);  // no injectivity
  CHECK(mp.matched_count() == 1);
}

TEST_CASE("match_points: agrees with the all-pairs oracle") {
  SplitRng rng = SplitRng::stream(41, 31);
  const auto tmpl = fixtures::random_points(rng, 40, fixtures::unit_box());
  const auto cand = fixtures::random_points(rng, 60, fixtures::unit_box());
  const MatchPairs mp = match_points(tmpl, cand);
  const auto expected = oracle::match_targets(tmpl, cand);
  REQUIRE(mp.pairs.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(mp.pairs[i].second == expected[i]);
  }
}

TEST_CASE("knn_graph: undirected, no self-loops, degree at least k") {
  SplitRng rng = SplitRng::stream(42, 31);
  const auto pts = fixtures::random_points(rng, 50, fixtures::unit_box());
  const SmoothnessGraph g = knn_graph(pts, 5);
  CHECK(g.vertex_count == 50);
  std::vector<int> degree(pts.size(), 0);
  for (const auto& [i, j] : g.edges) {
    CHECK(i < j);  // normalized orientation, so no duplicates
    ++degree[i];
    ++degree[j];
  }
  for (int d : degree) CHECK(d >= 5);
  // Duplicates would collapse: re-inserting reversed edges changes nothing.
  auto edges = g.edges;
  std::sort(edges.begin(), edges.end());
  CHECK(std::adjacent_find(edges.begin(), edges.end()) == edges.end());
}

TEST_CASE("assemble/solve: regularizer alone returns the identity stack") {
  const std::vector<Point3> cand{{1, 2, 3}, {4, 5, 6}};
  MatchPairs none;
  none.matched.assign(2, 0);
  SmoothnessGraph no_edges;
  no_edges.vertex_count = 2;
  const NrtSystem sys =
      assemble_cost(none, {}, cand, Point3::Zero(), no_edges, 1.0, 1e-6);
  const AffineStack stack = solve_nrt(sys);
  for (const auto& t : stack) {
    CHECK((t - Eigen::Matrix3d::Identity()).norm() < 1e-9);
  }
}

TEST_CASE("assemble/solve: one pair with x = 2y reaches T y = x as mu vanishes") {
  const Point3 pivot = Point3::Zero();
  const std::vector<Point3> tmpl{{2, 4, 6}};
  const std::vector<Point3> cand{{1, 2, 3}};
  const MatchPairs mp = match_points(tmpl, cand);
  SmoothnessGraph no_edges;
  no_edges.vertex_count = 1;
  const NrtSystem sys = assemble_cost(mp, tmpl, cand, pivot, no_edges, 1.0, 1e-12);
  const AffineStack stack = solve_nrt(sys);
  CHECK((stack[0] * cand[0] - tmpl[0]).norm() < 1e-5);
}

TEST_CASE("assemble/solve: identity fixture returns identity transforms") {
  SplitRng rng = SplitRng::stream(43, 31);
  const auto pts = fixtures::random_points(rng, 12, fixtures::unit_box());
  const MatchPairs mp = match_points(pts, pts);
  const SmoothnessGraph g = knn_graph(pts, 5);
  const AffineStack stack =
      solve_nrt(assemble_cost(mp, pts, pts, Point3(0.5, 0.5, 0.5), g, 1.0, 1e-6));
  for (const auto& t : stack) {
    CHECK((t - Eigen::Matrix3d::Identity()).norm() < 1e-6);
  }
}

TEST_CASE("assemble/solve: a global linear map beats the identity cost") {
  SplitRng rng = SplitRng::stream(44, 31);
  const Point3 pivot(0.5, 0.5, 0.5);
  const auto cand = fixtures::random_points(rng, 15, fixtures::unit_box());
  Eigen::Matrix3d map;
  map << 1.2, 0.1, 0, 0, 0.9, 0.05, -0.05, 0, 1.1;
  std::vector<Point3> tmpl;
  for (const Point3& y : cand) tmpl.push_back(pivot + map * (y - pivot));

  MatchPairs mp;
  mp.matched.assign(cand.size(), 1);
  for (int i = 0; i < int(cand.size()); ++i) mp.pairs.emplace_back(i, i);
  const SmoothnessGraph g = knn_graph(cand, 5);

  const double lambda = 100.0, mu = 1e-6;
  const NrtSystem sys = assemble_cost(mp, tmpl, cand, pivot, g, lambda, mu);
  const AffineStack stack = solve_nrt(sys);
  const double j_star = nrt_cost(mp, tmpl, cand, pivot, g, lambda, mu, stack);
  const double j_id =
      nrt_cost(mp, tmpl, cand, pivot, g, lambda, mu, identity_stack(cand.size()));
  CHECK(j_star < j_id);
  // With smoothness dominant, all transforms agree and map y onto x.
  for (std::size_t i = 0; i < cand.size(); ++i) {
    CHECK((stack[i] * (cand[i] - pivot) - (tmpl[i] - pivot)).norm() < 0.05);
  }
}

TEST_CASE("solve_nrt: cost matches the conjugate-gradient oracle to 1e-8 relative") {
  SmallFixture f = random_fixture(45, 12, 12);
  const double lambda = 1.0, mu = 1e-6;
  const NrtSystem sys = assemble_cost(f.pairs, f.tmpl, f.cand, f.pivot, f.graph, lambda, mu);
  const AffineStack stack = solve_nrt(sys);

  const auto pr = as_problem(f.pairs, f.tmpl, f.cand, f.pivot, f.graph, lambda, mu);
  const double j_solver = oracle::affine_cost(pr, flatten(stack));
  const double j_oracle = oracle::affine_cost(pr, oracle::affine_minimize(pr));
  CHECK(j_solver == doctest::Approx(j_oracle).epsilon(1e-8));
}

TEST_CASE("solve_nrt: finite-difference gradient vanishes at the solution") {
  SmallFixture f = random_fixture(46, 10, 9);
  const double lambda = 1.0, mu = 1e-4;
  const NrtSystem sys = assemble_cost(f.pairs, f.tmpl, f.cand, f.pivot, f.graph, lambda, mu);
  const auto pr = as_problem(f.pairs, f.tmpl, f.cand, f.pivot, f.graph, lambda, mu);
  std::vector<double> t = flatten(solve_nrt(sys));

  const double h = 1e-6;
  for (std::size_t i = 0; i < t.size(); ++i) {
    std::vector<double> plus = t, minus = t;
    plus[i] += h;
    minus[i] -= h;
    const double fd = (oracle::affine_cost(pr, plus) - oracle::affine_cost(pr, minus)) / (2 * h);
    CHECK(std::abs(fd) < 1e-5);
  }
}

TEST_CASE("solve_nrt: never worse than doing nothing") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    SmallFixture f = random_fixture(100 + seed, 8 + int(seed % 5), 7 + int(seed % 7));
    const double lambda = 1.0, mu = 1e-6;
    const NrtSystem sys = assemble_cost(f.pairs, f.tmpl, f.cand, f.pivot, f.graph, lambda, mu);
    const AffineStack stack = solve_nrt(sys);
    const double j_star = nrt_cost(f.pairs, f.tmpl, f.cand, f.pivot, f.graph, lambda, mu, stack);
    const double j_id = nrt_cost(f.pairs, f.tmpl, f.cand, f.pivot, f.graph, lambda, mu,
                                 identity_stack(f.cand.size()));
    CHECK(j_star <= j_id + 1e-10);
  }
}

TEST_CASE("solve_nrt: transform disagreement shrinks as lambda grows") {
  SmallFixture f = random_fixture(47, 14, 12);
  double previous = std::numeric_limits<double>::infinity();
  for (double lambda : {1.0, 10.0, 100.0}) {
    const AffineStack stack =
        solve_nrt(assemble_cost(f.pairs, f.tmpl, f.cand, f.pivot, f.graph, lambda, 1e-6));
    double max_gap = 0.0;
    for (const auto& [i, j] : f.graph.edges) {
      max_gap = std::max(max_gap, (stack[i] - stack[j]).norm());
    }
    CHECK(max_gap <= previous + 1e-12);
    previous = max_gap;
  }
}

TEST_CASE("apply_nrt: identity is a no-op, uniform scale doubles offsets") {
  const Point3 pivot(1, 1, 1);
  const std::vector<Point3> pts{{2, 1, 1}, {1, 3, 1}, {0, 0, 0}};
  const auto same = apply_nrt(identity_stack(3), pts, pivot);
  for (std::size_t i = 0; i < pts.size(); ++i) CHECK((same[i] - pts[i]).norm() == 0.0);

  AffineStack doubled(3, 2.0 * Eigen::Matrix3d::Identity());
  const auto out = apply_nrt(doubled, pts, pivot);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK((out[i] - (pivot + 2.0 * (pts[i] - pivot))).norm() < 1e-15);
  }
}

TEST_CASE("apply_nrt: agrees with per-point multiplication") {
  SplitRng rng = SplitRng::stream(48, 31);
  const auto pts = fixtures::random_points(rng, 10, fixtures::unit_box());
  const Point3 pivot(0.3, 0.3, 0.3);
  AffineStack stack;
  for (int i = 0; i < 10; ++i) {
    Eigen::Matrix3d m;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) m(r, c) = rng.uniform(-1.0, 1.0);
    }
    stack.push_back(m);
  }
  const auto out = apply_nrt(stack, pts, pivot);
  for (int i = 0; i < 10; ++i) {
    const Point3 expected = pivot + stack[i] * (pts[i] - pivot);
    CHECK((out[i] - expected).norm() == 0.0);
  }
}

TEST_CASE("smoothness term is invariant under vertex relabeling") {
  SmallFixture f = random_fixture(49, 10, 10);
  AffineStack stack;
  SplitRng rng = SplitRng::stream(50, 31);
  for (int i = 0; i < 10; ++i) {
    Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
    m(0, 1) = rng.uniform(-0.5, 0.5);
    m(2, 0) = rng.uniform(-0.5, 0.5);
    stack.push_back(m);
  }
  auto smooth_of = [](const SmoothnessGraph& g, const AffineStack& s) {
    double total = 0.0;
    for (const auto& [i, j] : g.edges) total += (s[i] - s[j]).squaredNorm();
    return total;
  };
  const double before = smooth_of(f.graph, stack);

  // Relabel vertices by a rotation of indices.
  const int n = f.graph.vertex_count;
  auto relabel = [&](int v) { return (v + 3) % n; };
  SmoothnessGraph permuted;
  permuted.vertex_count = n;
  for (const auto& [i, j] : f.graph.edges) {
    permuted.edges.emplace_back(std::min(relabel(i), relabel(j)),
                                std::max(relabel(i), relabel(j)));
  }
  AffineStack permuted_stack(n, Eigen::Matrix3d::Identity());
  for (int v = 0; v < n; ++v) permuted_stack[relabel(v)] = stack[v];
  CHECK(smooth_of(permuted, permuted_stack) == doctest::Approx(before).epsilon(1e-12));
}

TEST_CASE("refinement does not worsen OHD when every candidate point is matched") {
  // Candidate equals a mildly warped template: full match, so the OHD bound
  // applies (unmatched points would void it).
  SplitRng rng = SplitRng::stream(51, 31);
  const Point3 pivot(0.5, 0.5, 0.5);
  const auto cand = fixtures::random_points(rng, 20, fixtures::unit_box());
  std::vector<Point3> tmpl;
  Eigen::Matrix3d warp;
  warp << 1.05, 0.02, 0, -0.01, 0.97, 0.03, 0, 0.02, 1.04;
  for (const Point3& y : cand) tmpl.push_back(pivot + warp * (y - pivot));

  MatchPairs mp;
  mp.matched.assign(cand.size(), 1);
  for (int i = 0; i < int(cand.size()); ++i) mp.pairs.emplace_back(i, i);
  const SmoothnessGraph g = knn_graph(cand, 5);
  const AffineStack stack = solve_nrt(assemble_cost(mp, tmpl, cand, pivot, g, 1.0, 1e-6));
  const auto refined = apply_nrt(stack, cand, pivot);

  const double before = ohd(tmpl, cand);
  const double after = ohd(tmpl, refined);
  CHECK(after <= before + 1e-9);
}

TEST_CASE("refinement strictly reduces distortion on partial matches") {
  SmallFixture f = random_fixture(52, 9, 14);  // more candidates than matches
  const AffineStack stack =
      solve_nrt(assemble_cost(f.pairs, f.tmpl, f.cand, f.pivot, f.graph, 1.0, 1e-6));
  auto distortion = [&](const AffineStack& s) {
    double d = 0.0;
    for (const auto& [ti, ci] : f.pairs.pairs) {
      d += ((f.tmpl[ti] - f.pivot) - s[ci] * (f.cand[ci] - f.pivot)).squaredNorm();
    }
    return d;
  };
  CHECK(distortion(stack) < distortion(identity_stack(f.cand.size())));
}
