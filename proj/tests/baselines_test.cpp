#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "deeptraj/agglomerative.hpp"
#include "deeptraj/distance.hpp"
#include "deeptraj/error.hpp"
#include "deeptraj/evaluation.hpp"
#include "deeptraj/gbtm.hpp"
#include "deeptraj/kmeans.hpp"
#include "deeptraj/rng.hpp"
#include "deeptraj/simulation.hpp"
#include "oracles.hpp"

using namespace deeptraj;

namespace {

template <typename F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected a deeptraj::Error";
  return ErrorKind::InvalidArgument;
}

Vector random_ints(RngStream& rng, std::size_t len, int lo, int hi) {
  Vector v(len);
  for (double& x : v) x = static_cast<double>(lo + static_cast<int>(rng.index(static_cast<std::size_t>(hi - lo + 1))));
  return v;
}

constexpr TrajectoryMetric kAllMetrics[] = {TrajectoryMetric::L1, TrajectoryMetric::L2, TrajectoryMetric::DTW,
                                            TrajectoryMetric::Frechet};

}  // namespace

TEST(Distance, Examples) {
  const Vector a{0, 0, 0}, b{1, 2, 2};
  EXPECT_EQ(traj_distance(a, b, TrajectoryMetric::L1), 5.0);
  EXPECT_EQ(traj_distance(a, b, TrajectoryMetric::L2), 3.0);
  EXPECT_EQ(traj_distance(Vector{0, 1}, Vector{0, 1, 1}, TrajectoryMetric::DTW), 0.0);
  EXPECT_EQ(traj_distance(Vector{0, 2}, Vector{1}, TrajectoryMetric::Frechet), 1.0);
  for (auto m : kAllMetrics) EXPECT_EQ(traj_distance(b, b, m), 0.0);
}

TEST(Distance, Errors) {
  EXPECT_EQ(kind_of([] { traj_distance(Vector{1, 2}, Vector{1}, TrajectoryMetric::L1); }), ErrorKind::LengthMismatch);
  EXPECT_EQ(kind_of([] { traj_distance(Vector{1, 2}, Vector{1}, TrajectoryMetric::L2); }), ErrorKind::LengthMismatch);
  EXPECT_EQ(kind_of([] { traj_distance(Vector{}, Vector{1}, TrajectoryMetric::DTW); }), ErrorKind::EmptyTrajectory);
  EXPECT_EQ(kind_of([] { traj_distance(Vector{1}, Vector{}, TrajectoryMetric::Frechet); }), ErrorKind::EmptyTrajectory);
}

TEST(Distance, ParseNames) {
  EXPECT_EQ(parse_metric("L2"), TrajectoryMetric::L2);
  EXPECT_EQ(parse_metric("euclidean"), TrajectoryMetric::L2);
  EXPECT_EQ(parse_metric("manhattan"), TrajectoryMetric::L1);
  EXPECT_EQ(parse_metric("DTW"), TrajectoryMetric::DTW);
  EXPECT_EQ(parse_metric("frechet"), TrajectoryMetric::Frechet);
  EXPECT_EQ(kind_of([] { parse_metric("cosine"); }), ErrorKind::InvalidArgument);
}

TEST(Distance, DtwAndFrechetMatchEnumeration) {
  RngStream rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const Vector a = random_ints(rng, 1 + rng.index(6), -5, 5);
    const Vector b = random_ints(rng, 1 + rng.index(6), -5, 5);
    EXPECT_EQ(dtw_distance(a, b), oracle::dtw(a, b));
    EXPECT_EQ(frechet_distance(a, b), oracle::frechet(a, b));
  }
}

TEST(Distance, SymmetryAndTriangleInequality) {
  RngStream rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector a = random_ints(rng, 6, -10, 10), b = random_ints(rng, 6, -10, 10), c = random_ints(rng, 6, -10, 10);
    for (auto m : kAllMetrics) {
      EXPECT_EQ(traj_distance(a, b, m), traj_distance(b, a, m));
      EXPECT_EQ(traj_distance(a, a, m), 0.0);
      if (m == TrajectoryMetric::DTW) continue;  // not a metric
      EXPECT_LE(traj_distance(a, c, m), traj_distance(a, b, m) + traj_distance(b, c, m) + 1e-12);
    }
  }
}

TEST(Lloyd, SseNonIncreasing) {
  RngStream rng(10);
  Matrix pts(60, 3);
  for (double& v : pts.values()) v = rng.normal(0, 3);
  for (int trial = 0; trial < 5; ++trial) {
    const auto picks = rng.sample_without_replacement(60, 4);
    Matrix centers(4, 3);
    for (std::size_t j = 0; j < 4; ++j)
      std::copy(pts.row(picks[j]).begin(), pts.row(picks[j]).end(), centers.row(j).begin());
    const auto run = lloyd(pts, centers, TrajectoryMetric::L2);
    for (std::size_t i = 1; i < run.sse_history.size(); ++i)
      EXPECT_LE(run.sse_history[i], run.sse_history[i - 1] + 1e-12);
  }
}

TEST(Lloyd, TiesGoToLowestCenter) {
  const Matrix pts{{0.0}, {10.0}};
  const Matrix centers{{5.0}, {5.0}};
  const auto run = lloyd(pts, centers, TrajectoryMetric::L2, 1);
  // Both points tie; the empty second cluster is reseeded with the farthest point.
  EXPECT_EQ(run.partition.k, 2u);
  const auto sizes = run.partition.cluster_sizes();
  EXPECT_EQ(sizes[0] + sizes[1], 2u);
}

TEST(KMeans, SingleClusterCenterIsGlobalMean) {
  const Matrix pts{{0, 0}, {2, 0}, {4, 6}};
  const Partition p = kmeans_fit(pts, 1, 3, 1);
  EXPECT_NEAR(p.centers(0, 0), 2.0, 1e-15);
  EXPECT_NEAR(p.centers(0, 1), 2.0, 1e-15);
}

TEST(KMeans, FourPointInstance) {
  const Matrix pts{{0}, {1}, {10}, {11}};
  const Partition best = kmeans_fit(pts, 2, 20, 3);
  EXPECT_EQ(best.assignments[0], best.assignments[1]);
  EXPECT_EQ(best.assignments[2], best.assignments[3]);
  EXPECT_NE(best.assignments[0], best.assignments[2]);
  EXPECT_DOUBLE_EQ(within_cluster_sse(pts, best), oracle::best_two_partition_sse(pts));
  // Every restart lands on the same partition up to relabeling.
  for (std::uint64_t seed = 0; seed < 20; ++seed)
    EXPECT_EQ(adjusted_rand_index(kmeans_fit(pts, 2, 1, seed), best), 1.0);
}

TEST(KMeans, BestOfRestartsMatchesExhaustiveOptimum) {
  RngStream rng(55);
  for (int inst = 0; inst < 20; ++inst) {
    const std::size_t n = 3 + rng.index(6);
    Matrix pts(n, 2);
    for (double& v : pts.values()) v = rng.normal(0, 2);
    const Partition p = kmeans_fit(pts, 2, 20, static_cast<std::uint64_t>(inst));
    EXPECT_NEAR(within_cluster_sse(pts, p), oracle::best_two_partition_sse(pts), 1e-9) << "instance " << inst;
  }
}

TEST(KMeans, KEqualsN) {
  const Matrix pts{{0}, {3}, {7}};
  const Partition p = kmeans_fit(pts, 3, 4, 0);
  EXPECT_EQ(std::set<std::size_t>(p.assignments.begin(), p.assignments.end()).size(), 3u);
  EXPECT_EQ(within_cluster_sse(pts, p), 0.0);
}

TEST(KMeans, Errors) {
  EXPECT_EQ(kind_of([] { kmeans_fit(Matrix{{1}, {2}}, 3, 1, 0); }), ErrorKind::KTooLarge);
  EXPECT_EQ(kind_of([] { kmeans_fit(Matrix(0, 2), 1, 1, 0); }), ErrorKind::EmptyInput);
}

TEST(Kml, SeparatedConstantGroups) {
  const double levels[] = {0.0, 100.0};
  const auto ds = simulate_constant_groups(levels, 10, 6, 1.0, 4);
  for (auto m : kAllMetrics) {
    const Partition p = kml_fit(ds.values, 2, m, 5, 9);
    EXPECT_EQ(adjusted_rand_index(dense_labels(*ds.labels), p.assignments), 1.0) << to_string(m);
  }
}

TEST(Kml, CentersArePointwiseMeans) {
  const double levels[] = {0.0, 5.0};
  const auto ds = simulate_constant_groups(levels, 8, 4, 1.0, 1);
  const Partition p = kml_fit(ds.values, 2, TrajectoryMetric::DTW, 3, 2);
  const Partition means = partition_from_assignments(ds.values, p.assignments, 2);
  for (std::size_t k = 0; k < p.centers.size(); ++k)
    EXPECT_NEAR(p.centers.values()[k], means.centers.values()[k], 1e-12);
}

TEST(Kml, KEqualsNHasZeroDispersion) {
  const Matrix traj{{0, 1, 2}, {5, 5, 5}, {9, 8, 7}, {1, 1, 0}};
  const Partition p = kml_fit(traj, 4, TrajectoryMetric::L2, 2, 0);
  EXPECT_EQ(within_cluster_sse(traj, p), 0.0);
}

TEST(Kml, Errors) {
  EXPECT_EQ(kind_of([] { kml_fit(Matrix{{1, 2}}, 2, TrajectoryMetric::L2, 1, 0); }), ErrorKind::KTooLarge);
  EXPECT_EQ(kind_of([] { kml_fit(Matrix(0, 3), 1, TrajectoryMetric::L2, 1, 0); }), ErrorKind::EmptyDataset);
}

TEST(Kml, SweepPicksLargestCriterionAndIsReproducible) {
  const double levels[] = {0.0, 10.0, 20.0};
  const auto ds = simulate_constant_groups(levels, 15, 5, 1.0, 8);
  const auto sweep = kml_sweep(ds.values, 2, 6, TrajectoryMetric::L2, 10, 3);
  ASSERT_EQ(sweep.ks, (std::vector<std::size_t>{2, 3, 4, 5, 6}));
  const auto it = std::max_element(sweep.criterion.begin(), sweep.criterion.end());
  EXPECT_EQ(sweep.best, static_cast<std::size_t>(it - sweep.criterion.begin()));
  EXPECT_EQ(sweep.ks[sweep.best], 3u);
  for (std::size_t i = 0; i < sweep.ks.size(); ++i)
    EXPECT_DOUBLE_EQ(sweep.criterion[i], calinski_harabasz(ds.values, sweep.partitions[i]));
  const auto again = kml_sweep(ds.values, 2, 6, TrajectoryMetric::L2, 10, 3);
  EXPECT_EQ(again.criterion, sweep.criterion);
}

TEST(Agglomerative, SingletonsWhenKEqualsN) {
  const Matrix pts{{0, 0}, {1, 1}, {5, 5}};
  const Partition p = agglomerative_fit(pts, 3, Linkage::Single);
  EXPECT_EQ(p.assignments, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(Agglomerative, SeparatedBlobsAllLinkages) {
  const Matrix centers{{0, 0}, {20, 0}};
  const auto blobs = make_blobs(centers, 25, 1.0, 6);
  for (auto l : {Linkage::Single, Linkage::Complete, Linkage::Average}) {
    const Partition p = agglomerative_fit(blobs.points, 2, l);
    EXPECT_EQ(adjusted_rand_index(dense_labels(blobs.labels), p.assignments), 1.0) << to_string(l);
    EXPECT_EQ(p.assignments.front(), 0u);  // labels follow smallest member index
  }
}

TEST(Agglomerative, HalfMoonsWithSingleLinkage) {
  const auto moons = make_half_moons(100, 0.3, 0.05, 11);
  const Partition p = agglomerative_fit(moons.points, 2, Linkage::Single);
  EXPECT_EQ(adjusted_rand_index(dense_labels(moons.labels), p.assignments), 1.0);
}

TEST(Agglomerative, LinkageDefinitionsOnLine) {
  // 0, 1, 3, 7: single merges {0,1}, then 3 joins (gap 2), 7 stays alone.
  const Matrix pts{{0}, {1}, {3}, {7}};
  EXPECT_EQ(agglomerative_fit(pts, 2, Linkage::Single).assignments, (std::vector<std::size_t>{0, 0, 0, 1}));
  // Complete: {0,1}, then max distance {0,1}-{3} = 3 vs {3}-{7} = 4 -> {0,1,3}.
  EXPECT_EQ(agglomerative_fit(pts, 2, Linkage::Complete).assignments, (std::vector<std::size_t>{0, 0, 0, 1}));
  // 0, 4, 5, 9.5: complete links {4,5} then {0} (5) vs {9.5} (5.5) -> {0,4,5}.
  const Matrix q{{0}, {4}, {5}, {9.5}};
  EXPECT_EQ(agglomerative_fit(q, 2, Linkage::Complete).assignments, (std::vector<std::size_t>{0, 0, 0, 1}));
  // Average: {0}-{4,5} = 4.5, {4,5}-{9.5} = 5 -> same.
  EXPECT_EQ(agglomerative_fit(q, 2, Linkage::Average).assignments, (std::vector<std::size_t>{0, 0, 0, 1}));
  const Matrix r{{0}, {4}, {5}, {9}};
  // Average: {0}-{4,5} = 4.5, {4,5}-{9} = 4.5 tie -> lowest pair merges first.
  EXPECT_EQ(agglomerative_fit(r, 2, Linkage::Average).assignments, (std::vector<std::size_t>{0, 0, 0, 1}));
}

TEST(Agglomerative, Errors) {
  EXPECT_EQ(kind_of([] { agglomerative_fit(Matrix{{1}}, 2, Linkage::Single); }), ErrorKind::KTooLarge);
  EXPECT_EQ(parse_linkage("average"), Linkage::Average);
  EXPECT_EQ(kind_of([] { parse_linkage("ward"); }), ErrorKind::InvalidArgument);
}

TEST(Gbtm, SingleClassConstantIsGrandMean) {
  RngStream rng(3);
  Matrix y(30, 6);
  for (double& v : y.values()) v = rng.normal(4.0, 2.0);
  const auto fit = gbtm_fit(y, 1, 0, 1);
  double mean = 0.0;
  for (double v : y.values()) mean += v;
  mean /= static_cast<double>(y.size());
  EXPECT_NEAR(fit.model.coefficients(0, 0), mean, 1e-12);
  for (std::size_t i = 0; i < 30; ++i) EXPECT_EQ(fit.memberships.probabilities(i, 0), 1.0);
  EXPECT_NEAR(fit.model.weights[0], 1.0, 1e-15);
}

TEST(Gbtm, RecoversTwoSlopes) {
  const double slopes[] = {1.0, -1.0};
  const auto ds = simulate_linear_groups(slopes, 25, 10, 0.1, 12);
  const auto fit = gbtm_fit(ds.values, 2, 1, 5);
  EXPECT_EQ(adjusted_rand_index(dense_labels(*ds.labels), fit.memberships.hard_assignments()), 1.0);
  // Coefficients are on rescaled time s = t / (T - 1): slope per unit t = b1 / (T - 1).
  std::vector<double> recovered;
  for (std::size_t j = 0; j < 2; ++j) recovered.push_back(fit.model.coefficients(j, 1) / 9.0);
  std::sort(recovered.begin(), recovered.end());
  EXPECT_NEAR(recovered[0], -1.0, 0.05);
  EXPECT_NEAR(recovered[1], 1.0, 0.05);
  double total = 0.0;
  for (double w : fit.model.weights) total += w;
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Gbtm, LoglikNonDecreasing) {
  const double slopes[] = {0.5, -0.2, 0.1};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto ds = simulate_linear_groups(slopes, 15, 8, 0.5, seed);
    const auto fit = gbtm_fit(ds.values, 3, 2, seed, 200);
    for (std::size_t i = 1; i < fit.loglik_history.size(); ++i)
      EXPECT_GE(fit.loglik_history[i] - fit.loglik_history[i - 1], -1e-9);
    for (double v : fit.model.variances) EXPECT_GE(v, kGbtmVarianceFloor);
    fit.memberships.validate();
  }
}

TEST(Gbtm, Errors) {
  const Matrix y{{1, 2, 3}, {3, 2, 1}};
  EXPECT_EQ(kind_of([&] { gbtm_fit(y, 1, 3, 0); }), ErrorKind::SingularDesign);
  EXPECT_EQ(kind_of([&] { gbtm_fit(y, 3, 1, 0); }), ErrorKind::KTooLarge);
  EXPECT_EQ(kind_of([&] { gbtm_fit(y, 0, 1, 0); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([&] { gbtm_fit(Matrix(0, 3), 1, 1, 0); }), ErrorKind::EmptyDataset);
}
