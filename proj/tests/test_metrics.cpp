#include <cmath>

#include "doctest.h"
#include "dynbt/kernel.hpp"
#include "dynbt/metrics.hpp"
#include "dynbt/rng.hpp"
#include "dynbt/simulate.hpp"
#include "dynbt/solver.hpp"
#include "helpers.hpp"

using namespace dynbt;

TEST_CASE("rank_diff basics") {
  const std::vector<std::vector<int>> a{{1, 2}, {1, 2}};
  const std::vector<std::vector<int>> swapped{{2, 1}, {2, 1}};
  CHECK(rank_diff(a, a) == 0.0);
  CHECK(rank_diff(a, swapped) == 1.0);
  CHECK(rank_diff(a, swapped) == rank_diff(swapped, a));
  CHECK_THROWS_AS(rank_diff(a, {{1, 2}}), ShapeMismatchError);
  CHECK_THROWS_AS(rank_diff(a, {{1, 2}, {1, 2, 3}}), ShapeMismatchError);
  CHECK_THROWS_AS(rank_diff({}, {}), ShapeMismatchError);
}

TEST_CASE("rank_diff is invariant to consistent relabeling") {
  Rng rng(40);
  std::vector<std::vector<int>> est(3), truth(3);
  for (int t = 0; t < 3; ++t) {
    Eigen::VectorXd a(5), b(5);
    for (int i = 0; i < 5; ++i) {
      a[i] = rng.uniform();
      b[i] = rng.uniform();
    }
    est[t] = rank(ScoreVector{a});
    truth[t] = rank(ScoreVector{b});
  }
  const std::vector<int> perm{4, 2, 0, 1, 3};
  std::vector<std::vector<int>> est_p(3, std::vector<int>(5));
  std::vector<std::vector<int>> truth_p(3, std::vector<int>(5));
  for (int t = 0; t < 3; ++t) {
    for (int i = 0; i < 5; ++i) {
      est_p[t][perm[i]] = est[t][i];
      truth_p[t][perm[i]] = truth[t][i];
    }
  }
  CHECK(rank_diff(est_p, truth_p) == doctest::Approx(rank_diff(est, truth)));
}

TEST_CASE("delta_h vanishes on balanced schedules") {
  const Dataset rr = testutil::round_robin(5, {1, 2, 3, 4}, 2);
  for (double h : {0.05, 0.2, 1.0}) {
    for (double t : {0.0, 0.33, 0.5, 1.0}) {
      CHECK(delta_h(rr, {KernelFamily::kGaussian, h}, t) <= 1e-12);
    }
  }
  // Two teams: the single ratio always equals 1/(N-1) = 1.
  const Dataset two = testutil::round_robin(2, {1, 2, 3}, 1);
  CHECK(delta_h(two, {KernelFamily::kGaussian, 0.1}, 0.5) <= 1e-15);
}

TEST_CASE("delta_h matches a direct summation and stays within bounds") {
  Rng rng(41);
  GPSpec gp;
  gp.time_points = 6;
  Rng gen(42);
  const Dataset d = generate_bt_matches(
      gp_sample_beta(5, gp, gen),
      [&](int i, int j, int) { return static_cast<long>(1 + (i + 2 * j) % 4); },
      gen);
  const KernelSpec spec{KernelFamily::kGaussian, 0.22};
  for (double t : {0.1, 0.48, 0.9}) {
    const Eigen::MatrixXd x = smooth_counts(d, spec, t).matrix();
    const int n = 5;
    double expect = 0.0;
    for (int i = 0; i < n; ++i) {
      double row_total = 0.0;
      for (int j = 0; j < n; ++j) row_total += x(i, j) + x(j, i);
      double acc = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        acc += std::fabs((x(i, j) + x(j, i)) / row_total - 1.0 / (n - 1));
      }
      expect = std::max(expect, acc);
    }
    const double got = delta_h(d, spec, t);
    CHECK(got == doctest::Approx(expect).epsilon(1e-12));
    CHECK(got <= 2.0);
  }
}

TEST_CASE("delta_h reports isolated teams") {
  // Team 2 only plays at t=1; a narrow compact kernel isolates it at t=0.
  std::vector<MatchRecord> records{{0.0, 0, 1, 1, 1},
                                   {1.0, 2, 0, 1, 1},
                                   {1.0, 1, 2, 1, 1}};
  const Dataset d = Dataset::build(testutil::team_names(3), records);
  try {
    delta_h(d, {KernelFamily::kEpanechnikov, 0.1}, 0.0);
    FAIL("expected IsolatedTeamError");
  } catch (const IsolatedTeamError& e) {
    CHECK(e.team() == 2);
  }
}

TEST_CASE("condition numbers") {
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(4);
  CHECK(condition_number_M(ScoreVector{zero}) == 1.0);
  Eigen::VectorXd spread(3);
  spread << std::log(3.0), 0.0, -std::log(3.0);
  CHECK(condition_number_M(ScoreVector{spread}) == doctest::Approx(9.0).epsilon(1e-12));
  Eigen::VectorXd wider(3);
  wider << 1.2, 0.0, -1.2;
  CHECK(condition_number_M(ScoreVector{wider}) >
        condition_number_M(ScoreVector{spread}) * 0.0 + 1.0);
  CHECK(condition_number_M(ScoreVector{wider}) == doctest::Approx(std::exp(2.4)));

  CHECK(condition_number_K(1.0) == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
  CHECK(condition_number_K(0.5) == std::exp(2.0));
  CHECK_THROWS_AS(condition_number_K(0.0), DomainError);
  CHECK_THROWS_AS(condition_number_K(1.5), DomainError);
}

TEST_CASE("projection score ranges respect the interpretable condition number") {
  // For fields bounded below by p_min, exp(score range) stays within 1.5 K.
  Rng rng(43);
  for (double p_min : {0.2, 0.35}) {
    const double cap = 1.5 * condition_number_K(p_min);
    for (int trial = 0; trial < 5; ++trial) {
      const int n = 6;
      Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          const double v = rng.uniform(p_min, 1.0 - p_min);
          p(i, j) = v;
          p(j, i) = 1.0 - v;
        }
      }
      const ScoreVector beta = projection(p, FitOptions{1e-12, 50000, 0.0});
      CHECK(condition_number_M(beta) <= cap);
    }
  }
}

TEST_CASE("oracle bound right-hand sides") {
  const OracleBound inactive =
      oracle_bound_rhs(1.0, 0.01, 1.0, 0.02, OracleBoundMode::kPointwiseM);
  CHECK(inactive.value == doctest::Approx(1.44).epsilon(1e-15));
  CHECK_FALSE(inactive.active);

  const OracleBound active =
      oracle_bound_rhs(1.0, 0.0, 1.0, 1e-4, OracleBoundMode::kPointwiseM);
  CHECK(active.value == doctest::Approx(48.0 * 1e-4));
  CHECK(active.active);

  // K-mode never undercuts M-mode while M <= 1.5 K.
  Rng rng(44);
  for (int trial = 0; trial < 50; ++trial) {
    const double k = rng.uniform(1.0, 20.0);
    const double m = rng.uniform(0.0, 1.5) * k;
    const double delta = rng.uniform(0.0, 0.3);
    const double h = rng.uniform(0.001, 0.5);
    const double with_m =
        oracle_bound_rhs(m, delta, 1.0, h, OracleBoundMode::kPointwiseM).value;
    const double with_k =
        oracle_bound_rhs(k, delta, 1.0, h, OracleBoundMode::kPointwiseK).value;
    CHECK(with_k >= with_m);
  }
}

TEST_CASE("trajectory error centers before comparing") {
  std::vector<ScoreVector> est, truth;
  Eigen::VectorXd a(3), b(3);
  a << 0.5, -0.2, -0.3;
  b << 0.4, 0.1, -0.5;
  est.push_back(ScoreVector{a});
  est.push_back(ScoreVector{b});
  truth = est;
  const TrajectoryErrorReport same = trajectory_error(est, truth);
  CHECK(same.uniform_sup == 0.0);
  CHECK(same.per_time_sup == std::vector<double>{0.0, 0.0});

  // A constant offset at one time is invisible after centering.
  est[1].beta.array() += 3.7;
  const TrajectoryErrorReport offset = trajectory_error(est, truth);
  CHECK(offset.per_time_sup[1] <= 1e-12);

  est[0].beta[0] += 0.3;
  const TrajectoryErrorReport moved = trajectory_error(est, truth);
  CHECK(moved.per_time_sup[0] > 0.1);
  CHECK(moved.uniform_sup == moved.per_time_sup[0]);

  CHECK_THROWS_AS(trajectory_error(est, {truth[0]}), ShapeMismatchError);
}

TEST_CASE("loo metrics expose fold-level prediction scores") {
  // 5:2 head-to-head at one time; closed-form two-team folds.
  std::vector<MatchRecord> records{{0.0, 0, 1, 5, 2}};
  const Dataset d = Dataset::build(testutil::team_names(2), records);
  const LooMetrics m = loo_prediction_metrics(d, {KernelFamily::kGaussian, 0.4});
  CHECK(m.loo_prob == doctest::Approx(2.0 / 7.0).epsilon(1e-12));
  const double expect_nll =
      (5.0 * -std::log(4.0 / 6.0) + 2.0 * -std::log(1.0 / 6.0)) / 7.0;
  CHECK(m.loo_nll == doctest::Approx(expect_nll).epsilon(1e-9));
  CHECK(m.folds_skipped == 0);
}

TEST_CASE("estimation error decreases with more games per pair") {
  // More games per round shrink the uniform error of the smoothed fit.
  const int seeds = 20;
  double mean_err[3] = {0.0, 0.0, 0.0};
  const long games[3] = {1, 4, 16};
  const Rng base(505);
  for (int s = 0; s < seeds; ++s) {
    Rng rng = base.fork(s);
    GPSpec gp;
    gp.time_points = 10;
    const Eigen::MatrixXd beta = gp_sample_beta(10, gp, rng);
    std::vector<ScoreVector> truth;
    for (int t = 0; t < 10; ++t) {
      truth.push_back(ScoreVector::centered(beta.col(t)));
    }
    for (int g = 0; g < 3; ++g) {
      Rng match_rng = rng.fork(g);
      const Dataset d = generate_bt_matches(beta, games[g], match_rng);
      const auto points =
          fit_trajectory(d, {KernelFamily::kGaussian, 0.1}, d.distinct_times(),
                         TrajectoryOptions{{1e-10, 10000, 1e-12}, 1});
      std::vector<ScoreVector> est;
      for (const auto& p : points) {
        REQUIRE(p.ok());
        est.push_back(p.report->scores);
      }
      mean_err[g] += trajectory_error(est, truth).uniform_sup / seeds;
    }
  }
  CHECK(mean_err[0] > mean_err[1]);
  CHECK(mean_err[1] > mean_err[2]);
}
