#include "dynbt/metrics.hpp"

#include <cmath>

#include "dynbt/kernel.hpp"

namespace dynbt {

double rank_diff(const std::vector<std::vector<int>>& est_ranks,
                 const std::vector<std::vector<int>>& true_ranks) {
  if (est_ranks.size() != true_ranks.size()) {
    throw ShapeMismatchError("rank_diff: differing numbers of time points");
  }
  if (est_ranks.empty()) throw ShapeMismatchError("rank_diff: empty input");
  double acc = 0.0;
  long terms = 0;
  for (std::size_t t = 0; t < est_ranks.size(); ++t) {
    if (est_ranks[t].size() != true_ranks[t].size()) {
      throw ShapeMismatchError("rank_diff: differing team counts at a time point");
    }
    for (std::size_t i = 0; i < est_ranks[t].size(); ++i) {
      acc += std::fabs(static_cast<double>(est_ranks[t][i] - true_ranks[t][i]));
      ++terms;
    }
  }
  return acc / static_cast<double>(terms);
}

LooMetrics loo_prediction_metrics(const Dataset& dataset, const KernelSpec& spec,
                                  const LoocvOptions& options) {
  const LoocvResult r = loocv_evaluate(dataset, spec, options);
  return LooMetrics{r.prediction_error, r.nll, r.folds_skipped};
}

double delta_h(const Dataset& dataset, const KernelSpec& spec, double t) {
  const CountMatrix smoothed = smooth_counts(dataset, spec, t);
  const int n = smoothed.size();
  if (n < 2) throw DomainError("delta_h: need at least 2 teams");
  const Eigen::MatrixXd totals = smoothed.matrix() + smoothed.matrix().transpose();
  const Eigen::VectorXd per_team = totals.rowwise().sum();
  for (int i = 0; i < n; ++i) {
    if (!(per_team[i] > 0.0)) {
      throw IsolatedTeamError(
          "team " + std::to_string(i) + " has no smoothed games at this time", i);
    }
  }
  const double even_share = 1.0 / static_cast<double>(n - 1);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j != i) acc += std::fabs(totals(i, j) / per_team[i] - even_share);
    }
    worst = std::max(worst, acc);
  }
  return worst;
}

double condition_number_M(const ScoreVector& beta_star) {
  if (beta_star.size() == 0 || !beta_star.beta.allFinite()) {
    throw DomainError("condition_number_M: scores must be finite and nonempty");
  }
  return std::exp(beta_star.beta.maxCoeff() - beta_star.beta.minCoeff());
}

double condition_number_K(double p_min) {
  if (!(p_min > 0.0 && p_min <= 1.0)) {
    throw DomainError("condition_number_K: p_min must lie in (0, 1]");
  }
  return std::exp(1.0 / p_min);
}

OracleBound oracle_bound_rhs(double m_or_k, double delta_h_t, double c_s,
                             double h, OracleBoundMode mode) {
  const double coefficient = (mode == OracleBoundMode::kPointwiseM) ? 48.0 : 72.0;
  OracleBound bound;
  bound.value = coefficient * m_or_k * (delta_h_t + c_s * h);
  bound.active = bound.value < 1.0 / 3.0;
  return bound;
}

TrajectoryErrorReport trajectory_error(const std::vector<ScoreVector>& estimate,
                                       const std::vector<ScoreVector>& truth) {
  if (estimate.size() != truth.size()) {
    throw ShapeMismatchError("trajectory_error: differing numbers of time points");
  }
  if (estimate.empty()) throw ShapeMismatchError("trajectory_error: empty input");
  TrajectoryErrorReport report;
  report.per_time_sup.reserve(estimate.size());
  for (std::size_t t = 0; t < estimate.size(); ++t) {
    if (estimate[t].size() != truth[t].size()) {
      throw ShapeMismatchError("trajectory_error: differing team counts");
    }
    const Eigen::VectorXd est = estimate[t].beta.array() - estimate[t].beta.mean();
    const Eigen::VectorXd tru = truth[t].beta.array() - truth[t].beta.mean();
    const double sup = (est - tru).lpNorm<Eigen::Infinity>();
    report.per_time_sup.push_back(sup);
    report.uniform_sup = std::max(report.uniform_sup, sup);
  }
  return report;
}

}  // namespace dynbt
