#include "dynbt/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dynbt/graph.hpp"
#include "dynbt/kernel.hpp"
#include "dynbt/parallel.hpp"
#include "solver_internal.hpp"

namespace dynbt {

namespace {

// log(1 + exp(z)) without overflow.
inline double softplus(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::fabs(z)));
}

// 1 / (1 + exp(-z)) without overflow.
inline double logistic(double z) {
  if (z >= 0.0) {
    const double e = std::exp(-z);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

void check_shapes(const ScoreVector& scores, const CountMatrix& counts) {
  if (scores.size() != counts.size()) {
    throw ShapeMismatchError("score vector of length " +
                             std::to_string(scores.size()) +
                             " against matrix of size " +
                             std::to_string(counts.size()));
  }
}

double require_total(const CountMatrix& counts) {
  const double total = counts.total();
  if (!(total > 0.0)) throw EmptyDataError("total count is zero");
  return total;
}

}  // namespace

namespace internal {

double stationarity_residual(const Eigen::MatrixXd& T, const Eigen::VectorXd& S,
                             double total, const Eigen::VectorXd& beta) {
  const int n = static_cast<int>(beta.size());
  const double shift = beta.maxCoeff();
  Eigen::VectorXd u = (beta.array() - shift).exp();
  // u_i in (0, 1]; the floor keeps T_ij / (u_i + u_j) finite for spreads
  // beyond the representable range.
  u = u.cwiseMax(1e-290);
  double res = 0.0;
  for (int i = 0; i < n; ++i) {
    const double ui = u[i];
    double r = 0.0;
    for (int j = 0; j < n; ++j) r += T(i, j) / (ui + u[j]);
    res = std::max(res, std::fabs(ui * r - S[i]));
  }
  return res / total;
}

MmResult mm_fit(const Eigen::MatrixXd& X, const Eigen::MatrixXd& T,
                const Eigen::VectorXd& S, double total, double tol,
                int max_iter, const Eigen::VectorXd* warm) {
  const int n = static_cast<int>(X.rows());
  Eigen::VectorXd beta = warm ? *warm : Eigen::VectorXd::Zero(n);
  beta.array() -= beta.mean();
  const Eigen::VectorXd log_S = S.array().log();

  Eigen::VectorXd u(n);
  Eigen::VectorXd denom(n);
  MmResult result;
  for (int iter = 0;; ++iter) {
    const double shift = beta.maxCoeff();
    u = (beta.array() - shift).exp().max(1e-290);
    double res = 0.0;
    for (int i = 0; i < n; ++i) {
      const double ui = u[i];
      // T is symmetric, so its contiguous column i doubles as row i.
      const double* trow = T.data() + static_cast<std::ptrdiff_t>(i) * n;
      double d = 0.0;
      for (int j = 0; j < n; ++j) d += trow[j] / (ui + u[j]);
      denom[i] = d;
      res = std::max(res, std::fabs(ui * d - S[i]));
    }
    res /= total;
    result.iterations = iter;
    result.residual = res;
    if (res <= tol) {
      result.converged = true;
      break;
    }
    if (iter >= max_iter) break;
    // u_i <- S_i / denom_i, recentred; the shift cancels in the ratio.
    beta = log_S - denom.array().log().matrix();
    beta.array() -= beta.mean();
  }
  result.beta = std::move(beta);
  return result;
}

}  // namespace internal

double empirical_risk(const ScoreVector& scores, const CountMatrix& counts) {
  check_shapes(scores, counts);
  const double total = require_total(counts);
  const int n = counts.size();
  const Eigen::MatrixXd& X = counts.matrix();
  const Eigen::VectorXd& beta = scores.beta;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j || X(i, j) == 0.0) continue;
      acc += X(i, j) * softplus(beta[j] - beta[i]);
    }
  }
  return acc / total;
}

Eigen::VectorXd risk_gradient(const ScoreVector& scores, const CountMatrix& counts) {
  check_shapes(scores, counts);
  const double total = require_total(counts);
  const int n = counts.size();
  const Eigen::MatrixXd& X = counts.matrix();
  const Eigen::VectorXd& beta = scores.beta;
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double t = X(i, j) + X(j, i);
      if (t == 0.0) continue;
      const double s_ij = logistic(beta[i] - beta[j]);
      const double g = t * s_ij - X(i, j);
      grad[i] += g;
      grad[j] -= g;
    }
  }
  return grad / total;
}

namespace {

FitReport finish_report(internal::MmResult&& core, const CountMatrix& counts) {
  FitReport report;
  report.scores = ScoreVector::centered(std::move(core.beta));
  report.iterations = core.iterations;
  report.converged = core.converged;
  report.grad_inf_norm = core.residual;
  report.final_risk = empirical_risk(report.scores, counts);
  return report;
}

void gate_connectivity(const Eigen::MatrixXd& X, double eps) {
  if (X.rows() < 2) throw DomainError("need at least 2 teams");
  std::vector<int> witness = connectivity_witness(X, eps);
  if (!witness.empty()) {
    std::string msg = "comparison digraph is not strongly connected; teams {";
    for (std::size_t k = 0; k < witness.size(); ++k) {
      if (k) msg += ", ";
      msg += std::to_string(witness[k]);
    }
    msg += "} have no wins against the rest";
    throw NotStronglyConnectedError(msg, std::move(witness));
  }
}

FitReport fit_with_warm(const CountMatrix& counts, const FitOptions& options,
                        const Eigen::VectorXd* warm) {
  const Eigen::MatrixXd& X = counts.matrix();
  gate_connectivity(X, options.connectivity_eps);
  const Eigen::MatrixXd T = X + X.transpose();
  const Eigen::VectorXd S = X.rowwise().sum();
  return finish_report(
      internal::mm_fit(X, T, S, X.sum(), options.tol, options.max_iter, warm),
      counts);
}

}  // namespace

FitReport fit(const CountMatrix& counts, const FitOptions& options) {
  return fit_with_warm(counts, options, nullptr);
}

FitReport fit_gradient_descent(const CountMatrix& counts, const FitOptions& options) {
  const Eigen::MatrixXd& X = counts.matrix();
  gate_connectivity(X, options.connectivity_eps);
  const int n = counts.size();
  const double total = X.sum();
  const Eigen::MatrixXd T = X + X.transpose();
  const Eigen::VectorXd S = X.rowwise().sum();

  ScoreVector scores{Eigen::VectorXd::Zero(n)};
  // Constant step from the curvature bound of the normalized risk (spectral
  // norm of the Laplacian Hessian is at most twice its largest row sum, with
  // edge weights bounded by T/4). Descent is then monotone without a line
  // search, which would drown in rounding noise near the optimum.
  const double lipschitz = T.rowwise().sum().maxCoeff() / (2.0 * total);
  const double step = 1.0 / lipschitz;

  FitReport report;
  int iter = 0;
  for (;; ++iter) {
    const Eigen::VectorXd grad = risk_gradient(scores, counts);
    const double res = grad.lpNorm<Eigen::Infinity>();
    if (res <= options.tol || iter >= options.max_iter) {
      report.converged = res <= options.tol;
      report.grad_inf_norm = res;
      break;
    }
    scores.beta -= step * grad;
    scores.beta.array() -= scores.beta.mean();
  }
  report.final_risk = empirical_risk(scores, counts);
  report.scores = ScoreVector::centered(std::move(scores.beta));
  report.iterations = iter;
  return report;
}

std::vector<TrajectoryPoint> fit_trajectory(const Dataset& dataset,
                                            const KernelSpec& spec,
                                            const std::vector<double>& grid,
                                            const TrajectoryOptions& options) {
  spec.validate();
  if (grid.empty()) throw DomainError("fit_trajectory: empty time grid");
  for (double t : grid) {
    if (!(std::isfinite(t) && t >= 0.0 && t <= 1.0)) {
      throw DomainError("fit_trajectory: grid time outside [0, 1]");
    }
  }

  std::vector<TrajectoryPoint> points(grid.size());
  auto fit_point = [&](long k, const Eigen::VectorXd* warm) {
    TrajectoryPoint& point = points[k];
    point.time = grid[k];
    CountMatrix smoothed = smooth_counts(dataset, spec, grid[k]);
    try {
      point.report = fit_with_warm(smoothed, options.fit, warm);
    } catch (const NotStronglyConnectedError& e) {
      point.failed_component = e.component();
    }
  };

  if (options.jobs > 1) {
    parallel_for(static_cast<long>(grid.size()), options.jobs,
                 [&](long k) { fit_point(k, nullptr); });
  } else {
    Eigen::VectorXd warm;
    bool have_warm = false;
    for (long k = 0; k < static_cast<long>(grid.size()); ++k) {
      fit_point(k, have_warm ? &warm : nullptr);
      if (points[k].ok()) {
        warm = points[k].report->scores.beta;
        have_warm = true;
      }
    }
  }
  return points;
}

ScoreVector projection(const Eigen::MatrixXd& win_probs, const FitOptions& options) {
  if (win_probs.rows() != win_probs.cols()) {
    throw DomainError("projection: matrix must be square");
  }
  const int n = static_cast<int>(win_probs.rows());
  if (n < 2) throw DomainError("projection: need at least 2 teams");
  for (int i = 0; i < n; ++i) {
    if (win_probs(i, i) != 0.0) {
      throw DomainError("projection: diagonal must be zero");
    }
    for (int j = i + 1; j < n; ++j) {
      const double p = win_probs(i, j);
      const double q = win_probs(j, i);
      if (!(p > 0.0 && p < 1.0) || !(q > 0.0 && q < 1.0)) {
        throw DomainError("projection: probabilities must lie in (0, 1)");
      }
      if (std::fabs(p + q - 1.0) > 1e-9) {
        throw DomainError("projection: p_ij + p_ji must equal 1");
      }
    }
  }
  // With Σ p_ij = C(N,2) the probability-weighted risk is exactly the count
  // risk on X = P, so the same minimizer applies.
  return fit(CountMatrix(win_probs), options).scores;
}

Eigen::MatrixXd hessian(const ScoreVector& scores, const CountMatrix& counts) {
  check_shapes(scores, counts);
  require_total(counts);
  const int n = counts.size();
  const Eigen::MatrixXd& X = counts.matrix();
  const Eigen::VectorXd& beta = scores.beta;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double t = X(i, j) + X(j, i);
      if (t == 0.0) continue;
      const double s = logistic(beta[i] - beta[j]);
      const double w = t * s * (1.0 - s);
      h(i, j) = -w;
      h(j, i) = -w;
    }
  }
  // Diagonal set to the negative off-diagonal row sum, so row sums vanish
  // exactly (a graph Laplacian).
  for (int i = 0; i < n; ++i) h(i, i) = -h.row(i).sum();
  return h;
}

std::vector<int> rank(const ScoreVector& scores) {
  if (!scores.beta.allFinite()) throw DomainError("rank: non-finite scores");
  const int n = scores.size();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return scores.beta[a] > scores.beta[b];
  });
  std::vector<int> ranks(n);
  for (int pos = 0; pos < n; ++pos) ranks[order[pos]] = pos + 1;
  return ranks;
}

}  // namespace dynbt
