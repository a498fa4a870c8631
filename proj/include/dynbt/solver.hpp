#ifndef DYNBT_SOLVER_HPP
#define DYNBT_SOLVER_HPP

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "dynbt/types.hpp"

namespace dynbt {

struct FitOptions {
  // Convergence tolerance on the sup-norm of the normalized stationarity
  // residual max_i |Σ_j T_ij σ(β_i - β_j) - Σ_j X_ij| / Σ X. The residual is
  // scale-free, so fit(c X) walks the same iterates as fit(X).
  double tol = 1e-10;
  int max_iter = 10000;
  // Edge threshold for the internal connectivity gate: 0 for raw counts,
  // 1e-12 recommended for smoothed matrices.
  double connectivity_eps = 0.0;
};

struct FitReport {
  ScoreVector scores;
  int iterations = 0;
  double final_risk = 0.0;
  bool converged = false;
  // Normalized stationarity residual at the returned scores; <= tol whenever
  // converged is true.
  double grad_inf_norm = 0.0;
};

// Normalized negative log-likelihood risk
//   Σ_{i≠j} X_ij log(1 + exp(β_j - β_i)) / Σ_{i≠j} X_ij,
// evaluated with the stable softplus branch. Throws EmptyDataError when the
// total count is zero.
double empirical_risk(const ScoreVector& scores, const CountMatrix& counts);

// Gradient of empirical_risk w.r.t. beta; components sum to zero.
Eigen::VectorXd risk_gradient(const ScoreVector& scores,
                              const CountMatrix& counts);

// Minimizes the risk over the sum-zero plane by the minorization-maximization
// fixed point u_i <- (Σ_j X_ij) / (Σ_j T_ij / (u_i + u_j)), u = exp(β),
// recentered every sweep. Requires the connectivity condition (otherwise
// NotStronglyConnectedError with a witness subset). When max_iter is hit the
// best iterate is returned with converged = false.
FitReport fit(const CountMatrix& counts, const FitOptions& options = {});

// Plain gradient descent with backtracking on the same risk; kept as an
// independent cross-check of the MM path (the minimizer is unique).
FitReport fit_gradient_descent(const CountMatrix& counts,
                               const FitOptions& options = {});

// One grid point of a trajectory fit. Exactly one of `report` /
// `failed_component` is meaningful: on a connectivity failure the witness
// subset is recorded and `report` is empty.
struct TrajectoryPoint {
  double time = 0.0;
  std::optional<FitReport> report;
  std::vector<int> failed_component;

  bool ok() const { return report.has_value(); }
};

struct TrajectoryOptions {
  FitOptions fit;
  // Sequential mode warm-starts each point from the previous solution;
  // parallel mode (jobs > 1) fits points independently. Both agree within
  // the convergence tolerance because the minimizer is unique.
  int jobs = 1;
};

// Smooths the data at each grid time and fits the score vector there.
// Per-point connectivity failures are recorded in their slot without
// aborting the remaining points. Grid times must lie in [0, 1].
std::vector<TrajectoryPoint> fit_trajectory(const Dataset& dataset,
                                            const KernelSpec& spec,
                                            const std::vector<double>& grid,
                                            const TrajectoryOptions& options = {});

// Best sum-zero approximation to a known winning-probability matrix:
// minimizes Σ_{i≠j} p_ij log(1 + exp(β_j - β_i)) / C(N,2). Requires
// p_ij in (0, 1), p_ij + p_ji = 1, zero diagonal (otherwise DomainError).
ScoreVector projection(const Eigen::MatrixXd& win_probs,
                       const FitOptions& options = {});

// Hessian of the unnormalized risk: a graph Laplacian with edge weights
// (X_ij + X_ji) σ(β_i - β_j) σ(β_j - β_i). Symmetric, PSD, zero row sums.
Eigen::MatrixXd hessian(const ScoreVector& scores, const CountMatrix& counts);

// Ranks 1..N, rank 1 for the largest score, ties broken by team index.
// Returned vector maps team index -> rank.
std::vector<int> rank(const ScoreVector& scores);

}  // namespace dynbt

#endif  // DYNBT_SOLVER_HPP
