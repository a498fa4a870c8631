#ifndef DYNBT_SOLVER_INTERNAL_HPP
#define DYNBT_SOLVER_INTERNAL_HPP

#include <Eigen/Core>

namespace dynbt::internal {

struct MmResult {
  Eigen::VectorXd beta;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

// Minorization-maximization fixed point on a prevalidated instance.
// X: win counts; T = X + X^T; S: row sums of X; total: sum of X. The caller
// guarantees strong connectivity of X. `warm` (when non-null) is the starting
// beta; otherwise zero.
MmResult mm_fit(const Eigen::MatrixXd& X, const Eigen::MatrixXd& T,
                const Eigen::VectorXd& S, double total, double tol,
                int max_iter, const Eigen::VectorXd* warm);

// Sup-norm of the normalized stationarity residual
//   max_i |Σ_j T_ij σ(β_i - β_j) - S_i| / total
double stationarity_residual(const Eigen::MatrixXd& T, const Eigen::VectorXd& S,
                             double total, const Eigen::VectorXd& beta);

}  // namespace dynbt::internal

#endif  // DYNBT_SOLVER_INTERNAL_HPP
