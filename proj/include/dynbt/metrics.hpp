#ifndef DYNBT_METRICS_HPP
#define DYNBT_METRICS_HPP

#include <vector>

#include "dynbt/tuning.hpp"
#include "dynbt/types.hpp"

namespace dynbt {

// Mean over teams and times of |est_rank - true_rank|. Both arguments are
// per-time rank vectors (team index -> rank). Throws ShapeMismatchError on
// differing grids or team counts.
double rank_diff(const std::vector<std::vector<int>>& est_ranks,
                 const std::vector<std::vector<int>>& true_ranks);

struct LooMetrics {
  double loo_prob = 0.0;  // held-out win/loss prediction error
  double loo_nll = 0.0;   // held-out negative log-likelihood
  long folds_skipped = 0;
};

// Leave-one-out prediction metrics of the smoothed fit (delegates to the
// LOOCV machinery; one fold per game).
LooMetrics loo_prediction_metrics(const Dataset& dataset, const KernelSpec& spec,
                                  const LoocvOptions& options = {});

// Schedule-regularity diagnostic at time t,
//   δ_h(t) = max_i Σ_{j≠i} | T_ij(t)/T_i(t) - 1/(N-1) |
// over smoothed pair totals T_ij = X_ij + X_ji. Zero iff every pair carries
// equal weight. Throws IsolatedTeamError when some T_i(t) = 0.
double delta_h(const Dataset& dataset, const KernelSpec& spec, double t);

// exp(max β* - min β*): maximal score discrepancy.
double condition_number_M(const ScoreVector& beta_star);

// exp(1 / p_min) for p_min in (0, 1].
double condition_number_K(double p_min);

enum class OracleBoundMode { kPointwiseM, kPointwiseK };

struct OracleBound {
  double value = 0.0;
  // The bound only certifies the estimate when its value is below 1/3.
  bool active = false;
};

// Right-hand side of the estimation-error oracle bound:
//   48 M(t) (δ_h(t) + C_s h)  or  72 K (δ_h(t) + C_s h).
OracleBound oracle_bound_rhs(double m_or_k, double delta_h_t, double c_s,
                             double h, OracleBoundMode mode);

struct TrajectoryErrorReport {
  std::vector<double> per_time_sup;
  double uniform_sup = 0.0;
};

// Sup-norm error per time point and its max over the grid; both inputs are
// re-centered per time before comparison.
TrajectoryErrorReport trajectory_error(const std::vector<ScoreVector>& estimate,
                                       const std::vector<ScoreVector>& truth);

}  // namespace dynbt

#endif  // DYNBT_METRICS_HPP
