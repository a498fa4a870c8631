#ifndef DYNBT_SIMULATE_HPP
#define DYNBT_SIMULATE_HPP

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <vector>

#include "dynbt/rng.hpp"
#include "dynbt/types.hpp"

namespace dynbt {

// Group-wise mean generator: teams are partitioned (by a seeded random
// permutation) into `groups` near-equal groups; a team in group g draws its
// constant-over-time mean from Uniform(gap*(g-1), gap*(g-1) + base_width).
struct GroupMeanSpec {
  int groups = 5;
  double gap = 1.5;
  double base_width = 0.5;
};

// Gaussian-process specification over M time points with Toeplitz covariance
// Σ_kl = 1 - M^-alpha |k - l|^decay (or an explicit covariance override).
// Means: an explicit N x M matrix, or group-wise constants, or (default)
// i.i.d. Uniform[0, 1] constants per team.
struct GPSpec {
  int time_points = 50;          // M
  double alpha = 1.0;
  double decay = 1.0;            // the lag exponent
  std::optional<Eigen::MatrixXd> covariance;   // M x M when set
  std::optional<Eigen::MatrixXd> means;        // N x M when set
  std::optional<GroupMeanSpec> group_means;
};

// Σ_kl = 1 - M^-alpha |k - l|^decay (M x M, symmetric Toeplitz, unit diag).
Eigen::MatrixXd toeplitz_cov(int m, double alpha, double decay);

// N independent multivariate-normal paths (rows) over the M time points,
// sampled via a Cholesky factor with a one-shot 1e-10 jitter retry
// (FactorizationError when still not factorizable). Draw order per team:
// mean (when generated) then M standard normals.
Eigen::MatrixXd gp_sample_beta(int team_count, const GPSpec& spec, Rng& rng);

// N x N x M field of winning probabilities with p_ij(t) + p_ji(t) = 1.
class ProbabilityField {
 public:
  ProbabilityField(int team_count, int time_points);

  int team_count() const { return n_; }
  int time_points() const { return m_; }
  double at(int i, int j, int t) const { return p_[index(i, j, t)]; }
  void set_pair(int i, int j, int t, double p_ij);
  // Minimum off-diagonal probability over all (i, j, t).
  double min_probability() const;
  // The N x N win-probability matrix at time index t (zero diagonal).
  Eigen::MatrixXd slice(int t) const;
  void validate() const;

 private:
  std::size_t index(int i, int j, int t) const {
    return (static_cast<std::size_t>(t) * n_ + i) * n_ + j;
  }
  int n_ = 0;
  int m_ = 0;
  std::vector<double> p_;
};

// Per-game-count callback: games between (i, j) at time index t (0-based).
using GamesPerPair = std::function<long(int i, int j, int t)>;

// Simulates score-driven matches: x_ij(t) ~ Binomial(n, σ(β_i(t) - β_j(t))),
// x_ji = n - x_ij, one record per (t, i < j) with n >= 1. Times 1..M are
// min-max normalized. Teams are named team_01, team_02, ...
Dataset generate_bt_matches(const Eigen::MatrixXd& beta_paths, long games_per_pair,
                            Rng& rng);
Dataset generate_bt_matches(const Eigen::MatrixXd& beta_paths,
                            const GamesPerPair& games, Rng& rng);

// Smoothly varying model-agnostic probabilities: one independent GP path per
// pair (i < j), then one global affine map of all raw draws onto
// [p_lo, p_hi], and p_ji = 1 - p_ij. The group-wise and uniform mean modes
// draw one constant mean per pair, so the field carries persistent pairwise
// preferences without any transitive score structure; an explicit N x M mean
// matrix instead contributes u_i - u_j to pair (i, j). If every raw draw is
// equal the field degenerates to the midpoint (p_lo + p_hi) / 2.
ProbabilityField generate_agnostic_probs(int team_count, const GPSpec& spec,
                                         double p_lo, double p_hi, Rng& rng);

// x_ij(t) ~ Binomial(n, p_ij(t)), x_ji = n - x_ij.
Dataset generate_agnostic_matches(const ProbabilityField& field,
                                  long games_per_pair, Rng& rng);
Dataset generate_agnostic_matches(const ProbabilityField& field,
                                  const GamesPerPair& games, Rng& rng);

}  // namespace dynbt

#endif  // DYNBT_SIMULATE_HPP
