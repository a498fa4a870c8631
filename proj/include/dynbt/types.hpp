#ifndef DYNBT_TYPES_HPP
#define DYNBT_TYPES_HPP

#include <Eigen/Core>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dynbt/errors.hpp"

namespace dynbt {

// One timestamped pairwise outcome: team_a won `wins_a` games and team_b won
// `wins_b` games when they met at `time`. Times are normalized to [0, 1].
// Several games between the same pair at the same time are stored as one
// record with integer counts; smoothing is linear in counts, so this is
// equivalent to repeated unit records.
struct MatchRecord {
  double time = 0.0;
  int team_a = 0;
  int team_b = 0;
  long wins_a = 0;
  long wins_b = 0;

  long games() const { return wins_a + wins_b; }
};

// Immutable collection of match records. Teams are indexed in first-appearance
// order; records are sorted nondecreasing by time. Safe to share read-only
// across threads.
class Dataset {
 public:
  // Validates invariants (N >= 2, indices in range, distinct opponents,
  // wins_a + wins_b >= 1, times in [0,1]), sorts records by time (stable),
  // and computes the distinct-time index. `raw_times`, when nonempty, must be
  // parallel to `records` and is carried along for round-tripping; when empty
  // the normalized times are used as raw times.
  static Dataset build(std::vector<std::string> teams,
                       std::vector<MatchRecord> records,
                       std::vector<double> raw_times = {});

  int team_count() const { return static_cast<int>(teams_.size()); }
  const std::vector<std::string>& teams() const { return teams_; }
  const std::vector<MatchRecord>& records() const { return records_; }
  const std::vector<double>& distinct_times() const { return distinct_times_; }
  // Raw (pre-normalization) time of each record, parallel to records().
  const std::vector<double>& raw_times() const { return raw_times_; }

  long record_count() const { return static_cast<long>(records_.size()); }
  // Total number of games, Σ (wins_a + wins_b).
  long total_games() const { return total_games_; }

  // Index of a team name, or -1 when absent.
  int team_index(std::string_view name) const;

  // Records are time-sorted; [record_begin(k), record_end(k)) is the record
  // index range of the k-th distinct time.
  long record_begin(int time_index) const { return time_offsets_[time_index]; }
  long record_end(int time_index) const {
    return time_offsets_[time_index + 1];
  }

 private:
  Dataset() = default;

  std::vector<std::string> teams_;
  std::vector<MatchRecord> records_;
  std::vector<double> raw_times_;
  std::vector<double> distinct_times_;
  std::vector<long> time_offsets_;
  std::unordered_map<std::string, int> index_;
  long total_games_ = 0;
};

// N x N nonnegative matrix of (possibly kernel-smoothed) win counts with a
// zero diagonal: entry (i, j) counts/weighs wins of i over j.
class CountMatrix {
 public:
  // Validates squareness, nonnegativity, finiteness, zero diagonal.
  explicit CountMatrix(Eigen::MatrixXd entries);
  static CountMatrix zero(int n);

  int size() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXd& matrix() const { return entries_; }
  double operator()(int i, int j) const { return entries_(i, j); }
  // Sum of all entries.
  double total() const { return entries_.sum(); }

 private:
  Eigen::MatrixXd entries_;
};

// Per-team log-scores with the sum-zero identifiability constraint.
struct ScoreVector {
  Eigen::VectorXd beta;

  int size() const { return static_cast<int>(beta.size()); }
  // Subtracts the mean and validates finiteness.
  static ScoreVector centered(Eigen::VectorXd values);
  // Validates Σ beta == 0 within 1e-9 and finiteness.
  void validate() const;
};

enum class KernelFamily { kGaussian, kEpanechnikov };

// Kernel family plus bandwidth. Both families are symmetric densities with
// unit integral, finite first absolute moment, finite total variation, and
// sup-norm <= 1 in their standard forms, so no rescaling is applied.
struct KernelSpec {
  KernelFamily family = KernelFamily::kGaussian;
  double bandwidth = 0.1;

  // Lipschitz constant of the base kernel W (not of W_h).
  double lipschitz() const;
  // Throws DomainError unless bandwidth is finite and > 0.
  void validate() const;
};

// Constants of the theory layer, used by bandwidth schedules and diagnostic
// bounds. Defaults are the neutral choices documented in the README.
struct TheoryParams {
  double density_lower = 1.0;      // D_m, in (0, 1]
  double density_upper = 1.0;      // D_M, >= 1
  double prob_lipschitz = 1.0;     // L_p
  double min_win_prob = 0.5;       // p_min, in (0, 1]
  double smoothing_constant = 1.0; // C_s (free constant, default 1)
  double bandwidth_slack = 0.1;    // eta > 0
  double kernel_lipschitz = 1.0;   // L_W
  double games_per_pair = 1.0;     // T > 0
  int team_count = 2;              // N >= 2

  // Throws DomainError on any out-of-range field.
  void validate() const;
};

}  // namespace dynbt

#endif  // DYNBT_TYPES_HPP
