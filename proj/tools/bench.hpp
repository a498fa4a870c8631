#ifndef DYNBT_TOOLS_BENCH_HPP
#define DYNBT_TOOLS_BENCH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dynbt/metrics.hpp"
#include "dynbt/simulate.hpp"
#include "dynbt/solver.hpp"
#include "dynbt/tuning.hpp"

#include "json.hpp"

namespace dynbt::cli {

// One estimator row in the style of the synthetic-study tables.
struct EstimatorMetrics {
  double rank_diff = 0.0;
  long rank_times_used = 0;  // time points contributing to rank_diff
  double loo_prob = 0.0;
  double loo_nll = 0.0;      // meaningful only when has_nll
  bool has_nll = false;
  long folds_skipped = 0;
};

struct StudyResult {
  double h_star = 0.0;
  double h_star_nll = 0.0;
  EstimatorMetrics dynamic_bt;
  EstimatorMetrics static_bt;
  EstimatorMetrics win_rate;
};

// Per-time rankings by descending per-time win rate (wins/games, 0/0 treated
// as rate 0), ties broken by team index.
std::vector<std::vector<int>> win_rate_ranks(const Dataset& dataset);

// Per-time static fits on the raw count matrices. Disconnected times leave an
// empty rank vector in their slot.
std::vector<std::vector<int>> static_bt_ranks(const Dataset& dataset,
                                              const FitOptions& options);

// Leave-one-out metrics of the per-time static fit (folds at disconnected
// training matrices are skipped and counted).
LoocvResult static_bt_loo(const Dataset& dataset, const FitOptions& options);

// Leave-one-out win/loss prediction error of the win-rate ranking.
LoocvResult win_rate_loo(const Dataset& dataset);

// Full estimator comparison on one dataset against per-time truth rankings.
// When fixed_h is set the dynamic bandwidth is taken as given; otherwise it
// is selected by LOOCV over h_grid.
StudyResult run_study(const Dataset& dataset,
                      const std::vector<std::vector<int>>& true_ranks,
                      KernelFamily family, std::optional<double> fixed_h,
                      const std::vector<double>& h_grid,
                      const LoocvOptions& loocv_options);

// True per-time rankings from known score paths (columns of an N x M matrix).
std::vector<std::vector<int>> ranks_from_scores(const Eigen::MatrixXd& paths);

// True per-time rankings of a probability field via its projection scores.
std::vector<std::vector<int>> ranks_from_field(const ProbabilityField& field,
                                               const FitOptions& options);

struct BenchConfig {
  int table = 1;
  int seeds = 20;
  std::uint64_t seed = 0;
  int jobs = 1;
  int team_count = 50;
  int time_points = 50;
  long games_per_pair = 1;
  std::vector<double> h_grid;  // empty = default grid
};

// Synthetic-study reproduction; `table` selects the pipeline (1: score-driven
// truth, 2: model-agnostic truth, 4/5/6: connectivity-frequency studies).
nlohmann::ordered_json run_bench(const BenchConfig& config);

// Per-seed CSV lines for tables 1 and 2 (header + one line per seed).
std::string per_seed_csv(const nlohmann::ordered_json& report);

}  // namespace dynbt::cli

#endif  // DYNBT_TOOLS_BENCH_HPP
