#include "dynbt/tuning.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>

#include "dynbt/graph.hpp"
#include "dynbt/kernel.hpp"
#include "dynbt/parallel.hpp"
#include "dynbt/rng.hpp"
#include "solver_internal.hpp"

namespace dynbt {

namespace {

// Prediction error of the held-out winner: 1 when predicted losing, 1/2 at
// exactly even odds.
inline double prediction_error(double p_win) {
  if (p_win < 0.5) return 1.0;
  if (p_win == 0.5) return 0.5;
  return 0.0;
}

struct TimeSlot {
  // Training state at this distinct time; mutated per fold and restored.
  Eigen::MatrixXd counts;   // smoothed X
  Eigen::MatrixXd totals;   // X + X^T
  Eigen::VectorXd row_sums;
  double total = 0.0;
  Eigen::VectorXd base_beta;
  bool base_ok = false;
  // Cholesky of the grounded base Hessian, shared by every fold at this
  // time as a chord-iteration preconditioner.
  Eigen::LLT<Eigen::MatrixXd> base_llt;
  bool llt_ok = false;

  double nll = 0.0;
  double pred_error = 0.0;
  long used = 0;
  long skipped = 0;
};

// Unnormalized stationarity gradient g_i = Σ_j T_ij σ(β_i - β_j) - S_i,
// with σ built from u = exp(β - max β).
void fold_gradient(const Eigen::MatrixXd& totals, const Eigen::VectorXd& row_sums,
                   const Eigen::VectorXd& beta, Eigen::VectorXd* grad) {
  const int n = static_cast<int>(beta.size());
  Eigen::VectorXd u = (beta.array() - beta.maxCoeff()).exp().max(1e-290);
  grad->noalias() = -row_sums;
  for (int i = 0; i < n; ++i) {
    const double ui = u[i];
    for (int j = i + 1; j < n; ++j) {
      const double s = ui / (ui + u[j]);
      const double t = totals(i, j);
      (*grad)[i] += t * s;
      (*grad)[j] += t * (1.0 - s);
    }
  }
}

// Refits one fold. Chord iterations with the base factor converge in a
// handful of steps because one removed game barely perturbs the Hessian;
// the MM fixed point is the fallback when the factor is unavailable or the
// perturbation is too large.
bool fold_refit(const TimeSlot& slot, double tol, int max_iter,
                Eigen::VectorXd* beta) {
  const int n = static_cast<int>(slot.base_beta.size());
  *beta = slot.base_beta;
  if (slot.llt_ok) {
    Eigen::VectorXd grad(n);
    for (int iter = 0; iter < 50; ++iter) {
      fold_gradient(slot.totals, slot.row_sums, *beta, &grad);
      if (grad.lpNorm<Eigen::Infinity>() <= tol * slot.total) return true;
      const Eigen::VectorXd step = slot.base_llt.solve(grad.head(n - 1));
      beta->head(n - 1) -= step;
      beta->array() -= beta->mean();
    }
  }
  const internal::MmResult result =
      internal::mm_fit(slot.counts, slot.totals, slot.row_sums, slot.total, tol,
                       max_iter, &slot.base_beta);
  *beta = result.beta;
  return result.converged;
}

// Number of games of the (record, side) pair selected into the subsample;
// `selected` is a sorted list of global game indices (empty = take all).
long selected_count(const std::vector<long>& selected, long game_begin,
                    long game_end) {
  if (selected.empty()) return game_end - game_begin;
  const auto lo = std::lower_bound(selected.begin(), selected.end(), game_begin);
  const auto hi = std::lower_bound(selected.begin(), selected.end(), game_end);
  return hi - lo;
}

}  // namespace

LoocvResult loocv_evaluate(const Dataset& dataset, const KernelSpec& spec,
                           const LoocvOptions& options) {
  spec.validate();
  if (dataset.total_games() < 2) {
    throw DomainError("loocv needs at least 2 games");
  }

  // Optional subsample of global game indices, sorted for range counting.
  std::vector<long> selected;
  if (options.subsample > 0 && options.subsample < dataset.total_games()) {
    Rng rng(options.subsample_seed);
    const long total = dataset.total_games();
    std::vector<long> pool(total);
    for (long g = 0; g < total; ++g) pool[g] = g;
    for (long k = 0; k < options.subsample; ++k) {
      const long j = k + static_cast<long>(rng.uniform() * static_cast<double>(total - k));
      std::swap(pool[k], pool[std::min(j, total - 1)]);
    }
    selected.assign(pool.begin(), pool.begin() + options.subsample);
    std::sort(selected.begin(), selected.end());
  }

  const auto& times = dataset.distinct_times();
  const int n_times = static_cast<int>(times.size());
  const int n = dataset.team_count();
  const double eps = options.fit.connectivity_eps;
  // Weight the held-out game carries in the smoothed matrix at its own time.
  const double w0 = kernel_weight(spec, 0.0, 0.0);

  // Per-time game offsets into the global fold index space.
  std::vector<long> game_offsets(n_times + 1, 0);
  {
    long cursor = 0;
    long record_index = 0;
    for (int k = 0; k < n_times; ++k) {
      game_offsets[k] = cursor;
      for (; record_index < dataset.record_end(k); ++record_index) {
        cursor += dataset.records()[record_index].games();
      }
    }
    game_offsets[n_times] = cursor;
  }

  // Pass 1 (sequential): smoothed training state, the full-data fit, and the
  // fold preconditioner at every distinct time, warm-started along time.
  std::vector<TimeSlot> slots(n_times);
  {
    Eigen::VectorXd warm;
    bool have_warm = false;
    for (int k = 0; k < n_times; ++k) {
      TimeSlot& slot = slots[k];
      slot.counts = smooth_counts(dataset, spec, times[k]).matrix();
      slot.totals = slot.counts + slot.counts.transpose();
      slot.row_sums = slot.counts.rowwise().sum();
      slot.total = slot.counts.sum();
      if (!connectivity_witness(slot.counts, eps).empty()) continue;
      auto fitted = internal::mm_fit(slot.counts, slot.totals, slot.row_sums,
                                     slot.total, options.fit.tol,
                                     options.fit.max_iter,
                                     have_warm ? &warm : nullptr);
      slot.base_beta = fitted.beta;
      slot.base_ok = true;
      warm = std::move(fitted.beta);
      have_warm = true;

      // Grounded Laplacian Hessian at the base fit.
      Eigen::VectorXd u = (slot.base_beta.array() - slot.base_beta.maxCoeff())
                              .exp()
                              .max(1e-290);
      Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(n, n);
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          const double s = u[i] / (u[i] + u[j]);
          const double w = slot.totals(i, j) * s * (1.0 - s);
          hess(i, j) = -w;
          hess(j, i) = -w;
          hess(i, i) += w;
          hess(j, j) += w;
        }
      }
      slot.base_llt.compute(hess.topLeftCorner(n - 1, n - 1));
      slot.llt_ok = slot.base_llt.info() == Eigen::Success;
    }
  }

  // Pass 2 (parallel over times): hold out each game played at this time,
  // refit there, and score the held-out outcome. All folds of one
  // (record, side) are identical, so they are computed once and weighted.
  auto run_time = [&](long k) {
    TimeSlot& slot = slots[k];
    long game_cursor = game_offsets[k];
    Eigen::VectorXd fold_beta(n);
    for (long r = dataset.record_begin(static_cast<int>(k));
         r < dataset.record_end(static_cast<int>(k)); ++r) {
      const MatchRecord& rec = dataset.records()[r];
      const long sides[2][3] = {{rec.team_a, rec.team_b, rec.wins_a},
                                {rec.team_b, rec.team_a, rec.wins_b}};
      for (const auto& side : sides) {
        const int winner = static_cast<int>(side[0]);
        const int loser = static_cast<int>(side[1]);
        const long games = side[2];
        if (games == 0) continue;
        const long weight = selected_count(selected, game_cursor, game_cursor + games);
        game_cursor += games;
        if (weight == 0) continue;
        if (!slot.base_ok) {
          slot.skipped += weight;
          continue;
        }
        // Remove one (winner beats loser) game from the training state.
        const double saved_x = slot.counts(winner, loser);
        const double saved_twl = slot.totals(winner, loser);
        const double saved_tlw = slot.totals(loser, winner);
        const double saved_s = slot.row_sums[winner];
        const double saved_total = slot.total;
        slot.counts(winner, loser) = std::max(0.0, saved_x - w0);
        slot.totals(winner, loser) = std::max(0.0, saved_twl - w0);
        slot.totals(loser, winner) = slot.totals(winner, loser);
        slot.row_sums[winner] = std::max(0.0, saved_s - w0);
        slot.total = saved_total - w0;

        bool usable = true;
        if (!(slot.counts(winner, loser) > eps)) {
          // The removal deleted an edge; the training graph may have split.
          usable = connectivity_witness(slot.counts, eps).empty();
        }
        if (usable) {
          fold_refit(slot, options.fit.tol, options.fit.max_iter, &fold_beta);
          const double diff = fold_beta[winner] - fold_beta[loser];
          const double p = diff >= 0.0
                               ? 1.0 / (1.0 + std::exp(-diff))
                               : std::exp(diff) / (1.0 + std::exp(diff));
          slot.nll += static_cast<double>(weight) * (-std::log(p));
          slot.pred_error += static_cast<double>(weight) * prediction_error(p);
          slot.used += weight;
        } else {
          slot.skipped += weight;
        }

        slot.counts(winner, loser) = saved_x;
        slot.totals(winner, loser) = saved_twl;
        slot.totals(loser, winner) = saved_tlw;
        slot.row_sums[winner] = saved_s;
        slot.total = saved_total;
      }
    }
  };
  parallel_for(n_times, options.jobs, run_time);

  // Deterministic reduction in time order regardless of worker count.
  LoocvResult result;
  double nll_sum = 0.0;
  double err_sum = 0.0;
  for (const TimeSlot& slot : slots) {
    nll_sum += slot.nll;
    err_sum += slot.pred_error;
    result.folds_used += slot.used;
    result.folds_skipped += slot.skipped;
  }
  result.folds_total = result.folds_used + result.folds_skipped;
  if (result.folds_used == 0) {
    throw AllFoldsFailedError("every leave-one-out fold was disconnected");
  }
  result.nll = nll_sum / static_cast<double>(result.folds_used);
  result.prediction_error = err_sum / static_cast<double>(result.folds_used);
  return result;
}

double loocv_nll(const Dataset& dataset, const KernelSpec& spec,
                 const LoocvOptions& options) {
  return loocv_evaluate(dataset, spec, options).nll;
}

BandwidthSelection select_bandwidth(const Dataset& dataset,
                                    const std::vector<double>& h_grid,
                                    KernelFamily family,
                                    const LoocvOptions& options) {
  if (h_grid.empty()) throw DomainError("select_bandwidth: empty grid");
  for (double h : h_grid) {
    if (!(std::isfinite(h) && h > 0.0)) {
      throw DomainError("select_bandwidth: bandwidths must be positive");
    }
  }
  BandwidthSelection selection;
  selection.curve.reserve(h_grid.size());
  for (double h : h_grid) {
    BandwidthSelection::Point point;
    point.h = h;
    try {
      const LoocvResult r = loocv_evaluate(dataset, KernelSpec{family, h}, options);
      point.nll = r.nll;
      point.folds_skipped = r.folds_skipped;
      point.usable = true;
    } catch (const AllFoldsFailedError&) {
      point.nll = std::numeric_limits<double>::quiet_NaN();
      point.folds_skipped = dataset.total_games();
      point.usable = false;
    }
    selection.curve.push_back(point);
  }

  bool found = false;
  for (const auto& point : selection.curve) {
    if (!point.usable) continue;
    // Ties break toward the larger (smoother) bandwidth; the scan order
    // cannot matter because the criterion is a strict lexicographic min.
    if (!found || point.nll < selection.nll_star ||
        (point.nll == selection.nll_star && point.h > selection.h_star)) {
      selection.h_star = point.h;
      selection.nll_star = point.nll;
      found = true;
    }
  }
  if (!found) {
    throw AllFoldsFailedError("no usable bandwidth in the grid");
  }
  return selection;
}

std::vector<double> default_bandwidth_grid() {
  constexpr int kPoints = 20;
  constexpr double kLo = 0.005;
  constexpr double kHi = 1.0;
  std::vector<double> grid(kPoints);
  for (int k = 0; k < kPoints; ++k) {
    grid[k] = kLo * std::pow(kHi / kLo, static_cast<double>(k) / (kPoints - 1));
  }
  grid.front() = kLo;
  grid.back() = kHi;
  return grid;
}

}  // namespace dynbt
