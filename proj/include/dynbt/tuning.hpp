#ifndef DYNBT_TUNING_HPP
#define DYNBT_TUNING_HPP

#include <cstdint>
#include <vector>

#include "dynbt/solver.hpp"
#include "dynbt/types.hpp"

namespace dynbt {

struct LoocvOptions {
  FitOptions fit{.tol = 1e-10, .max_iter = 10000, .connectivity_eps = 1e-12};
  int jobs = 1;
  // When > 0, evaluate only this many randomly chosen folds (without
  // replacement) instead of all games; seeded for reproducibility.
  long subsample = 0;
  std::uint64_t subsample_seed = 0;
};

struct LoocvResult {
  // Mean held-out negative log-likelihood over usable folds.
  double nll = 0.0;
  // Mean held-out win/loss prediction error (p < 1/2 counts 1, p == 1/2
  // counts 1/2).
  double prediction_error = 0.0;
  long folds_total = 0;
  long folds_used = 0;
  long folds_skipped = 0;
};

// Leave-one-out cross-validation: every single game is held out in turn, the
// model is refit at the held-out game's time on the remaining data, and the
// held-out outcome is scored. A record with k games contributes k unit folds.
// Folds whose training data fail the connectivity condition are skipped and
// counted. Throws AllFoldsFailedError when no fold is usable, DomainError
// when the dataset has fewer than 2 games.
LoocvResult loocv_evaluate(const Dataset& dataset, const KernelSpec& spec,
                           const LoocvOptions& options = {});

// Convenience: loocv_evaluate(...).nll.
double loocv_nll(const Dataset& dataset, const KernelSpec& spec,
                 const LoocvOptions& options = {});

struct BandwidthSelection {
  struct Point {
    double h = 0.0;
    double nll = 0.0;
    long folds_skipped = 0;
    // False when every fold failed at this h; such points are excluded from
    // the argmin and reported.
    bool usable = false;
  };

  double h_star = 0.0;
  double nll_star = 0.0;
  std::vector<Point> curve;
};

// Evaluates the LOOCV criterion on each grid bandwidth and returns the
// minimizer together with the full curve. Ties break toward the larger h.
// The result is independent of grid ordering; the curve is reported in the
// given order. Throws AllFoldsFailedError if no grid point is usable.
BandwidthSelection select_bandwidth(const Dataset& dataset,
                                    const std::vector<double>& h_grid,
                                    KernelFamily family = KernelFamily::kGaussian,
                                    const LoocvOptions& options = {});

// 20 geometrically spaced bandwidths from 0.005 to 1.0.
std::vector<double> default_bandwidth_grid();

}  // namespace dynbt

#endif  // DYNBT_TUNING_HPP
