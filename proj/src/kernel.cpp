#include "dynbt/kernel.hpp"

#include <cmath>

namespace dynbt {

namespace {
// Subnormal-range weights are flushed to zero; they are far below any
// tolerance in use and only slow the smoothing sums down.
constexpr double kWeightFloor = 1e-300;

inline double base_kernel(KernelFamily family, double x) {
  switch (family) {
    case KernelFamily::kGaussian:
      return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
    case KernelFamily::kEpanechnikov:
      return std::fabs(x) <= 1.0 ? 0.75 * (1.0 - x * x) : 0.0;
  }
  throw DomainError("unknown kernel family");
}
}  // namespace

double kernel_weight(const KernelSpec& spec, double s, double t) {
  spec.validate();
  const double w = base_kernel(spec.family, (s - t) / spec.bandwidth) / spec.bandwidth;
  return w < kWeightFloor ? 0.0 : w;
}

CountMatrix smooth_counts(const Dataset& dataset, const KernelSpec& spec, double t) {
  spec.validate();
  if (dataset.record_count() == 0) throw EmptyDataError("smooth_counts: no records");
  const int n = dataset.team_count();
  Eigen::MatrixXd smoothed = Eigen::MatrixXd::Zero(n, n);
  for (const MatchRecord& r : dataset.records()) {
    const double w = kernel_weight(spec, r.time, t);
    if (w == 0.0) continue;
    smoothed(r.team_a, r.team_b) += w * static_cast<double>(r.wins_a);
    smoothed(r.team_b, r.team_a) += w * static_cast<double>(r.wins_b);
  }
  return CountMatrix(std::move(smoothed));
}

namespace {
double bandwidth_schedule(const TheoryParams& p, double log_numerator) {
  const double first = std::pow(p.games_per_pair, -(1.0 + p.bandwidth_slack));
  const double ratio = 36.0 * (1.0 - p.min_win_prob) * log_numerator /
                       (p.smoothing_constant * p.smoothing_constant *
                        p.density_lower * (p.team_count - 1) * p.games_per_pair);
  return std::max(first, std::cbrt(ratio));
}
}  // namespace

double bandwidth_pointwise(const TheoryParams& params) {
  params.validate();
  return bandwidth_schedule(params, std::log(static_cast<double>(params.team_count)));
}

double bandwidth_uniform(const TheoryParams& params) {
  params.validate();
  const double log_arg =
      std::log(static_cast<double>(params.team_count)) +
      (3.0 + 3.0 * params.bandwidth_slack) * std::log(params.games_per_pair);
  return bandwidth_schedule(params, log_arg);
}

}  // namespace dynbt
