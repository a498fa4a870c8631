#ifndef DYNBT_KERNEL_HPP
#define DYNBT_KERNEL_HPP

#include "dynbt/types.hpp"

namespace dynbt {

// W_h(s, t) = (1/h) W((s - t) / h), symmetric in (s, t). Gaussian uses the
// standard density form (sup W ~= 0.399), Epanechnikov 0.75 (1 - x^2) on
// [-1, 1]. Weights below 1e-300 are flushed to zero.
double kernel_weight(const KernelSpec& spec, double s, double t);

// Kernel-smoothed count matrix at time t: every record contributes its win
// counts weighted by W_h(record.time, t). Linear in counts.
CountMatrix smooth_counts(const Dataset& dataset, const KernelSpec& spec,
                          double t);

// Bandwidth schedule for a fixed time point:
//   h = max{ T^-(1+eta), (36 (1-p_min) log N / (C_s^2 D_m (N-1) T))^(1/3) }.
double bandwidth_pointwise(const TheoryParams& params);

// Uniform-in-time schedule; same with log(N T^(3+3 eta)) in the numerator.
double bandwidth_uniform(const TheoryParams& params);

}  // namespace dynbt

#endif  // DYNBT_KERNEL_HPP
