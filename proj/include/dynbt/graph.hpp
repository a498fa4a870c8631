#ifndef DYNBT_GRAPH_HPP
#define DYNBT_GRAPH_HPP

#include <Eigen/Core>
#include <vector>

#include "dynbt/types.hpp"

namespace dynbt {

// True iff the digraph with an edge i -> j whenever X(i, j) > eps is strongly
// connected (single SCC). This is the existence/uniqueness condition for the
// score fit. Throws DomainError when the dimension is < 2.
// eps defaults: 0 for raw counts; use 1e-12 for smoothed matrices to absorb
// floating-point dust.
bool condition1_holds(const CountMatrix& counts, double eps = 0.0);
bool condition1_holds(const Eigen::MatrixXd& counts, double eps = 0.0);

// Witness of a violation: a nonempty proper subset S of vertices with no edge
// from S to its complement. Empty when the digraph is strongly connected.
std::vector<int> connectivity_witness(const Eigen::MatrixXd& counts,
                                      double eps = 0.0);

// Lower bound on the probability that the existence condition holds at every
// time simultaneously: max(0, 1 - 4 N exp(-N T p_min / 2)).
// Requires N >= 2, T > 0, p_min in (0, 1].
double connectivity_probability_bound(int team_count, double games_per_pair,
                                      double p_min);

enum class FrequencyMode { kPerTime, kAllTimes };

// kPerTime: fraction of distinct times whose raw count matrix satisfies the
// connectivity condition (eps = 0). kAllTimes: 1 if every time satisfies it,
// else 0 (callers aggregate over repetitions).
double condition1_frequency(const Dataset& dataset, FrequencyMode mode);

}  // namespace dynbt

#endif  // DYNBT_GRAPH_HPP
