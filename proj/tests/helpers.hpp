#ifndef DYNBT_TESTS_HELPERS_HPP
#define DYNBT_TESTS_HELPERS_HPP

#include <Eigen/Core>
#include <string>
#include <vector>

#include "dynbt/data.hpp"
#include "dynbt/rng.hpp"
#include "dynbt/types.hpp"

namespace testutil {

inline std::vector<std::string> team_names(int n) {
  std::vector<std::string> names(n);
  for (int i = 0; i < n; ++i) names[i] = "T" + std::to_string(i);
  return names;
}

// Random win-count matrix with the given zero fraction; rejection-sampled to
// strong connectivity via an inline reachability check (not the library's).
inline Eigen::MatrixXd random_connected_counts(int n, dynbt::Rng& rng,
                                               double zero_prob = 0.25,
                                               double max_count = 3.0) {
  for (;;) {
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        if (rng.uniform() >= zero_prob) x(i, j) = 0.05 + rng.uniform() * max_count;
      }
    }
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i) {
      reach[i][i] = true;
      for (int j = 0; j < n; ++j) {
        if (i != j && x(i, j) > 0.0) reach[i][j] = true;
      }
    }
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (reach[i][k] && reach[k][j]) reach[i][j] = true;
        }
      }
    }
    bool strong = true;
    for (int i = 0; i < n && strong; ++i) {
      for (int j = 0; j < n && strong; ++j) strong = reach[i][j];
    }
    if (strong) return x;
  }
}

// Round-robin schedule: every pair plays `games` games at each of the given
// raw times, winners alternating deterministically.
inline dynbt::Dataset round_robin(int n, const std::vector<double>& raw_times,
                                  long games = 1) {
  std::vector<dynbt::MatchRecord> records;
  std::vector<double> raw;
  const std::vector<double> normalized = dynbt::normalize_times(raw_times);
  for (std::size_t k = 0; k < raw_times.size(); ++k) {
    int flip = static_cast<int>(k);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const long wins_a = (flip++ % 2 == 0) ? games : 0;
        records.push_back(dynbt::MatchRecord{normalized[k], i, j, wins_a,
                                             games - wins_a});
        raw.push_back(raw_times[k]);
      }
    }
  }
  return dynbt::Dataset::build(team_names(n), std::move(records), std::move(raw));
}

}  // namespace testutil

#endif  // DYNBT_TESTS_HELPERS_HPP
