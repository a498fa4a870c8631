// Independent test oracles. Everything here is deliberately written the
// slow, obvious way and must stay decoupled from the library code paths it
// cross-checks.
#ifndef DYNBT_TESTS_ORACLES_HPP
#define DYNBT_TESTS_ORACLES_HPP

#include <Eigen/Core>
#include <cmath>
#include <vector>

#include "dynbt/data.hpp"
#include "dynbt/kernel.hpp"
#include "dynbt/solver.hpp"
#include "dynbt/types.hpp"

namespace oracle {

// All-pairs reachability by Floyd-Warshall; strong connectivity iff every
// ordered pair is reachable.
inline bool floyd_warshall_strongly_connected(const Eigen::MatrixXd& counts,
                                              double eps = 0.0) {
  const int n = static_cast<int>(counts.rows());
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) {
    reach[i][i] = true;
    for (int j = 0; j < n; ++j) {
      if (i != j && counts(i, j) > eps) reach[i][j] = true;
    }
  }
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (reach[i][k] && reach[k][j]) reach[i][j] = true;
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!reach[i][j]) return false;
    }
  }
  return true;
}

// Direct double-loop evaluation of the normalized risk.
inline double naive_risk(const Eigen::VectorXd& beta, const Eigen::MatrixXd& x) {
  const int n = static_cast<int>(x.rows());
  double num = 0.0;
  double den = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      num += x(i, j) * std::log(1.0 + std::exp(beta[j] - beta[i]));
      den += x(i, j);
    }
  }
  return num / den;
}

// Golden-section minimization of a unimodal scalar function on [lo, hi].
template <typename F>
double golden_section(F f, double lo, double hi, double tol) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

inline Eigen::Vector3d beta_centered(Eigen::Vector3d beta) {
  beta.array() -= beta.mean();
  return beta;
}

// Brute-force minimizer over the sum-zero plane for 3 teams: nested 1-D
// golden-section searches over beta = (a, b, -a-b), recentred at the end.
inline Eigen::Vector3d plane_search_3team(const Eigen::MatrixXd& x,
                                          double span = 25.0) {
  auto risk_ab = [&](double a, double b) {
    Eigen::VectorXd beta(3);
    beta << a, b, -a - b;
    return naive_risk(beta, x);
  };
  auto outer = [&](double a) {
    return risk_ab(a, golden_section([&](double b) { return risk_ab(a, b); },
                                     -span, span, 1e-10));
  };
  const double a_star = golden_section(outer, -span, span, 1e-10);
  const double b_star = golden_section(
      [&](double b) { return risk_ab(a_star, b); }, -span, span, 1e-10);
  return beta_centered(Eigen::Vector3d(a_star, b_star, -a_star - b_star));
}

// Hand-rolled leave-one-out loop: rebuilds each fold's dataset from scratch
// and calls the public fit on the smoothed matrix at the held-out time.
struct NaiveLoo {
  double nll = 0.0;
  double prediction_error = 0.0;
  long used = 0;
  long skipped = 0;
};

inline NaiveLoo naive_loocv(const dynbt::Dataset& dataset,
                            const dynbt::KernelSpec& spec, double tol,
                            int max_iter, double eps) {
  using namespace dynbt;
  NaiveLoo out;
  const auto& records = dataset.records();
  for (std::size_t m = 0; m < records.size(); ++m) {
    for (int side = 0; side < 2; ++side) {
      const long count = side == 0 ? records[m].wins_a : records[m].wins_b;
      const int winner = side == 0 ? records[m].team_a : records[m].team_b;
      const int loser = side == 0 ? records[m].team_b : records[m].team_a;
      for (long g = 0; g < count; ++g) {
        std::vector<MatchRecord> reduced = records;
        if (side == 0) {
          reduced[m].wins_a -= 1;
        } else {
          reduced[m].wins_b -= 1;
        }
        if (reduced[m].games() == 0) reduced.erase(reduced.begin() + m);
        const Dataset fold =
            Dataset::build(dataset.teams(), std::move(reduced));
        const double t = records[m].time;
        const CountMatrix smoothed = smooth_counts(fold, spec, t);
        try {
          FitOptions options{tol, max_iter, eps};
          const FitReport report = fit(smoothed, options);
          const double p = 1.0 / (1.0 + std::exp(-(report.scores.beta[winner] -
                                                   report.scores.beta[loser])));
          out.nll += -std::log(p);
          if (p < 0.5) {
            out.prediction_error += 1.0;
          } else if (p == 0.5) {
            out.prediction_error += 0.5;
          }
          ++out.used;
        } catch (const NotStronglyConnectedError&) {
          ++out.skipped;
        }
      }
    }
  }
  out.nll /= static_cast<double>(out.used);
  out.prediction_error /= static_cast<double>(out.used);
  return out;
}

}  // namespace oracle

#endif  // DYNBT_TESTS_ORACLES_HPP
