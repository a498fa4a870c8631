#include "dynbt/simulate.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <string>

#include "dynbt/data.hpp"

namespace dynbt {

namespace {

inline double logistic(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Symmetric factor A with A A^T = Sigma (PSD allowed), via LDLT with a
// one-shot 1e-10 jitter retry. Throws FactorizationError when the matrix is
// genuinely indefinite.
Eigen::MatrixXd covariance_factor(const Eigen::MatrixXd& sigma) {
  auto attempt = [](const Eigen::MatrixXd& s, Eigen::MatrixXd* factor) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(s);
    if (ldlt.info() != Eigen::Success) return false;
    Eigen::VectorXd d = ldlt.vectorD();
    const double scale = std::max(1.0, d.cwiseAbs().maxCoeff());
    if (d.minCoeff() < -1e-9 * scale) return false;
    d = d.cwiseMax(0.0).cwiseSqrt();
    Eigen::MatrixXd l = ldlt.matrixL();
    *factor = ldlt.transpositionsP().transpose() * (l * d.asDiagonal());
    return true;
  };
  Eigen::MatrixXd factor;
  if (attempt(sigma, &factor)) return factor;
  const Eigen::MatrixXd jittered =
      sigma + 1e-10 * Eigen::MatrixXd::Identity(sigma.rows(), sigma.cols());
  if (attempt(jittered, &factor)) return factor;
  throw FactorizationError("covariance is not factorizable even after jitter");
}

// Constant means for `units` indexed GP draws (teams for score paths, pairs
// for the agnostic field). Group mode partitions a seeded random permutation
// of the units into near-equal groups; group g draws from
// Uniform(gap (g-1), gap (g-1) + base_width). Default: Uniform(0, 1).
Eigen::VectorXd draw_unit_means(int units, const GPSpec& spec, Rng& rng) {
  Eigen::VectorXd u(units);
  if (spec.group_means) {
    const GroupMeanSpec& g = *spec.group_means;
    if (g.groups < 1 || g.groups > units) {
      throw DomainError("group count must lie in [1, units]");
    }
    if (!(g.gap >= 0.0) || !(g.base_width >= 0.0)) {
      throw DomainError("group gap and base width must be nonnegative");
    }
    std::vector<int> perm(units);
    for (int i = 0; i < units; ++i) perm[i] = i;
    for (int i = units - 1; i > 0; --i) {
      const int j = static_cast<int>(rng.uniform() * (i + 1));
      std::swap(perm[i], perm[std::min(j, i)]);
    }
    const int base = units / g.groups;
    const int extra = units % g.groups;
    int cursor = 0;
    for (int grp = 0; grp < g.groups; ++grp) {
      const int size = base + (grp < extra ? 1 : 0);
      const double lo = g.gap * grp;
      for (int k = 0; k < size; ++k) {
        u[perm[cursor++]] = rng.uniform(lo, lo + g.base_width);
      }
    }
  } else {
    for (int i = 0; i < units; ++i) u[i] = rng.uniform();
  }
  return u;
}

// N x M mean matrix: an explicit matrix wins, otherwise constant per-team
// draws. Consumes rng only in the generated cases.
Eigen::MatrixXd build_means(int team_count, const GPSpec& spec, Rng& rng) {
  if (spec.means) {
    if (spec.means->rows() != team_count || spec.means->cols() != spec.time_points) {
      throw ShapeMismatchError("means matrix must be team_count x time_points");
    }
    return *spec.means;
  }
  const Eigen::VectorXd u = draw_unit_means(team_count, spec, rng);
  return u.replicate(1, spec.time_points);
}

Eigen::MatrixXd spec_covariance(const GPSpec& spec) {
  if (spec.covariance) {
    if (spec.covariance->rows() != spec.time_points ||
        spec.covariance->cols() != spec.time_points) {
      throw ShapeMismatchError("covariance must be time_points x time_points");
    }
    return *spec.covariance;
  }
  return toeplitz_cov(spec.time_points, spec.alpha, spec.decay);
}

std::vector<std::string> default_team_names(int team_count) {
  int width = 1;
  for (int v = team_count; v >= 10; v /= 10) ++width;
  std::vector<std::string> names(team_count);
  for (int i = 0; i < team_count; ++i) {
    std::string digits = std::to_string(i + 1);
    names[i] = "team_" + std::string(width - digits.size(), '0') + digits;
  }
  return names;
}

Dataset matches_from_probs(int team_count, int time_points,
                           const std::function<double(int, int, int)>& win_prob,
                           const GamesPerPair& games, Rng& rng) {
  std::vector<double> raw_grid(time_points);
  for (int t = 0; t < time_points; ++t) raw_grid[t] = static_cast<double>(t + 1);
  const std::vector<double> normalized = normalize_times(raw_grid);

  std::vector<MatchRecord> records;
  std::vector<double> raw_times;
  for (int t = 0; t < time_points; ++t) {
    for (int i = 0; i < team_count; ++i) {
      for (int j = i + 1; j < team_count; ++j) {
        const long n = games(i, j, t);
        if (n < 0) throw DomainError("games_per_pair must be nonnegative");
        if (n == 0) continue;
        const long wins = rng.binomial(n, win_prob(i, j, t));
        records.push_back(MatchRecord{normalized[t], i, j, wins, n - wins});
        raw_times.push_back(raw_grid[t]);
      }
    }
  }
  return Dataset::build(default_team_names(team_count), std::move(records),
                        std::move(raw_times));
}

}  // namespace

Eigen::MatrixXd toeplitz_cov(int m, double alpha, double decay) {
  if (m < 1) throw DomainError("toeplitz_cov: need at least one time point");
  if (!(alpha > 0.0) || !(decay > 0.0)) {
    throw DomainError("toeplitz_cov: alpha and decay must be positive");
  }
  const double scale = std::pow(static_cast<double>(m), -alpha);
  Eigen::MatrixXd sigma(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double v = 1.0 - scale * std::pow(static_cast<double>(i - j), decay);
      sigma(i, j) = v;
      sigma(j, i) = v;
    }
  }
  return sigma;
}

Eigen::MatrixXd gp_sample_beta(int team_count, const GPSpec& spec, Rng& rng) {
  if (team_count < 1) throw DomainError("gp_sample_beta: need at least one team");
  if (spec.time_points < 1) throw DomainError("gp_sample_beta: need time points");
  const int m = spec.time_points;
  const Eigen::MatrixXd factor = covariance_factor(spec_covariance(spec));
  const Eigen::MatrixXd means = build_means(team_count, spec, rng);

  Eigen::MatrixXd paths(team_count, m);
  Eigen::VectorXd z(m);
  for (int i = 0; i < team_count; ++i) {
    for (int t = 0; t < m; ++t) z[t] = rng.normal();
    paths.row(i) = means.row(i) + (factor * z).transpose();
  }
  return paths;
}

ProbabilityField::ProbabilityField(int team_count, int time_points)
    : n_(team_count), m_(time_points) {
  if (team_count < 2) throw DomainError("probability field needs >= 2 teams");
  if (time_points < 1) throw DomainError("probability field needs >= 1 time point");
  p_.assign(static_cast<std::size_t>(n_) * n_ * m_, 0.0);
}

void ProbabilityField::set_pair(int i, int j, int t, double p_ij) {
  if (i == j) throw DomainError("probability field diagonal is unused");
  p_[index(i, j, t)] = p_ij;
  p_[index(j, i, t)] = 1.0 - p_ij;
}

double ProbabilityField::min_probability() const {
  double lo = 1.0;
  for (int t = 0; t < m_; ++t) {
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < n_; ++j) {
        if (i != j) lo = std::min(lo, at(i, j, t));
      }
    }
  }
  return lo;
}

Eigen::MatrixXd ProbabilityField::slice(int t) const {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n_, n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      if (i != j) s(i, j) = at(i, j, t);
    }
  }
  return s;
}

void ProbabilityField::validate() const {
  for (int t = 0; t < m_; ++t) {
    for (int i = 0; i < n_; ++i) {
      if (at(i, i, t) != 0.0) throw ValidationError("field diagonal must be zero");
      for (int j = 0; j < n_; ++j) {
        if (i == j) continue;
        const double p = at(i, j, t);
        if (!(p > 0.0 && p < 1.0)) {
          throw ValidationError("field probabilities must lie in (0, 1)");
        }
        if (std::fabs(p + at(j, i, t) - 1.0) > 1e-12) {
          throw ValidationError("field must satisfy p_ij + p_ji = 1");
        }
      }
    }
  }
}

ProbabilityField generate_agnostic_probs(int team_count, const GPSpec& spec,
                                         double p_lo, double p_hi, Rng& rng) {
  if (!(p_lo > 0.0 && p_lo < p_hi && p_hi < 1.0)) {
    throw DomainError("require 0 < p_lo < p_hi < 1");
  }
  if (team_count < 2) throw DomainError("need at least 2 teams");
  const int m = spec.time_points;
  const Eigen::MatrixXd factor = covariance_factor(spec_covariance(spec));
  const int pairs = team_count * (team_count - 1) / 2;

  // One independent GP draw per unordered pair (i < j), in row-major pair
  // order. Pair means: explicit team means difference to u_i - u_j; the
  // group-wise and uniform modes draw one mean per pair, which keeps the
  // field free of any transitive score structure.
  Eigen::MatrixXd pair_means(pairs, m);
  if (spec.means) {
    const Eigen::MatrixXd means = build_means(team_count, spec, rng);
    int row = 0;
    for (int i = 0; i < team_count; ++i) {
      for (int j = i + 1; j < team_count; ++j) {
        pair_means.row(row++) = means.row(i) - means.row(j);
      }
    }
  } else {
    pair_means = draw_unit_means(pairs, spec, rng).replicate(1, m);
  }

  Eigen::MatrixXd raw(pairs, m);
  Eigen::VectorXd z(m);
  for (int row = 0; row < pairs; ++row) {
    for (int t = 0; t < m; ++t) z[t] = rng.normal();
    raw.row(row) = pair_means.row(row) + (factor * z).transpose();
  }

  const double lo = raw.minCoeff();
  const double hi = raw.maxCoeff();
  ProbabilityField field(team_count, m);
  int row = 0;
  for (int i = 0; i < team_count; ++i) {
    for (int j = i + 1; j < team_count; ++j, ++row) {
      for (int t = 0; t < m; ++t) {
        double p;
        if (hi == lo) {
          p = 0.5 * (p_lo + p_hi);
        } else {
          const double frac = (raw(row, t) - lo) / (hi - lo);
          // Convex form hits p_lo / p_hi exactly at the extremes.
          p = p_lo * (1.0 - frac) + p_hi * frac;
        }
        field.set_pair(i, j, t, p);
      }
    }
  }
  return field;
}

Dataset generate_bt_matches(const Eigen::MatrixXd& beta_paths,
                            const GamesPerPair& games, Rng& rng) {
  const int n = static_cast<int>(beta_paths.rows());
  const int m = static_cast<int>(beta_paths.cols());
  if (n < 2) throw DomainError("need at least 2 teams");
  if (m < 1) throw DomainError("need at least one time point");
  return matches_from_probs(
      n, m,
      [&](int i, int j, int t) { return logistic(beta_paths(i, t) - beta_paths(j, t)); },
      games, rng);
}

Dataset generate_bt_matches(const Eigen::MatrixXd& beta_paths, long games_per_pair,
                            Rng& rng) {
  return generate_bt_matches(
      beta_paths, [games_per_pair](int, int, int) { return games_per_pair; }, rng);
}

Dataset generate_agnostic_matches(const ProbabilityField& field,
                                  const GamesPerPair& games, Rng& rng) {
  return matches_from_probs(
      field.team_count(), field.time_points(),
      [&](int i, int j, int t) { return field.at(i, j, t); }, games, rng);
}

Dataset generate_agnostic_matches(const ProbabilityField& field,
                                  long games_per_pair, Rng& rng) {
  return generate_agnostic_matches(
      field, [games_per_pair](int, int, int) { return games_per_pair; }, rng);
}

}  // namespace dynbt
