#include "dynbt/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dynbt {

Dataset Dataset::build(std::vector<std::string> teams,
                       std::vector<MatchRecord> records,
                       std::vector<double> raw_times) {
  if (teams.size() < 2) {
    throw ValidationError("dataset needs at least 2 teams, got " +
                          std::to_string(teams.size()));
  }
  if (!raw_times.empty() && raw_times.size() != records.size()) {
    throw ValidationError("raw_times must parallel records");
  }
  const int n = static_cast<int>(teams.size());
  for (std::size_t k = 0; k < records.size(); ++k) {
    const MatchRecord& r = records[k];
    if (r.team_a < 0 || r.team_a >= n || r.team_b < 0 || r.team_b >= n) {
      throw ValidationError("record " + std::to_string(k) +
                            ": team index out of range");
    }
    if (r.team_a == r.team_b) {
      throw ValidationError("record " + std::to_string(k) +
                            ": a team cannot play itself");
    }
    if (r.wins_a < 0 || r.wins_b < 0) {
      throw ValidationError("record " + std::to_string(k) +
                            ": negative win count");
    }
    if (r.wins_a + r.wins_b < 1) {
      throw ValidationError("record " + std::to_string(k) +
                            ": zero games");
    }
    if (!std::isfinite(r.time) || r.time < 0.0 || r.time > 1.0) {
      throw ValidationError("record " + std::to_string(k) +
                            ": normalized time outside [0, 1]");
    }
  }

  Dataset d;
  d.teams_ = std::move(teams);
  for (int i = 0; i < n; ++i) {
    auto [it, inserted] = d.index_.emplace(d.teams_[i], i);
    if (!inserted) throw ValidationError("duplicate team name: " + d.teams_[i]);
  }

  // Stable sort by time so same-time records keep their input order.
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return records[a].time < records[b].time;
  });
  d.records_.reserve(records.size());
  d.raw_times_.reserve(records.size());
  for (std::size_t k : order) {
    d.records_.push_back(records[k]);
    d.raw_times_.push_back(raw_times.empty() ? records[k].time : raw_times[k]);
    d.total_games_ += records[k].games();
  }

  d.time_offsets_.push_back(0);
  for (std::size_t k = 0; k < d.records_.size(); ++k) {
    if (d.distinct_times_.empty() || d.records_[k].time != d.distinct_times_.back()) {
      if (!d.distinct_times_.empty()) d.time_offsets_.push_back(static_cast<long>(k));
      d.distinct_times_.push_back(d.records_[k].time);
    }
  }
  d.time_offsets_.push_back(static_cast<long>(d.records_.size()));
  return d;
}

int Dataset::team_index(std::string_view name) const {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? -1 : it->second;
}

CountMatrix::CountMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw ValidationError("count matrix must be square");
  }
  for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
    for (Eigen::Index j = 0; j < entries_.cols(); ++j) {
      const double v = entries_(i, j);
      if (!std::isfinite(v)) throw ValidationError("count matrix has non-finite entry");
      if (i == j && v != 0.0) throw ValidationError("count matrix diagonal must be zero");
      if (v < 0.0) throw ValidationError("count matrix has negative entry");
    }
  }
}

CountMatrix CountMatrix::zero(int n) {
  return CountMatrix(Eigen::MatrixXd::Zero(n, n));
}

ScoreVector ScoreVector::centered(Eigen::VectorXd values) {
  if (values.size() == 0) throw ValidationError("empty score vector");
  if (!values.allFinite()) throw ValidationError("score vector has non-finite entry");
  values.array() -= values.mean();
  return ScoreVector{std::move(values)};
}

void ScoreVector::validate() const {
  if (beta.size() == 0) throw ValidationError("empty score vector");
  if (!beta.allFinite()) throw ValidationError("score vector has non-finite entry");
  if (std::fabs(beta.sum()) > 1e-9) {
    throw ValidationError("score vector violates the sum-zero constraint");
  }
}

double KernelSpec::lipschitz() const {
  switch (family) {
    case KernelFamily::kGaussian:
      // max |W'(x)| of the standard normal density, at x = 1.
      return std::exp(-0.5) / std::sqrt(2.0 * M_PI);
    case KernelFamily::kEpanechnikov:
      return 1.5;
  }
  throw DomainError("unknown kernel family");
}

void KernelSpec::validate() const {
  if (!(std::isfinite(bandwidth) && bandwidth > 0.0)) {
    throw DomainError("kernel bandwidth must be positive and finite");
  }
}

void TheoryParams::validate() const {
  if (!(density_lower > 0.0 && density_lower <= 1.0))
    throw DomainError("density_lower must lie in (0, 1]");
  if (!(density_upper >= 1.0)) throw DomainError("density_upper must be >= 1");
  if (!(prob_lipschitz > 0.0)) throw DomainError("prob_lipschitz must be positive");
  if (!(min_win_prob > 0.0 && min_win_prob <= 1.0))
    throw DomainError("min_win_prob must lie in (0, 1]");
  if (!(smoothing_constant > 0.0))
    throw DomainError("smoothing_constant must be positive");
  if (!(bandwidth_slack > 0.0)) throw DomainError("bandwidth_slack must be positive");
  if (!(kernel_lipschitz > 0.0)) throw DomainError("kernel_lipschitz must be positive");
  if (!(games_per_pair > 0.0)) throw DomainError("games_per_pair must be positive");
  if (team_count < 2) throw DomainError("team_count must be >= 2");
}

}  // namespace dynbt
