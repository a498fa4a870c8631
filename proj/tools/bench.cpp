#include "bench.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "dynbt/data.hpp"
#include "dynbt/graph.hpp"
#include "dynbt/parallel.hpp"
#include "dynbt/rng.hpp"

namespace dynbt::cli {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::vector<int> rank_values(const Eigen::VectorXd& values) {
  return rank(ScoreVector{values});
}

// rank_diff over the time points where the estimate exists (an empty rank
// vector marks a point the estimator could not produce).
std::pair<double, long> masked_rank_diff(
    const std::vector<std::vector<int>>& est,
    const std::vector<std::vector<int>>& truth) {
  if (est.size() != truth.size()) {
    throw ShapeMismatchError("estimate and truth grids differ");
  }
  std::vector<std::vector<int>> e, t;
  for (std::size_t k = 0; k < est.size(); ++k) {
    if (est[k].empty()) continue;
    e.push_back(est[k]);
    t.push_back(truth[k]);
  }
  if (e.empty()) return {std::numeric_limits<double>::quiet_NaN(), 0};
  return {rank_diff(e, t), static_cast<long>(e.size())};
}

}  // namespace

std::vector<std::vector<int>> win_rate_ranks(const Dataset& dataset) {
  const int n = dataset.team_count();
  const auto& times = dataset.distinct_times();
  std::vector<std::vector<int>> ranks_per_time(times.size());
  for (int k = 0; k < static_cast<int>(times.size()); ++k) {
    Eigen::VectorXd wins = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd games = Eigen::VectorXd::Zero(n);
    for (long r = dataset.record_begin(k); r < dataset.record_end(k); ++r) {
      const MatchRecord& rec = dataset.records()[r];
      wins[rec.team_a] += static_cast<double>(rec.wins_a);
      wins[rec.team_b] += static_cast<double>(rec.wins_b);
      games[rec.team_a] += static_cast<double>(rec.games());
      games[rec.team_b] += static_cast<double>(rec.games());
    }
    Eigen::VectorXd rate = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
      if (games[i] > 0.0) rate[i] = wins[i] / games[i];
    }
    ranks_per_time[k] = rank_values(rate);
  }
  return ranks_per_time;
}

std::vector<std::vector<int>> static_bt_ranks(const Dataset& dataset,
                                              const FitOptions& options) {
  const auto& times = dataset.distinct_times();
  std::vector<std::vector<int>> ranks_per_time(times.size());
  FitOptions raw_options = options;
  raw_options.connectivity_eps = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    try {
      ranks_per_time[k] =
          rank(fit(raw_count_matrix(dataset, times[k]), raw_options).scores);
    } catch (const NotStronglyConnectedError&) {
      // slot stays empty; this time point has no static fit
    }
  }
  return ranks_per_time;
}

LoocvResult static_bt_loo(const Dataset& dataset, const FitOptions& options) {
  // A compact-support kernel narrower than the smallest time gap reduces the
  // smoothed machinery exactly to the per-time static fit: the smoothed
  // matrix at t is a positive multiple of the raw counts at t and the fit is
  // scale-invariant.
  const auto& times = dataset.distinct_times();
  double h = 1.0;
  for (std::size_t k = 1; k < times.size(); ++k) {
    h = std::min(h, 0.25 * (times[k] - times[k - 1]));
  }
  LoocvOptions loocv_options;
  loocv_options.fit = options;
  loocv_options.fit.connectivity_eps = 1e-12;
  return loocv_evaluate(dataset, KernelSpec{KernelFamily::kEpanechnikov, h},
                        loocv_options);
}

LoocvResult win_rate_loo(const Dataset& dataset) {
  const int n = dataset.team_count();
  const auto& times = dataset.distinct_times();
  LoocvResult result;
  double err_sum = 0.0;
  for (int k = 0; k < static_cast<int>(times.size()); ++k) {
    Eigen::VectorXd wins = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd games = Eigen::VectorXd::Zero(n);
    for (long r = dataset.record_begin(k); r < dataset.record_end(k); ++r) {
      const MatchRecord& rec = dataset.records()[r];
      wins[rec.team_a] += static_cast<double>(rec.wins_a);
      wins[rec.team_b] += static_cast<double>(rec.wins_b);
      games[rec.team_a] += static_cast<double>(rec.games());
      games[rec.team_b] += static_cast<double>(rec.games());
    }
    auto held_out_rate = [&](int team, bool won) {
      const double g = games[team] - 1.0;
      if (g <= 0.0) return 0.0;
      return (wins[team] - (won ? 1.0 : 0.0)) / g;
    };
    for (long r = dataset.record_begin(k); r < dataset.record_end(k); ++r) {
      const MatchRecord& rec = dataset.records()[r];
      const long sides[2][3] = {{rec.team_a, rec.team_b, rec.wins_a},
                                {rec.team_b, rec.team_a, rec.wins_b}};
      for (const auto& side : sides) {
        const long weight = side[2];
        if (weight == 0) continue;
        const double rate_w = held_out_rate(static_cast<int>(side[0]), true);
        const double rate_l = held_out_rate(static_cast<int>(side[1]), false);
        double err = 0.0;
        if (rate_w < rate_l) err = 1.0;
        else if (rate_w == rate_l) err = 0.5;
        err_sum += static_cast<double>(weight) * err;
        result.folds_used += weight;
      }
    }
  }
  result.folds_total = result.folds_used;
  if (result.folds_used == 0) {
    throw AllFoldsFailedError("no games to hold out");
  }
  result.prediction_error = err_sum / static_cast<double>(result.folds_used);
  result.nll = std::numeric_limits<double>::quiet_NaN();
  return result;
}

std::vector<std::vector<int>> ranks_from_scores(const Eigen::MatrixXd& paths) {
  std::vector<std::vector<int>> ranks_per_time(paths.cols());
  for (int t = 0; t < paths.cols(); ++t) {
    ranks_per_time[t] = rank_values(paths.col(t));
  }
  return ranks_per_time;
}

std::vector<std::vector<int>> ranks_from_field(const ProbabilityField& field,
                                               const FitOptions& options) {
  std::vector<std::vector<int>> ranks_per_time(field.time_points());
  for (int t = 0; t < field.time_points(); ++t) {
    ranks_per_time[t] = rank(projection(field.slice(t), options));
  }
  return ranks_per_time;
}

StudyResult run_study(const Dataset& dataset,
                      const std::vector<std::vector<int>>& true_ranks,
                      KernelFamily family, std::optional<double> fixed_h,
                      const std::vector<double>& h_grid,
                      const LoocvOptions& loocv_options) {
  if (true_ranks.size() != dataset.distinct_times().size()) {
    throw ShapeMismatchError("truth grid does not match the dataset's times");
  }
  StudyResult study;

  if (fixed_h) {
    study.h_star = *fixed_h;
  } else {
    const std::vector<double>& grid =
        h_grid.empty() ? default_bandwidth_grid() : h_grid;
    study.h_star =
        select_bandwidth(dataset, grid, family, loocv_options).h_star;
  }
  const KernelSpec spec{family, study.h_star};
  const LoocvResult dyn_loo = loocv_evaluate(dataset, spec, loocv_options);
  study.h_star_nll = dyn_loo.nll;

  TrajectoryOptions traj_options;
  traj_options.fit = loocv_options.fit;
  const auto trajectory =
      fit_trajectory(dataset, spec, dataset.distinct_times(), traj_options);
  std::vector<std::vector<int>> dyn_ranks(trajectory.size());
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    if (trajectory[k].ok()) dyn_ranks[k] = rank(trajectory[k].report->scores);
  }
  std::tie(study.dynamic_bt.rank_diff, study.dynamic_bt.rank_times_used) =
      masked_rank_diff(dyn_ranks, true_ranks);
  study.dynamic_bt.loo_prob = dyn_loo.prediction_error;
  study.dynamic_bt.loo_nll = dyn_loo.nll;
  study.dynamic_bt.has_nll = true;
  study.dynamic_bt.folds_skipped = dyn_loo.folds_skipped;

  FitOptions static_options = loocv_options.fit;
  static_options.connectivity_eps = 0.0;  // raw counts
  std::tie(study.static_bt.rank_diff, study.static_bt.rank_times_used) =
      masked_rank_diff(static_bt_ranks(dataset, static_options), true_ranks);
  const LoocvResult static_loo = static_bt_loo(dataset, static_options);
  study.static_bt.loo_prob = static_loo.prediction_error;
  study.static_bt.loo_nll = static_loo.nll;
  study.static_bt.has_nll = true;
  study.static_bt.folds_skipped = static_loo.folds_skipped;

  std::tie(study.win_rate.rank_diff, study.win_rate.rank_times_used) =
      masked_rank_diff(win_rate_ranks(dataset), true_ranks);
  const LoocvResult wr_loo = win_rate_loo(dataset);
  study.win_rate.loo_prob = wr_loo.prediction_error;
  study.win_rate.has_nll = false;
  return study;
}

namespace {

nlohmann::ordered_json estimator_json(const EstimatorMetrics& m) {
  nlohmann::ordered_json j;
  j["rank_diff"] = m.rank_diff;
  j["rank_times_used"] = m.rank_times_used;
  j["loo_prob"] = m.loo_prob;
  if (m.has_nll) j["loo_nll"] = m.loo_nll;
  j["loo_folds_skipped"] = m.folds_skipped;
  return j;
}

nlohmann::ordered_json run_table_study(const BenchConfig& config) {
  std::vector<StudyResult> results(config.seeds);
  const Rng base(config.seed);
  parallel_for(config.seeds, config.jobs, [&](long rep) {
    Rng rng = base.fork(static_cast<std::uint64_t>(rep));
    GPSpec gp;
    gp.time_points = config.time_points;
    LoocvOptions loocv_options;
    loocv_options.jobs = 1;

    std::vector<std::vector<int>> truth;
    Dataset dataset = [&]() {
      if (config.table == 2) {
        gp.group_means = GroupMeanSpec{};
        const ProbabilityField field =
            generate_agnostic_probs(config.team_count, gp, 0.05, 0.95, rng);
        truth = ranks_from_field(field, loocv_options.fit);
        return generate_agnostic_matches(field, config.games_per_pair, rng);
      }
      const Eigen::MatrixXd beta = gp_sample_beta(config.team_count, gp, rng);
      truth = ranks_from_scores(beta);
      return generate_bt_matches(beta, config.games_per_pair, rng);
    }();
    results[rep] = run_study(dataset, truth, KernelFamily::kGaussian,
                             std::nullopt, config.h_grid, loocv_options);
  });

  nlohmann::ordered_json report;
  report["table"] = config.table;
  report["seed"] = config.seed;
  report["seeds"] = config.seeds;
  report["team_count"] = config.team_count;
  report["time_points"] = config.time_points;
  report["games_per_pair"] = config.games_per_pair;

  auto mean_of = [&](auto&& field) {
    double acc = 0.0;
    for (const auto& r : results) acc += field(r);
    return acc / static_cast<double>(results.size());
  };
  nlohmann::ordered_json aggregate;
  aggregate["dynamic_bt"] = {
      {"rank_diff", mean_of([](const StudyResult& r) { return r.dynamic_bt.rank_diff; })},
      {"loo_prob", mean_of([](const StudyResult& r) { return r.dynamic_bt.loo_prob; })},
      {"loo_nll", mean_of([](const StudyResult& r) { return r.dynamic_bt.loo_nll; })}};
  aggregate["static_bt"] = {
      {"rank_diff", mean_of([](const StudyResult& r) { return r.static_bt.rank_diff; })},
      {"loo_prob", mean_of([](const StudyResult& r) { return r.static_bt.loo_prob; })},
      {"loo_nll", mean_of([](const StudyResult& r) { return r.static_bt.loo_nll; })}};
  aggregate["win_rate"] = {
      {"rank_diff", mean_of([](const StudyResult& r) { return r.win_rate.rank_diff; })},
      {"loo_prob", mean_of([](const StudyResult& r) { return r.win_rate.loo_prob; })}};
  report["aggregate"] = aggregate;

  int dynamic_better = 0;
  for (const auto& r : results) {
    if (r.dynamic_bt.rank_diff < r.static_bt.rank_diff) ++dynamic_better;
  }
  report["dynamic_better_rank_diff_seeds"] = dynamic_better;

  nlohmann::ordered_json per_seed = nlohmann::ordered_json::array();
  for (int rep = 0; rep < config.seeds; ++rep) {
    const StudyResult& r = results[rep];
    nlohmann::ordered_json row;
    row["seed_index"] = rep;
    row["h_star"] = r.h_star;
    row["dynamic_bt"] = estimator_json(r.dynamic_bt);
    row["static_bt"] = estimator_json(r.static_bt);
    row["win_rate"] = estimator_json(r.win_rate);
    per_seed.push_back(row);
  }
  report["per_seed"] = per_seed;
  return report;
}

nlohmann::ordered_json run_frequency_study(const BenchConfig& config) {
  struct Setting {
    int team_count;
    int time_points;
    long games;
    FrequencyMode mode;
  };
  std::vector<Setting> settings;
  if (config.table == 4) {
    for (auto [n, m] : {std::pair{5, 5}, {10, 10}, {20, 10}, {30, 10}, {40, 10}, {50, 10}}) {
      settings.push_back({n, m, 1, FrequencyMode::kPerTime});
    }
  } else if (config.table == 5) {
    for (auto [n, m] : {std::pair{10, 10}, {20, 10}, {30, 10}, {40, 10}, {50, 10}, {60, 10}}) {
      settings.push_back({n, m, 1, FrequencyMode::kAllTimes});
    }
  } else {
    for (long g : {1, 2, 4, 6, 8, 10}) {
      settings.push_back({10, 10, g, FrequencyMode::kAllTimes});
    }
  }

  const Rng base(config.seed);
  std::vector<std::vector<double>> freq(settings.size(),
                                        std::vector<double>(config.seeds, 0.0));
  const long tasks = static_cast<long>(settings.size()) * config.seeds;
  parallel_for(tasks, config.jobs, [&](long task) {
    const long s = task / config.seeds;
    const long rep = task % config.seeds;
    const Setting& setting = settings[s];
    Rng rng = base.fork(static_cast<std::uint64_t>(s) << 32 |
                        static_cast<std::uint64_t>(rep));
    GPSpec gp;
    gp.time_points = setting.time_points;
    const Dataset data = generate_bt_matches(
        gp_sample_beta(setting.team_count, gp, rng), setting.games, rng);
    freq[s][rep] = condition1_frequency(data, setting.mode);
  });

  nlohmann::ordered_json report;
  report["table"] = config.table;
  report["seed"] = config.seed;
  report["repetitions"] = config.seeds;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t s = 0; s < settings.size(); ++s) {
    double acc = 0.0;
    for (double f : freq[s]) acc += f;
    nlohmann::ordered_json row;
    row["team_count"] = settings[s].team_count;
    row["time_points"] = settings[s].time_points;
    row["games_per_pair"] = settings[s].games;
    row["mode"] = settings[s].mode == FrequencyMode::kPerTime ? "per_time" : "all_times";
    row["frequency"] = acc / static_cast<double>(config.seeds);
    rows.push_back(row);
  }
  report["settings"] = rows;
  return report;
}

}  // namespace

nlohmann::ordered_json run_bench(const BenchConfig& config) {
  if (config.seeds < 1) throw DomainError("bench needs at least one repetition");
  if (config.jobs < 1) throw DomainError("jobs must be positive");
  switch (config.table) {
    case 1:
    case 2:
      return run_table_study(config);
    case 4:
    case 5:
    case 6:
      return run_frequency_study(config);
    default:
      throw DomainError("unknown table " + std::to_string(config.table) +
                        " (supported: 1, 2, 4, 5, 6)");
  }
}

std::string per_seed_csv(const nlohmann::ordered_json& report) {
  std::string csv =
      "seed_index,h_star,dynamic_rank_diff,dynamic_loo_prob,dynamic_loo_nll,"
      "static_rank_diff,static_loo_prob,static_loo_nll,win_rate_rank_diff,"
      "win_rate_loo_prob\n";
  for (const auto& row : report.at("per_seed")) {
    csv += std::to_string(row.at("seed_index").get<int>());
    csv += ',' + fmt_double(row.at("h_star").get<double>());
    csv += ',' + fmt_double(row.at("dynamic_bt").at("rank_diff").get<double>());
    csv += ',' + fmt_double(row.at("dynamic_bt").at("loo_prob").get<double>());
    csv += ',' + fmt_double(row.at("dynamic_bt").at("loo_nll").get<double>());
    csv += ',' + fmt_double(row.at("static_bt").at("rank_diff").get<double>());
    csv += ',' + fmt_double(row.at("static_bt").at("loo_prob").get<double>());
    csv += ',' + fmt_double(row.at("static_bt").at("loo_nll").get<double>());
    csv += ',' + fmt_double(row.at("win_rate").at("rank_diff").get<double>());
    csv += ',' + fmt_double(row.at("win_rate").at("loo_prob").get<double>());
    csv += '\n';
  }
  return csv;
}

}  // namespace dynbt::cli
