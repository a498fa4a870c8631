#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bench.hpp"
#include "dynbt/data.hpp"
#include "dynbt/graph.hpp"
#include "dynbt/kernel.hpp"
#include "dynbt/metrics.hpp"
#include "dynbt/simulate.hpp"
#include "dynbt/solver.hpp"
#include "dynbt/tuning.hpp"

namespace dynbt::cli {

namespace {

using nlohmann::ordered_json;

std::string fmt_double(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open file for writing: " + path);
  out << content;
  if (!out) throw ParseError("write failed: " + path);
}

struct CommonOptions {
  std::string input;
  KernelFamily family = KernelFamily::kGaussian;
  std::string bandwidth = "loocv";
  std::vector<double> h_grid;
  double tol = 1e-10;
  int max_iter = 10000;
  double eps = 1e-12;
  int jobs = 1;
  long subsample = 0;
  std::uint64_t subsample_seed = 0;

  FitOptions fit_options() const { return FitOptions{tol, max_iter, eps}; }
  LoocvOptions loocv_options() const {
    LoocvOptions o;
    o.fit = fit_options();
    o.jobs = jobs;
    o.subsample = subsample;
    o.subsample_seed = subsample_seed;
    return o;
  }
  std::vector<double> grid_or_default() const {
    return h_grid.empty() ? default_bandwidth_grid() : h_grid;
  }
};

const std::map<std::string, KernelFamily> kKernelNames{
    {"gaussian", KernelFamily::kGaussian},
    {"epanechnikov", KernelFamily::kEpanechnikov}};

void add_kernel_flags(CLI::App* cmd, CommonOptions* opts) {
  cmd->add_option("--kernel", opts->family, "Kernel family")
      ->transform(CLI::CheckedTransformer(kKernelNames, CLI::ignore_case))
      ->default_str("gaussian");
  cmd->add_option("--tol", opts->tol, "Convergence tolerance")->capture_default_str();
  cmd->add_option("--max-iter", opts->max_iter, "Iteration cap per fit")->capture_default_str();
  cmd->add_option("--eps", opts->eps,
                  "Edge threshold for the smoothed connectivity check")->capture_default_str();
}

// Resolves --bandwidth: a number is used as given, "loocv" selects by
// cross-validation over the grid.
double resolve_bandwidth(const CommonOptions& opts, const Dataset& dataset,
                         double* selected_nll = nullptr) {
  if (opts.bandwidth != "loocv") {
    double h = 0.0;
    const char* begin = opts.bandwidth.data();
    const char* end = begin + opts.bandwidth.size();
    auto [ptr, ec] = std::from_chars(begin, end, h);
    if (ec != std::errc{} || ptr != end || !(h > 0.0)) {
      throw DomainError("--bandwidth must be a positive number or 'loocv'");
    }
    return h;
  }
  const BandwidthSelection sel = select_bandwidth(
      dataset, opts.grid_or_default(), opts.family, opts.loocv_options());
  if (selected_nll) *selected_nll = sel.nll_star;
  std::cerr << "loocv selected h = " << fmt_double(sel.h_star) << "\n";
  return sel.h_star;
}

std::vector<double> resolve_grid(const Dataset& dataset, int grid_points) {
  if (grid_points <= 0) return dataset.distinct_times();
  if (grid_points == 1) return {0.5};
  std::vector<double> grid(grid_points);
  for (int k = 0; k < grid_points; ++k) {
    grid[k] = static_cast<double>(k) / (grid_points - 1);
  }
  return grid;
}

std::string beta_csv(const Dataset& dataset,
                     const std::vector<TrajectoryPoint>& trajectory) {
  std::string csv = "time";
  for (const auto& team : dataset.teams()) csv += ',' + team;
  csv += '\n';
  for (const auto& point : trajectory) {
    if (!point.ok()) continue;
    csv += fmt_double(point.time);
    for (int i = 0; i < dataset.team_count(); ++i) {
      csv += ',' + fmt_double(point.report->scores.beta[i]);
    }
    csv += '\n';
  }
  return csv;
}

std::string ranks_jsonl(const Dataset& dataset,
                        const std::vector<TrajectoryPoint>& trajectory) {
  std::string out;
  for (const auto& point : trajectory) {
    ordered_json line;
    line["time"] = point.time;
    if (point.ok()) {
      const std::vector<int> ranks = rank(point.report->scores);
      ordered_json r;
      for (int i = 0; i < dataset.team_count(); ++i) {
        r[dataset.teams()[i]] = ranks[i];
      }
      line["ranks"] = r;
    } else {
      line["error"] = "not_strongly_connected";
      ordered_json component = ordered_json::array();
      for (int i : point.failed_component) component.push_back(dataset.teams()[i]);
      line["component"] = component;
    }
    out += line.dump();
    out += '\n';
  }
  return out;
}

std::vector<TrajectoryPoint> run_trajectory(const Dataset& dataset,
                                            const CommonOptions& opts,
                                            double h, int grid_points) {
  TrajectoryOptions traj;
  traj.fit = opts.fit_options();
  traj.jobs = opts.jobs;
  const auto trajectory = fit_trajectory(dataset, KernelSpec{opts.family, h},
                                         resolve_grid(dataset, grid_points), traj);
  bool any_ok = false;
  for (const auto& point : trajectory) any_ok = any_ok || point.ok();
  if (!any_ok) {
    throw NotStronglyConnectedError(
        "no grid point admits a fit; see the check subcommand",
        trajectory.front().failed_component);
  }
  return trajectory;
}

int cmd_fit(const CommonOptions& opts, const std::string& out_path,
            const std::string& ranks_path, int grid_points) {
  const Dataset dataset = load_csv(opts.input);
  const double h = resolve_bandwidth(opts, dataset);
  const auto trajectory = run_trajectory(dataset, opts, h, grid_points);
  write_text_file(out_path, beta_csv(dataset, trajectory));
  if (!ranks_path.empty()) {
    write_text_file(ranks_path, ranks_jsonl(dataset, trajectory));
  }
  ordered_json summary;
  summary["bandwidth"] = h;
  summary["grid_points"] = trajectory.size();
  long failed = 0;
  for (const auto& p : trajectory) failed += p.ok() ? 0 : 1;
  summary["failed_points"] = failed;
  summary["out"] = out_path;
  if (!ranks_path.empty()) summary["ranks"] = ranks_path;
  std::cout << summary.dump() << "\n";
  return 0;
}

int cmd_rank(const CommonOptions& opts, const std::string& out_path,
             int grid_points) {
  const Dataset dataset = load_csv(opts.input);
  const double h = resolve_bandwidth(opts, dataset);
  const auto trajectory = run_trajectory(dataset, opts, h, grid_points);
  write_text_file(out_path, ranks_jsonl(dataset, trajectory));
  ordered_json summary;
  summary["bandwidth"] = h;
  summary["out"] = out_path;
  std::cout << summary.dump() << "\n";
  return 0;
}

int cmd_cv(const CommonOptions& opts, const std::string& out_path) {
  const Dataset dataset = load_csv(opts.input);
  const BandwidthSelection sel = select_bandwidth(
      dataset, opts.grid_or_default(), opts.family, opts.loocv_options());
  std::string csv = "h,nll,folds_skipped\n";
  for (const auto& point : sel.curve) {
    csv += fmt_double(point.h) + ',' +
           (point.usable ? fmt_double(point.nll) : std::string("nan")) + ',' +
           std::to_string(point.folds_skipped) + '\n';
  }
  if (!out_path.empty()) write_text_file(out_path, csv);
  ordered_json summary;
  summary["h_star"] = sel.h_star;
  summary["nll"] = sel.nll_star;
  if (!out_path.empty()) summary["curve"] = out_path;
  std::cout << summary.dump() << "\n";
  return 0;
}

int cmd_check(const CommonOptions& opts, bool has_bandwidth) {
  const Dataset dataset = load_csv(opts.input);
  const int n = dataset.team_count();

  Eigen::MatrixXd aggregate = Eigen::MatrixXd::Zero(n, n);
  for (const MatchRecord& r : dataset.records()) {
    aggregate(r.team_a, r.team_b) += static_cast<double>(r.wins_a);
    aggregate(r.team_b, r.team_a) += static_cast<double>(r.wins_b);
  }
  const std::vector<int> witness = connectivity_witness(aggregate, 0.0);

  ordered_json report;
  report["teams"] = n;
  report["records"] = dataset.record_count();
  report["games"] = dataset.total_games();
  report["aggregate_connected"] = witness.empty();
  if (!witness.empty()) {
    ordered_json names = ordered_json::array();
    for (int i : witness) names.push_back(dataset.teams()[i]);
    report["aggregate_witness"] = names;
  }

  bool all_connected = true;
  ordered_json per_time = ordered_json::array();
  for (double t : dataset.distinct_times()) {
    const bool ok = condition1_holds(raw_count_matrix(dataset, t), 0.0);
    all_connected = all_connected && ok;
    per_time.push_back(ordered_json{{"time", t}, {"connected", ok}});
  }
  report["per_time_all_connected"] = all_connected;
  report["per_time"] = per_time;

  if (has_bandwidth) {
    const double h = resolve_bandwidth(opts, dataset);
    const KernelSpec spec{opts.family, h};
    ordered_json smoothed = ordered_json::array();
    for (double t : dataset.distinct_times()) {
      const bool ok = condition1_holds(smooth_counts(dataset, spec, t), opts.eps);
      smoothed.push_back(ordered_json{{"time", t}, {"connected", ok}});
    }
    report["smoothed_bandwidth"] = h;
    report["smoothed"] = smoothed;
  }

  std::cout << report.dump() << "\n";
  return witness.empty() ? 0 : 2;
}

struct SimulateOptions {
  std::string mode;
  int team_count = 50;
  int time_points = 50;
  long games = 1;
  std::uint64_t seed = 0;
  double alpha = 1.0;
  double decay = 1.0;
  double p_lo = 0.05;
  double p_hi = 0.95;
  int groups = 5;
  double gap = 1.5;
  double base_width = 0.5;
  std::string out;
  std::string truth;
};

int cmd_simulate(const SimulateOptions& opts) {
  Rng rng(opts.seed);
  GPSpec gp;
  gp.time_points = opts.time_points;
  gp.alpha = opts.alpha;
  gp.decay = opts.decay;

  ordered_json truth;
  std::optional<Dataset> dataset;
  if (opts.mode == "bt") {
    const Eigen::MatrixXd beta = gp_sample_beta(opts.team_count, gp, rng);
    dataset = generate_bt_matches(beta, opts.games, rng);
    truth["mode"] = "bt";
    ordered_json paths = ordered_json::array();
    for (int i = 0; i < opts.team_count; ++i) {
      ordered_json row = ordered_json::array();
      for (int t = 0; t < opts.time_points; ++t) row.push_back(beta(i, t));
      paths.push_back(row);
    }
    truth["beta"] = paths;
  } else if (opts.mode == "agnostic") {
    gp.group_means = GroupMeanSpec{opts.groups, opts.gap, opts.base_width};
    const ProbabilityField field =
        generate_agnostic_probs(opts.team_count, gp, opts.p_lo, opts.p_hi, rng);
    dataset = generate_agnostic_matches(field, opts.games, rng);
    truth["mode"] = "agnostic";
    truth["p_lo"] = opts.p_lo;
    truth["p_hi"] = opts.p_hi;
    ordered_json probs = ordered_json::array();
    for (int t = 0; t < opts.time_points; ++t) {
      ordered_json at_t = ordered_json::array();
      for (int i = 0; i < opts.team_count; ++i) {
        ordered_json row = ordered_json::array();
        for (int j = 0; j < opts.team_count; ++j) {
          row.push_back(i == j ? 0.0 : field.at(i, j, t));
        }
        at_t.push_back(row);
      }
      probs.push_back(at_t);
    }
    truth["probabilities"] = probs;
  } else {
    throw DomainError("--mode must be bt or agnostic");
  }

  write_csv(*dataset, opts.out);
  if (!opts.truth.empty()) {
    truth["teams"] = dataset->teams();
    ordered_json raw_grid = ordered_json::array();
    for (int t = 1; t <= opts.time_points; ++t) raw_grid.push_back(t);
    truth["raw_times"] = raw_grid;
    write_text_file(opts.truth, truth.dump() + "\n");
  }

  ordered_json summary;
  summary["out"] = opts.out;
  if (!opts.truth.empty()) summary["truth"] = opts.truth;
  summary["teams"] = opts.team_count;
  summary["time_points"] = opts.time_points;
  summary["records"] = dataset->record_count();
  summary["games"] = dataset->total_games();
  std::cout << summary.dump() << "\n";
  return 0;
}

ordered_json estimator_report(const EstimatorMetrics& m) {
  ordered_json j;
  j["rank_diff"] = m.rank_diff;
  j["rank_times_used"] = m.rank_times_used;
  j["loo_prob"] = m.loo_prob;
  if (m.has_nll) j["loo_nll"] = m.loo_nll;
  j["loo_folds_skipped"] = m.folds_skipped;
  return j;
}

int cmd_eval(const CommonOptions& opts, const std::string& truth_path,
             const std::string& out_path) {
  const Dataset dataset = load_csv(opts.input);
  std::ifstream truth_in(truth_path);
  if (!truth_in) throw ParseError("cannot open truth file: " + truth_path);
  ordered_json truth = ordered_json::parse(truth_in, nullptr, true);

  const auto truth_teams = truth.at("teams").get<std::vector<std::string>>();
  if (static_cast<int>(truth_teams.size()) != dataset.team_count()) {
    throw ShapeMismatchError("truth and dataset disagree on the team count");
  }
  std::vector<int> to_dataset(truth_teams.size());
  for (std::size_t k = 0; k < truth_teams.size(); ++k) {
    const int idx = dataset.team_index(truth_teams[k]);
    if (idx < 0) throw ValidationError("truth team not in dataset: " + truth_teams[k]);
    to_dataset[k] = idx;
  }
  const int n = dataset.team_count();
  const auto& times = dataset.distinct_times();

  std::vector<std::vector<int>> true_ranks;
  const std::string mode = truth.at("mode").get<std::string>();
  if (mode == "bt") {
    const auto& paths = truth.at("beta");
    const int m = static_cast<int>(paths.at(0).size());
    if (static_cast<std::size_t>(m) != times.size()) {
      throw ShapeMismatchError("truth and dataset disagree on the time grid");
    }
    Eigen::MatrixXd beta(n, m);
    for (int i = 0; i < n; ++i) {
      for (int t = 0; t < m; ++t) {
        beta(to_dataset[i], t) = paths.at(i).at(t).get<double>();
      }
    }
    true_ranks = ranks_from_scores(beta);
  } else if (mode == "agnostic") {
    const auto& probs = truth.at("probabilities");
    const int m = static_cast<int>(probs.size());
    if (static_cast<std::size_t>(m) != times.size()) {
      throw ShapeMismatchError("truth and dataset disagree on the time grid");
    }
    ProbabilityField field(n, m);
    for (int t = 0; t < m; ++t) {
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          field.set_pair(to_dataset[i], to_dataset[j], t,
                         probs.at(t).at(i).at(j).get<double>());
        }
      }
    }
    true_ranks = ranks_from_field(field, opts.fit_options());
  } else {
    throw ValidationError("truth mode must be bt or agnostic");
  }

  std::optional<double> fixed_h;
  if (opts.bandwidth != "loocv") {
    fixed_h = resolve_bandwidth(opts, dataset);
  }
  const StudyResult study =
      run_study(dataset, true_ranks, opts.family, fixed_h, opts.grid_or_default(),
                opts.loocv_options());

  ordered_json report;
  report["input"] = opts.input;
  report["truth"] = truth_path;
  report["mode"] = mode;
  report["h"] = study.h_star;
  report["dynamic_bt"] = estimator_report(study.dynamic_bt);
  report["static_bt"] = estimator_report(study.static_bt);
  report["win_rate"] = estimator_report(study.win_rate);
  const std::string text = report.dump() + "\n";
  if (!out_path.empty()) write_text_file(out_path, text);
  std::cout << text;
  return 0;
}

int cmd_bench(const BenchConfig& config, const std::string& out_dir) {
  const ordered_json report = run_bench(config);
  const std::string text = report.dump() + "\n";
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_text_file(out_dir + "/report.json", text);
    if (config.table == 1 || config.table == 2) {
      write_text_file(out_dir + "/per_seed.csv", per_seed_csv(report));
    }
  }
  std::cout << text;
  return 0;
}

int emit_error(const Error& e) {
  ordered_json j;
  j["error"]["type"] = e.kind();
  j["error"]["message"] = e.what();
  if (const auto* nsc = dynamic_cast<const NotStronglyConnectedError*>(&e)) {
    j["error"]["component"] = nsc->component();
  }
  if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
    if (pe->line() > 0) j["error"]["line"] = pe->line();
  }
  if (const auto* it = dynamic_cast<const IsolatedTeamError*>(&e)) {
    j["error"]["team"] = it->team();
  }
  std::cerr << j.dump() << "\n";
  return 2;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Smoothly time-varying rankings from timestamped pairwise comparisons"};
  app.set_config("--config", "", "Config file mirroring the flags (flags win on conflict)");
  app.require_subcommand(1);

  CommonOptions common;
  int grid_points = 0;
  std::string out_path;
  std::string ranks_path;
  std::string truth_path;
  SimulateOptions sim;
  BenchConfig bench_config;

  auto add_input = [&](CLI::App* cmd) {
    cmd->add_option("--input,-i", common.input, "Input match CSV")
        ->required();
  };
  auto add_jobs = [&](CLI::App* cmd) {
    cmd->add_option("--jobs,-j", common.jobs, "Worker threads")->capture_default_str();
  };
  auto add_bandwidth = [&](CLI::App* cmd) {
    cmd->add_option("--bandwidth", common.bandwidth,
                    "Kernel bandwidth (positive number or 'loocv')")->capture_default_str();
    cmd->add_option("--h-grid", common.h_grid,
                    "Candidate bandwidths for loocv selection")
        ->delimiter(',');
  };
  auto add_subsample = [&](CLI::App* cmd) {
    cmd->add_option("--subsample", common.subsample,
                    "Evaluate only this many random folds (0 = exact)")->capture_default_str();
    cmd->add_option("--subsample-seed", common.subsample_seed,
                    "Seed for fold subsampling")->capture_default_str();
  };

  CLI::App* fit_cmd = app.add_subcommand("fit", "Fit score trajectories and ranks");
  add_input(fit_cmd);
  add_kernel_flags(fit_cmd, &common);
  add_bandwidth(fit_cmd);
  add_jobs(fit_cmd);
  add_subsample(fit_cmd);
  fit_cmd->add_option("--grid-points", grid_points,
                      "Uniform grid size (0 = the dataset's distinct times)")->capture_default_str();
  fit_cmd->add_option("--out,-o", out_path, "Output beta CSV")->required();
  fit_cmd->add_option("--ranks", ranks_path, "Optional ranks JSONL output");

  CLI::App* rank_cmd = app.add_subcommand("rank", "Emit per-time rankings");
  add_input(rank_cmd);
  add_kernel_flags(rank_cmd, &common);
  add_bandwidth(rank_cmd);
  add_jobs(rank_cmd);
  add_subsample(rank_cmd);
  rank_cmd->add_option("--grid-points", grid_points,
                       "Uniform grid size (0 = the dataset's distinct times)")->capture_default_str();
  rank_cmd->add_option("--out,-o", out_path, "Output ranks JSONL")->required();

  CLI::App* cv_cmd = app.add_subcommand("cv", "Cross-validate the bandwidth");
  add_input(cv_cmd);
  add_kernel_flags(cv_cmd, &common);
  cv_cmd->add_option("--h-grid", common.h_grid, "Candidate bandwidths")
      ->delimiter(',');
  add_jobs(cv_cmd);
  add_subsample(cv_cmd);
  cv_cmd->add_option("--out,-o", out_path, "Output curve CSV");

  CLI::App* check_cmd = app.add_subcommand("check", "Connectivity diagnostics");
  add_input(check_cmd);
  add_kernel_flags(check_cmd, &common);
  bool check_smoothed = false;
  check_cmd->add_option("--bandwidth", common.bandwidth,
                        "Also report smoothed verdicts at this bandwidth");
  check_cmd->callback([&] { check_smoothed = check_cmd->count("--bandwidth") > 0; });

  CLI::App* sim_cmd = app.add_subcommand("simulate", "Generate synthetic matches");
  sim_cmd->add_option("--mode", sim.mode, "bt | agnostic")->required();
  sim_cmd->add_option("--n", sim.team_count, "Teams")->capture_default_str();
  sim_cmd->add_option("--m", sim.time_points, "Time points")->capture_default_str();
  sim_cmd->add_option("--games", sim.games, "Games per pair per time")->capture_default_str();
  sim_cmd->add_option("--seed", sim.seed, "RNG seed")->required();
  sim_cmd->add_option("--alpha", sim.alpha, "Covariance scale exponent")->capture_default_str();
  sim_cmd->add_option("--decay", sim.decay, "Covariance lag exponent")->capture_default_str();
  sim_cmd->add_option("--p-lo", sim.p_lo, "Lower probability bound (agnostic)")->capture_default_str();
  sim_cmd->add_option("--p-hi", sim.p_hi, "Upper probability bound (agnostic)")->capture_default_str();
  sim_cmd->add_option("--groups", sim.groups, "Mean groups (agnostic)")->capture_default_str();
  sim_cmd->add_option("--gap", sim.gap, "Group gap (agnostic)")->capture_default_str();
  sim_cmd->add_option("--base-width", sim.base_width, "Group base width (agnostic)")->capture_default_str();
  sim_cmd->add_option("--out,-o", sim.out, "Output match CSV")->required();
  sim_cmd->add_option("--truth", sim.truth, "Optional truth JSON output");

  CLI::App* eval_cmd = app.add_subcommand("eval", "Score an estimator against truth");
  add_input(eval_cmd);
  add_kernel_flags(eval_cmd, &common);
  add_bandwidth(eval_cmd);
  add_jobs(eval_cmd);
  add_subsample(eval_cmd);
  eval_cmd->add_option("--truth", truth_path, "Truth JSON from simulate")->required();
  eval_cmd->add_option("--out,-o", out_path, "Optional report JSON output");

  CLI::App* bench_cmd = app.add_subcommand("bench", "Synthetic study reproductions");
  bench_cmd->add_option("--table", bench_config.table, "1, 2, 4, 5 or 6")->required();
  bench_cmd->add_option("--seeds", bench_config.seeds, "Repetitions")->capture_default_str();
  bench_cmd->add_option("--seed", bench_config.seed, "Base RNG seed")->required();
  bench_cmd->add_option("--jobs,-j", bench_config.jobs, "Worker threads")->capture_default_str();
  bench_cmd->add_option("--n", bench_config.team_count, "Teams (tables 1-2)")->capture_default_str();
  bench_cmd->add_option("--m", bench_config.time_points, "Time points (tables 1-2)")->capture_default_str();
  bench_cmd->add_option("--games", bench_config.games_per_pair,
                        "Games per pair per time (tables 1-2)")->capture_default_str();
  bench_cmd->add_option("--h-grid", bench_config.h_grid,
                        "Candidate bandwidths (tables 1-2)")
      ->delimiter(',');
  std::string bench_out;
  bench_cmd->add_option("--out,-o", bench_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (fit_cmd->parsed()) return cmd_fit(common, out_path, ranks_path, grid_points);
    if (rank_cmd->parsed()) return cmd_rank(common, out_path, grid_points);
    if (cv_cmd->parsed()) return cmd_cv(common, out_path);
    if (check_cmd->parsed()) return cmd_check(common, check_smoothed);
    if (sim_cmd->parsed()) return cmd_simulate(sim);
    if (eval_cmd->parsed()) return cmd_eval(common, truth_path, out_path);
    if (bench_cmd->parsed()) return cmd_bench(bench_config, bench_out);
    std::cerr << app.help();
    return 1;
  } catch (const Error& e) {
    return emit_error(e);
  } catch (const std::exception& e) {
    ordered_json j;
    j["error"]["type"] = "internal";
    j["error"]["message"] = e.what();
    std::cerr << j.dump() << "\n";
    return 2;
  }
}

}  // namespace dynbt::cli
