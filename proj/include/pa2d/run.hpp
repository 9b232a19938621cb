#pragma once

// Experiment orchestration behind the command-line subcommands.

#include <chrono>
#include <ctime>
#include <map>
#include <ostream>

#include "pa2d/config.hpp"
#include "pa2d/io.hpp"

namespace pa2d {

inline constexpr const char* kResolvedConfigName = "config.resolved.json";
inline constexpr const char* kFrontierName = "frontier.json";
inline constexpr const char* kMetricsName = "metrics.csv";
inline constexpr const char* kSelectionLogName = "selection_log.jsonl";

inline std::string seed_dir_name(std::uint64_t seed) { return "seed_" + std::to_string(seed); }

// ---------------------------------------------------------------------------
// train

/// Writes one seed's results into `dir`: resolved config (restricted to this
/// seed), frontier, metrics, selection log and one checkpoint per frontier
/// entry.
inline void write_seed_outputs(const fs::path& dir, const ExperimentConfig& cfg,
                               std::uint64_t seed, const TrainingResult& res) {
  fs::create_directories(dir / "checkpoints");
  ExperimentConfig one = cfg;
  one.seeds = {seed};
  write_text_file(dir / kResolvedConfigName, to_json(one).dump(2) + "\n");
  for (const auto& [id, snap] : res.checkpoints)
    save_checkpoint(dir / checkpoint_relpath(id), snap);
  write_text_file(dir / kFrontierName, frontier_text(make_frontier(
                                           cfg.experiment_id, cfg.train.gen.reference_point,
                                           res.archive)));
  write_text_file(dir / kMetricsName, metrics_text(res.history));
  write_text_file(dir / kSelectionLogName, selection_log_text(res.selections));
}

inline TrainingResult train_seed(const ExperimentConfig& cfg, std::uint64_t seed) {
  TrainConfig tc = cfg.train;
  tc.gen.seed = seed;
  return run_training(make_environment(cfg.env_name, cfg.env_params), tc);
}

/// Creates "<output_dir>/<experiment_id>_<UTC timestamp>", adding a numeric
/// suffix if that name is taken.
inline fs::path create_run_dir(const ExperimentConfig& cfg) {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  const auto ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  char stamp[64];
  std::strftime(stamp, sizeof stamp, "%Y%m%dT%H%M%S", &tm);
  char full[80];
  std::snprintf(full, sizeof full, "%s%03dZ", stamp, int(ms));
  const fs::path base = fs::path(cfg.output_dir) / (cfg.experiment_id + "_" + full);
  try {
    fs::create_directories(cfg.output_dir);
    fs::path dir = base;
    for (int i = 1; !fs::create_directory(dir); ++i)
      dir = base.string() + "-" + std::to_string(i);
    return dir;
  } catch (const fs::filesystem_error& e) {
    throw Error("cannot create run directory under '" + cfg.output_dir + "': " +
                e.code().message());
  }
}

/// Trains every configured seed in turn and returns the run directory.
inline fs::path train_experiment(const ExperimentConfig& cfg, std::ostream& log) {
  const fs::path dir = create_run_dir(cfg);
  write_text_file(dir / kResolvedConfigName, to_json(cfg).dump(2) + "\n");
  for (const auto seed : cfg.seeds) {
    const TrainingResult res = train_seed(cfg, seed);
    write_seed_outputs(dir / seed_dir_name(seed), cfg, seed, res);
    const auto& last = res.history.back();
    log << "seed " << seed << ": hv=" << format_double(last.hv)
        << " sp=" << (last.sp ? format_double(*last.sp) : std::string("undefined"))
        << " archive=" << last.archive_size << "\n";
  }
  return dir;
}

// ---------------------------------------------------------------------------
// eval

struct EvalResult {
  std::vector<ObjectiveVector> episodes;
  ObjectiveVector mean;
};

inline EvalResult evaluate_checkpoint(const Snapshot& snap, const Environment& env, int episodes) {
  check_policy_fits(snap.policy, env);
  EvalResult out;
  out.episodes = evaluate_episodes(env, snap.policy, episodes);
  out.mean = ObjectiveVector::Zero(env.spec().num_objectives);
  for (const auto& r : out.episodes) out.mean += r;
  out.mean /= double(episodes);
  return out;
}

inline std::string episodes_csv(const std::vector<ObjectiveVector>& rows) {
  std::string out = "episode";
  const auto m = rows.empty() ? 0 : rows.front().size();
  for (Eigen::Index i = 0; i < m; ++i) out += ",objective_" + std::to_string(i + 1);
  out += "\n";
  for (std::size_t e = 0; e < rows.size(); ++e) {
    out += std::to_string(e);
    for (Eigen::Index i = 0; i < m; ++i) out += "," + format_double(rows[e][i]);
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// report

struct RunRecord {
  fs::path dir;
  std::string method;
  std::vector<GenerationMetrics> metrics;
  Frontier frontier;
};

inline RunRecord load_run(const fs::path& dir) {
  if (!fs::exists(dir / kMetricsName) || !fs::exists(dir / kFrontierName))
    throw Error("'" + dir.string() + "' has no " + kMetricsName + " and " + kFrontierName);
  RunRecord r;
  r.dir = dir;
  r.metrics = load_metrics(dir / kMetricsName);
  if (r.metrics.empty()) throw Error(dir.string() + ": metrics file has no rows");
  r.frontier = load_frontier(dir / kFrontierName);
  r.method = "unknown";
  if (fs::exists(dir / kResolvedConfigName)) {
    const Json cfg = load_json_file((dir / kResolvedConfigName).string());
    if (cfg.contains("method") && cfg["method"].is_string()) r.method = cfg["method"];
  }
  return r;
}

/// Each path is either a seed directory or a run directory whose seed_*
/// subdirectories are taken in name order.
inline std::vector<RunRecord> collect_runs(const std::vector<fs::path>& paths) {
  std::vector<RunRecord> runs;
  for (const auto& p : paths) {
    if (fs::exists(p / kMetricsName)) {
      runs.push_back(load_run(p));
      continue;
    }
    if (!fs::is_directory(p)) throw Error("'" + p.string() + "' is not a directory");
    std::vector<fs::path> seeds;
    for (const auto& e : fs::directory_iterator(p))
      if (e.is_directory() && fs::exists(e.path() / kMetricsName)) seeds.push_back(e.path());
    if (seeds.empty()) throw Error("'" + p.string() + "' contains no runs");
    std::sort(seeds.begin(), seeds.end());
    for (const auto& s : seeds) runs.push_back(load_run(s));
  }
  return runs;
}

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;  ///< population standard deviation
  std::size_t count = 0;
};

inline MeanStd mean_std(const std::vector<double>& xs) {
  MeanStd out;
  out.count = xs.size();
  if (xs.empty()) return out;
  for (double x : xs) out.mean += x;
  out.mean /= double(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  out.stddev = std::sqrt(ss / double(xs.size()));
  return out;
}

struct MethodSummary {
  std::string method;
  std::size_t runs = 0;
  MeanStd hv;
  MeanStd sp;  ///< over runs whose final SP is defined
};

/// Per-method statistics of the final HV and SP, methods in name order.
inline std::vector<MethodSummary> summarize(const std::vector<RunRecord>& runs) {
  require(!runs.empty(), "report: no runs");
  const int m = runs.front().frontier.m;
  for (const auto& r : runs)
    if (r.frontier.m != m)
      throw Error("report: inconsistent number of objectives (" + std::to_string(m) + " in " +
                  runs.front().dir.string() + ", " + std::to_string(r.frontier.m) + " in " +
                  r.dir.string() + ")");
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_method;
  std::map<std::string, std::size_t> counts;
  for (const auto& r : runs) {
    auto& [hv, sp] = by_method[r.method];
    hv.push_back(r.metrics.back().hv);
    if (r.metrics.back().sp) sp.push_back(*r.metrics.back().sp);
    ++counts[r.method];
  }
  std::vector<MethodSummary> out;
  for (const auto& [method, vals] : by_method)
    out.push_back({method, counts[method], mean_std(vals.first), mean_std(vals.second)});
  return out;
}

inline std::string summary_csv(const std::vector<MethodSummary>& rows) {
  std::string out = "method,runs,hv_mean,hv_std,sp_mean,sp_std,sp_runs\n";
  for (const auto& r : rows) {
    out += r.method + "," + std::to_string(r.runs) + "," + format_double(r.hv.mean) + "," +
           format_double(r.hv.stddev) + ",";
    out += r.sp.count ? format_double(r.sp.mean) + "," + format_double(r.sp.stddev)
                      : std::string("undefined,undefined");
    out += "," + std::to_string(r.sp.count) + "\n";
  }
  return out;
}

inline std::string summary_table(const std::vector<MethodSummary>& rows) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-20s %5s %28s %28s\n", "method", "runs", "HV (mean +- std)",
                "SP (mean +- std)");
  out += line;
  for (const auto& r : rows) {
    char hv[64], sp[64];
    std::snprintf(hv, sizeof hv, "%.6g +- %.3g", r.hv.mean, r.hv.stddev);
    if (r.sp.count)
      std::snprintf(sp, sizeof sp, "%.6g +- %.3g", r.sp.mean, r.sp.stddev);
    else
      std::snprintf(sp, sizeof sp, "undefined");
    std::snprintf(line, sizeof line, "%-20s %5zu %28s %28s\n", r.method.c_str(), r.runs, hv, sp);
    out += line;
  }
  return out;
}

/// HV/SP per generation for every run.
inline std::string curves_csv(const std::vector<RunRecord>& runs) {
  std::string out = "method,run,generation,hv,sp,archive_size\n";
  for (const auto& r : runs)
    for (const auto& g : r.metrics)
      out += r.method + "," + r.dir.string() + "," + std::to_string(g.generation) + "," +
             format_double(g.hv) + "," + (g.sp ? format_double(*g.sp) : "undefined") + "," +
             std::to_string(g.archive_size) + "\n";
  return out;
}

/// Final frontier points of every run.
inline std::string frontier_points_csv(const std::vector<RunRecord>& runs) {
  require(!runs.empty(), "report: no runs");
  std::string out = "method,run";
  for (int i = 0; i < runs.front().frontier.m; ++i) out += ",objective_" + std::to_string(i + 1);
  out += ",source\n";
  for (const auto& r : runs)
    for (const auto& e : r.frontier.entries) {
      out += r.method + "," + r.dir.string();
      for (Eigen::Index i = 0; i < e.objectives.size(); ++i) out += "," + format_double(e.objectives[i]);
      out += "," + to_string(e.source) + "\n";
    }
  return out;
}

/// Writes summary.csv, curves.csv and frontier_points.csv into `out_dir` and
/// returns the printable summary table.
inline std::string write_report(const std::vector<RunRecord>& runs, const fs::path& out_dir) {
  const auto summary = summarize(runs);
  fs::create_directories(out_dir);
  write_text_file(out_dir / "summary.csv", summary_csv(summary));
  write_text_file(out_dir / "curves.csv", curves_csv(runs));
  write_text_file(out_dir / "frontier_points.csv", frontier_points_csv(runs));
  return summary_table(summary);
}

// ---------------------------------------------------------------------------
// frontier-export

struct FrontierScore {
  double hv = 0.0;
  std::optional<double> sp;
  std::size_t checkpoints_loaded = 0;
};

/// Re-scores a saved frontier with the archive metrics and loads every
/// checkpoint it references. Throws on the first missing or corrupt one.
inline FrontierScore rescore_frontier(const fs::path& frontier_path) {
  const Frontier f = load_frontier(frontier_path);
  FrontierScore s;
  const auto pts = f.points();
  s.hv = hypervolume(pts, f.reference_point);
  s.sp = sparsity(pts);
  for (const auto& e : f.entries) {
    const fs::path ck = frontier_path.parent_path() / e.checkpoint;
    if (!fs::exists(ck)) throw Error("frontier references missing checkpoint '" + ck.string() + "'");
    load_checkpoint(ck);
    ++s.checkpoints_loaded;
  }
  return s;
}

inline std::string frontier_csv(const Frontier& f) {
  std::string out;
  for (int i = 0; i < f.m; ++i) out += "objective_" + std::to_string(i + 1) + ",";
  out += "generation,source,checkpoint\n";
  for (const auto& e : f.entries) {
    for (Eigen::Index i = 0; i < e.objectives.size(); ++i) out += format_double(e.objectives[i]) + ",";
    out += std::to_string(e.generation) + "," + to_string(e.source) + "," + e.checkpoint + "\n";
  }
  return out;
}

}  // namespace pa2d
