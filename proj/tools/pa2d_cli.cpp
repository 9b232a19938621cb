// Command-line front end: train, eval, report and frontier-export.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pa2d/pa2d.hpp"

namespace {

using namespace pa2d;

int cmd_train(const std::string& config_path, const std::vector<std::string>& overrides,
              const std::vector<std::uint64_t>& seeds, const std::string& output_dir) {
  ExperimentConfig cfg = load_config(config_path, overrides);
  if (!seeds.empty()) cfg.seeds = seeds;
  if (!output_dir.empty()) cfg.output_dir = output_dir;
  const fs::path dir = train_experiment(cfg, std::cout);
  std::cout << "run directory: " << dir.string() << "\n";
  return 0;
}

int cmd_eval(const std::string& checkpoint, const std::string& env_name,
             const std::string& env_params, const std::string& config_path, int episodes,
             const std::string& out) {
  std::string name = env_name;
  Json params = Json::object();
  if (!config_path.empty()) {
    const ExperimentConfig cfg = load_config(config_path);
    if (name.empty()) name = cfg.env_name;
    params = cfg.env_params;
  }
  if (!env_params.empty()) params = parse_json_text(env_params, "--env-params");
  if (name.empty()) throw ConfigError("eval: give --env or --config");
  const auto env = make_environment(name, params);
  const EvalResult res = evaluate_checkpoint(load_checkpoint(checkpoint), *env, episodes);
  std::cout << "mean objectives:";
  for (Eigen::Index i = 0; i < res.mean.size(); ++i) std::cout << " " << format_double(res.mean[i]);
  std::cout << "\n";
  if (!out.empty()) {
    write_text_file(out, episodes_csv(res.episodes));
    std::cout << "per-episode table: " << out << "\n";
  } else {
    std::cout << episodes_csv(res.episodes);
  }
  return 0;
}

int cmd_report(const std::vector<std::string>& dirs, const std::string& out) {
  std::vector<fs::path> paths(dirs.begin(), dirs.end());
  const auto runs = collect_runs(paths);
  std::cout << write_report(runs, out);
  std::cout << "report files written to " << out << "\n";
  return 0;
}

int cmd_frontier_export(const std::string& input, const std::string& out,
                        const std::string& format) {
  fs::path path = input;
  if (fs::is_directory(path)) path /= kFrontierName;
  const FrontierScore score = rescore_frontier(path);
  const Frontier f = load_frontier(path);
  std::cout << "entries: " << f.entries.size() << "  checkpoints loaded: "
            << score.checkpoints_loaded << "\nhv: " << format_double(score.hv)
            << "\nsp: " << (score.sp ? format_double(*score.sp) : std::string("undefined")) << "\n";
  if (!out.empty()) {
    write_text_file(out, format == "csv" ? frontier_csv(f) : frontier_text(f));
    std::cout << "written: " << out << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pareto-ascent evolutionary multi-objective policy training"};
  app.require_subcommand(1);

  std::string config_path, output_dir;
  std::vector<std::string> overrides;
  std::vector<std::uint64_t> seeds;
  auto* train = app.add_subcommand("train", "Train every configured seed into a new run directory");
  train->add_option("--config", config_path, "Experiment config (JSON)")->required();
  train->add_option("--override", overrides, "Dotted-path override, e.g. evolution.M=2");
  train->add_option("--seed", seeds, "Seeds to run instead of the configured list");
  train->add_option("--output-dir", output_dir, "Parent directory for the run directory");

  std::string checkpoint, env_name, env_params, eval_config, eval_out;
  int episodes = 10;
  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint's deterministic policy");
  eval->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();
  eval->add_option("--env", env_name, "Environment name");
  eval->add_option("--env-params", env_params, "Environment parameters as a JSON object");
  eval->add_option("--config", eval_config, "Take the environment from this experiment config");
  eval->add_option("--episodes", episodes, "Evaluation episodes")->check(CLI::PositiveNumber);
  eval->add_option("--out", eval_out, "Per-episode CSV (printed when omitted)");

  std::vector<std::string> run_dirs;
  std::string report_out = "report";
  auto* report = app.add_subcommand("report", "Summarize finished runs");
  report->add_option("runs", run_dirs, "Run or seed directories")->required();
  report->add_option("--out", report_out, "Directory for the report files");

  std::string frontier_in, frontier_out, format = "json";
  auto* fexport = app.add_subcommand(
      "frontier-export", "Re-score a frontier, verify its checkpoints and export it");
  fexport->add_option("frontier", frontier_in, "frontier.json or the seed directory holding it")
      ->required();
  fexport->add_option("--out", frontier_out, "Export file");
  fexport->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) return cmd_train(config_path, overrides, seeds, output_dir);
    if (*eval) return cmd_eval(checkpoint, env_name, env_params, eval_config, episodes, eval_out);
    if (*report) return cmd_report(run_dirs, report_out);
    if (*fexport) return cmd_frontier_export(frontier_in, frontier_out, format);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
