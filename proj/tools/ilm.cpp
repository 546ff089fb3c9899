// Command-line front end: run experiments, bottleneck sweeps, baseline
// estimates and threshold runs; emit CSV, SVG and a reproducibility manifest.

#include "ilm/config.hpp"
#include "ilm/csv.hpp"
#include "ilm/manifest.hpp"
#include "ilm/svg_plot.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace ilm;

namespace {

struct CommonArgs {
  std::optional<std::string> config_file;
  ConfigPatch flags;
  std::string out_dir = "out";
};

void add_config_options(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_file, "key=value config file");
  cmd->add_option("--out", args.out_dir, "output directory");
  auto& f = args.flags;
  cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("--model", f.model, "oilm|ailm|oneway");
  cmd->add_option("--n", f.n, "meaning/signal length");
  cmd->add_option("--hidden", f.hidden, "hidden layer size (default n)");
  cmd->add_option("--bottleneck", f.bottleneck, "bottleneck set size");
  cmd->add_option("--auto-size", f.auto_size, "auto set size (independent mode)");
  cmd->add_option("--auto-mode", f.auto_mode, "shared|independent");
  cmd->add_option("--auto-direction", f.auto_direction, "m2m|s2s|both");
  cmd->add_option("--r", f.r, "autoencoder presentations per iteration");
  cmd->add_option("--eta", f.eta, "learning rate");
  cmd->add_option("--loss", f.loss, "cross_entropy|squared_error");
  cmd->add_option("--epochs", f.epochs, "training epochs per generation");
  cmd->add_option("--generations", f.generations, "generations per replicate");
  cmd->add_option("--replicates", f.replicates, "independent replicates");
  cmd->add_option("--lambda", f.lambda, "e-good threshold");
  cmd->add_option("--generation-cap", f.generation_cap,
                  "cap for threshold runs");
  cmd->add_option("--threads", f.threads, "worker threads (0 = hardware)");
  cmd->add_option("--loss-divisor", f.loss_divisor,
                  "autoencoder loss reporting divisor (default r)");
  cmd->add_option("--metric-sample", f.metric_sample,
                  "approximate metrics over a meaning sample (0 = exact)");
  cmd->add_flag("--force-obversion", [&f](int64_t) { f.force_obversion = true; },
                "allow obversion above n=13");
  cmd->add_flag("--record-timing", [&f](int64_t) { f.record_timing = true; },
                "fill the ms column (breaks byte-identical reruns)");
}

void report_failures(const ExperimentResult& result) {
  for (const ReplicateResult& rep : result.replicates)
    if (!rep.error.empty())
      std::cerr << "replicate " << rep.replicate << " aborted: " << rep.error
                << "\n";
}

int cmd_run(const CommonArgs& args) {
  const ExperimentConfig cfg = build_config(args.config_file, args.flags);
  const ExperimentResult result = run_experiment(cfg);
  report_failures(result);
  const std::vector<GenerationRecord> records = result.records();
  fs::create_directories(args.out_dir);
  const fs::path out(args.out_dir);
  const double divisor = cfg.effective_loss_divisor();
  write_csv(records, (out / "results.csv").string(), divisor,
            cfg.record_timing);
  write_losses_csv(records, (out / "losses.csv").string(), divisor);
  write_manifest(cfg, result.baseline, (out / "manifest.txt").string());
  if (!records.empty()) {
    plot_metrics(records, (out / "metrics.svg").string());
    plot_losses(records, (out / "losses.svg").string(), divisor);
    // final-generation summary
    double x = 0, c = 0, s = 0;
    int count = 0;
    for (const GenerationRecord& rec : records)
      if (rec.generation == cfg.generations) {
        x += rec.x;
        c += rec.c;
        s += rec.s;
        ++count;
      }
    if (count > 0)
      std::cout << "generation " << cfg.generations << " means: x="
                << format_g6(x / count) << " c=" << format_g6(c / count)
                << " s=" << format_g6(s / count) << " (" << count
                << " replicates)\n";
  }
  std::cout << "wrote " << (out / "results.csv").string() << "\n";
  return 0;
}

int cmd_until(const CommonArgs& args) {
  const ExperimentConfig cfg = build_config(args.config_file, args.flags);
  const UntilResult result = run_until_egood(cfg);
  fs::create_directories(args.out_dir);
  const fs::path out(args.out_dir);
  std::string csv = "replicate,generations,capped\n";
  for (size_t i = 0; i < result.generations.size(); ++i) {
    csv += std::to_string(i) + "," + std::to_string(result.generations[i]) +
           "," + (result.capped[i] ? "1" : "0") + "\n";
  }
  std::ofstream(out / "until.csv", std::ios::binary) << csv;
  write_manifest(cfg, result.baseline, (out / "manifest.txt").string());
  std::cout << "mean generations to lambda=" << format_g6(cfg.lambda) << ": "
            << format_g6(result.mean_generations()) << " ("
            << result.capped_count() << "/" << result.generations.size()
            << " capped at " << cfg.generation_cap << ")\n";
  return 0;
}

int cmd_baseline(const CommonArgs& args) {
  const ExperimentConfig cfg = build_config(args.config_file, args.flags);
  const BaselineEstimate est = estimate_baseline(
      cfg.model, cfg.n, cfg.effective_hidden(),
      derive_seed(cfg.seed, 0, "baseline"), 40, cfg.force_obversion,
      cfg.effective_threads());
  fs::create_directories(args.out_dir);
  std::string text;
  text += std::string("model = ") + to_string(est.kind) + "\n";
  text += "n = " + std::to_string(est.n) + "\n";
  text += "hidden = " + std::to_string(est.hidden) + "\n";
  text += "agents = " + std::to_string(est.agents_used) + "\n";
  text += "pairs = " + std::to_string(est.pairs_used) + "\n";
  text += "x0 = " + format_g6(est.x0) + "\n";
  text += "c0 = " + format_g6(est.c0) + "\n";
  text += "s0 = " + format_g6(est.s0) + "\n";
  std::ofstream(fs::path(args.out_dir) / "baseline.txt", std::ios::binary)
      << text;
  std::cout << text;
  return 0;
}

int cmd_sweep(const CommonArgs& args, int n_min, int n_max, int b_min,
              int b_max, int b_step) {
  const ExperimentConfig base = build_config(args.config_file, args.flags);
  if (n_min > n_max) throw ConfigError("sweep: n-min exceeds n-max");
  if (b_step < 1) throw ConfigError("sweep: bottleneck step must be >= 1");
  std::vector<int> ns;
  for (int n = n_min; n <= n_max; ++n) ns.push_back(n);
  auto grid = [&](int) {
    std::vector<int> bs;
    for (int b = b_min; b <= b_max; b += b_step) bs.push_back(b);
    return bs;
  };
  const SweepResult result = sweep_bottleneck(ns, grid, base);
  fs::create_directories(args.out_dir);
  const fs::path out(args.out_dir);
  std::string points = "n,bottleneck,mean_generations,capped_replicates\n";
  for (const SweepPoint& p : result.points)
    points += std::to_string(p.n) + "," + std::to_string(p.bottleneck) + "," +
              format_g6(p.mean_generations) + "," +
              std::to_string(p.capped_replicates) + "\n";
  std::ofstream(out / "sweep.csv", std::ios::binary) << points;
  std::string best = "n,best_bottleneck,mean_at_best,mean_at_neighbors\n";
  for (const SweepBest& b : result.best)
    best += std::to_string(b.n) + "," + std::to_string(b.best_bottleneck) +
            "," + format_g6(b.mean_at_best) + "," +
            format_g6(b.mean_at_neighbors) + "\n";
  std::ofstream(out / "sweep_best.csv", std::ios::binary) << best;
  std::string summary;
  summary += "slope = " + format_g6(result.slope) + "\n";
  summary += "intercept = " + format_g6(result.intercept) + "\n";
  for (const std::string& w : result.warnings) summary += "warning = " + w + "\n";
  std::ofstream(out / "sweep_summary.txt", std::ios::binary) << summary;
  std::cout << summary;
  return 0;
}

int cmd_plot(const std::string& csv_path, const std::string& losses_path,
             const std::string& out_dir) {
  std::vector<GenerationRecord> records = read_records_csv(csv_path);
  fs::create_directories(out_dir);
  const fs::path out(out_dir);
  plot_metrics(records, (out / "metrics.svg").string());
  std::string losses = losses_path;
  if (losses.empty()) {
    const fs::path sibling = fs::path(csv_path).parent_path() / "losses.csv";
    if (fs::exists(sibling)) losses = sibling.string();
  }
  if (!losses.empty()) {
    read_losses_csv(losses, records);
    bool any = false;
    for (const GenerationRecord& rec : records)
      any = any || !rec.dec_epoch_loss.empty() || !rec.enc_epoch_loss.empty() ||
            !rec.auto_epoch_loss.empty();
    if (any) plot_losses(records, (out / "losses.svg").string(), 1.0);
  }
  std::cout << "wrote " << (out / "metrics.svg").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"iterated learning model laboratory"};
  app.require_subcommand(1);

  CommonArgs run_args;
  CLI::App* run = app.add_subcommand("run", "run one experiment");
  add_config_options(run, run_args);

  CommonArgs until_args;
  CLI::App* until =
      app.add_subcommand("until", "run until the e-good threshold");
  add_config_options(until, until_args);

  CommonArgs baseline_args;
  CLI::App* baseline =
      app.add_subcommand("baseline", "estimate naive-agent baselines");
  add_config_options(baseline, baseline_args);

  CommonArgs sweep_args;
  int n_min = 4, n_max = 8, b_min = 4, b_max = 96, b_step = 4;
  CLI::App* sweep = app.add_subcommand("sweep", "bottleneck-size study");
  add_config_options(sweep, sweep_args);
  sweep->add_option("--n-min", n_min, "smallest n");
  sweep->add_option("--n-max", n_max, "largest n");
  sweep->add_option("--bottleneck-min", b_min, "smallest bottleneck");
  sweep->add_option("--bottleneck-max", b_max,
                    "largest bottleneck (clamped to 2^n)");
  sweep->add_option("--bottleneck-step", b_step, "grid step");

  std::string plot_csv, plot_losses_csv, plot_out = "out";
  CLI::App* plot = app.add_subcommand("plot", "re-render plots from CSV");
  plot->add_option("--csv", plot_csv, "results CSV")->required();
  plot->add_option("--losses", plot_losses_csv, "losses CSV (optional)");
  plot->add_option("--out", plot_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_args);
    if (until->parsed()) return cmd_until(until_args);
    if (baseline->parsed()) return cmd_baseline(baseline_args);
    if (sweep->parsed())
      return cmd_sweep(sweep_args, n_min, n_max, b_min, b_max, b_step);
    if (plot->parsed()) return cmd_plot(plot_csv, plot_losses_csv, plot_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
