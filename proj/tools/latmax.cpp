// latmax: greedy maximization of monotone lattice functions, with
// non-submodularity diagnostics and an influence-maximization simulator.
//
//   latmax run <config>                 execute an experiment, appending
//                                       records to <out_dir>/records.csv
//   latmax csv <records> <out>          re-emit a records file (validates)
//   latmax plotdata <records> <metric> <out>
//                                       aggregate mean/stddev per (alg, k)
//   latmax metrics <config>             exact ratio diagnostics on a small
//                                       instance, plus per-budget greedy runs

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "latmax/bench.hpp"
#include "latmax/gim.hpp"
#include "latmax/log.hpp"
#include "latmax/metrics.hpp"
#include "latmax/rng.hpp"

namespace {

using namespace latmax;

int cmd_run(const std::string& config_path,
            const std::optional<std::uint64_t>& seed,
            const std::optional<std::string>& out_dir,
            const std::optional<unsigned>& workers) {
  ExperimentConfig config = parse_config_file(config_path);
  if (seed.has_value()) config.master_seed = *seed;
  if (out_dir.has_value()) config.out_dir = *out_dir;
  if (workers.has_value()) config.workers = *workers;

  std::filesystem::create_directories(config.out_dir);
  RecordWriter writer(config.out_dir + "/records.csv");
  std::size_t failures =
      run_experiment(config, [&](const RunRecord& r) { writer.write(r); });
  if (failures != 0) {
    std::cerr << failures << " cell(s) failed\n";
    return 1;
  }
  return 0;
}

int cmd_csv(const std::string& records_path, const std::string& out_path) {
  emit_csv(parse_records_file(records_path), out_path);
  return 0;
}

int cmd_plotdata(const std::string& records_path, const std::string& metric,
                 const std::string& out_path, long long levels) {
  emit_plot_data(parse_records_file(records_path), metric, out_path, levels);
  return 0;
}

// Exact gamma_d / gamma_s / alpha with certificates; when budgets are given,
// also per-budget FastGreedy + ThresholdGreedy runs on the exact activation
// oracle with their trace ratios and the implied bounds.
int cmd_metrics(const std::string& config_path,
                const std::optional<std::string>& out_dir) {
  ExperimentConfig config = parse_config_file(config_path);
  if (out_dir.has_value()) config.out_dir = *out_dir;
  EnumerationLimits limits{config.metrics_max_points, config.metrics_max_pairs};

  std::string text;
  if (config.source == ExperimentConfig::Source::Synthetic) {
    auto oracle = make_synthetic_objective(
        config.synthetic_kind, config.synthetic_params, config.synthetic_n,
        derive_seed(config.master_seed, 0x0B));
    long long k = config.budgets.empty() ? 1 : config.budgets.front();
    BoxConstraint box = BoxConstraint::unbounded(config.synthetic_n, k);
    text += serialize_report(exact_report(*oracle, box, limits));
  } else {
    Digraph graph =
        config.gim_graph == ExperimentConfig::GimGraph::File
            ? load_edge_list(config.gim_graph_path,
                             config.gim_undirected ? EdgeDirection::Undirected
                                                   : EdgeDirection::Directed)
            : barabasi_albert(config.gim_ba_nodes,
                              config.gim_ba_edges_per_node,
                              derive_seed(config.master_seed, 0x9A));
    std::vector<long long> budgets = config.metrics_budgets.empty()
                                         ? config.budgets
                                         : config.metrics_budgets;
    if (budgets.empty())
      throw std::runtime_error("metrics over gim needs budgets");
    for (long long budget : budgets) {
      long long k = config.budgets_per_level ? budget * config.gim_levels
                                             : budget;
      GimInstance inst = build_gim(graph, config.gim_levels, k);
      ExactGimOracle oracle(inst);
      std::string prefix = "k" + std::to_string(k) + ".";
      GreedyResult fast = fast_greedy(oracle, inst.box(), config.kappa,
                                      config.delta, config.epsilon);
      GreedyRatioReport fast_ratio = greedy_submodularity_ratio(
          oracle, fast.trace, inst.box(), Algorithm::Fast, limits);
      text += prefix + "fast.value=" + std::to_string(fast.value) + "\n";
      text += prefix + "fast.queries=" + std::to_string(fast.queries) + "\n";
      text += prefix +
              "fast.beta_star=" + std::to_string(fast.beta_star.value_or(1.0)) +
              "\n";
      text += prefix + "fast.beta_star_exact=" +
              (fast.beta_star_exact ? "true" : "false") + "\n";
      text += prefix +
              "fast.gamma_s=" + std::to_string(fast_ratio.gamma_s_greedy) +
              "\n";
      text += prefix + "fast.bound=" +
              std::to_string(performance_bound(
                  config.kappa, std::min(fast.beta_star.value_or(1.0), 1.0),
                  fast_ratio.gamma_s_greedy, config.epsilon)) +
              "\n";
      GreedyResult thresh =
          threshold_greedy(oracle, inst.box(), config.kappa, config.epsilon);
      GreedyRatioReport thresh_ratio = greedy_submodularity_ratio(
          oracle, thresh.trace, inst.box(), Algorithm::Threshold, limits);
      text += prefix + "threshold.value=" + std::to_string(thresh.value) + "\n";
      text +=
          prefix + "threshold.queries=" + std::to_string(thresh.queries) + "\n";
      text += prefix + "threshold.gamma_s=" +
              std::to_string(thresh_ratio.gamma_s_greedy) + "\n";
      text += prefix + "threshold.gamma_d_tg=" +
              std::to_string(thresh_ratio.gamma_d_tg.value_or(1.0)) + "\n";
      text += prefix + "dr_lower_bound=" +
              std::to_string(dr_lower_bound(inst, k)) + "\n";
    }
  }

  std::cout << text;
  if (!config.out_dir.empty()) {
    std::filesystem::create_directories(config.out_dir);
    std::ofstream out(config.out_dir + "/metrics.txt", std::ios::trunc);
    out << text;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"greedy lattice maximization toolkit"};
  app.require_subcommand(1);

  std::string config_path, records_path, metric, out_path;
  long long levels = 0;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<unsigned> workers;

  CLI::App* run = app.add_subcommand("run", "execute an experiment config");
  run->add_option("config", config_path, "key=value experiment config")
      ->required();
  run->add_option("--seed", seed, "override the master seed");
  run->add_option("--out-dir", out_dir, "override the output directory");
  run->add_option("--workers", workers, "override worker threads");

  CLI::App* csv = app.add_subcommand("csv", "validate and re-emit records");
  csv->add_option("records", records_path)->required();
  csv->add_option("out", out_path)->required();

  CLI::App* plot = app.add_subcommand("plotdata", "aggregate per (alg, k)");
  plot->add_option("records", records_path)->required();
  plot->add_option("metric", metric, "value|queries|seconds|beta_star")
      ->required();
  plot->add_option("out", out_path)->required();
  plot->add_option("--levels", levels, "divide k by this level count");

  CLI::App* metrics =
      app.add_subcommand("metrics", "non-submodularity diagnostics");
  metrics->add_option("config", config_path)->required();
  metrics->add_option("--out-dir", out_dir);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, seed, out_dir, workers);
    if (csv->parsed()) return cmd_csv(records_path, out_path);
    if (plot->parsed())
      return cmd_plotdata(records_path, metric, out_path, levels);
    if (metrics->parsed()) return cmd_metrics(config_path, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
