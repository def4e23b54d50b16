#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "latmax/greedy.hpp"
#include "latmax/synthetic.hpp"

namespace latmax {

/// Fully describes one experiment; together with the master seed it
/// determines every run. Parsed from a flat key=value file ('#' comments,
/// dotted section keys, unknown keys are hard errors).
struct ExperimentConfig {
  enum class Source { Synthetic, Gim };
  enum class GimGraph { File, BarabasiAlbert };

  Source source = Source::Synthetic;

  SyntheticKind synthetic_kind = SyntheticKind::Modular;
  std::vector<double> synthetic_params;
  std::size_t synthetic_n = 0;

  GimGraph gim_graph = GimGraph::File;
  std::string gim_graph_path;
  bool gim_undirected = false;
  std::size_t gim_ba_nodes = 0;
  std::size_t gim_ba_edges_per_node = 1;
  int gim_levels = 1;
  std::size_t gim_samples = 10000;

  std::vector<Algorithm> algorithms;
  double kappa = 0.95;
  double delta = 0.9;
  double epsilon = 0.05;
  unsigned workers = 1;

  std::vector<long long> budgets;   // k values, or K values when per_level
  bool budgets_per_level = false;   // K semantics: k = K * levels
  std::size_t repetitions = 1;
  std::uint64_t master_seed = 1;
  std::string out_dir = ".";
  bool timing = true;               // off => seconds column is 0 (reproducible)

  // optional externally computed ratios; when present each record carries
  // its approximation bound
  std::optional<double> gamma_s;
  std::optional<double> gamma_d;
  std::optional<double> alpha;

  // metrics subcommand knobs
  std::uint64_t metrics_max_points = 200000;
  std::uint64_t metrics_max_pairs = 100000000;
  std::vector<long long> metrics_budgets;
};

ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

struct RunRecord {
  std::string algorithm;
  long long k = 0;
  std::size_t rep = 0;
  double value = 0.0;
  std::uint64_t queries = 0;
  double seconds = 0.0;
  std::optional<double> beta_star;
  std::optional<double> bound;
  std::uint64_t seed = 0;

  bool operator==(const RunRecord&) const = default;
};

using RecordSink = std::function<void(const RunRecord&)>;

/// Executes every (algorithm, k, repetition) cell in declaration order with
/// seeds derived from the master seed, pushing each finished record to the
/// sink as it completes. Failed cells are logged and skipped; the return
/// value is the number of failures (0 = full completion).
std::size_t run_experiment(const ExperimentConfig& config,
                           const RecordSink& sink);

std::string csv_header();
std::string format_record(const RunRecord& record);
RunRecord parse_record(const std::string& line);

void emit_csv(const std::vector<RunRecord>& records, const std::string& path);
std::vector<RunRecord> parse_records_file(const std::string& path);

/// Incremental record writer: opens in append mode, writes the header only
/// when the file is empty, flushes after every record.
class RecordWriter {
 public:
  explicit RecordWriter(const std::string& path);
  ~RecordWriter();
  void write(const RunRecord& record);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Long-format aggregation `algorithm,k,mean,stddev` per (algorithm, k)
/// group for the chosen metric (value | queries | seconds | beta_star).
/// Sample stddev (n-1 divisor; 0 for singleton groups). Groups where the
/// metric is absent leave mean and stddev empty. divide_k_by > 0 rescales
/// the k column to k / divide_k_by (per-level budgets).
void emit_plot_data(const std::vector<RunRecord>& records,
                    const std::string& metric, const std::string& path,
                    long long divide_k_by = 0);

}  // namespace latmax
