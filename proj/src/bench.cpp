#include "latmax/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <deque>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "latmax/gim.hpp"
#include "latmax/log.hpp"
#include "latmax/metrics.hpp"
#include "latmax/rng.hpp"

namespace latmax {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

double parse_double(const std::string& s, const std::string& key) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("config key '" + key + "': bad number '" + s + "'");
  }
}

long long parse_int(const std::string& s, const std::string& key) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("config key '" + key + "': bad integer '" + s +
                             "'");
  }
}

std::uint64_t parse_uint(const std::string& s, const std::string& key) {
  try {
    std::size_t used = 0;
    unsigned long long v = std::stoull(s, &used);
    if (used != s.size() || s.empty() || s[0] == '-')
      throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("config key '" + key + "': bad integer '" + s +
                             "'");
  }
}

bool parse_bool(const std::string& s, const std::string& key) {
  if (s == "true" || s == "on" || s == "1") return true;
  if (s == "false" || s == "off" || s == "0") return false;
  throw std::runtime_error("config key '" + key + "': bad boolean '" + s + "'");
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(line_no) +
                               ": expected key = value");
    std::string key = trim(stripped.substr(0, eq));
    std::string value = trim(stripped.substr(eq + 1));
    if (!seen.insert(key).second)
      throw std::runtime_error("config key '" + key + "' repeated");

    if (key == "objective.source") {
      if (value == "synthetic")
        cfg.source = ExperimentConfig::Source::Synthetic;
      else if (value == "gim")
        cfg.source = ExperimentConfig::Source::Gim;
      else
        throw std::runtime_error("objective.source must be synthetic or gim");
    } else if (key == "synthetic.kind") {
      cfg.synthetic_kind = parse_synthetic_kind(value);
    } else if (key == "synthetic.n") {
      cfg.synthetic_n = static_cast<std::size_t>(parse_int(value, key));
    } else if (key == "synthetic.params") {
      cfg.synthetic_params.clear();
      if (!value.empty())
        for (const std::string& item : split(value, ','))
          cfg.synthetic_params.push_back(parse_double(item, key));
    } else if (key == "gim.graph") {
      cfg.gim_graph = ExperimentConfig::GimGraph::File;
      cfg.gim_graph_path = value;
    } else if (key == "gim.undirected") {
      cfg.gim_undirected = parse_bool(value, key);
    } else if (key == "gim.generator") {
      if (value == "file")
        cfg.gim_graph = ExperimentConfig::GimGraph::File;
      else if (value == "ba")
        cfg.gim_graph = ExperimentConfig::GimGraph::BarabasiAlbert;
      else
        throw std::runtime_error("gim.generator must be file or ba");
    } else if (key == "gim.ba.nodes") {
      cfg.gim_ba_nodes = static_cast<std::size_t>(parse_int(value, key));
    } else if (key == "gim.ba.edges_per_node") {
      cfg.gim_ba_edges_per_node =
          static_cast<std::size_t>(parse_int(value, key));
    } else if (key == "gim.levels") {
      cfg.gim_levels = static_cast<int>(parse_int(value, key));
    } else if (key == "gim.samples") {
      cfg.gim_samples = static_cast<std::size_t>(parse_int(value, key));
    } else if (key == "algorithms") {
      cfg.algorithms.clear();
      for (const std::string& item : split(value, ','))
        cfg.algorithms.push_back(parse_algorithm(item));
    } else if (key == "algo.kappa") {
      cfg.kappa = parse_double(value, key);
    } else if (key == "algo.delta") {
      cfg.delta = parse_double(value, key);
    } else if (key == "algo.epsilon") {
      cfg.epsilon = parse_double(value, key);
    } else if (key == "algo.workers") {
      cfg.workers = static_cast<unsigned>(parse_int(value, key));
    } else if (key == "budgets") {
      cfg.budgets.clear();
      for (const std::string& item : split(value, ','))
        cfg.budgets.push_back(parse_int(item, key));
    } else if (key == "budgets.per_level") {
      cfg.budgets_per_level = parse_bool(value, key);
    } else if (key == "repetitions") {
      cfg.repetitions = static_cast<std::size_t>(parse_int(value, key));
    } else if (key == "seed") {
      cfg.master_seed = parse_uint(value, key);
    } else if (key == "out_dir") {
      cfg.out_dir = value;
    } else if (key == "timing") {
      cfg.timing = parse_bool(value, key);
    } else if (key == "ratios.gamma_s") {
      cfg.gamma_s = parse_double(value, key);
    } else if (key == "ratios.gamma_d") {
      cfg.gamma_d = parse_double(value, key);
    } else if (key == "ratios.alpha") {
      cfg.alpha = parse_double(value, key);
    } else if (key == "metrics.max_points") {
      cfg.metrics_max_points = static_cast<std::uint64_t>(parse_int(value, key));
    } else if (key == "metrics.max_pairs") {
      cfg.metrics_max_pairs = static_cast<std::uint64_t>(parse_int(value, key));
    } else if (key == "metrics.budgets") {
      cfg.metrics_budgets.clear();
      for (const std::string& item : split(value, ','))
        cfg.metrics_budgets.push_back(parse_int(item, key));
    } else {
      throw std::runtime_error("unknown config key '" + key + "'");
    }
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string csv_header() {
  return "algorithm,k,rep,value,queries,seconds,beta_star,bound,seed";
}

std::string format_record(const RunRecord& r) {
  std::string out = r.algorithm;
  out += ",";
  out += std::to_string(r.k);
  out += ",";
  out += std::to_string(r.rep);
  out += ",";
  out += format_double(r.value);
  out += ",";
  out += std::to_string(r.queries);
  out += ",";
  out += format_double(r.seconds);
  out += ",";
  if (r.beta_star.has_value()) out += format_double(*r.beta_star);
  out += ",";
  if (r.bound.has_value()) out += format_double(*r.bound);
  out += ",";
  out += std::to_string(r.seed);
  return out;
}

RunRecord parse_record(const std::string& line) {
  std::vector<std::string> fields;
  std::string item;
  std::istringstream in(line);
  while (std::getline(in, item, ',')) fields.push_back(item);
  // a trailing empty field is eaten by getline; restore it
  if (!line.empty() && line.back() == ',') fields.push_back("");
  if (fields.size() != 9)
    throw std::runtime_error("record needs 9 fields, got " +
                             std::to_string(fields.size()) + ": " + line);
  RunRecord r;
  r.algorithm = fields[0];
  r.k = parse_int(fields[1], "k");
  r.rep = static_cast<std::size_t>(parse_int(fields[2], "rep"));
  r.value = parse_double(fields[3], "value");
  r.queries = parse_uint(fields[4], "queries");
  r.seconds = parse_double(fields[5], "seconds");
  if (!fields[6].empty()) r.beta_star = parse_double(fields[6], "beta_star");
  if (!fields[7].empty()) r.bound = parse_double(fields[7], "bound");
  r.seed = parse_uint(fields[8], "seed");
  return r;
}

void emit_csv(const std::vector<RunRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write: " + path);
  out << csv_header() << "\n";
  for (const RunRecord& r : records) out << format_record(r) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<RunRecord> parse_records_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open records: " + path);
  std::vector<RunRecord> records;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {
      first = false;
      if (line != csv_header())
        throw std::runtime_error("unexpected records header: " + line);
      continue;
    }
    if (trim(line).empty()) continue;
    records.push_back(parse_record(line));
  }
  return records;
}

struct RecordWriter::Impl {
  std::FILE* file = nullptr;
};

RecordWriter::RecordWriter(const std::string& path) : impl_(new Impl) {
  impl_->file = std::fopen(path.c_str(), "a");
  if (impl_->file == nullptr)
    throw std::runtime_error("cannot open for append: " + path);
  std::fseek(impl_->file, 0, SEEK_END);
  if (std::ftell(impl_->file) == 0) {
    std::string header = csv_header() + "\n";
    std::fwrite(header.data(), 1, header.size(), impl_->file);
    std::fflush(impl_->file);
  }
}

RecordWriter::~RecordWriter() {
  if (impl_->file != nullptr) std::fclose(impl_->file);
}

void RecordWriter::write(const RunRecord& record) {
  std::string row = format_record(record) + "\n";
  if (std::fwrite(row.data(), 1, row.size(), impl_->file) != row.size())
    throw std::runtime_error("record append failed");
  std::fflush(impl_->file);
}

namespace {

struct ObjectiveSetup {
  std::unique_ptr<ObjectiveOracle> oracle;
  BoxConstraint box;
};

// One oracle per cell: query counters and sampling state must start fresh.
ObjectiveSetup make_objective(const ExperimentConfig& cfg, long long k,
                              std::uint64_t cell_seed,
                              const Digraph* gim_graph,
                              std::deque<GimInstance>& instance_store) {
  if (cfg.source == ExperimentConfig::Source::Synthetic) {
    if (cfg.synthetic_n == 0)
      throw std::runtime_error("synthetic.n must be set");
    // instance identity is fixed by the master seed; cells share it
    auto oracle = make_synthetic_objective(cfg.synthetic_kind,
                                           cfg.synthetic_params, cfg.synthetic_n,
                                           derive_seed(cfg.master_seed, 0x0B));
    BoxConstraint box = BoxConstraint::unbounded(cfg.synthetic_n, k);
    return {std::move(oracle), box};
  }
  // GIM: instance per budget (tables are budget-independent, box is not)
  const GimInstance* inst = nullptr;
  for (const GimInstance& stored : instance_store)
    if (stored.budget_k == k) inst = &stored;
  if (inst == nullptr) {
    instance_store.push_back(build_gim(*gim_graph, cfg.gim_levels, k));
    inst = &instance_store.back();
  }
  auto oracle = std::make_unique<GimOracleAdapter>(*inst, cfg.gim_samples,
                                                   cell_seed);
  return {std::move(oracle), inst->box()};
}

std::optional<double> bound_for(const ExperimentConfig& cfg, Algorithm alg,
                                const std::optional<double>& beta_star) {
  if (!cfg.gamma_s.has_value()) return std::nullopt;
  double gs = *cfg.gamma_s;
  switch (alg) {
    case Algorithm::Standard: {
      if (!cfg.alpha.has_value()) return std::nullopt;
      double a = *cfg.alpha;
      if (a <= 0.0) return gs;  // limit of (1/a)(1 - e^{-a*gs}) as a -> 0
      return (1.0 / a) * (1.0 - std::exp(-a * gs));
    }
    case Algorithm::Threshold:
      if (!cfg.gamma_d.has_value()) return std::nullopt;
      return performance_bound(cfg.kappa, *cfg.gamma_d, gs, cfg.epsilon);
    case Algorithm::Fast:
      if (!beta_star.has_value()) return std::nullopt;
      return performance_bound(cfg.kappa, std::min(*beta_star, 1.0), gs,
                               cfg.epsilon);
    case Algorithm::ThresholdParallel:
      if (!cfg.gamma_d.has_value() || !cfg.alpha.has_value())
        return std::nullopt;
      return performance_bound(cfg.kappa, (1.0 - *cfg.alpha) * *cfg.gamma_d,
                               gs, cfg.epsilon);
  }
  return std::nullopt;
}

}  // namespace

std::size_t run_experiment(const ExperimentConfig& config,
                           const RecordSink& sink) {
  std::unique_ptr<Digraph> graph;
  if (config.source == ExperimentConfig::Source::Gim) {
    if (config.gim_graph == ExperimentConfig::GimGraph::File) {
      if (config.gim_graph_path.empty())
        throw std::runtime_error("gim.graph must be set");
      graph = std::make_unique<Digraph>(load_edge_list(
          config.gim_graph_path, config.gim_undirected
                                     ? EdgeDirection::Undirected
                                     : EdgeDirection::Directed));
    } else {
      graph = std::make_unique<Digraph>(
          barabasi_albert(config.gim_ba_nodes, config.gim_ba_edges_per_node,
                          derive_seed(config.master_seed, 0x9A)));
    }
  }
  if (config.algorithms.empty())
    throw std::runtime_error("no algorithms configured");

  std::deque<GimInstance> instance_store;
  std::size_t failures = 0;
  std::size_t cell_index = 0;
  for (std::size_t ai = 0; ai < config.algorithms.size(); ++ai) {
    Algorithm alg = config.algorithms[ai];
    for (long long budget : config.budgets) {
      long long k = config.budgets_per_level && config.source ==
                        ExperimentConfig::Source::Gim
                        ? budget * config.gim_levels
                        : budget;
      for (std::size_t rep = 0; rep < config.repetitions; ++rep, ++cell_index) {
        std::uint64_t cell_seed =
            derive_seed(config.master_seed, ai * 1000003ULL + rep,
                        static_cast<std::uint64_t>(k));
        try {
          ObjectiveSetup setup =
              make_objective(config, k, cell_seed, graph.get(), instance_store);
          auto started = std::chrono::steady_clock::now();
          GreedyResult result;
          switch (alg) {
            case Algorithm::Standard:
              result = standard_greedy(*setup.oracle, setup.box);
              break;
            case Algorithm::Threshold:
              result = threshold_greedy(*setup.oracle, setup.box, config.kappa,
                                        config.epsilon);
              break;
            case Algorithm::Fast:
              result = fast_greedy(*setup.oracle, setup.box, config.kappa,
                                   config.delta, config.epsilon);
              break;
            case Algorithm::ThresholdParallel:
              result = threshold_greedy_parallel(*setup.oracle, setup.box,
                                                 config.kappa, config.epsilon,
                                                 config.workers);
              break;
          }
          auto finished = std::chrono::steady_clock::now();

          RunRecord record;
          record.algorithm = to_string(alg);
          record.k = k;
          record.rep = rep;
          record.value = result.value;
          record.queries = result.queries;
          record.seconds =
              config.timing
                  ? std::chrono::duration<double>(finished - started).count()
                  : 0.0;
          record.beta_star = result.beta_star;
          record.bound = bound_for(config, alg, result.beta_star);
          record.seed = cell_seed;
          sink(record);
          LATMAX_LOG_INFO("cell %s k=%lld rep=%zu: value=%g queries=%llu",
                          record.algorithm.c_str(), k, rep, record.value,
                          static_cast<unsigned long long>(record.queries));
        } catch (const std::exception& e) {
          ++failures;
          LATMAX_LOG_ERROR("cell %s k=%lld rep=%zu failed: %s",
                           to_string(alg).c_str(), k, rep, e.what());
        }
      }
    }
  }
  return failures;
}

void emit_plot_data(const std::vector<RunRecord>& records,
                    const std::string& metric, const std::string& path,
                    long long divide_k_by) {
  if (metric != "value" && metric != "queries" && metric != "seconds" &&
      metric != "beta_star")
    throw std::runtime_error("unknown metric '" + metric +
                             "' (value|queries|seconds|beta_star)");
  auto metric_of = [&](const RunRecord& r) -> std::optional<double> {
    if (metric == "value") return r.value;
    if (metric == "queries") return static_cast<double>(r.queries);
    if (metric == "seconds") return r.seconds;
    return r.beta_star;
  };
  // group by (algorithm, k), preserving first-appearance order
  std::vector<std::pair<std::string, long long>> order;
  std::map<std::pair<std::string, long long>, std::vector<double>> groups;
  for (const RunRecord& r : records) {
    auto key = std::make_pair(r.algorithm, r.k);
    if (groups.find(key) == groups.end()) order.push_back(key);
    auto& bucket = groups[key];
    std::optional<double> v = metric_of(r);
    if (v.has_value()) bucket.push_back(*v);
  }

  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write: " + path);
  out << "algorithm,k,mean,stddev\n";
  for (const auto& key : order) {
    const std::vector<double>& values = groups[key];
    out << key.first << ",";
    if (divide_k_by > 0)
      out << format_double(static_cast<double>(key.second) /
                           static_cast<double>(divide_k_by));
    else
      out << key.second;
    out << ",";
    if (!values.empty()) {
      double mean = 0.0;
      for (double v : values) mean += v;
      mean /= static_cast<double>(values.size());
      double stddev = 0.0;
      if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - mean) * (v - mean);
        stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
      }
      out << format_double(mean) << "," << format_double(stddev);
    } else {
      out << ",";
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace latmax
