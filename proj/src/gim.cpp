#include "latmax/gim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "latmax/log.hpp"
#include "latmax/rng.hpp"

namespace latmax {

std::uint32_t Digraph::max_in_degree() const {
  std::uint32_t best = 0;
  for (const auto& arcs : in_arcs)
    best = std::max(best, static_cast<std::uint32_t>(arcs.size()));
  return best;
}

namespace {

Digraph assemble(std::size_t node_count,
                 std::vector<Digraph::Arc> arcs,
                 std::vector<long long> original_ids) {
  Digraph g;
  g.node_count = node_count;
  g.arcs = std::move(arcs);
  g.in_arcs.resize(node_count);
  g.out_arcs.resize(node_count);
  for (std::uint32_t a = 0; a < g.arcs.size(); ++a) {
    g.out_arcs[g.arcs[a].tail].push_back(a);
    g.in_arcs[g.arcs[a].head].push_back(a);
  }
  g.original_ids = std::move(original_ids);
  return g;
}

}  // namespace

Digraph make_digraph(
    std::size_t node_count,
    const std::vector<std::pair<long long, long long>>& edges) {
  std::vector<Digraph::Arc> arcs;
  std::set<std::pair<long long, long long>> seen;
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= static_cast<long long>(node_count) ||
        v >= static_cast<long long>(node_count))
      throw std::invalid_argument("arc endpoint out of range");
    if (u == v) continue;
    if (!seen.insert({u, v}).second) continue;
    arcs.push_back({static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v)});
  }
  std::vector<long long> ids(node_count);
  for (std::size_t i = 0; i < node_count; ++i) ids[i] = static_cast<long long>(i);
  return assemble(node_count, std::move(arcs), std::move(ids));
}

Digraph load_edge_list(const std::string& path, EdgeDirection direction) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge list: " + path);

  std::map<long long, std::uint32_t> compact;
  std::vector<long long> original_ids;
  auto id_of = [&](long long raw) {
    auto [it, inserted] =
        compact.insert({raw, static_cast<std::uint32_t>(original_ids.size())});
    if (inserted) original_ids.push_back(raw);
    return it->second;
  };

  std::vector<Digraph::Arc> arcs;
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  auto add_arc = [&](std::uint32_t u, std::uint32_t v) {
    if (u == v) return;
    if (seen.insert({u, v}).second) arcs.push_back({u, v});
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::istringstream fields(line);
    long long u, v;
    std::string extra;
    if (!(fields >> u >> v) || (fields >> extra))
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": malformed edge line: '" + line + "'");
    std::uint32_t cu = id_of(u), cv = id_of(v);
    add_arc(cu, cv);
    if (direction == EdgeDirection::Undirected) add_arc(cv, cu);
  }
  if (original_ids.empty())
    throw std::runtime_error("empty graph: " + path);
  std::size_t node_count = original_ids.size();
  return assemble(node_count, std::move(arcs), std::move(original_ids));
}

Digraph barabasi_albert(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (n < 2 || m < 1 || m >= n)
    throw std::invalid_argument("barabasi_albert needs n >= 2, 1 <= m < n");
  Rng rng(derive_seed(seed, 0xBA));
  std::vector<std::pair<long long, long long>> edges;
  std::vector<std::size_t> degree(n, 0);
  // arcs point from the attachment target (established node) to the newcomer
  for (std::size_t v = std::max<std::size_t>(m, 1); v < n; ++v) {
    std::set<std::size_t> targets;
    while (targets.size() < std::min(m, v)) {
      // degree + 1 keeps isolated seed nodes reachable
      std::size_t total = 0;
      for (std::size_t u = 0; u < v; ++u) total += degree[u] + 1;
      std::uint64_t pick = rng.below(total);
      std::size_t chosen = 0;
      for (std::size_t u = 0; u < v; ++u) {
        std::size_t w = degree[u] + 1;
        if (pick < w) {
          chosen = u;
          break;
        }
        pick -= w;
      }
      targets.insert(chosen);
    }
    for (std::size_t t : targets) {
      edges.push_back({static_cast<long long>(t), static_cast<long long>(v)});
      ++degree[t];
      ++degree[v];
    }
  }
  return make_digraph(n, edges);
}

void GimInstance::validate() const {
  if (levels < 1) throw std::invalid_argument("gim instance needs L >= 1");
  if (budget_k < 0) throw std::invalid_argument("budget must be >= 0");
  auto check_table = [&](const std::vector<double>& t, const char* what) {
    if (t.size() != static_cast<std::size_t>(levels) + 1)
      throw std::invalid_argument(std::string(what) +
                                  " table must have L+1 entries");
    double prev = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (!(t[i] >= 0.0 && t[i] <= 1.0))
        throw std::invalid_argument(std::string(what) +
                                    " probability outside [0,1]");
      if (i > 0 && t[i] < prev)
        throw std::invalid_argument(std::string(what) +
                                    " mapping must be monotone in the level");
      prev = t[i];
    }
  };
  if (node_prob.size() != graph.node_count)
    throw std::invalid_argument("node model size mismatch");
  if (arc_prob.size() != graph.arc_count())
    throw std::invalid_argument("edge model size mismatch");
  for (const auto& t : node_prob) check_table(t, "node");
  for (const auto& t : arc_prob) check_table(t, "edge");
}

NodeModelFn linear_node_model(int levels) {
  return [levels](std::uint32_t, int level) {
    return static_cast<double>(level) / static_cast<double>(levels);
  };
}

EdgeModelFn weighted_cascade_edge_model(const Digraph& graph, int levels) {
  std::vector<double> base(graph.arc_count());
  for (std::uint32_t a = 0; a < graph.arc_count(); ++a)
    base[a] = 1.0 / static_cast<double>(graph.in_degree(graph.arcs[a].head));
  return [base = std::move(base), levels](std::uint32_t arc, int level) {
    double scale = 1.0 + static_cast<double>(level) / static_cast<double>(levels);
    return std::min(1.0, base[arc] * scale);
  };
}

GimInstance build_gim(Digraph graph, int levels, long long budget_k,
                      NodeModelFn node_model, EdgeModelFn edge_model) {
  if (levels < 1) throw std::invalid_argument("build_gim needs L >= 1");
  if (!node_model) node_model = linear_node_model(levels);
  if (!edge_model) edge_model = weighted_cascade_edge_model(graph, levels);

  GimInstance inst;
  inst.levels = levels;
  inst.budget_k = budget_k;
  inst.node_prob.resize(graph.node_count);
  for (std::uint32_t u = 0; u < graph.node_count; ++u) {
    inst.node_prob[u].resize(levels + 1);
    for (int i = 0; i <= levels; ++i) inst.node_prob[u][i] = node_model(u, i);
  }
  inst.arc_prob.resize(graph.arc_count());
  for (std::uint32_t a = 0; a < graph.arc_count(); ++a) {
    inst.arc_prob[a].resize(levels + 1);
    for (int i = 0; i <= levels; ++i) inst.arc_prob[a][i] = edge_model(a, i);
  }
  inst.graph = std::move(graph);
  inst.validate();
  return inst;
}

GimInstance reduce_from_ic_im(Digraph graph,
                              const std::vector<double>& arc_weight,
                              long long budget_k) {
  if (arc_weight.size() != graph.arc_count())
    throw std::invalid_argument("need one weight per arc");
  for (double w : arc_weight)
    if (!(w >= 0.0 && w <= 1.0))
      throw std::invalid_argument("IC weight outside [0,1]");
  return build_gim(
      std::move(graph), 1, budget_k,
      [](std::uint32_t, int level) { return level == 0 ? 0.0 : 1.0; },
      [&arc_weight](std::uint32_t arc, int) { return arc_weight[arc]; });
}

GimInstance reduce_from_boosting(Digraph graph,
                                 const std::vector<double>& base_weight,
                                 const std::vector<double>& boosted_weight,
                                 const std::vector<std::uint32_t>& seed_set,
                                 long long budget_k) {
  if (base_weight.size() != graph.arc_count() ||
      boosted_weight.size() != graph.arc_count())
    throw std::invalid_argument("need base and boosted weights per arc");
  for (std::size_t a = 0; a < base_weight.size(); ++a)
    if (!(base_weight[a] >= 0.0 && base_weight[a] <= 1.0) ||
        !(boosted_weight[a] >= 0.0 && boosted_weight[a] <= 1.0))
      throw std::invalid_argument("boosting weight outside [0,1]");
  std::vector<std::uint8_t> is_seed(graph.node_count, 0);
  for (std::uint32_t s : seed_set) {
    if (s >= graph.node_count)
      throw std::invalid_argument("seed id outside the graph");
    is_seed[s] = 1;
  }
  return build_gim(
      std::move(graph), 1, budget_k,
      [is_seed = std::move(is_seed)](std::uint32_t u, int) {
        return is_seed[u] ? 1.0 : 0.0;
      },
      [&](std::uint32_t arc, int level) {
        return level == 0 ? base_weight[arc] : boosted_weight[arc];
      });
}

namespace {

void require_in_box(const GimInstance& inst, const LatticeVector& x) {
  if (x.dim() != inst.graph.node_count)
    throw std::invalid_argument("incentive vector dimension mismatch");
  for (std::size_t u = 0; u < x.dim(); ++u)
    if (x[u] > inst.levels)
      throw std::invalid_argument("incentive level beyond L");
}

// Folds out arcs that are deterministic at every level; enumerates the rest.
struct RealizationEnumerator {
  const GimInstance* inst;
  std::vector<std::uint32_t> uncertain;
  std::vector<std::uint32_t> always_live;

  RealizationEnumerator(const GimInstance& instance,
                        std::size_t max_uncertain_arcs)
      : inst(&instance) {
    if (instance.graph.node_count > 64)
      throw std::invalid_argument(
          "exact activation supports at most 64 nodes");
    for (std::uint32_t a = 0; a < instance.graph.arc_count(); ++a) {
      const auto& t = instance.arc_prob[a];
      bool all_one = true, all_zero = true;
      for (double p : t) {
        all_one = all_one && p == 1.0;
        all_zero = all_zero && p == 0.0;
      }
      if (all_one)
        always_live.push_back(a);
      else if (!all_zero)
        uncertain.push_back(a);
    }
    if (uncertain.size() > max_uncertain_arcs)
      throw std::invalid_argument(
          "too many probabilistic arcs for exact enumeration: " +
          std::to_string(uncertain.size()) + " > " +
          std::to_string(max_uncertain_arcs));
  }

  std::size_t realization_count() const { return std::size_t{1} << uncertain.size(); }

  // anc[u] = bitmask of nodes that reach u through the realization's live
  // arcs (u itself included)
  void ancestors(std::uint64_t bits, std::vector<std::uint64_t>& anc) const {
    const std::size_t n = inst->graph.node_count;
    anc.assign(n, 0);
    for (std::size_t u = 0; u < n; ++u) anc[u] = std::uint64_t{1} << u;
    std::vector<Digraph::Arc> live;
    for (std::uint32_t a : always_live) live.push_back(inst->graph.arcs[a]);
    for (std::size_t j = 0; j < uncertain.size(); ++j)
      if (bits >> j & 1) live.push_back(inst->graph.arcs[uncertain[j]]);
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& arc : live) {
        std::uint64_t merged = anc[arc.head] | anc[arc.tail];
        if (merged != anc[arc.head]) {
          anc[arc.head] = merged;
          changed = true;
        }
      }
    }
  }

  // expected reachable-set size for one realization, seeding each node u
  // independently with probability pn[u]
  static double expected_reach(const std::vector<std::uint64_t>& anc,
                               const std::vector<double>& pn) {
    double total = 0.0;
    for (std::size_t u = 0; u < anc.size(); ++u) {
      double miss = 1.0;
      std::uint64_t mask = anc[u];
      while (mask != 0) {
        unsigned v = static_cast<unsigned>(std::countr_zero(mask));
        mask &= mask - 1;
        miss *= 1.0 - pn[v];
        if (miss == 0.0) break;
      }
      total += 1.0 - miss;
    }
    return total;
  }

  std::vector<double> node_probs(const LatticeVector& x) const {
    std::vector<double> pn(inst->graph.node_count);
    for (std::size_t u = 0; u < pn.size(); ++u)
      pn[u] = inst->node_prob[u][x[u]];
    return pn;
  }

  std::vector<double> arc_probs(const LatticeVector& x) const {
    std::vector<double> pa(uncertain.size());
    for (std::size_t j = 0; j < uncertain.size(); ++j) {
      const auto& arc = inst->graph.arcs[uncertain[j]];
      pa[j] = inst->arc_prob[uncertain[j]][x[arc.head]];
    }
    return pa;
  }

  double influence(const LatticeVector& x) const {
    require_in_box(*inst, x);
    std::vector<double> pn = node_probs(x);
    std::vector<double> pa = arc_probs(x);
    std::vector<std::uint64_t> anc;
    double total = 0.0;
    for (std::uint64_t bits = 0; bits < realization_count(); ++bits) {
      double prob = 1.0;
      for (std::size_t j = 0; j < uncertain.size(); ++j)
        prob *= (bits >> j & 1) ? pa[j] : 1.0 - pa[j];
      if (prob == 0.0) continue;
      ancestors(bits, anc);
      total += prob * expected_reach(anc, pn);
    }
    return total;
  }
};

}  // namespace

double exact_influence(const GimInstance& inst, const LatticeVector& x,
                       std::size_t max_uncertain_arcs) {
  return RealizationEnumerator(inst, max_uncertain_arcs).influence(x);
}

double exact_activation(const GimInstance& inst, const LatticeVector& x,
                        std::size_t max_uncertain_arcs) {
  RealizationEnumerator en(inst, max_uncertain_arcs);
  return en.influence(x) - en.influence(LatticeVector(inst.dim()));
}

double realization_probability_total(const GimInstance& inst,
                                     const LatticeVector& x,
                                     std::size_t max_exponent) {
  require_in_box(inst, x);
  const std::size_t v = inst.graph.node_count;
  const std::size_t e = inst.graph.arc_count();
  if (v + e > max_exponent)
    throw std::invalid_argument(
        "2^(|V|+|E|) realization sum infeasible: |V|+|E| = " +
        std::to_string(v + e));

  double total = 0.0;
  for (std::uint64_t h = 0; h < (std::uint64_t{1} << e); ++h) {
    double prob_h = 1.0;
    for (std::size_t a = 0; a < e; ++a) {
      double p = inst.arc_prob[a][x[inst.graph.arcs[a].head]];
      prob_h *= (h >> a & 1) ? p : 1.0 - p;
    }
    for (std::uint64_t t = 0; t < (std::uint64_t{1} << v); ++t) {
      double prob_t = 1.0;
      for (std::size_t u = 0; u < v; ++u) {
        double p = inst.node_prob[u][x[u]];
        prob_t *= (t >> u & 1) ? p : 1.0 - p;
      }
      total += prob_h * prob_t;
    }
  }
  return total;
}

double dr_lower_bound(const GimInstance& inst, long long k) {
  if (k < 0) throw std::invalid_argument("budget must be >= 0");
  double c_e = 1.0, c_n = 1.0;
  bool edge_defined = false, node_defined = false;
  for (const auto& table : inst.arc_prob)
    for (int i = 0; i < inst.levels; ++i)
      if (table[i] > 0.0) {
        c_e = std::max(c_e, table[i + 1] / table[i]);
        edge_defined = true;
      }
  for (const auto& table : inst.node_prob)
    for (int i = 0; i < inst.levels; ++i)
      if (table[i] > 0.0) {
        c_n = std::max(c_n, table[i + 1] / table[i]);
        node_defined = true;
      }
  if (!edge_defined && !node_defined)
    throw std::invalid_argument(
        "all level ratios undefined (all probabilities zero)");
  double exponent_e = -static_cast<double>(k) *
                      static_cast<double>(inst.graph.max_in_degree());
  return std::pow(c_e, exponent_e) * std::pow(c_n, -static_cast<double>(k));
}

GimSampleSet sample_thresholds(const GimInstance& inst, std::size_t n_samples,
                               std::uint64_t seed) {
  if (n_samples < 1)
    throw std::invalid_argument("need at least one sample");
  GimSampleSet set;
  set.sample_count = n_samples;
  set.nodes = inst.graph.node_count;
  set.arcs = inst.graph.arc_count();
  set.seed = seed;
  set.node_threshold.resize(n_samples * set.nodes);
  set.arc_threshold.resize(n_samples * set.arcs);
  for (std::size_t i = 0; i < n_samples; ++i) {
    Rng rng(derive_seed(seed, i));
    for (std::size_t u = 0; u < set.nodes; ++u)
      set.node_threshold[i * set.nodes + u] = rng.uniform01();
    for (std::size_t a = 0; a < set.arcs; ++a)
      set.arc_threshold[i * set.arcs + a] = rng.uniform01();
  }
  set.active.assign(n_samples * set.nodes, 0);
  set.active_count.assign(n_samples, 0);
  return set;
}

namespace {

// From-scratch closure for one sample under solution x; active/queue are
// caller scratch. Returns the active count.
std::uint32_t sample_closure(const GimInstance& inst,
                             const GimSampleSet& samples, std::size_t i,
                             const LatticeVector& x, std::uint8_t* active,
                             std::vector<std::uint32_t>& queue) {
  const std::size_t n = samples.nodes;
  std::fill(active, active + n, 0);
  queue.clear();
  std::uint32_t count = 0;
  for (std::size_t u = 0; u < n; ++u) {
    if (samples.node_thr(i, u) < inst.node_prob[u][x[u]]) {
      active[u] = 1;
      ++count;
      queue.push_back(static_cast<std::uint32_t>(u));
    }
  }
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    std::uint32_t t = queue[qi];
    for (std::uint32_t a : inst.graph.out_arcs[t]) {
      std::uint32_t h = inst.graph.arcs[a].head;
      if (active[h]) continue;
      if (samples.arc_thr(i, a) < inst.arc_prob[a][x[h]]) {
        active[h] = 1;
        ++count;
        queue.push_back(h);
      }
    }
  }
  return count;
}

}  // namespace

void recompute_active_sets(const GimInstance& inst, GimSampleSet& samples,
                           const LatticeVector& g) {
  require_in_box(inst, g);
  std::vector<std::uint32_t> queue;
  for (std::size_t i = 0; i < samples.sample_count; ++i)
    samples.active_count[i] = sample_closure(
        inst, samples, i, g, samples.active.data() + i * samples.nodes, queue);
}

double estimate_marginal_gain(const GimInstance& inst,
                              const GimSampleSet& samples,
                              const LatticeVector& g, std::size_t s,
                              long long l) {
  require_in_box(inst, g);
  if (l < 1) throw std::invalid_argument("multiplicity must be >= 1");
  if (g[s] + l > inst.levels)
    throw std::invalid_argument("box violation: level " +
                                std::to_string(g[s] + l) + " > L");
  const double p_self = inst.node_prob[s][g[s] + l];
  const std::size_t n = samples.nodes;

  std::vector<std::uint8_t> visited(n);
  std::vector<std::uint32_t> queue;
  double total = 0.0;
  for (std::size_t i = 0; i < samples.sample_count; ++i) {
    if (samples.is_active(i, s)) continue;  // already active: no change
    bool becomes_active = samples.node_thr(i, s) < p_self;
    if (!becomes_active) {
      for (std::uint32_t a : inst.graph.in_arcs[s]) {
        std::uint32_t tail = inst.graph.arcs[a].tail;
        if (samples.is_active(i, tail) &&
            samples.arc_thr(i, a) < inst.arc_prob[a][g[s] + l]) {
          becomes_active = true;
          break;
        }
      }
    }
    if (!becomes_active) continue;

    // newly activated set: closure from s through live arcs, stopping at
    // already-active nodes (their downstream is active already)
    std::fill(visited.begin(), visited.end(), 0);
    queue.clear();
    visited[s] = 1;
    queue.push_back(static_cast<std::uint32_t>(s));
    std::uint32_t newly = 0;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      std::uint32_t t = queue[qi];
      ++newly;
      for (std::uint32_t a : inst.graph.out_arcs[t]) {
        std::uint32_t h = inst.graph.arcs[a].head;
        if (visited[h] || samples.is_active(i, h)) continue;
        if (samples.arc_thr(i, a) < inst.arc_prob[a][g[h]]) {
          visited[h] = 1;
          queue.push_back(h);
        }
      }
    }
    total += static_cast<double>(newly);
  }
  return total / static_cast<double>(samples.sample_count);
}

ActivationEstimate estimate_activation(const GimInstance& inst,
                                       const GimSampleSet& samples,
                                       const LatticeVector& x) {
  require_in_box(inst, x);
  const LatticeVector zero(inst.dim());
  std::vector<std::uint8_t> scratch(samples.nodes);
  std::vector<std::uint32_t> queue;
  std::vector<double> diff(samples.sample_count);
  for (std::size_t i = 0; i < samples.sample_count; ++i) {
    double cx = sample_closure(inst, samples, i, x, scratch.data(), queue);
    double c0 = sample_closure(inst, samples, i, zero, scratch.data(), queue);
    diff[i] = cx - c0;
  }
  ActivationEstimate est;
  est.samples = samples.sample_count;
  double sum = 0.0;
  for (double d : diff) sum += d;
  est.mean = sum / static_cast<double>(diff.size());
  if (diff.size() > 1) {
    double ss = 0.0;
    for (double d : diff) ss += (d - est.mean) * (d - est.mean);
    double var_mean = ss / static_cast<double>(diff.size() - 1) /
                      static_cast<double>(diff.size());
    est.stderr_of_mean = std::sqrt(var_mean);
  }
  return est;
}

GimOracleAdapter::GimOracleAdapter(const GimInstance& inst,
                                   std::size_t n_samples,
                                   std::uint64_t master_seed)
    : inst_(&inst),
      n_samples_(n_samples),
      master_seed_(master_seed),
      committed_(inst.dim()) {
  samples_ = sample_thresholds(inst, n_samples, derive_seed(master_seed, 0));
  recompute_active_sets(*inst_, samples_, committed_);
}

double GimOracleAdapter::evaluate(const LatticeVector& x) const {
  require_in_box(*inst_, x);
  const LatticeVector zero(inst_->dim());
  std::vector<std::uint8_t> scratch(samples_.nodes);
  std::vector<std::uint32_t> queue;
  double total = 0.0;
  for (std::size_t i = 0; i < samples_.sample_count; ++i) {
    total += sample_closure(*inst_, samples_, i, x, scratch.data(), queue);
    total -= sample_closure(*inst_, samples_, i, zero, scratch.data(), queue);
  }
  return total / static_cast<double>(samples_.sample_count);
}

double GimOracleAdapter::marginal_gain(const LatticeVector& step,
                                       const LatticeVector& base) {
  base.require_same_dim(step);
  std::size_t element = 0;
  long long count = 0;
  for (std::size_t s = 0; s < step.dim(); ++s) {
    if (step[s] == 0) continue;
    if (count != 0)
      throw std::invalid_argument(
          "the sampling oracle accepts only steps of the form l * e_s");
    element = s;
    count = step[s];
  }
  count_query();
  if (count == 0) return 0.0;
  if (!(base == committed_))
    throw std::invalid_argument(
        "marginal gain must be requested against the committed solution " +
        committed_.to_string() + ", got " + base.to_string());
  double estimate =
      estimate_marginal_gain(*inst_, samples_, committed_, element, count);
  if (estimate < 0.0) {
    LATMAX_LOG_WARN("clamping negative sampled marginal gain %g to 0",
                    estimate);
    estimate = 0.0;
  }
  return estimate;
}

void GimOracleAdapter::commit(const LatticeVector& solution) {
  require_in_box(*inst_, solution);
  if (solution == committed_) return;
  committed_ = solution;
  ++commit_index_;
  samples_ = sample_thresholds(*inst_, n_samples_,
                               derive_seed(master_seed_, commit_index_));
  recompute_active_sets(*inst_, samples_, committed_);
}

ExactGimOracle::ExactGimOracle(const GimInstance& inst,
                               std::size_t max_uncertain_arcs)
    : inst_(&inst) {
  RealizationEnumerator en(inst, max_uncertain_arcs);
  uncertain_arcs_ = en.uncertain;
  const std::size_t n = inst.graph.node_count;
  const std::size_t realizations = en.realization_count();
  if (realizations > (std::size_t{1} << 24) / std::max<std::size_t>(n, 1))
    throw std::invalid_argument(
        "realization table too large; reduce the number of probabilistic arcs");
  ancestor_masks_.resize(realizations * n);
  std::vector<std::uint64_t> anc;
  for (std::size_t bits = 0; bits < realizations; ++bits) {
    en.ancestors(bits, anc);
    std::copy(anc.begin(), anc.end(), ancestor_masks_.begin() + bits * n);
  }
  influence_at_zero_ = influence(LatticeVector(n));
}

double ExactGimOracle::influence(const LatticeVector& x) const {
  require_in_box(*inst_, x);
  const std::size_t n = inst_->graph.node_count;
  std::vector<double> pn(n);
  for (std::size_t u = 0; u < n; ++u) pn[u] = inst_->node_prob[u][x[u]];
  std::vector<double> pa(uncertain_arcs_.size());
  for (std::size_t j = 0; j < uncertain_arcs_.size(); ++j) {
    const auto& arc = inst_->graph.arcs[uncertain_arcs_[j]];
    pa[j] = inst_->arc_prob[uncertain_arcs_[j]][x[arc.head]];
  }

  const std::size_t realizations = std::size_t{1} << uncertain_arcs_.size();
  double total = 0.0;
  for (std::size_t bits = 0; bits < realizations; ++bits) {
    double prob = 1.0;
    for (std::size_t j = 0; j < pa.size(); ++j)
      prob *= (bits >> j & 1) ? pa[j] : 1.0 - pa[j];
    if (prob == 0.0) continue;
    const std::uint64_t* anc = ancestor_masks_.data() + bits * n;
    double expected = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
      double miss = 1.0;
      std::uint64_t mask = anc[u];
      while (mask != 0) {
        unsigned v = static_cast<unsigned>(std::countr_zero(mask));
        mask &= mask - 1;
        miss *= 1.0 - pn[v];
        if (miss == 0.0) break;
      }
      expected += 1.0 - miss;
    }
    total += prob * expected;
  }
  return total;
}

double ExactGimOracle::evaluate(const LatticeVector& x) const {
  return influence(x) - influence_at_zero_;
}

double ExactGimOracle::marginal_gain(const LatticeVector& step,
                                     const LatticeVector& base) {
  base.require_same_dim(step);
  count_query();
  double gain = evaluate(base.plus(step)) - evaluate(base);
  if (gain < 0.0) {
    if (gain < -1e-9)
      throw OracleContractError(
          "exact activation oracle produced a non-noise negative gain: " +
          std::to_string(gain));
    gain = 0.0;
  }
  return gain;
}

}  // namespace latmax
