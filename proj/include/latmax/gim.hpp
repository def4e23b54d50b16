#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "latmax/lattice.hpp"
#include "latmax/oracle.hpp"

namespace latmax {

/// Directed graph with compacted node ids. Arc ids index `arcs`; per-node
/// in/out adjacency lists hold arc ids.
struct Digraph {
  struct Arc {
    std::uint32_t tail = 0;
    std::uint32_t head = 0;
  };

  std::size_t node_count = 0;
  std::vector<Arc> arcs;
  std::vector<std::vector<std::uint32_t>> in_arcs;
  std::vector<std::vector<std::uint32_t>> out_arcs;
  std::vector<long long> original_ids;  // compact id -> id in the input file

  std::size_t arc_count() const { return arcs.size(); }
  std::uint32_t in_degree(std::uint32_t v) const {
    return static_cast<std::uint32_t>(in_arcs[v].size());
  }
  std::uint32_t max_in_degree() const;
};

Digraph make_digraph(std::size_t node_count,
                     const std::vector<std::pair<long long, long long>>& edges);

enum class EdgeDirection { Directed, Undirected };

/// Parses a whitespace-separated edge list ("u v" per line, '#' comments).
/// Undirected input turns each edge into both arcs. Node ids are compacted
/// to 0..n-1 (original ids kept); duplicate arcs and self-loops are dropped.
Digraph load_edge_list(const std::string& path, EdgeDirection direction);

/// Seeded Barabasi-Albert preferential attachment; each new node attaches m
/// out-arcs toward earlier nodes (arcs point old <- new as "influences").
Digraph barabasi_albert(std::size_t n, std::size_t m, std::uint64_t seed);

/// Generalized influence maximization instance: per-node seed-probability
/// levels p(u, i) and per-arc transmission levels p(u, v, i) where i is the
/// incentive level of the HEAD node v (incentives raise a node's own seeding
/// chance and the susceptibility of its incoming arcs). Probabilities are
/// stored as explicit (L+1)-entry tables, monotone non-decreasing in i.
struct GimInstance {
  Digraph graph;
  int levels = 1;                                // L
  std::vector<std::vector<double>> node_prob;    // [node][0..L]
  std::vector<std::vector<double>> arc_prob;     // [arc][0..L]
  long long budget_k = 0;

  std::size_t dim() const { return graph.node_count; }
  std::uint32_t max_in_degree() const { return graph.max_in_degree(); }
  BoxConstraint box() const {
    return BoxConstraint::uniform(graph.node_count, levels, budget_k);
  }
  void validate() const;
};

using NodeModelFn = std::function<double(std::uint32_t node, int level)>;
using EdgeModelFn = std::function<double(std::uint32_t arc, int level)>;

/// Default mappings: p(u, i) = i/L (level L seeds deterministically) and
/// p(u, v, i) = min(1, w_base * (1 + i/L)) with weighted-cascade base weight
/// w_base = 1 / in_degree(v). Both are monotone and concave in i.
NodeModelFn linear_node_model(int levels);
EdgeModelFn weighted_cascade_edge_model(const Digraph& graph, int levels);

/// Builds the probability tables from the given mappings (defaults above
/// when a mapping is empty) and validates them.
GimInstance build_gim(Digraph graph, int levels, long long budget_k,
                      NodeModelFn node_model = {}, EdgeModelFn edge_model = {});

/// Classical IC influence maximization as a two-level instance: p(u,0) = 0,
/// p(u,1) = 1, arc probabilities constant across levels.
GimInstance reduce_from_ic_im(Digraph graph,
                              const std::vector<double>& arc_weight,
                              long long budget_k);

/// Boosting as a two-level instance: seeds deterministically seeded at both
/// levels, non-seeds never; arc level 0 carries the base weighting and level
/// 1 the boosted one.
GimInstance reduce_from_boosting(Digraph graph,
                                 const std::vector<double>& base_weight,
                                 const std::vector<double>& boosted_weight,
                                 const std::vector<std::uint32_t>& seed_set,
                                 long long budget_k);

/// Expected activation I(x): sum over arc realizations of the realization
/// probability times the expected reachable-set size over random seed sets
/// (the seed-set sum collapses to per-node ancestor products). Arcs and
/// nodes whose probability is exactly 0 or 1 under x are folded out; the
/// guard applies to the remaining uncertain arcs.
double exact_influence(const GimInstance& inst, const LatticeVector& x,
                       std::size_t max_uncertain_arcs = 25);

/// A(x) = I(x) - I(0).
double exact_activation(const GimInstance& inst, const LatticeVector& x,
                        std::size_t max_uncertain_arcs = 25);

/// Literal sum of p^x(H, T) over every arc realization H and seed set T via
/// the product formulas; must be 1. Guard: 2^(|V| + |E|) terms.
double realization_probability_total(const GimInstance& inst,
                                     const LatticeVector& x,
                                     std::size_t max_exponent = 22);

/// Analytical lower bound c_e^{-k*Delta} * c_n^{-k} on the greedy ratios and
/// the tracked DR factor, where c_e / c_n are the largest consecutive-level
/// probability ratios over arcs and nodes (zero denominators excluded).
double dr_lower_bound(const GimInstance& inst, long long k);

/// Per-sample node and arc thresholds plus the active closure under the
/// committed solution. Thresholds are deterministic per (seed, sample index):
/// sample i draws node thresholds in node order then arc thresholds in arc
/// order from Rng(derive_seed(seed, i)). A threshold t activates when
/// t < p, so p = 1 is deterministic and p = 0 impossible.
struct GimSampleSet {
  std::size_t sample_count = 0;
  std::size_t nodes = 0;
  std::size_t arcs = 0;
  std::uint64_t seed = 0;
  std::vector<double> node_threshold;    // [sample * nodes + u]
  std::vector<double> arc_threshold;     // [sample * arcs + a]
  std::vector<std::uint8_t> active;      // [sample * nodes + u]
  std::vector<std::uint32_t> active_count;  // per sample

  double node_thr(std::size_t sample, std::size_t u) const {
    return node_threshold[sample * nodes + u];
  }
  double arc_thr(std::size_t sample, std::size_t a) const {
    return arc_threshold[sample * arcs + a];
  }
  bool is_active(std::size_t sample, std::size_t u) const {
    return active[sample * nodes + u] != 0;
  }
};

GimSampleSet sample_thresholds(const GimInstance& inst, std::size_t n_samples,
                               std::uint64_t seed);

/// Recomputes every sample's active set from scratch under solution g:
/// externally activated nodes (node threshold < p(u, g_u)) closed under live
/// arcs (arc threshold < p(u, v, g_v)).
void recompute_active_sets(const GimInstance& inst, GimSampleSet& samples,
                           const LatticeVector& g);

/// Average over samples of the number of newly activated nodes were g_s
/// raised by l: 0 if s is already active; else 0 unless the raised node
/// threshold or a live incoming arc from an active node activates s; else
/// the BFS count of newly reached nodes (including s). Read-only.
double estimate_marginal_gain(const GimInstance& inst,
                              const GimSampleSet& samples,
                              const LatticeVector& g, std::size_t s,
                              long long l);

struct ActivationEstimate {
  double mean = 0.0;
  double stderr_of_mean = 0.0;
  std::size_t samples = 0;
};

/// Monte-Carlo estimate of A(x) as the per-sample paired difference between
/// the active count under x and under 0, with its standard error.
ActivationEstimate estimate_activation(const GimInstance& inst,
                                       const GimSampleSet& samples,
                                       const LatticeVector& x);

/// ObjectiveOracle over the Monte-Carlo estimate of A(x). Marginal gains are
/// restricted to steps l*e_s against the committed solution and never touch
/// sample state; an explicit commit discards and regenerates all samples
/// with a seed derived from (master_seed, commit index) and recomputes the
/// closures. Estimation is read-only, so concurrent queries are allowed.
class GimOracleAdapter final : public ObjectiveOracle {
 public:
  GimOracleAdapter(const GimInstance& inst, std::size_t n_samples,
                   std::uint64_t master_seed);

  std::size_t dimension() const override { return inst_->dim(); }
  double evaluate(const LatticeVector& x) const override;
  double marginal_gain(const LatticeVector& step,
                       const LatticeVector& base) override;
  void commit(const LatticeVector& solution) override;
  bool concurrent_queries_allowed() const override { return true; }

  const GimSampleSet& samples() const { return samples_; }
  const LatticeVector& committed() const { return committed_; }
  std::uint64_t commit_count() const { return commit_index_; }

 private:
  const GimInstance* inst_;
  std::size_t n_samples_;
  std::uint64_t master_seed_;
  std::uint64_t commit_index_ = 0;
  LatticeVector committed_;
  GimSampleSet samples_;
};

/// ObjectiveOracle over the exact A(x); precomputes every arc realization's
/// per-node ancestor masks once (instances must have <= 64 nodes and few
/// uncertain arcs), making repeated evaluations cheap. Used for
/// tiny-instance diagnostics and enumeration.
class ExactGimOracle final : public ObjectiveOracle {
 public:
  explicit ExactGimOracle(const GimInstance& inst,
                          std::size_t max_uncertain_arcs = 22);

  std::size_t dimension() const override { return inst_->dim(); }
  double evaluate(const LatticeVector& x) const override;
  /// Exact in real arithmetic, but the realization sums round; negative
  /// gains within 1e-9 are floating-point noise and clamp to 0.
  double marginal_gain(const LatticeVector& step,
                       const LatticeVector& base) override;
  bool concurrent_queries_allowed() const override { return true; }

 private:
  double influence(const LatticeVector& x) const;

  const GimInstance* inst_;
  double influence_at_zero_ = 0.0;
  std::vector<std::uint32_t> uncertain_arcs_;  // p strictly inside (0,1) somewhere
  // [realization * node_count + u]: bitmask of u's ancestors (u included)
  std::vector<std::uint64_t> ancestor_masks_;
};

}  // namespace latmax
