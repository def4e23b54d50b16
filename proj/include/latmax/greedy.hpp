#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "latmax/lattice.hpp"
#include "latmax/oracle.hpp"

namespace latmax {

enum class Algorithm { Standard, Threshold, Fast, ThresholdParallel };

std::string to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& name);

/// One accepted addition: `count` copies of `element` at threshold
/// `threshold` during round `round` (StandardGreedy stores the selected gain
/// in both fields). `gain` is the measured marginal value of the addition;
/// for parallel rounds it is measured against the round snapshot, and is NaN
/// when a pivot was truncated by the budget at commit time.
struct TraceStep {
  std::uint32_t round = 0;
  double threshold = 0.0;
  std::uint32_t element = 0;
  long long count = 0;
  double gain = 0.0;
  long long l1_after = 0;
};

/// FastGreedy bookkeeping for one while-iteration: the fresh maximum gain m,
/// the previous iteration's m', and beta after any uptick was applied.
struct FastGreedyRound {
  double max_gain = 0.0;
  double prev_max_gain = 0.0;
  double beta = 1.0;
  bool uptick = false;
};

/// Replayable execution record. Rounds are outer iterations (thresholds for
/// Threshold/ThresholdParallel, while-iterations for Fast, unit additions
/// for Standard); every greedy vector the run passed through can be
/// reconstructed from the steps because elements are always considered in
/// ascending id order within a round.
struct GreedyTrace {
  Algorithm algorithm = Algorithm::Standard;
  std::size_t dimension = 0;
  std::uint32_t rounds_started = 0;
  std::uint32_t rounds_completed = 0;
  bool stopped_on_zero_gain = false;
  std::vector<double> round_thresholds;      // tau per started round
  std::vector<TraceStep> steps;              // additions with count > 0
  std::vector<FastGreedyRound> fast_rounds;  // FastGreedy only

  /// Solution vector immediately before the given round started.
  LatticeVector vector_before_round(std::uint32_t round) const;
  /// Solution vector immediately after the round's inner loop considered
  /// element s (additions for elements <= s applied).
  LatticeVector vector_after_consideration(std::uint32_t round,
                                           std::uint32_t element) const;
  /// Successive values the solution vector took, starting from zero.
  std::vector<LatticeVector> solution_sequence() const;
};

struct GreedyResult {
  LatticeVector solution;
  double value = 0.0;
  std::uint64_t queries = 0;
  std::optional<double> beta_star;  // FastGreedy only
  bool beta_star_exact = false;     // true iff the budget was filled
  GreedyTrace trace;
};

/// Maps the single accuracy parameter eta > 0 onto (kappa, epsilon) =
/// (1 - eta/2, eta/2).
struct GreedyParams {
  double kappa = 0.95;
  double delta = 0.9;
  double epsilon = 0.05;
};
GreedyParams params_from_eta(double eta);

/// Lattice standard greedy: k rounds, each adding one copy of the element
/// with the largest marginal gain (ties to the lowest id). Stops early when
/// no element has box slack or the best gain is zero (flagged in the trace).
GreedyResult standard_greedy(ObjectiveOracle& f, const BoxConstraint& box);

/// Finds a pivot for (g, s, tau): some l with delta_{l s}(g) >= l*tau whose
/// single-copy follow-up gain falls below tau (or l = l_max on average gain
/// alone). Uses at most 2 + ceil(log2 l_max) queries; l_max = 0 costs none.
long long binary_search_pivot(ObjectiveOracle& f, const LatticeVector& g,
                              const BoxConstraint& box, std::size_t s,
                              double tau);

/// Descending-threshold greedy: tau sweeps M, kappa*M, ... down to
/// kappa*eps^2*M/k, adding a pivot per element per threshold.
GreedyResult threshold_greedy(ObjectiveOracle& f, const BoxConstraint& box,
                              double kappa, double epsilon);

/// Threshold greedy whose threshold tracks the current maximum marginal gain
/// m as tau = beta*kappa*m, discounting beta by delta whenever m fails to
/// decay (an uptick). The final beta is returned as beta_star: the exact
/// FastGreedy DR ratio when the budget was filled, an upper bound otherwise.
/// epsilon = 0 is permitted and means "run until the budget is exhausted or
/// the maximum gain hits zero".
GreedyResult fast_greedy(ObjectiveOracle& f, const BoxConstraint& box,
                         double kappa, double delta, double epsilon);

/// threshold_greedy with the per-element pivot searches of each threshold
/// distributed over `workers` threads. All pivots in a round are computed
/// against the round-start snapshot; accepted pivots commit in ascending
/// element order, truncated at the budget. The result is identical for every
/// worker count; workers > 1 requires a concurrency-safe oracle.
GreedyResult threshold_greedy_parallel(ObjectiveOracle& f,
                                       const BoxConstraint& box, double kappa,
                                       double epsilon, unsigned workers);

}  // namespace latmax
