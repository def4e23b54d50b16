#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "latmax/greedy.hpp"
#include "latmax/lattice.hpp"
#include "latmax/oracle.hpp"

namespace latmax {

/// An enumeration was asked to scan more lattice points / pairs than its
/// configured cap. These enumerators are correctness oracles: they hard-error
/// rather than silently sample.
struct EnumerationCapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EnumerationLimits {
  std::uint64_t max_points = 200000;        // full-lattice scans
  std::uint64_t max_pairs = 100000000;      // ordered-pair scans
};

/// Witness pair (v, w) — plus the element for the per-element ratios —
/// achieving the reported extremum. Vacuous results carry no certificate.
struct RatioCertificate {
  LatticeVector v;
  LatticeVector w;
  std::optional<std::size_t> element;
  double ratio = 1.0;
};

struct RatioResult {
  double value = 1.0;
  std::optional<RatioCertificate> certificate;  // absent iff vacuous
};

/// Exact diminishing-return ratio: min over elements s and pairs v <= w with
/// w + e_s <= b of delta_s(v) / delta_s(w); pairs with delta_s(w) = 0 are
/// non-binding. 1 when no pair binds.
RatioResult exact_dr_ratio(const ObjectiveOracle& f, const BoxConstraint& box,
                           const EnumerationLimits& limits = {});

/// Exact generalized curvature: 1 - min over the same pair set (with
/// delta_s(v) > 0) of delta_s(w) / delta_s(v), clamped to [0, 1]. 0 when no
/// pair binds.
RatioResult exact_curvature(const ObjectiveOracle& f, const BoxConstraint& box,
                            const EnumerationLimits& limits = {});

/// Exact submodularity ratio: min over v <= w with f(w) > f(v) of
/// sum_{s in {w-v}} delta_s(v) / (f(w) - f(v)), clamped to <= 1. Unlike the
/// greedy variants, no budget cap is imposed on ||w - v||_1.
RatioResult exact_submodularity_ratio(const ObjectiveOracle& f,
                                      const BoxConstraint& box,
                                      const EnumerationLimits& limits = {});

struct NonSubmodReport {
  double gamma_d = 1.0;
  double gamma_s = 1.0;
  double alpha = 0.0;
  std::optional<RatioCertificate> gamma_d_certificate;
  std::optional<RatioCertificate> gamma_s_certificate;
  std::optional<RatioCertificate> alpha_certificate;
  // search bounds used
  std::size_t n = 0;
  std::vector<long long> box_bounds;
  long long budget_k = 0;
  EnumerationLimits limits;
};

NonSubmodReport exact_report(const ObjectiveOracle& f,
                             const BoxConstraint& box,
                             const EnumerationLimits& limits = {});

/// Flat key=value rendering consumed by the CLI.
std::string serialize_report(const NonSubmodReport& report);

struct GreedyRatioReport {
  Algorithm variant = Algorithm::Standard;
  double gamma_s_greedy = 1.0;
  std::optional<double> gamma_d_tg;  // present iff variant == Threshold
  bool includes_final_partial_iteration = true;  // FastGreedy sequence choice
  std::size_t vectors_considered = 0;
};

/// Trace-restricted submodularity ratio: the Def.-3 quotient minimized only
/// over the run's greedy vectors g^i (for FastGreedy, the solution at the
/// start of each while-iteration, including the final partial one) against
/// all w with g^i <= w <= b and ||w - g^i||_1 <= k. Requires a trace from the
/// matching algorithm.
GreedyRatioReport greedy_submodularity_ratio(
    const ObjectiveOracle& f, const GreedyTrace& trace,
    const BoxConstraint& box, Algorithm variant,
    const EnumerationLimits& limits = {});

/// Trace-restricted DR ratio for ThresholdGreedy: max gamma with
/// gamma * delta_s(g^i) <= delta_s(g^{i,s}), where g^{i,s} is the vector
/// right after s was considered in the threshold preceding g^i's (the zero
/// vector for first-threshold additions).
double threshold_greedy_dr_ratio(const ObjectiveOracle& f,
                                 const GreedyTrace& trace,
                                 const BoxConstraint& box);

/// 1 - exp(-kappa * beta_or_gamma_d * gamma_s) - eps.
double performance_bound(double kappa, double beta_or_gamma_d, double gamma_s,
                         double eps);

}  // namespace latmax
