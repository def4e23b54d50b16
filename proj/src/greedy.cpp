#include "latmax/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace latmax {

namespace {

struct PivotOutcome {
  long long count = 0;
  double gain = 0.0;  // measured delta_{count * s}(g); 0 when count == 0
};

long long pivot_l_max(const LatticeVector& g, const BoxConstraint& box,
                      std::size_t s) {
  return std::min(box.bound(s) - g[s], box.budget() - g.l1_norm());
}

// BinarySearchPivot. Maintains l_lo satisfying the average-gain property and
// l_hi violating it; at termination l_lo is a pivot.
PivotOutcome find_pivot(ObjectiveOracle& f, const LatticeVector& g,
                        const BoxConstraint& box, std::size_t s, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("pivot threshold must be > 0");
  const long long l_max = pivot_l_max(g, box, s);
  if (l_max < 0)
    throw std::invalid_argument("pivot base violates the box or budget");
  if (l_max == 0) return {};  // no queries

  double top_gain = marginal_gain(f, g, s, l_max);
  if (top_gain >= static_cast<double>(l_max) * tau) return {l_max, top_gain};
  if (l_max == 1) return {};  // the same probe answered both checks
  double unit_gain = marginal_gain(f, g, s, 1);
  if (unit_gain < tau) return {};

  long long l_lo = 1, l_hi = l_max;
  double lo_gain = unit_gain;
  while (l_hi != l_lo + 1) {
    long long mid = (l_lo + l_hi) / 2;
    double mid_gain = marginal_gain(f, g, s, mid);
    if (mid_gain >= static_cast<double>(mid) * tau) {
      l_lo = mid;
      lo_gain = mid_gain;
    } else {
      l_hi = mid;
    }
  }
  return {l_lo, lo_gain};
}

void require_params(double kappa, double epsilon, bool allow_zero_eps) {
  if (!(kappa > 0.0 && kappa < 1.0))
    throw std::invalid_argument("kappa must lie in (0,1)");
  bool eps_ok = allow_zero_eps ? (epsilon >= 0.0 && epsilon < 1.0)
                               : (epsilon > 0.0 && epsilon < 1.0);
  if (!eps_ok)
    throw std::invalid_argument(allow_zero_eps ? "epsilon must lie in [0,1)"
                                               : "epsilon must lie in (0,1)");
}

void require_instance(const ObjectiveOracle& f, const BoxConstraint& box) {
  if (f.dimension() == 0) throw std::invalid_argument("empty ground set");
  if (f.dimension() != box.dim())
    throw std::invalid_argument("oracle/box dimension mismatch");
}

// max_s f(e_s) over elements with box slack; one query per eligible element.
double singleton_max(ObjectiveOracle& f, const BoxConstraint& box,
                     const LatticeVector& zero) {
  double best = 0.0;
  for (std::size_t s = 0; s < box.dim(); ++s) {
    if (box.bound(s) < 1) continue;
    best = std::max(best, marginal_gain(f, zero, s, 1));
  }
  return best;
}

GreedyResult finish(ObjectiveOracle& f, LatticeVector g, GreedyTrace trace,
                    std::uint64_t queries_before) {
  GreedyResult result;
  result.value = g.is_zero() ? 0.0 : f.evaluate(g);
  result.solution = std::move(g);
  result.queries = f.query_count() - queries_before;
  result.trace = std::move(trace);
  return result;
}

}  // namespace

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Standard:
      return "standard";
    case Algorithm::Threshold:
      return "threshold";
    case Algorithm::Fast:
      return "fast";
    case Algorithm::ThresholdParallel:
      return "threshold_parallel";
  }
  return "?";
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "standard") return Algorithm::Standard;
  if (name == "threshold") return Algorithm::Threshold;
  if (name == "fast") return Algorithm::Fast;
  if (name == "threshold_parallel") return Algorithm::ThresholdParallel;
  throw std::invalid_argument("unknown algorithm: " + name);
}

GreedyParams params_from_eta(double eta) {
  if (!(eta > 0.0 && eta < 2.0))
    throw std::invalid_argument("eta must lie in (0,2)");
  GreedyParams p;
  p.kappa = 1.0 - eta / 2.0;
  p.epsilon = eta / 2.0;
  return p;
}

LatticeVector GreedyTrace::vector_before_round(std::uint32_t round) const {
  LatticeVector g(dimension);
  for (const TraceStep& step : steps)
    if (step.round < round) g.add(step.element, step.count);
  return g;
}

LatticeVector GreedyTrace::vector_after_consideration(
    std::uint32_t round, std::uint32_t element) const {
  LatticeVector g(dimension);
  for (const TraceStep& step : steps)
    if (step.round < round || (step.round == round && step.element <= element))
      g.add(step.element, step.count);
  return g;
}

std::vector<LatticeVector> GreedyTrace::solution_sequence() const {
  std::vector<LatticeVector> seq;
  seq.reserve(steps.size() + 1);
  LatticeVector g(dimension);
  seq.push_back(g);
  for (const TraceStep& step : steps) {
    g.add(step.element, step.count);
    seq.push_back(g);
  }
  return seq;
}

GreedyResult standard_greedy(ObjectiveOracle& f, const BoxConstraint& box) {
  require_instance(f, box);
  const std::size_t n = box.dim();
  const long long k = box.budget();
  const std::uint64_t queries_before = f.query_count();

  GreedyTrace trace;
  trace.algorithm = Algorithm::Standard;
  trace.dimension = n;

  LatticeVector g(n);
  for (long long round = 0; round < k; ++round) {
    double best_gain = -1.0;
    std::size_t best_s = n;
    for (std::size_t s = 0; s < n; ++s) {
      if (g[s] >= box.bound(s)) continue;
      double gain = marginal_gain(f, g, s, 1);
      if (gain > best_gain) {  // strict: ties stay with the lowest id
        best_gain = gain;
        best_s = s;
      }
    }
    if (best_s == n) break;  // box exhausted
    ++trace.rounds_started;
    if (best_gain <= 0.0) {
      trace.stopped_on_zero_gain = true;
      break;
    }
    g.add(best_s, 1);
    f.commit(g);
    trace.round_thresholds.push_back(best_gain);
    trace.steps.push_back({static_cast<std::uint32_t>(round), best_gain,
                           static_cast<std::uint32_t>(best_s), 1, best_gain,
                           g.l1_norm()});
    ++trace.rounds_completed;
  }
  return finish(f, std::move(g), std::move(trace), queries_before);
}

long long binary_search_pivot(ObjectiveOracle& f, const LatticeVector& g,
                              const BoxConstraint& box, std::size_t s,
                              double tau) {
  return find_pivot(f, g, box, s, tau).count;
}

GreedyResult threshold_greedy(ObjectiveOracle& f, const BoxConstraint& box,
                              double kappa, double epsilon) {
  require_instance(f, box);
  require_params(kappa, epsilon, false);
  const long long k = box.budget();
  if (k < 1) throw std::invalid_argument("threshold_greedy needs k >= 1");
  const std::size_t n = box.dim();
  const std::uint64_t queries_before = f.query_count();

  GreedyTrace trace;
  trace.algorithm = Algorithm::Threshold;
  trace.dimension = n;

  LatticeVector g(n);
  const double big_m = singleton_max(f, box, g);
  if (big_m <= 0.0)
    return finish(f, std::move(g), std::move(trace), queries_before);

  const double floor = kappa * epsilon * epsilon * big_m / static_cast<double>(k);
  std::uint32_t round = 0;
  for (double tau = big_m; tau >= floor; tau *= kappa, ++round) {
    ++trace.rounds_started;
    trace.round_thresholds.push_back(tau);
    for (std::size_t s = 0; s < n; ++s) {
      PivotOutcome pivot = find_pivot(f, g, box, s, tau);
      if (pivot.count > 0) {
        g.add(s, pivot.count);
        f.commit(g);
        trace.steps.push_back({round, tau, static_cast<std::uint32_t>(s),
                               pivot.count, pivot.gain, g.l1_norm()});
      }
      if (g.l1_norm() == k)
        return finish(f, std::move(g), std::move(trace), queries_before);
    }
    ++trace.rounds_completed;
  }
  return finish(f, std::move(g), std::move(trace), queries_before);
}

GreedyResult fast_greedy(ObjectiveOracle& f, const BoxConstraint& box,
                         double kappa, double delta, double epsilon) {
  require_instance(f, box);
  require_params(kappa, epsilon, true);
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("delta must lie in (0,1)");
  const long long k = box.budget();
  if (k < 1) throw std::invalid_argument("fast_greedy needs k >= 1");
  const std::size_t n = box.dim();
  const std::uint64_t queries_before = f.query_count();

  GreedyTrace trace;
  trace.algorithm = Algorithm::Fast;
  trace.dimension = n;

  LatticeVector g(n);
  const double big_m = singleton_max(f, box, g);
  double beta = 1.0;
  auto fast_finish = [&](bool budget_filled) {
    GreedyResult result = finish(f, std::move(g), std::move(trace), queries_before);
    result.beta_star = beta;
    result.beta_star_exact = budget_filled;
    return result;
  };
  if (big_m <= 0.0) return fast_finish(false);

  const double floor =
      epsilon == 0.0 ? 0.0 : big_m * epsilon * epsilon / static_cast<double>(k);
  double m = big_m;
  double m_prev = big_m / kappa;
  bool first_iteration = true;
  std::uint32_t round = 0;

  while (epsilon == 0.0 ? m > 0.0 : m >= floor) {
    // At g = 0 the fresh maximum is M by definition; the singleton scan
    // already paid for it, so only later iterations re-query.
    if (!first_iteration) {
      m = 0.0;
      for (std::size_t s = 0; s < n; ++s) {
        if (g[s] >= box.bound(s)) continue;
        m = std::max(m, marginal_gain(f, g, s, 1));
      }
    }
    first_iteration = false;
    if (m <= 0.0) {
      trace.stopped_on_zero_gain = true;
      break;
    }
    bool uptick = m > kappa * m_prev;
    if (uptick) beta *= delta;
    double m_prev_old = m_prev;
    m_prev = m;
    double tau = beta * kappa * m;

    ++trace.rounds_started;
    trace.round_thresholds.push_back(tau);
    trace.fast_rounds.push_back({m, m_prev_old, beta, uptick});
    for (std::size_t s = 0; s < n; ++s) {
      PivotOutcome pivot = find_pivot(f, g, box, s, tau);
      if (pivot.count > 0) {
        g.add(s, pivot.count);
        f.commit(g);
        trace.steps.push_back({round, tau, static_cast<std::uint32_t>(s),
                               pivot.count, pivot.gain, g.l1_norm()});
      }
      if (g.l1_norm() == k) return fast_finish(true);
    }
    ++trace.rounds_completed;
    ++round;
  }
  return fast_finish(false);
}

GreedyResult threshold_greedy_parallel(ObjectiveOracle& f,
                                       const BoxConstraint& box, double kappa,
                                       double epsilon, unsigned workers) {
  require_instance(f, box);
  require_params(kappa, epsilon, false);
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  if (workers > 1 && !f.concurrent_queries_allowed())
    throw std::invalid_argument(
        "oracle does not allow concurrent queries; run with workers=1");
  const long long k = box.budget();
  if (k < 1) throw std::invalid_argument("threshold_greedy needs k >= 1");
  const std::size_t n = box.dim();
  const std::uint64_t queries_before = f.query_count();

  GreedyTrace trace;
  trace.algorithm = Algorithm::ThresholdParallel;
  trace.dimension = n;

  LatticeVector g(n);
  const double big_m = singleton_max(f, box, g);
  if (big_m <= 0.0)
    return finish(f, std::move(g), std::move(trace), queries_before);

  const double floor = kappa * epsilon * epsilon * big_m / static_cast<double>(k);
  std::uint32_t round = 0;
  std::vector<PivotOutcome> pivots(n);
  for (double tau = big_m; tau >= floor; tau *= kappa, ++round) {
    ++trace.rounds_started;
    trace.round_thresholds.push_back(tau);
    const LatticeVector snapshot = g;

    // Pivots for the whole round are searched against the snapshot; worker
    // count changes scheduling only, never a result.
    auto search_range = [&](std::size_t lo, std::size_t hi) {
      for (std::size_t s = lo; s < hi; ++s)
        pivots[s] = find_pivot(f, snapshot, box, s, tau);
    };
    if (workers == 1 || n <= 1) {
      search_range(0, n);
    } else {
      std::size_t used = std::min<std::size_t>(workers, n);
      std::vector<std::thread> pool;
      pool.reserve(used);
      std::size_t chunk = (n + used - 1) / used;
      for (std::size_t w = 0; w < used; ++w) {
        std::size_t lo = w * chunk;
        std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(search_range, lo, hi);
      }
      for (std::thread& t : pool) t.join();
    }

    // Commit in ascending element order, truncating at the budget.
    for (std::size_t s = 0; s < n && g.l1_norm() < k; ++s) {
      long long l = std::min(pivots[s].count, k - g.l1_norm());
      if (l <= 0) continue;
      g.add(s, l);
      f.commit(g);
      double gain = l == pivots[s].count
                        ? pivots[s].gain
                        : std::numeric_limits<double>::quiet_NaN();
      trace.steps.push_back({round, tau, static_cast<std::uint32_t>(s), l,
                             gain, g.l1_norm()});
    }
    if (g.l1_norm() == k) break;
    ++trace.rounds_completed;
  }
  return finish(f, std::move(g), std::move(trace), queries_before);
}

}  // namespace latmax
