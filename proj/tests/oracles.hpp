// Test-only oracles, kept deliberately independent of the library's
// implementation paths: plain recursion where the library uses mixed-radix
// indexing or DP, direct definition scans where the library optimizes.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <vector>

#include "latmax/gim.hpp"
#include "latmax/greedy.hpp"
#include "latmax/lattice.hpp"
#include "latmax/oracle.hpp"

namespace testsupport {

using latmax::BoxConstraint;
using latmax::LatticeVector;
using latmax::ObjectiveOracle;

// Every point of {v : v <= bounds} by coordinate recursion.
inline std::vector<LatticeVector> enumerate_box(
    const std::vector<long long>& bounds) {
  std::vector<LatticeVector> out;
  LatticeVector current(bounds.size());
  std::function<void(std::size_t)> rec = [&](std::size_t s) {
    if (s == bounds.size()) {
      out.push_back(current);
      return;
    }
    for (long long c = 0; c <= bounds[s]; ++c) {
      current.set(s, c);
      rec(s + 1);
    }
    current.set(s, 0);
  };
  rec(0);
  return out;
}

// Max of f over feasible vectors (v <= b, |v| <= k) by full enumeration.
inline double brute_force_opt(const ObjectiveOracle& f,
                              const BoxConstraint& box,
                              LatticeVector* arg = nullptr) {
  double best = 0.0;
  std::vector<long long> bounds(box.bounds().begin(), box.bounds().end());
  for (const LatticeVector& v : enumerate_box(bounds)) {
    if (v.l1_norm() > box.budget()) continue;
    double value = f.evaluate(v);
    if (value > best) {
      best = value;
      if (arg != nullptr) *arg = v;
    }
  }
  return best;
}

inline double unit_gain(const ObjectiveOracle& f, const LatticeVector& v,
                        std::size_t s) {
  return f.evaluate(v.plus_unit(s, 1)) - f.evaluate(v);
}

// Direct definition scans over all (v, w, s) triples.
inline double naive_dr_ratio(const ObjectiveOracle& f,
                             const BoxConstraint& box) {
  std::vector<long long> bounds(box.bounds().begin(), box.bounds().end());
  std::vector<LatticeVector> points = enumerate_box(bounds);
  double gamma = 1.0;
  bool any = false;
  for (const LatticeVector& w : points)
    for (const LatticeVector& v : points) {
      if (!v.leq(w)) continue;
      for (std::size_t s = 0; s < box.dim(); ++s) {
        if (w[s] + 1 > box.bound(s)) continue;
        double dw = unit_gain(f, w, s);
        if (!(dw > 0.0)) continue;
        double dv = unit_gain(f, v, s);
        any = true;
        gamma = std::min(gamma, dv / dw);
      }
    }
  return any ? std::max(gamma, 0.0) : 1.0;
}

inline double naive_curvature(const ObjectiveOracle& f,
                              const BoxConstraint& box) {
  std::vector<long long> bounds(box.bounds().begin(), box.bounds().end());
  std::vector<LatticeVector> points = enumerate_box(bounds);
  double min_ratio = 1.0;
  bool any = false;
  for (const LatticeVector& w : points)
    for (const LatticeVector& v : points) {
      if (!v.leq(w)) continue;
      for (std::size_t s = 0; s < box.dim(); ++s) {
        if (w[s] + 1 > box.bound(s)) continue;
        double dv = unit_gain(f, v, s);
        if (!(dv > 0.0)) continue;
        double dw = unit_gain(f, w, s);
        if (!any) {
          min_ratio = dw / dv;
          any = true;
        } else {
          min_ratio = std::min(min_ratio, dw / dv);
        }
      }
    }
  if (!any) return 0.0;
  return std::clamp(1.0 - min_ratio, 0.0, 1.0);
}

inline double naive_submodularity_ratio(const ObjectiveOracle& f,
                                        const BoxConstraint& box) {
  std::vector<long long> bounds(box.bounds().begin(), box.bounds().end());
  std::vector<LatticeVector> points = enumerate_box(bounds);
  double gamma = 1.0;
  bool any = false;
  for (const LatticeVector& w : points)
    for (const LatticeVector& v : points) {
      if (!v.leq(w) || v == w) continue;
      double den = f.evaluate(w) - f.evaluate(v);
      if (!(den > 0.0)) continue;
      double num = 0.0;
      for (std::size_t s = 0; s < box.dim(); ++s)
        if (w[s] > v[s])
          num += static_cast<double>(w[s] - v[s]) * unit_gain(f, v, s);
      any = true;
      gamma = std::min(gamma, num / den);
    }
  return any ? std::clamp(gamma, 0.0, 1.0) : 1.0;
}

// All valid pivots for (g, s, tau) by scanning every l in {0..l_max}:
// average gain >= l*tau and (follow-up unit gain < tau or l == l_max).
inline std::vector<long long> exhaustive_pivot_set(const ObjectiveOracle& f,
                                                   const LatticeVector& g,
                                                   const BoxConstraint& box,
                                                   std::size_t s, double tau) {
  long long l_max = std::min(box.bound(s) - g[s], box.budget() - g.l1_norm());
  std::vector<long long> pivots;
  double fg = f.evaluate(g);
  for (long long l = 0; l <= l_max; ++l) {
    double avg_ok =
        f.evaluate(g.plus_unit(s, l)) - fg >= static_cast<double>(l) * tau;
    if (!avg_ok) continue;
    if (l == l_max) {
      pivots.push_back(l);
      continue;
    }
    double next = unit_gain(f, g.plus_unit(s, l), s);
    if (next < tau) pivots.push_back(l);
  }
  return pivots;
}

// Forwarding wrapper that tallies marginal-gain requests on its own.
class CountingOracle final : public ObjectiveOracle {
 public:
  explicit CountingOracle(ObjectiveOracle& inner) : inner_(&inner) {}

  std::size_t dimension() const override { return inner_->dimension(); }
  double evaluate(const LatticeVector& x) const override {
    return inner_->evaluate(x);
  }
  double marginal_gain(const LatticeVector& step,
                       const LatticeVector& base) override {
    count_query();
    ++tally_;
    return inner_->marginal_gain(step, base);
  }
  void commit(const LatticeVector& g) override { inner_->commit(g); }
  bool concurrent_queries_allowed() const override {
    return inner_->concurrent_queries_allowed();
  }

  std::uint64_t tally() const { return tally_; }

 private:
  ObjectiveOracle* inner_;
  std::atomic<std::uint64_t> tally_{0};
};

// Kolmogorov-Smirnov statistic against U[0,1).
inline double ks_statistic(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double x = samples[i];
    d = std::max(d, std::abs((static_cast<double>(i) + 1.0) / n - x));
    d = std::max(d, std::abs(x - static_cast<double>(i) / n));
  }
  return d;
}

// R^2 of the least-squares line through (x, y).
inline double linear_fit_r2(const std::vector<double>& x,
                            const std::vector<double>& y) {
  double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  double intercept = (sy - slope * sx) / n;
  double ss_res = 0, ss_tot = 0, mean_y = sy / n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double fit = slope * x[i] + intercept;
    ss_res += (y[i] - fit) * (y[i] - fit);
    ss_tot += (y[i] - mean_y) * (y[i] - mean_y);
  }
  return ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
}

// Independent IC expectation: enumerate every arc subset, weight by its
// probability, count reachability from the fixed seed set.
inline double ic_spread_enumeration(const latmax::Digraph& graph,
                                    const std::vector<double>& arc_prob,
                                    const std::vector<std::uint32_t>& seeds) {
  const std::size_t e = graph.arc_count();
  const std::size_t n = graph.node_count;
  double total = 0.0;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << e); ++bits) {
    double prob = 1.0;
    for (std::size_t a = 0; a < e; ++a)
      prob *= (bits >> a & 1) ? arc_prob[a] : 1.0 - arc_prob[a];
    if (prob == 0.0) continue;
    std::vector<std::uint8_t> reached(n, 0);
    std::vector<std::uint32_t> queue;
    for (std::uint32_t s : seeds)
      if (!reached[s]) {
        reached[s] = 1;
        queue.push_back(s);
      }
    for (std::size_t qi = 0; qi < queue.size(); ++qi)
      for (std::uint32_t a : graph.out_arcs[queue[qi]]) {
        if (!(bits >> a & 1)) continue;
        std::uint32_t h = graph.arcs[a].head;
        if (!reached[h]) {
          reached[h] = 1;
          queue.push_back(h);
        }
      }
    double count = 0;
    for (std::uint8_t r : reached) count += r;
    total += prob * count;
  }
  return total;
}

// Trace-restricted submodularity ratio straight from the definition: for
// each greedy vector g, scan every box point w with w >= g and
// ||w - g||_1 <= k.
inline double naive_greedy_submod_ratio(
    const ObjectiveOracle& f, const std::vector<LatticeVector>& sequence,
    const BoxConstraint& box) {
  std::vector<long long> bounds(box.bounds().begin(), box.bounds().end());
  std::vector<LatticeVector> points = enumerate_box(bounds);
  double gamma = 1.0;
  bool any = false;
  for (const LatticeVector& g : sequence)
    for (const LatticeVector& w : points) {
      if (!g.leq(w) || w == g) continue;
      if (w.minus(g).l1_norm() > box.budget()) continue;
      double den = f.evaluate(w) - f.evaluate(g);
      if (!(den > 0.0)) continue;
      double num = 0.0;
      for (std::size_t s = 0; s < box.dim(); ++s)
        if (w[s] > g[s])
          num += static_cast<double>(w[s] - g[s]) * unit_gain(f, g, s);
      any = true;
      gamma = std::min(gamma, num / den);
    }
  return any ? std::clamp(gamma, 0.0, 1.0) : 1.0;
}

// Trace-restricted DR ratio for threshold greedy, replaying the trace
// independently: prefixes are rebuilt per (round, element) by walking steps.
inline double naive_threshold_dr_ratio(const ObjectiveOracle& f,
                                       const latmax::GreedyTrace& trace,
                                       const BoxConstraint& box) {
  auto prefix_after = [&](std::uint32_t round, std::uint32_t element) {
    LatticeVector g(trace.dimension);
    for (const latmax::TraceStep& step : trace.steps) {
      bool before = step.round < round ||
                    (step.round == round && step.element <= element);
      if (before) g.add(step.element, step.count);
    }
    return g;
  };
  double gamma = 1.0;
  bool any = false;
  LatticeVector g(trace.dimension);
  for (const latmax::TraceStep& step : trace.steps) {
    g.add(step.element, step.count);
    for (std::uint32_t s = 0; s < box.dim(); ++s) {
      if (g[s] >= box.bound(s)) continue;
      double den = unit_gain(f, g, s);
      if (!(den > 0.0)) continue;
      LatticeVector prev = step.round == 0
                               ? LatticeVector(trace.dimension)
                               : prefix_after(step.round - 1, s);
      any = true;
      gamma = std::min(gamma, unit_gain(f, prev, s) / den);
    }
  }
  return any ? std::clamp(gamma, 0.0, 1.0) : 1.0;
}

// From-scratch closure for one sample of a sample set, written straight from
// the activation rule (threshold < probability).
inline std::vector<std::uint8_t> naive_sample_closure(
    const latmax::GimInstance& inst, const latmax::GimSampleSet& samples,
    std::size_t sample, const LatticeVector& g) {
  const std::size_t n = inst.graph.node_count;
  std::vector<std::uint8_t> active(n, 0);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t u = 0; u < n; ++u) {
      if (active[u]) continue;
      bool on = samples.node_thr(sample, u) < inst.node_prob[u][g[u]];
      if (!on)
        for (std::uint32_t a : inst.graph.in_arcs[u]) {
          std::uint32_t tail = inst.graph.arcs[a].tail;
          if (active[tail] &&
              samples.arc_thr(sample, a) < inst.arc_prob[a][g[u]]) {
            on = true;
            break;
          }
        }
      if (on) {
        active[u] = 1;
        changed = true;
      }
    }
  }
  return active;
}

}  // namespace testsupport
