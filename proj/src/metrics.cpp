#include "latmax/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>

namespace latmax {

namespace {

// Mixed-radix indexing of {v : v <= bounds}; coordinate 0 is the most
// significant digit, so index order is a linear extension of <= (every
// predecessor of a point has a smaller index).
class LatticeIndexer {
 public:
  LatticeIndexer(std::span<const long long> bounds, std::uint64_t max_points) {
    bounds_.assign(bounds.begin(), bounds.end());
    stride_.resize(bounds_.size());
    std::uint64_t size = 1;
    for (std::size_t s = bounds_.size(); s-- > 0;) {
      stride_[s] = size;
      std::uint64_t radix = static_cast<std::uint64_t>(bounds_[s]) + 1;
      if (size > max_points / radix)
        throw EnumerationCapError("lattice has more than " +
                                  std::to_string(max_points) + " points");
      size *= radix;
    }
    if (size > max_points)
      throw EnumerationCapError("lattice has " + std::to_string(size) +
                                " points, cap is " +
                                std::to_string(max_points));
    size_ = size;
  }

  std::uint64_t size() const { return size_; }
  std::size_t dim() const { return bounds_.size(); }
  std::uint64_t stride(std::size_t s) const { return stride_[s]; }
  long long bound(std::size_t s) const { return bounds_[s]; }

  LatticeVector vector_at(std::uint64_t idx) const {
    LatticeVector v(bounds_.size());
    for (std::size_t s = 0; s < bounds_.size(); ++s) {
      v.set(s, static_cast<long long>(idx / stride_[s]));
      idx %= stride_[s];
    }
    return v;
  }

  long long coord(std::uint64_t idx, std::size_t s) const {
    return static_cast<long long>((idx / stride_[s]) %
                                  (static_cast<std::uint64_t>(bounds_[s]) + 1));
  }

 private:
  std::vector<long long> bounds_;
  std::vector<std::uint64_t> stride_;
  std::uint64_t size_ = 0;
};

std::vector<double> tabulate(const ObjectiveOracle& f,
                             const LatticeIndexer& ix) {
  std::vector<double> table(ix.size());
  for (std::uint64_t idx = 0; idx < ix.size(); ++idx)
    table[idx] = f.evaluate(ix.vector_at(idx));
  return table;
}

// Domain contract: f is monotone. Unit marginals that round a hair below
// zero are floating-point noise, not signal.
double unit_delta_floor(double delta) { return delta > 0.0 ? delta : 0.0; }

struct PairScan {
  double best_ratio = std::numeric_limits<double>::infinity();
  std::uint64_t best_v = 0, best_w = 0;
  std::size_t best_s = 0;
  bool found = false;

  void offer(double ratio, std::uint64_t v, std::uint64_t w, std::size_t s) {
    if (!found || ratio < best_ratio) {
      found = true;
      best_ratio = ratio;
      best_v = v;
      best_w = w;
      best_s = s;
    }
  }
};

RatioResult scan_result(const PairScan& scan, const LatticeIndexer& ix,
                        double vacuous, bool per_element, double lo,
                        double hi) {
  RatioResult out;
  if (!scan.found) {
    out.value = vacuous;
    return out;
  }
  out.value = std::clamp(scan.best_ratio, lo, hi);
  RatioCertificate cert;
  cert.v = ix.vector_at(scan.best_v);
  cert.w = ix.vector_at(scan.best_w);
  if (per_element) cert.element = scan.best_s;
  cert.ratio = scan.best_ratio;
  out.certificate = std::move(cert);
  return out;
}

void check_dims(const ObjectiveOracle& f, const BoxConstraint& box) {
  if (f.dimension() != box.dim())
    throw std::invalid_argument("oracle/box dimension mismatch");
}

}  // namespace

RatioResult exact_dr_ratio(const ObjectiveOracle& f, const BoxConstraint& box,
                           const EnumerationLimits& limits) {
  check_dims(f, box);
  LatticeIndexer ix(box.bounds(), limits.max_points);
  std::vector<double> table = tabulate(f, ix);
  const std::size_t n = ix.dim();

  PairScan scan;
  std::vector<double> delta(ix.size());
  std::vector<double> min_delta(ix.size());
  std::vector<std::uint64_t> argmin(ix.size());
  for (std::size_t s = 0; s < n; ++s) {
    if (ix.bound(s) < 1) continue;
    // valid points: coordinate s below its bound, so v + e_s stays in box
    for (std::uint64_t idx = 0; idx < ix.size(); ++idx) {
      if (ix.coord(idx, s) >= ix.bound(s)) continue;
      delta[idx] = unit_delta_floor(table[idx + ix.stride(s)] - table[idx]);
      min_delta[idx] = delta[idx];
      argmin[idx] = idx;
      for (std::size_t j = 0; j < n; ++j) {
        if (ix.coord(idx, j) == 0) continue;
        std::uint64_t pred = idx - ix.stride(j);
        if (min_delta[pred] < min_delta[idx]) {
          min_delta[idx] = min_delta[pred];
          argmin[idx] = argmin[pred];
        }
      }
      if (delta[idx] > 0.0)
        scan.offer(min_delta[idx] / delta[idx], argmin[idx], idx, s);
    }
  }
  return scan_result(scan, ix, 1.0, true, 0.0, 1.0);
}

RatioResult exact_curvature(const ObjectiveOracle& f, const BoxConstraint& box,
                            const EnumerationLimits& limits) {
  check_dims(f, box);
  LatticeIndexer ix(box.bounds(), limits.max_points);
  std::vector<double> table = tabulate(f, ix);
  const std::size_t n = ix.dim();

  PairScan scan;
  std::vector<double> delta(ix.size());
  std::vector<double> max_delta(ix.size());
  std::vector<std::uint64_t> argmax(ix.size());
  for (std::size_t s = 0; s < n; ++s) {
    if (ix.bound(s) < 1) continue;
    for (std::uint64_t idx = 0; idx < ix.size(); ++idx) {
      if (ix.coord(idx, s) >= ix.bound(s)) continue;
      delta[idx] = unit_delta_floor(table[idx + ix.stride(s)] - table[idx]);
      max_delta[idx] = delta[idx];
      argmax[idx] = idx;
      for (std::size_t j = 0; j < n; ++j) {
        if (ix.coord(idx, j) == 0) continue;
        std::uint64_t pred = idx - ix.stride(j);
        if (max_delta[pred] > max_delta[idx]) {
          max_delta[idx] = max_delta[pred];
          argmax[idx] = argmax[pred];
        }
      }
      if (max_delta[idx] > 0.0)
        scan.offer(delta[idx] / max_delta[idx], argmax[idx], idx, s);
    }
  }
  RatioResult min_ratio = scan_result(scan, ix, 1.0, true, 0.0,
                                      std::numeric_limits<double>::infinity());
  RatioResult out;
  if (!min_ratio.certificate.has_value()) {
    out.value = 0.0;  // vacuous: no positive-denominator pair
    return out;
  }
  out.value = std::clamp(1.0 - min_ratio.value, 0.0, 1.0);
  out.certificate = std::move(min_ratio.certificate);
  return out;
}

RatioResult exact_submodularity_ratio(const ObjectiveOracle& f,
                                      const BoxConstraint& box,
                                      const EnumerationLimits& limits) {
  check_dims(f, box);
  std::uint64_t point_cap = static_cast<std::uint64_t>(
      std::floor(std::sqrt(static_cast<double>(limits.max_pairs))));
  LatticeIndexer ix(box.bounds(), std::max<std::uint64_t>(point_cap, 1));
  std::vector<double> table = tabulate(f, ix);
  const std::size_t n = ix.dim();

  PairScan scan;
  std::vector<double> delta(n);
  std::vector<long long> v_coord(n), w_coord(n);
  for (std::uint64_t vi = 0; vi < ix.size(); ++vi) {
    for (std::size_t s = 0; s < n; ++s) {
      v_coord[s] = ix.coord(vi, s);
      delta[s] = v_coord[s] < ix.bound(s)
                     ? unit_delta_floor(table[vi + ix.stride(s)] - table[vi])
                     : 0.0;
    }
    // walk every w >= v inside the box
    std::function<void(std::size_t, std::uint64_t, double)> walk =
        [&](std::size_t s, std::uint64_t wi, double num) {
          if (s == n) {
            if (wi == vi) return;
            double den = table[wi] - table[vi];
            if (den > 0.0) scan.offer(num / den, vi, wi, 0);
            return;
          }
          std::uint64_t idx = wi;
          double sum = num;
          for (long long c = v_coord[s]; c <= ix.bound(s); ++c) {
            walk(s + 1, idx, sum);
            idx += ix.stride(s);
            sum += delta[s];
          }
        };
    walk(0, vi, 0.0);
  }
  return scan_result(scan, ix, 1.0, false, 0.0, 1.0);
}

NonSubmodReport exact_report(const ObjectiveOracle& f,
                             const BoxConstraint& box,
                             const EnumerationLimits& limits) {
  NonSubmodReport report;
  RatioResult dr = exact_dr_ratio(f, box, limits);
  RatioResult curv = exact_curvature(f, box, limits);
  RatioResult sub = exact_submodularity_ratio(f, box, limits);
  report.gamma_d = dr.value;
  report.alpha = curv.value;
  report.gamma_s = sub.value;
  report.gamma_d_certificate = std::move(dr.certificate);
  report.alpha_certificate = std::move(curv.certificate);
  report.gamma_s_certificate = std::move(sub.certificate);
  report.n = box.dim();
  report.box_bounds.assign(box.bounds().begin(), box.bounds().end());
  report.budget_k = box.budget();
  report.limits = limits;
  return report;
}

namespace {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void append_certificate(std::string& out, const std::string& key,
                        const std::optional<RatioCertificate>& cert) {
  if (!cert.has_value()) {
    out += key + ".vacuous=true\n";
    return;
  }
  auto coords = [](const LatticeVector& v) {
    std::string s;
    for (std::size_t i = 0; i < v.dim(); ++i) {
      if (i) s += ",";
      s += std::to_string(v[i]);
    }
    return s;
  };
  out += key + ".v=" + coords(cert->v) + "\n";
  out += key + ".w=" + coords(cert->w) + "\n";
  if (cert->element.has_value())
    out += key + ".element=" + std::to_string(*cert->element) + "\n";
  out += key + ".ratio=" + format_double(cert->ratio) + "\n";
}

}  // namespace

std::string serialize_report(const NonSubmodReport& report) {
  std::string out;
  out += "gamma_d=" + format_double(report.gamma_d) + "\n";
  out += "gamma_s=" + format_double(report.gamma_s) + "\n";
  out += "alpha=" + format_double(report.alpha) + "\n";
  append_certificate(out, "gamma_d.certificate", report.gamma_d_certificate);
  append_certificate(out, "gamma_s.certificate", report.gamma_s_certificate);
  append_certificate(out, "alpha.certificate", report.alpha_certificate);
  out += "search.n=" + std::to_string(report.n) + "\n";
  std::string bounds;
  for (std::size_t i = 0; i < report.box_bounds.size(); ++i) {
    if (i) bounds += ",";
    bounds += std::to_string(report.box_bounds[i]);
  }
  out += "search.bounds=" + bounds + "\n";
  out += "search.k=" + std::to_string(report.budget_k) + "\n";
  out += "search.max_points=" + std::to_string(report.limits.max_points) + "\n";
  out += "search.max_pairs=" + std::to_string(report.limits.max_pairs) + "\n";
  return out;
}

namespace {

std::vector<LatticeVector> ratio_vector_sequence(const GreedyTrace& trace,
                                                 Algorithm variant) {
  if (variant != trace.algorithm)
    throw std::invalid_argument("trace was produced by " +
                                to_string(trace.algorithm) +
                                ", ratio requested for " + to_string(variant));
  switch (variant) {
    case Algorithm::Standard:
    case Algorithm::Threshold:
      return trace.solution_sequence();
    case Algorithm::Fast: {
      // solution at the start of each while-iteration, final partial one
      // included
      std::vector<LatticeVector> seq;
      for (std::uint32_t r = 0; r < trace.rounds_started; ++r)
        seq.push_back(trace.vector_before_round(r));
      if (seq.empty()) seq.push_back(LatticeVector(trace.dimension));
      return seq;
    }
    case Algorithm::ThresholdParallel:
      break;
  }
  throw std::invalid_argument(
      "greedy ratios are defined for standard, threshold and fast variants");
}

}  // namespace

GreedyRatioReport greedy_submodularity_ratio(const ObjectiveOracle& f,
                                             const GreedyTrace& trace,
                                             const BoxConstraint& box,
                                             Algorithm variant,
                                             const EnumerationLimits& limits) {
  check_dims(f, box);
  if (trace.dimension != box.dim())
    throw std::invalid_argument("trace/box dimension mismatch");
  std::vector<LatticeVector> sequence = ratio_vector_sequence(trace, variant);
  const std::size_t n = box.dim();
  const long long k = box.budget();

  double best = std::numeric_limits<double>::infinity();
  bool found = false;
  std::uint64_t visited = 0;
  std::vector<double> delta(n);
  for (const LatticeVector& g : sequence) {
    double fg = f.evaluate(g);
    for (std::size_t s = 0; s < n; ++s)
      delta[s] = g[s] < box.bound(s)
                     ? unit_delta_floor(f.evaluate(g.plus_unit(s, 1)) - fg)
                     : 0.0;

    // enumerate w with g <= w <= b, ||w - g||_1 <= k
    LatticeVector w = g;
    std::function<void(std::size_t, long long, double)> walk =
        [&](std::size_t s, long long budget_left, double num) {
          if (s == n) {
            if (++visited > limits.max_pairs)
              throw EnumerationCapError(
                  "greedy-ratio enumeration exceeded max_pairs cap");
            if (w == g) return;
            double den = f.evaluate(w) - fg;
            if (den > 0.0) {
              double q = num / den;
              if (!found || q < best) {
                found = true;
                best = q;
              }
            }
            return;
          }
          long long base = g[s];
          long long room = std::min(box.bound(s) - base, budget_left);
          for (long long add = 0; add <= room; ++add) {
            w.set(s, base + add);
            walk(s + 1, budget_left - add,
                 num + static_cast<double>(add) * delta[s]);
          }
          w.set(s, base);
        };
    walk(0, k, 0.0);
  }

  GreedyRatioReport report;
  report.variant = variant;
  report.gamma_s_greedy = found ? std::clamp(best, 0.0, 1.0) : 1.0;
  report.vectors_considered = sequence.size();
  if (variant == Algorithm::Threshold)
    report.gamma_d_tg = threshold_greedy_dr_ratio(f, trace, box);
  return report;
}

double threshold_greedy_dr_ratio(const ObjectiveOracle& f,
                                 const GreedyTrace& trace,
                                 const BoxConstraint& box) {
  check_dims(f, box);
  if (trace.algorithm != Algorithm::Threshold)
    throw std::invalid_argument(
        "threshold-greedy DR ratio needs a threshold_greedy trace with "
        "per-threshold snapshots");
  const std::size_t n = box.dim();

  auto unit_delta = [&](const LatticeVector& v, std::size_t s) {
    return unit_delta_floor(f.evaluate(v.plus_unit(s, 1)) - f.evaluate(v));
  };

  double best = std::numeric_limits<double>::infinity();
  bool found = false;
  LatticeVector g_i(trace.dimension);
  for (const TraceStep& step : trace.steps) {
    g_i.add(step.element, step.count);
    for (std::size_t s = 0; s < n; ++s) {
      if (g_i[s] >= box.bound(s)) continue;
      double den = unit_delta(g_i, s);
      if (!(den > 0.0)) continue;  // non-binding
      LatticeVector prev =
          step.round == 0
              ? LatticeVector(trace.dimension)
              : trace.vector_after_consideration(step.round - 1,
                                                 static_cast<std::uint32_t>(s));
      double num = unit_delta(prev, s);
      double q = num / den;
      if (!found || q < best) {
        found = true;
        best = q;
      }
    }
  }
  return found ? std::clamp(best, 0.0, 1.0) : 1.0;
}

double performance_bound(double kappa, double beta_or_gamma_d, double gamma_s,
                         double eps) {
  for (double v : {kappa, beta_or_gamma_d, gamma_s, eps})
    if (!(v >= 0.0 && v <= 1.0))
      throw std::invalid_argument("performance_bound arguments must be in [0,1]");
  return 1.0 - std::exp(-kappa * beta_or_gamma_d * gamma_s) - eps;
}

}  // namespace latmax
