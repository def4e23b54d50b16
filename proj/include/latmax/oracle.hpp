#pragma once

#include <atomic>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "latmax/lattice.hpp"

namespace latmax {

/// A monotone oracle returned a strictly negative marginal gain, or was
/// otherwise caught breaking its contract.
struct OracleContractError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Black-box objective f over {x : x <= b} with f(0) = 0, f monotone,
/// f(x) >= 0. The query counter advances by exactly one per marginal-gain
/// request; raw evaluate() calls are not the accounting unit and do not
/// count (the two evaluations inside the default marginal_gain cost one
/// query total).
class ObjectiveOracle {
 public:
  virtual ~ObjectiveOracle() = default;

  virtual std::size_t dimension() const = 0;

  /// Raw objective value. Not counted.
  virtual double evaluate(const LatticeVector& x) const = 0;

  /// f(base + step) - f(base). Counts one query. A negative result is a
  /// contract violation and throws; implementations that estimate f by
  /// sampling may override with their own noise policy.
  virtual double marginal_gain(const LatticeVector& step,
                               const LatticeVector& base) {
    base.require_same_dim(step);
    count_query();
    double gain = evaluate(base.plus(step)) - evaluate(base);
    if (gain < 0.0)
      throw OracleContractError(
          "negative marginal gain from a declared-monotone oracle: " +
          std::to_string(gain));
    return gain;
  }

  /// Notification that the caller's committed solution changed. Stateless
  /// oracles ignore it; sampling-backed oracles resample here.
  virtual void commit(const LatticeVector& /*solution*/) {}

  /// Whether concurrent marginal_gain calls are permitted.
  virtual bool concurrent_queries_allowed() const { return false; }

  std::uint64_t query_count() const {
    return queries_.load(std::memory_order_relaxed);
  }

  void reset_query_count() { queries_.store(0, std::memory_order_relaxed); }

 protected:
  void count_query() const { queries_.fetch_add(1, std::memory_order_relaxed); }

 private:
  mutable std::atomic<std::uint64_t> queries_{0};
};

/// Convenience: gain of adding `count` copies of element s on top of base.
inline double marginal_gain(ObjectiveOracle& f, const LatticeVector& base,
                            std::size_t s, long long count) {
  return f.marginal_gain(LatticeVector::unit(base.dim(), s, count), base);
}

}  // namespace latmax
