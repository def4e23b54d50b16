#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace latmax {

/// A point of the integer lattice: one non-negative multiplicity per ground
/// set element (elements are dense ids 0..n-1). Viewed as a multiset it holds
/// counts[s] copies of element s.
class LatticeVector {
 public:
  LatticeVector() = default;
  explicit LatticeVector(std::size_t n) : counts_(n, 0) {}
  LatticeVector(std::initializer_list<long long> counts) : counts_(counts) {
    for (long long c : counts_) check_nonneg(c);
  }
  explicit LatticeVector(std::vector<long long> counts)
      : counts_(std::move(counts)) {
    for (long long c : counts_) check_nonneg(c);
  }

  static LatticeVector unit(std::size_t n, std::size_t s, long long count = 1) {
    LatticeVector v(n);
    v.set(s, count);
    return v;
  }

  std::size_t dim() const { return counts_.size(); }
  long long operator[](std::size_t s) const { return counts_[s]; }
  std::span<const long long> counts() const { return counts_; }

  void set(std::size_t s, long long value) {
    check_nonneg(value);
    counts_.at(s) = value;
  }

  void add(std::size_t s, long long delta) {
    long long next = counts_.at(s) + delta;
    check_nonneg(next);
    counts_[s] = next;
  }

  long long l1_norm() const {
    long long total = 0;
    for (long long c : counts_) total += c;
    return total;
  }

  bool leq(const LatticeVector& other) const {
    require_same_dim(other);
    for (std::size_t s = 0; s < counts_.size(); ++s)
      if (counts_[s] > other.counts_[s]) return false;
    return true;
  }

  bool is_zero() const {
    for (long long c : counts_)
      if (c != 0) return false;
    return true;
  }

  LatticeVector plus(const LatticeVector& other) const {
    require_same_dim(other);
    LatticeVector out(*this);
    for (std::size_t s = 0; s < counts_.size(); ++s)
      out.counts_[s] += other.counts_[s];
    return out;
  }

  LatticeVector plus_unit(std::size_t s, long long count) const {
    LatticeVector out(*this);
    out.add(s, count);
    return out;
  }

  /// Coordinate-wise difference; requires other <= *this.
  LatticeVector minus(const LatticeVector& other) const {
    require_same_dim(other);
    LatticeVector out(*this);
    for (std::size_t s = 0; s < counts_.size(); ++s) {
      out.counts_[s] -= other.counts_[s];
      check_nonneg(out.counts_[s]);
    }
    return out;
  }

  bool operator==(const LatticeVector&) const = default;

  std::string to_string() const {
    std::string out = "(";
    for (std::size_t s = 0; s < counts_.size(); ++s) {
      if (s) out += ",";
      out += std::to_string(counts_[s]);
    }
    return out + ")";
  }

  void require_same_dim(const LatticeVector& other) const {
    if (counts_.size() != other.counts_.size())
      throw std::invalid_argument("lattice vector dimension mismatch: " +
                                  std::to_string(counts_.size()) + " vs " +
                                  std::to_string(other.counts_.size()));
  }

 private:
  static void check_nonneg(long long c) {
    if (c < 0)
      throw std::invalid_argument("lattice vector coordinate must be >= 0");
  }

  std::vector<long long> counts_;
};

inline long long l1_norm(const LatticeVector& v) { return v.l1_norm(); }

/// Coordinate-wise maximum.
inline LatticeVector join(const LatticeVector& v, const LatticeVector& w) {
  v.require_same_dim(w);
  LatticeVector out(v.dim());
  for (std::size_t s = 0; s < v.dim(); ++s)
    out.set(s, v[s] >= w[s] ? v[s] : w[s]);
  return out;
}

/// Coordinate-wise minimum.
inline LatticeVector meet(const LatticeVector& v, const LatticeVector& w) {
  v.require_same_dim(w);
  LatticeVector out(v.dim());
  for (std::size_t s = 0; s < v.dim(); ++s)
    out.set(s, v[s] <= w[s] ? v[s] : w[s]);
  return out;
}

/// Per-element upper bounds plus the cardinality budget. Bounds are clamped
/// to the budget on construction (a coordinate can never usefully exceed k),
/// so "unbounded" coordinates are just k.
class BoxConstraint {
 public:
  BoxConstraint(std::vector<long long> bounds, long long budget_k)
      : bounds_(std::move(bounds)), budget_(budget_k) {
    if (budget_ < 0) throw std::invalid_argument("budget k must be >= 0");
    for (long long& b : bounds_) {
      if (b < 0) throw std::invalid_argument("box bound must be >= 0");
      if (b > budget_) b = budget_;
    }
  }

  static BoxConstraint uniform(std::size_t n, long long bound,
                               long long budget_k) {
    return BoxConstraint(std::vector<long long>(n, bound), budget_k);
  }

  /// All coordinates unconstrained except by the budget.
  static BoxConstraint unbounded(std::size_t n, long long budget_k) {
    return uniform(n, budget_k, budget_k);
  }

  std::size_t dim() const { return bounds_.size(); }
  long long bound(std::size_t s) const { return bounds_.at(s); }
  long long budget() const { return budget_; }
  std::span<const long long> bounds() const { return bounds_; }

  bool contains(const LatticeVector& v) const {
    if (v.dim() != bounds_.size()) return false;
    for (std::size_t s = 0; s < bounds_.size(); ++s)
      if (v[s] > bounds_[s]) return false;
    return true;
  }

  bool feasible(const LatticeVector& v) const {
    return contains(v) && v.l1_norm() <= budget_;
  }

 private:
  std::vector<long long> bounds_;
  long long budget_;
};

}  // namespace latmax
