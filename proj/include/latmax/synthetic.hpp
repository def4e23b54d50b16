#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "latmax/oracle.hpp"

namespace latmax {

/// f(v) = sum_s w_s v_s, w_s >= 0. Modular, hence DR-submodular with
/// gamma_d = gamma_s = 1 and curvature 0.
class ModularObjective final : public ObjectiveOracle {
 public:
  explicit ModularObjective(std::vector<double> weights);

  std::size_t dimension() const override { return weights_.size(); }
  double evaluate(const LatticeVector& x) const override;
  bool concurrent_queries_allowed() const override { return true; }

  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<double> weights_;
};

/// f(v) = min(sum_s w_s v_s, cap). Monotone, DR-submodular (concave of
/// modular), saturates once the weighted budget spend reaches cap.
class BudgetSaturatedObjective final : public ObjectiveOracle {
 public:
  BudgetSaturatedObjective(std::vector<double> weights, double cap);

  std::size_t dimension() const override { return weights_.size(); }
  double evaluate(const LatticeVector& x) const override;
  bool concurrent_queries_allowed() const override { return true; }

 private:
  std::vector<double> weights_;
  double cap_;
};

/// Probabilistic coverage plus an epsilon-weighted per-coordinate quadratic:
///
///   f(v) = sum_u w_u (1 - prod_s (1 - p_{s,u})^{v_s})
///        + eps * sum_s c_s v_s^2
///
/// The coverage part is DR-submodular; the quadratic has strictly increasing
/// unit marginals, so the sum is monotone with f(0) = 0 but deliberately not
/// DR-submodular for eps > 0.
class EpsPerturbedCoverageObjective final : public ObjectiveOracle {
 public:
  EpsPerturbedCoverageObjective(std::size_t n, double epsilon,
                                std::uint64_t seed);

  std::size_t dimension() const override { return n_; }
  double evaluate(const LatticeVector& x) const override;
  bool concurrent_queries_allowed() const override { return true; }

  double epsilon() const { return epsilon_; }

 private:
  std::size_t n_;
  std::size_t universe_;
  double epsilon_;
  std::vector<double> item_weight_;      // per universe item
  std::vector<double> cover_prob_;       // [s * universe_ + u]
  std::vector<double> quad_coeff_;       // per element
};

/// Explicit table over a full box; the workhorse for exhaustive tests and
/// tiny diagnostic instances. Values are validated monotone with f(0) = 0
/// unless constructed with validate = false.
class TabulatedObjective final : public ObjectiveOracle {
 public:
  TabulatedObjective(std::vector<long long> bounds, std::vector<double> values,
                     bool validate = true);

  /// Random monotone table: f(v) = max over predecessors + U(0, step_scale),
  /// seeded and deterministic.
  static TabulatedObjective random_monotone(std::vector<long long> bounds,
                                            std::uint64_t seed,
                                            double step_scale = 1.0);

  std::size_t dimension() const override { return bounds_.size(); }
  double evaluate(const LatticeVector& x) const override;
  bool concurrent_queries_allowed() const override { return true; }

  const std::vector<long long>& bounds() const { return bounds_; }

 private:
  std::size_t index_of(const LatticeVector& x) const;

  std::vector<long long> bounds_;
  std::vector<std::uint64_t> stride_;
  std::vector<double> values_;
};

enum class SyntheticKind { Modular, BudgetSaturated, EpsPerturbedCoverage };

SyntheticKind parse_synthetic_kind(const std::string& name);
std::string to_string(SyntheticKind kind);

/// Factory for the shipped synthetic objectives. Interpretation of params:
///   Modular:              params = per-element weights (size n), or empty
///                         for seeded weights in (0, 1].
///   BudgetSaturated:      params = {cap} with cap > 0; weights seeded.
///   EpsPerturbedCoverage: params = {epsilon} with epsilon >= 0.
std::unique_ptr<ObjectiveOracle> make_synthetic_objective(
    SyntheticKind kind, const std::vector<double>& params, std::size_t n,
    std::uint64_t seed);

}  // namespace latmax
