#include "latmax/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "latmax/rng.hpp"

namespace latmax {

namespace {

void require_dim(std::size_t expected, const LatticeVector& x) {
  if (x.dim() != expected)
    throw std::invalid_argument("objective expects dimension " +
                                std::to_string(expected) + ", got " +
                                std::to_string(x.dim()));
}

std::vector<double> seeded_weights(std::size_t n, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x77));
  std::vector<double> w(n);
  for (double& v : w) v = rng.uniform(0.05, 1.0);
  return w;
}

}  // namespace

ModularObjective::ModularObjective(std::vector<double> weights)
    : weights_(std::move(weights)) {
  if (weights_.empty())
    throw std::invalid_argument("modular objective needs >= 1 element");
  for (double w : weights_)
    if (!(w >= 0.0))
      throw std::invalid_argument("modular weights must be >= 0");
}

double ModularObjective::evaluate(const LatticeVector& x) const {
  require_dim(weights_.size(), x);
  double total = 0.0;
  for (std::size_t s = 0; s < weights_.size(); ++s)
    total += weights_[s] * static_cast<double>(x[s]);
  return total;
}

BudgetSaturatedObjective::BudgetSaturatedObjective(std::vector<double> weights,
                                                   double cap)
    : weights_(std::move(weights)), cap_(cap) {
  if (weights_.empty())
    throw std::invalid_argument("saturated objective needs >= 1 element");
  if (!(cap_ > 0.0))
    throw std::invalid_argument("saturation cap must be > 0");
  for (double w : weights_)
    if (!(w >= 0.0))
      throw std::invalid_argument("weights must be >= 0");
}

double BudgetSaturatedObjective::evaluate(const LatticeVector& x) const {
  require_dim(weights_.size(), x);
  double total = 0.0;
  for (std::size_t s = 0; s < weights_.size(); ++s)
    total += weights_[s] * static_cast<double>(x[s]);
  return std::min(total, cap_);
}

EpsPerturbedCoverageObjective::EpsPerturbedCoverageObjective(
    std::size_t n, double epsilon, std::uint64_t seed)
    : n_(n), universe_(std::max<std::size_t>(2 * n, 8)), epsilon_(epsilon) {
  if (n == 0) throw std::invalid_argument("coverage objective needs n >= 1");
  if (!(epsilon >= 0.0))
    throw std::invalid_argument("perturbation must be >= 0");
  Rng rng(derive_seed(seed, 0xC0));
  item_weight_.resize(universe_);
  for (double& w : item_weight_) w = rng.uniform(0.25, 1.0);
  cover_prob_.resize(n_ * universe_);
  for (double& p : cover_prob_)
    p = rng.uniform01() < 0.5 ? 0.0 : rng.uniform(0.1, 0.8);
  quad_coeff_.resize(n_);
  for (double& c : quad_coeff_) c = rng.uniform(0.02, 0.10);
}

double EpsPerturbedCoverageObjective::evaluate(const LatticeVector& x) const {
  require_dim(n_, x);
  double total = 0.0;
  for (std::size_t u = 0; u < universe_; ++u) {
    double miss = 1.0;
    for (std::size_t s = 0; s < n_; ++s) {
      double p = cover_prob_[s * universe_ + u];
      // iterative product keeps f monotone in exact IEEE terms, unlike pow
      if (p > 0.0)
        for (long long c = 0; c < x[s]; ++c) miss *= 1.0 - p;
    }
    total += item_weight_[u] * (1.0 - miss);
  }
  if (epsilon_ > 0.0) {
    for (std::size_t s = 0; s < n_; ++s) {
      double v = static_cast<double>(x[s]);
      total += epsilon_ * quad_coeff_[s] * v * v;
    }
  }
  return total;
}

TabulatedObjective::TabulatedObjective(std::vector<long long> bounds,
                                       std::vector<double> values,
                                       bool validate)
    : bounds_(std::move(bounds)), values_(std::move(values)) {
  if (bounds_.empty())
    throw std::invalid_argument("tabulated objective needs >= 1 element");
  stride_.resize(bounds_.size());
  std::uint64_t size = 1;
  for (std::size_t s = bounds_.size(); s-- > 0;) {
    if (bounds_[s] < 0) throw std::invalid_argument("negative bound");
    stride_[s] = size;
    size *= static_cast<std::uint64_t>(bounds_[s]) + 1;
  }
  if (values_.size() != size)
    throw std::invalid_argument("table size mismatch: expected " +
                                std::to_string(size));
  if (validate) {
    if (values_[0] != 0.0)
      throw std::invalid_argument("tabulated objective must have f(0) = 0");
    // monotone along every unit step
    for (std::uint64_t idx = 0; idx < size; ++idx) {
      std::uint64_t rest = idx;
      for (std::size_t s = 0; s < bounds_.size(); ++s) {
        std::uint64_t coord = rest / stride_[s];
        rest %= stride_[s];
        if (static_cast<long long>(coord) < bounds_[s] &&
            values_[idx + stride_[s]] < values_[idx])
          throw std::invalid_argument("tabulated objective is not monotone");
      }
    }
  }
}

TabulatedObjective TabulatedObjective::random_monotone(
    std::vector<long long> bounds, std::uint64_t seed, double step_scale) {
  std::vector<std::uint64_t> stride(bounds.size());
  std::uint64_t size = 1;
  for (std::size_t s = bounds.size(); s-- > 0;) {
    stride[s] = size;
    size *= static_cast<std::uint64_t>(bounds[s]) + 1;
  }
  Rng rng(derive_seed(seed, 0x7A));
  std::vector<double> values(size, 0.0);
  for (std::uint64_t idx = 1; idx < size; ++idx) {
    double base = 0.0;
    std::uint64_t rest = idx;
    for (std::size_t s = 0; s < bounds.size(); ++s) {
      std::uint64_t coord = rest / stride[s];
      rest %= stride[s];
      if (coord > 0) base = std::max(base, values[idx - stride[s]]);
    }
    values[idx] = base + rng.uniform01() * step_scale;
  }
  return TabulatedObjective(std::move(bounds), std::move(values), false);
}

std::size_t TabulatedObjective::index_of(const LatticeVector& x) const {
  require_dim(bounds_.size(), x);
  std::uint64_t idx = 0;
  for (std::size_t s = 0; s < bounds_.size(); ++s) {
    if (x[s] > bounds_[s])
      throw std::invalid_argument("point outside the tabulated box: " +
                                  x.to_string());
    idx += static_cast<std::uint64_t>(x[s]) * stride_[s];
  }
  return static_cast<std::size_t>(idx);
}

double TabulatedObjective::evaluate(const LatticeVector& x) const {
  return values_[index_of(x)];
}

SyntheticKind parse_synthetic_kind(const std::string& name) {
  if (name == "modular") return SyntheticKind::Modular;
  if (name == "budget_saturated") return SyntheticKind::BudgetSaturated;
  if (name == "eps_coverage") return SyntheticKind::EpsPerturbedCoverage;
  throw std::invalid_argument("unknown synthetic objective kind: " + name);
}

std::string to_string(SyntheticKind kind) {
  switch (kind) {
    case SyntheticKind::Modular:
      return "modular";
    case SyntheticKind::BudgetSaturated:
      return "budget_saturated";
    case SyntheticKind::EpsPerturbedCoverage:
      return "eps_coverage";
  }
  return "?";
}

std::unique_ptr<ObjectiveOracle> make_synthetic_objective(
    SyntheticKind kind, const std::vector<double>& params, std::size_t n,
    std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("objective needs n >= 1");
  switch (kind) {
    case SyntheticKind::Modular: {
      if (params.empty())
        return std::make_unique<ModularObjective>(seeded_weights(n, seed));
      if (params.size() != n)
        throw std::invalid_argument("modular params must be n weights");
      return std::make_unique<ModularObjective>(params);
    }
    case SyntheticKind::BudgetSaturated: {
      if (params.size() != 1)
        throw std::invalid_argument("budget_saturated params must be {cap}");
      return std::make_unique<BudgetSaturatedObjective>(
          seeded_weights(n, seed), params[0]);
    }
    case SyntheticKind::EpsPerturbedCoverage: {
      if (params.size() != 1)
        throw std::invalid_argument("eps_coverage params must be {epsilon}");
      return std::make_unique<EpsPerturbedCoverageObjective>(n, params[0],
                                                             seed);
    }
  }
  throw std::invalid_argument("unknown synthetic objective kind");
}

}  // namespace latmax
