#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "mtbounds/bounds.hpp"
#include "mtbounds/lambda_search.hpp"
#include "mtbounds/measure_family.hpp"
#include "mtbounds/risk.hpp"

namespace mtb {

struct FixedLambda {
  double lambda = 1.0;
};
struct OptimizeLambda {
  LambdaSearch search;
};
using LambdaPolicy = std::variant<FixedLambda, OptimizeLambda>;

struct EvaluationConfig {
  std::vector<Method> methods;
  ReferenceSpec reference = UniformMixture{};
  LambdaPolicy lambda = FixedLambda{};
  std::size_t minimax_iters = 100000;
  double minimax_tol = 1e-3;
  std::size_t enum_cap = 100000;
  std::size_t mc_samples = 100000;
  std::uint64_t mc_seed = 42;
  bool minimax = true;  // compute the minimax bracket for finite families
};

struct Comparison {
  std::vector<BoundResult> bounds;  // sorted by method name
  RiskReport risk;
  bool bayes_available = true;  // false when B could not be computed (product beyond the cap)
  std::vector<std::string> warnings;
};

// Every requested bound plus the exact Bayes success and the minimax bracket.
// Throws TheoremViolation if any bound falls below the quantity it bounds.
Comparison compare_all(const FiniteFamily& family, const EvaluationConfig& config);
// Gaussian families: closed-form divergences against member references, Monte Carlo
// for the Bayes success.
Comparison compare_all(const GaussianFamily& family, const EvaluationConfig& config);

// Bounds for the n-fold product of the family computed from tensorized single-copy
// divergences (n K, D^n) against the product reference Q^{(x)n}. The exact Bayes success
// and the bounds that do not tensorize are computed on the materialized product while
// atoms^n <= product_cap, and reported unavailable beyond it.
Comparison compare_product(const FiniteFamily& family, const EvaluationConfig& config, unsigned n,
                           std::size_t product_cap = kDefaultProductCap);
Comparison compare_product(const GaussianFamily& family, const EvaluationConfig& config,
                           unsigned n);

// Throws TheoremViolation naming the first bound below its target.
void check_soundness(const Comparison& comparison);

}  // namespace mtb
