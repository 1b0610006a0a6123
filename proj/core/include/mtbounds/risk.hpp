#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "mtbounds/measure_family.hpp"

namespace mtb {

// Exact Bayes success under the uniform prior: (N + 1)^{-1} sum_x max_j p_j(x) mu(x).
double exact_bayes_success(const FiniteFamily& family);

// Same quantity written as (N + 1)^{-1} E_Q[max_j p_j / q]. Throws DominationError when Q
// misses part of some member's support.
double bayes_success_via_reference(const FiniteFamily& family, const FiniteDistribution& q);

// Deterministic estimator: atom -> member index.
struct DecisionRule {
  std::vector<std::size_t> assignment;
};

// Maximum-likelihood rule; ties go to the lowest index.
DecisionRule ml_rule(const FiniteFamily& family);

// P_j[T = j] for every member.
std::vector<double> member_success(const FiniteFamily& family, const DecisionRule& rule);
double average_success(const FiniteFamily& family, const DecisionRule& rule);
double worst_success(const FiniteFamily& family, const DecisionRule& rule);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double ci_low = 0.0;   // 99% central-limit interval
  double ci_high = 0.0;
  double std_error = 0.0;
  double kurtosis = 0.0;  // m4 / m2^2 of the per-sample integrand
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

inline constexpr std::size_t kMinMonteCarloSamples = 1000;
inline constexpr double kHeavyTailKurtosis = 100.0;

// Draws X ~ Q and averages (N + 1)^{-1} max_j (p_j / q)(X). Q is a member (Indexed) or a
// mixture of members (UniformMixture, CustomWeights). Bit-identical for a fixed seed,
// independent of thread scheduling.
MonteCarloEstimate mc_bayes_success(const GaussianFamily& family, const ReferenceSpec& ref,
                                    std::size_t samples, std::uint64_t seed);

struct MinimaxBracket {
  double lower = 0.0;
  double upper = 1.0;
  std::size_t iterations = 0;
  std::vector<double> prior;  // prior attaining `upper`
};

// Two-sided bracket on the minimax success over randomized estimators, via
// R = min_pi sum_x max_j pi_j p_j(x) mu(x) and projected subgradient on the simplex.
MinimaxBracket minimax_success_bracket(const FiniteFamily& family, std::size_t max_iters = 100000,
                                       double tol = 1e-3);

// max over all deterministic rules of min_j P_j[T = j]. Requires (N + 1)^{atoms} <= cap.
double enumerate_deterministic(const FiniteFamily& family, std::size_t cap = 100000);

struct ExactSum {};

struct RiskReport {
  double bayes_success = 0.0;
  std::variant<ExactSum, MonteCarloEstimate> bayes_method;
  std::optional<MinimaxBracket> minimax;
  std::optional<double> deterministic_minimax;
};

}  // namespace mtb
