#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mtbounds/measure_family.hpp"
#include "mtbounds/phi.hpp"

namespace mtb {

enum class Target { BayesSuccess, MinimaxSuccess };

std::string_view target_name(Target target);

// Every bound this library evaluates. Report rows are keyed by these names.
enum class Method {
  TwoPoint,
  FanoIH,
  FanoNew,
  Birge,
  BirgeMassart,
  VJ,
  VJImproved,
  PhiHinge,
  PhiEntropy,
  PhiPower,
};

std::string_view method_name(Method method);
std::optional<Method> parse_method(std::string_view name);
const std::vector<Method>& all_methods();
std::string method_names_joined();

inline constexpr double kBirgeKappa = 0.7;
inline constexpr double kMassartKappa = 0.84;

// An upper bound on a success probability. `raw_value` is the formula as written;
// `value` is clamped to [1/(N + 1), 1] and the bound is vacuous when raw_value >= 1.
struct BoundResult {
  std::string method;
  Target target = Target::BayesSuccess;
  double raw_value = 1.0;
  double value = 1.0;
  bool vacuous = true;
  bool available = true;  // false when the method has no evaluation route for this family
  std::optional<double> lambda_used;
  std::optional<ReferenceSpec> reference_used;
  std::vector<std::pair<std::string, double>> divergence_inputs;
  std::string notes;
};

BoundResult make_bound(std::string method, Target target, double raw_value, std::size_t members);
BoundResult unavailable_bound(std::string method, Target target, std::string reason);

// phi((N + 1) B) <= S with S = sum_j sum_x phi(p_j / q) q mu. S is +inf when Q fails to
// dominate the family, which makes the result vacuous.
BoundResult phi_bound(const FiniteFamily& family, const PhiFunction& phi, const ReferenceSpec& ref);
// The sum S itself.
double phi_moment_sum(const FiniteFamily& family, const PhiFunction& phi,
                      const FiniteDistribution& q);

// B <= (1 + TV) / 2 for a pair; this holds with equality.
BoundResult two_point_bound(const FiniteDistribution& p0, const FiniteDistribution& p1);
BoundResult two_point_bound(const FiniteFamily& family);
BoundResult two_point_bound_from_tv(double total_variation);

// Minimax success <= (K~ + log 2) / log N, K~ averaged against the uniform mixture. N >= 2.
BoundResult fano_ih_bound(double k_tilde, std::size_t max_index);
BoundResult fano_ih_bound(const FiniteFamily& family);

// B <= (K~ + N/(N+1)) / log(N + 1); the looser (K~ + 1) / log(N + 1) goes to the metadata.
BoundResult fano_new_bound(double k_tilde, std::size_t max_index);
BoundResult fano_new_bound(const FiniteFamily& family);

// Minimax success <= max(kappa, (1 + 1/N) K_bar / log(N + 1)), K_bar averaged against P_0.
BoundResult birge_bound(double k_bar, std::size_t max_index, double kappa = kBirgeKappa);
BoundResult birge_bound(const FiniteFamily& family, double kappa = kBirgeKappa);

// C(lambda) = (1 + lambda) lambda^{-lambda / (1 + lambda)}.
double vj_constant(double lambda);

// B <= C (N + 1)^{-1} S^{1/(1 + lambda)} with C = 1 (improved) or C(lambda) (original),
// where S = sum_j D_lambda(P_j, Q).
BoundResult vj_bound(double power_sum, double lambda, std::size_t max_index, bool improved);
BoundResult vj_bound_from_log(double log_power_sum, double lambda, std::size_t max_index,
                              bool improved);
BoundResult vj_bound(const FiniteFamily& family, const ReferenceSpec& ref, double lambda,
                     bool improved);

// log sum_j D_lambda(P_j, Q); +inf when Q fails to dominate.
double log_power_sum(const FiniteFamily& family, const FiniteDistribution& q, double lambda);

}  // namespace mtb
