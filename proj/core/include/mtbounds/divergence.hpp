#pragma once

#include <vector>

#include "mtbounds/measure_family.hpp"

namespace mtb {

enum class DivergenceKind { TotalVariation, KullbackLeibler, Power };

// A divergence value in [0, +inf]. Infinity is a legitimate result (support violation),
// not an error.
struct DivergenceValue {
  DivergenceKind kind;
  double value;

  bool finite() const;
};

// 1/2 sum |p1 - p0| mu, in [0, 1].
DivergenceValue total_variation(const FiniteDistribution& p0, const FiniteDistribution& p1);
// sum (p1 - p0)_+ mu; the second route to the same distance.
double total_variation_positive_part(const FiniteDistribution& p0, const FiniteDistribution& p1);

// K(P, Q) = sum_{p > 0} p log(p / q) mu in nats; +inf when P is not dominated by Q.
DivergenceValue kl(const FiniteDistribution& p, const FiniteDistribution& q);

// D_lambda(P, Q) = sum p^{1+lambda} q^{-lambda} mu, lambda > 0. At least 1 when finite.
DivergenceValue power_divergence(const FiniteDistribution& p, const FiniteDistribution& q,
                                 double lambda);
// log D_lambda(P, Q), evaluated with a max shift so large lambda does not overflow.
double log_power_divergence(const FiniteDistribution& p, const FiniteDistribution& q,
                            double lambda);

// Value on the n-fold product: KL scales by n, the power divergence is raised to the n.
// Total variation has no such law and raises KindError.
DivergenceValue tensorize(DivergenceValue value, unsigned n);

// (N + 1)^{-1} sum_j K(P_j, Q).
double avg_kl(const FiniteFamily& family, const FiniteDistribution& q);

struct GaussianDivergence {
  double kl = 0.0;
  double power = 1.0;      // may overflow to +inf; log_power stays finite
  double log_power = 0.0;
};

// Closed forms against a member reference Q = P_ref:
//   K(P_i, P_ref)        = |theta_i - theta_ref|^2 / (2 sigma^2)
//   log D_lambda(P_i, Q) = lambda (1 + lambda) |theta_i - theta_ref|^2 / (2 sigma^2)
// Mixture references have no closed form and raise UnsupportedReferenceError.
std::vector<GaussianDivergence> gaussian_divergences(const GaussianFamily& family,
                                                     const ReferenceSpec& ref, double lambda);

// Total variation between members i and j: 2 Phi(|theta_i - theta_j| / (2 sigma)) - 1.
double gaussian_total_variation(const GaussianFamily& family, std::size_t i, std::size_t j);

}  // namespace mtb
