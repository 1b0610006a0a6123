#pragma once

#include <cstddef>
#include <functional>
#include <string>

namespace mtb {

// Convex, non-decreasing, non-negative function on [0, +inf) plugged into
//   phi((N + 1) B) <= sum_j E_Q[phi(p_j / q)].
// Every instance passes a numeric grid check at construction (1000 points on [0, 10]).
class PhiFunction {
 public:
  enum class Kind { Hinge, TruncatedEntropy, Power, Custom };

  // (u - 1)_+
  static PhiFunction hinge();
  // (u log u - u + 1) on [1, inf), zero below 1
  static PhiFunction truncated_entropy();
  // u^{1 + lambda}, lambda > 0
  static PhiFunction power(double lambda);
  // Caller-supplied evaluator. Both declared flags must be set and the grid check must pass,
  // otherwise PhiPropertyError.
  static PhiFunction custom(std::string name, std::function<double(double)> evaluate,
                            bool declared_monotone, bool declared_convex);

  double operator()(double u) const;

  Kind kind() const { return kind_; }
  double lambda() const { return lambda_; }
  const std::string& name() const { return name_; }

 private:
  PhiFunction(Kind kind, std::string name, double lambda, std::function<double(double)> custom);
  void check_grid() const;

  Kind kind_;
  std::string name_;
  double lambda_ = 0.0;
  std::function<double(double)> custom_;
};

// Largest u in [1, N + 1] with phi(u) <= budget (generalized inverse, capped).
// budget = +inf gives N + 1.
double invert_phi(const PhiFunction& phi, double budget, std::size_t max_index);

// Same inverse without the N + 1 cap; may return +inf.
double invert_phi_uncapped(const PhiFunction& phi, double budget);

}  // namespace mtb
