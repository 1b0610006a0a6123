#pragma once

#include <cstddef>
#include <functional>

#include "mtbounds/bounds.hpp"
#include "mtbounds/measure_family.hpp"

namespace mtb {

struct LambdaSearch {
  double lambda_min = 1e-3;
  double lambda_max = 1e3;
  std::size_t grid_points = 61;
  double refine_tol = 1e-6;
};

void validate(const LambdaSearch& search);

// Log-spaced grid over [lambda_min, lambda_max], endpoints included.
std::vector<double> lambda_grid(double lambda_min, double lambda_max, std::size_t points);

// Minimizes f on [a, b] by golden-section search until b - a <= tol * max(1, |a|).
// Returns the best point visited.
double golden_section_minimize(const std::function<double(double)>& f, double a, double b,
                               double tol);

struct LambdaOptimum {
  double lambda = 1.0;
  double log_objective = 0.0;
};

// Minimizes log S(lambda) / (1 + lambda) over the search range: coarse log grid, then
// golden-section refinement (in log lambda) on the bracket around the best grid point.
// `log_sum` returns log sum_j D_lambda(P_j, Q) and may return +inf.
LambdaOptimum minimize_vj_exponent(const std::function<double(double)>& log_sum,
                                   const LambdaSearch& search);

struct LambdaResult {
  double lambda_star = 1.0;
  BoundResult bound;
};

// lambda minimizing the improved VJ bound for the family and reference.
LambdaResult optimize_lambda(const FiniteFamily& family, const ReferenceSpec& ref,
                             const LambdaSearch& search = {});

}  // namespace mtb
