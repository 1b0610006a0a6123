#include "mtbounds/lambda_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mtbounds/error.hpp"

namespace mtb {
namespace {

constexpr double kInvPhi = 0.6180339887498949;  // (sqrt 5 - 1) / 2

}  // namespace

void validate(const LambdaSearch& search) {
  if (!(search.lambda_min > 0.0) || !(search.lambda_max > search.lambda_min) ||
      !std::isfinite(search.lambda_max)) {
    throw ParameterError("lambda range must satisfy 0 < lambda_min < lambda_max < inf");
  }
  if (search.grid_points < 2) throw ParameterError("lambda grid needs at least 2 points");
  if (!(search.refine_tol > 0.0)) throw ParameterError("lambda refine tolerance must be > 0");
}

std::vector<double> lambda_grid(double lambda_min, double lambda_max, std::size_t points) {
  const double lo = std::log10(lambda_min);
  const double hi = std::log10(lambda_max);
  std::vector<double> grid(points);
  for (std::size_t k = 0; k < points; ++k) {
    const double e = (lo * static_cast<double>(points - 1 - k) + hi * static_cast<double>(k)) /
                     static_cast<double>(points - 1);
    grid[k] = std::pow(10.0, e);
  }
  grid.front() = lambda_min;
  grid.back() = lambda_max;
  return grid;
}

double golden_section_minimize(const std::function<double(double)>& f, double a, double b,
                               double tol) {
  double best_x = a;
  double best_f = f(a);
  auto consider = [&](double x, double fx) {
    if (fx < best_f) {
      best_f = fx;
      best_x = x;
    }
  };
  consider(b, f(b));

  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  consider(c, fc);
  consider(d, fd);
  for (int it = 0; it < 500 && (b - a) > tol * std::max(1.0, std::abs(a)); ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
      consider(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
      consider(d, fd);
    }
  }
  return best_x;
}

LambdaOptimum minimize_vj_exponent(const std::function<double(double)>& log_sum,
                                   const LambdaSearch& search) {
  validate(search);
  auto objective = [&](double lambda) { return log_sum(lambda) / (1.0 + lambda); };

  const auto grid = lambda_grid(search.lambda_min, search.lambda_max, search.grid_points);
  std::size_t best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double v = objective(grid[k]);
    if (v < best_value) {
      best_value = v;
      best = k;
    }
  }
  if (!std::isfinite(best_value)) {
    const double fallback = std::clamp(1.0, search.lambda_min, search.lambda_max);
    return {fallback, best_value};
  }

  const double lo = std::log(grid[best == 0 ? 0 : best - 1]);
  const double hi = std::log(grid[std::min(best + 1, grid.size() - 1)]);
  const double t = golden_section_minimize(
      [&](double log_lambda) { return objective(std::exp(log_lambda)); }, lo, hi,
      search.refine_tol);
  const double refined = std::exp(t);
  const double refined_value = objective(refined);
  if (refined_value < best_value) return {refined, refined_value};
  return {grid[best], best_value};
}

LambdaResult optimize_lambda(const FiniteFamily& family, const ReferenceSpec& ref,
                             const LambdaSearch& search) {
  const FiniteDistribution q = resolve_reference_unchecked(family, ref);
  auto log_sum = [&](double lambda) { return log_power_sum(family, q, lambda); };
  const LambdaOptimum opt = minimize_vj_exponent(log_sum, search);
  LambdaResult out;
  out.lambda_star = opt.lambda;
  out.bound = vj_bound_from_log(log_sum(opt.lambda), opt.lambda, family.max_index(), true);
  out.bound.reference_used = ref;
  return out;
}

}  // namespace mtb
